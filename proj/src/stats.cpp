#include "gasval/stats.hpp"

#include "gasval/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gasval {

double mean(const std::vector<double>& x) {
    GASVAL_REQUIRE(!x.empty(), ErrorKind::empty_input, "mean of empty sample");
    double s = 0.0;
    for (double v : x)
        s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x) {
    GASVAL_REQUIRE(x.size() >= 2, ErrorKind::insufficient_data,
                   "sample variance needs at least two points");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x)
        s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double sample_std(const std::vector<double>& x) { return std::sqrt(sample_variance(x)); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014327;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

namespace {

// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
double ks_tail(double lambda) {
    if (lambda < 1e-8)
        return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12 * std::abs(sum) + 1e-300)
            break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

} // namespace

KsResult ks_test_standard_normal(std::vector<double> sample) {
    GASVAL_REQUIRE(!sample.empty(), ErrorKind::empty_input, "KS test on empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) {
        const double cdf = normal_cdf(sample[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(cdf - lo, hi - cdf));
    }
    const double sn = std::sqrt(n);
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    return KsResult{d, ks_tail(lambda)};
}

std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace gasval
