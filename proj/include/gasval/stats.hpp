#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gasval {

double mean(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x); // n-1 denominator
double sample_std(const std::vector<double>& x);

double normal_cdf(double x);
double normal_pdf(double x);

struct KsResult {
    double statistic = 0.0; // sup |F_n - Phi|
    double p_value = 1.0;
};

// One-sample Kolmogorov-Smirnov test against the standard normal.
KsResult ks_test_standard_normal(std::vector<double> sample);

std::uint64_t fnv1a_hash(const std::string& data);

} // namespace gasval
