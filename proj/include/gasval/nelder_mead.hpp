#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace gasval {

struct NelderMeadOptions {
    int max_iter = 5000;
    double f_tol = 1e-12; // absolute spread of simplex values
    double x_tol = 1e-10;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

// Downhill simplex. Box constraints are the caller's business: return +inf
// (or a large penalty) from the objective outside the feasible region.
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                                    const NelderMeadOptions& opt = {}) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (int i = 0; i < n; ++i)
        pts[i + 1](i) += step(i);
    for (int i = 0; i <= n; ++i)
        vals[i] = f(pts[i]);

    std::vector<int> order(n + 1);
    NelderMeadResult res;
    int iter = 0;
    for (; iter < opt.max_iter; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        const int best = order[0], worst = order[n], second = order[n - 1];

        double spread = vals[worst] - vals[best];
        double width = 0.0;
        for (int i = 1; i <= n; ++i)
            width = std::max(width, (pts[order[i]] - pts[best]).cwiseAbs().maxCoeff());
        if (spread <= opt.f_tol * (1.0 + std::abs(vals[best])) && width <= opt.x_tol) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst)
                centroid += pts[i];
        centroid /= n;

        Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
        double fr = f(xr);
        if (fr < vals[best]) {
            Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
            double fe = f(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            Eigen::VectorXd xc = centroid + 0.5 * (pts[worst] - centroid);
            double fc = f(xc);
            if (fc < vals[worst]) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best)
                        continue;
                    pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (vals[i] < vals[best])
            best = i;
    res.x = pts[best];
    res.f = vals[best];
    res.iterations = iter;
    return res;
}

} // namespace gasval
