#include "gasval/intrinsic.hpp"

#include "gasval/errors.hpp"
#include "gasval/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gasval {

namespace {

constexpr double kTick = 1e-9; // re-lock only above this improvement

long month_days(const YearMonth& m) {
    return days_between(m.first_day(), add_months(m, 1).first_day());
}

std::map<YearMonth, double> price_map(const std::vector<CurvePoint>& curve) {
    std::map<YearMonth, double> out;
    for (const auto& p : curve) {
        GASVAL_REQUIRE(p.price > 0.0, ErrorKind::domain,
                       "non-positive quote for " << to_string(p.maturity));
        out[p.maturity] = p.price;
    }
    return out;
}

// Mark of the live months of a plan against one curve, revenue positive.
double live_mark(const std::vector<YearMonth>& months, const std::vector<double>& alpha,
                 const Date& valuation, const RollConvention& rc,
                 const std::map<YearMonth, double>& prices) {
    double mark = 0.0;
    for (size_t j = 0; j < months.size(); ++j) {
        if (rc.expiry(months[j]) <= valuation)
            continue;
        auto it = prices.find(months[j]);
        GASVAL_REQUIRE(it != prices.end(), ErrorKind::insufficient_curve,
                       "no quote for " << to_string(months[j]));
        mark -= alpha[j] * it->second;
    }
    return mark;
}

} // namespace

std::vector<YearMonth> lease_delivery_months(const StorageSpec& spec) {
    std::vector<YearMonth> out;
    for (YearMonth m = month_of(spec.start); m.first_day() < spec.end; m = add_months(m, 1)) {
        if (m.first_day() >= spec.start && add_months(m, 1).first_day() <= spec.end)
            out.push_back(m);
    }
    return out;
}

IntrinsicSolution intrinsic_value(const std::vector<CurvePoint>& curve, const Date& valuation,
                                  const StorageSpec& spec, const RollConvention& rc,
                                  const std::vector<double>* committed) {
    spec.validate();
    const auto months = lease_delivery_months(spec);
    const int n = static_cast<int>(months.size());
    GASVAL_REQUIRE(n >= 1, ErrorKind::domain, "lease covers no whole delivery month");
    GASVAL_REQUIRE(!committed || static_cast<int>(committed->size()) == n, ErrorKind::config,
                   "committed plan has " << (committed ? committed->size() : 0) << " months, lease has "
                                         << n);

    const auto prices = price_map(curve);
    IntrinsicSolution sol;
    sol.maturities = months;
    sol.fixed.resize(n);

    // Variables: alpha_1..alpha_n, then the month-end volume offsets r_1..r_n
    // with r_k = sum of alpha up to k. Expired months are pinned.
    LpProblem lp;
    lp.a = Eigen::MatrixXd::Zero(n, 2 * n);
    lp.b = Eigen::VectorXd::Zero(n);
    lp.c = Eigen::VectorXd::Zero(2 * n);
    lp.lower = Eigen::VectorXd::Zero(2 * n);
    lp.upper = Eigen::VectorXd::Zero(2 * n);

    for (int j = 0; j < n; ++j) {
        const bool live = rc.expiry(months[j]) > valuation;
        sol.fixed[j] = live ? 0 : 1;
        if (live) {
            const double days = static_cast<double>(month_days(months[j]));
            lp.lower[j] = -spec.a_with * days;
            lp.upper[j] = spec.a_inj * days;
            auto it = prices.find(months[j]);
            GASVAL_REQUIRE(it != prices.end(), ErrorKind::insufficient_curve,
                           "no quote for " << to_string(months[j]) << " on " << to_string(valuation));
            lp.c[j] = it->second;
        } else {
            const double pin = committed ? (*committed)[j] : 0.0;
            lp.lower[j] = pin;
            lp.upper[j] = pin;
        }
        for (int k = j; k < n; ++k)
            lp.a(k, j) = 1.0;
        lp.a(j, n + j) = -1.0;
        if (j + 1 < n) {
            lp.lower[n + j] = spec.v_min - spec.v_start;
            lp.upper[n + j] = spec.v_max - spec.v_start;
        } else {
            lp.lower[n + j] = spec.v_end_target - spec.v_start;
            lp.upper[n + j] = spec.v_end_target - spec.v_start;
        }
    }

    // Interval propagation catches an impossible profile before the solver
    // runs and names the month where the window closes.
    {
        double lo = 0.0, hi = 0.0;
        for (int j = 0; j < n; ++j) {
            lo = std::max(lo + lp.lower[j], lp.lower[n + j]);
            hi = std::min(hi + lp.upper[j], lp.upper[n + j]);
            GASVAL_REQUIRE(lo <= hi + 1e-9, ErrorKind::infeasible,
                           "volume window closes at end of " << to_string(months[j])
                                                             << "; check capacity and targets");
        }
    }

    const LpSolution out = solve_lp(lp);
    GASVAL_REQUIRE(out.status == LpStatus::optimal, ErrorKind::convergence,
                   "plan solve stopped with status " << static_cast<int>(out.status));

    sol.alpha.resize(n);
    sol.prefix_bound.resize(n);
    sol.iterations = out.iterations;
    const double vol_tol = 1e-7 * std::max(1.0, spec.v_max - spec.v_min);
    for (int j = 0; j < n; ++j) {
        sol.alpha[j] = out.x[j];
        const double vol = spec.v_start + out.x[n + j];
        sol.prefix_bound[j] = std::abs(vol - spec.v_min) <= vol_tol   ? -1
                              : std::abs(vol - spec.v_max) <= vol_tol ? 1
                                                                      : 0;
    }
    sol.value = -out.objective;
    return sol;
}

RollingIntrinsicResult rolling_intrinsic(const std::vector<Date>& dates,
                                         const std::vector<std::vector<CurvePoint>>& curves,
                                         const StorageSpec& spec, const RollConvention& rc) {
    GASVAL_REQUIRE(!dates.empty() && dates.size() == curves.size(), ErrorKind::domain,
                   "need one curve snapshot per decision date");
    for (size_t k = 1; k < dates.size(); ++k)
        GASVAL_REQUIRE(dates[k - 1] < dates[k], ErrorKind::ordering,
                       "decision dates out of order at " << to_string(dates[k]));

    IntrinsicSolution plan = intrinsic_value(curves[0], dates[0], spec, rc);

    RollingIntrinsicResult r;
    r.initial_value = plan.value;
    r.maturities = plan.maturities;
    double cumulative = plan.value;
    r.points.push_back({dates[0], 0.0, cumulative, true});

    for (size_t k = 1; k < dates.size(); ++k) {
        const auto prices = price_map(curves[k]);
        const double held = live_mark(plan.maturities, plan.alpha, dates[k], rc, prices);
        IntrinsicSolution cand = intrinsic_value(curves[k], dates[k], spec, rc, &plan.alpha);
        const double gain = cand.value - held;
        RollingIntrinsicPoint pt;
        pt.date = dates[k];
        if (gain > kTick) {
            plan = std::move(cand);
            cumulative += gain;
            pt.improvement = gain;
            pt.adopted = true;
        }
        pt.cumulative = cumulative;
        r.points.push_back(pt);
    }
    r.final_value = cumulative;
    r.alpha = plan.alpha;
    return r;
}

std::vector<std::vector<CurvePoint>> curve_snapshots(const PriceHistory& h,
                                                     const std::vector<Date>& dates) {
    std::map<Date, size_t> by_date;
    for (size_t i = 0; i < h.dates.size(); ++i)
        by_date[h.dates[i]] = i;
    std::vector<std::vector<CurvePoint>> out;
    out.reserve(dates.size());
    for (const Date& d : dates) {
        auto it = by_date.find(d);
        GASVAL_REQUIRE(it != by_date.end(), ErrorKind::gap,
                       "history has no observation on " << to_string(d));
        out.push_back(h.curves[it->second]);
    }
    return out;
}

} // namespace gasval
