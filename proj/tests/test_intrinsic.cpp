#include "gasval/intrinsic.hpp"
#include "gasval/errors.hpp"
#include "gasval/pipeline.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace gasval;

namespace {

StorageSpec monthly_store(const Date& start, const Date& end, double v_max, double a_inj,
                          double a_with, double v_start = 0.0, double v_end = 0.0) {
    StorageSpec s;
    s.v_min = 0.0;
    s.v_max = v_max;
    s.a_inj = a_inj;
    s.a_with = a_with;
    s.v_start = v_start;
    s.v_end_target = v_end;
    s.start = start;
    s.end = end;
    return s;
}

// Integer dynamic program over month-end volumes. The monthly plan problem is
// integral whenever the rate caps, capacity and boundary volumes are integers,
// so this enumerates the exact optimum of the same instance.
double integer_plan_oracle(const std::vector<double>& prices, const std::vector<int>& inj_cap,
                           const std::vector<int>& with_cap, int v_max, int v_start, int v_end) {
    const int n = static_cast<int>(prices.size());
    const double kNeg = -1e300;
    std::vector<double> val(v_max + 1, kNeg);
    val[v_start] = 0.0;
    for (int j = 0; j < n; ++j) {
        std::vector<double> next(v_max + 1, kNeg);
        for (int v = 0; v <= v_max; ++v) {
            if (val[v] == kNeg)
                continue;
            for (int a = -std::min(with_cap[j], v); a <= std::min(inj_cap[j], v_max - v); ++a) {
                const double cand = val[v] - a * prices[j];
                if (cand > next[v + a])
                    next[v + a] = cand;
            }
        }
        val.swap(next);
    }
    return val[v_end];
}

} // namespace

TEST_CASE("lease delivery months cover exactly the lease window") {
    StorageSpec s = monthly_store(Date{2026, 5, 1}, Date{2026, 9, 1}, 100, 2, 2);
    auto months = lease_delivery_months(s);
    REQUIRE(months.size() == 4);
    CHECK(months.front() == YearMonth{2026, 5});
    CHECK(months.back() == YearMonth{2026, 8});

    // a lease ending mid-month drops the partial month
    s.end = Date{2026, 8, 20};
    months = lease_delivery_months(s);
    CHECK(months.back() == YearMonth{2026, 7});
}

TEST_CASE("two month textbook spread") {
    StorageSpec s = monthly_store(Date{2026, 5, 1}, Date{2026, 7, 1}, 1, 1, 1);
    std::vector<CurvePoint> curve{{YearMonth{2026, 5}, 3.0}, {YearMonth{2026, 6}, 5.0}};
    IntrinsicSolution sol = intrinsic_value(curve, Date{2026, 4, 15}, s);
    CHECK(sol.value == doctest::Approx(2.0).epsilon(1e-9));
    REQUIRE(sol.alpha.size() == 2);
    CHECK(sol.alpha[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.alpha[1] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(sol.fixed[0] == 0);
    CHECK(sol.prefix_bound[0] == 1); // the store is full after the first month
}

TEST_CASE("random monthly instances match the integer oracle") {
    std::mt19937_64 gen(515);
    std::uniform_real_distribution<double> price(2.0, 6.0);
    std::uniform_int_distribution<int> months_n(2, 4);
    std::uniform_int_distribution<int> rate(1, 3);
    std::uniform_int_distribution<int> cap_i(5, 12); // times ten
    for (int trial = 0; trial < 30; ++trial) {
        const int n = months_n(gen);
        const Date start{2026, 5, 1};
        const Date end = add_months(YearMonth{2026, 5}, n).first_day();
        const int a_inj = rate(gen), a_with = rate(gen);
        const int v_max = cap_i(gen) * 10;
        const int v_start = (trial % 3 == 0) ? 20 : 0;
        StorageSpec s = monthly_store(start, end, v_max, a_inj, a_with, v_start, v_start);

        std::vector<CurvePoint> curve;
        std::vector<double> prices;
        std::vector<int> inj_cap, with_cap;
        YearMonth m{2026, 5};
        for (int j = 0; j < n; ++j, m = add_months(m, 1)) {
            const double f = price(gen);
            curve.push_back({m, f});
            prices.push_back(f);
            const int days = static_cast<int>(days_between(m.first_day(),
                                                           add_months(m, 1).first_day()));
            inj_cap.push_back(a_inj * days);
            with_cap.push_back(a_with * days);
        }
        const double oracle =
            integer_plan_oracle(prices, inj_cap, with_cap, v_max, v_start, v_start);
        IntrinsicSolution sol = intrinsic_value(curve, Date{2026, 4, 15}, s);
        CHECK(sol.value == doctest::Approx(oracle).epsilon(1e-7));

        // plan feasibility: caps, month-end levels, terminal volume
        double v = v_start;
        for (int j = 0; j < n; ++j) {
            CHECK(sol.alpha[j] <= inj_cap[j] + 1e-7);
            CHECK(sol.alpha[j] >= -with_cap[j] - 1e-7);
            v += sol.alpha[j];
            CHECK(v >= -1e-7);
            CHECK(v <= v_max + 1e-7);
        }
        CHECK(v == doctest::Approx(static_cast<double>(v_start)).epsilon(1e-7));
    }
}

TEST_CASE("value scales with price level and ignores price shifts") {
    StorageSpec s = monthly_store(Date{2026, 5, 1}, Date{2026, 9, 1}, 60, 2, 2);
    std::vector<CurvePoint> curve{{YearMonth{2026, 5}, 2.2},
                                  {YearMonth{2026, 6}, 4.1},
                                  {YearMonth{2026, 7}, 3.0},
                                  {YearMonth{2026, 8}, 5.3}};
    const Date val_date{2026, 4, 15};
    const double base = intrinsic_value(curve, val_date, s).value;
    CHECK(base > 0.0);

    std::vector<CurvePoint> scaled = curve, shifted = curve;
    for (auto& cp : scaled)
        cp.price *= 3.0;
    for (auto& cp : shifted)
        cp.price += 1.7;
    CHECK(intrinsic_value(scaled, val_date, s).value ==
          doctest::Approx(3.0 * base).epsilon(1e-9));
    // a level shift cancels because the plan is volume neutral
    CHECK(intrinsic_value(shifted, val_date, s).value == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("expired months stay pinned to their commitments") {
    StorageSpec s = monthly_store(Date{2026, 5, 1}, Date{2026, 7, 1}, 100, 1, 1);
    std::vector<CurvePoint> curve{{YearMonth{2026, 5}, 3.0}, {YearMonth{2026, 6}, 4.5}};
    std::vector<double> committed{10.0, -10.0};
    // may has expired; its volume is sunk and only june is marked
    IntrinsicSolution sol = intrinsic_value(curve, Date{2026, 5, 2}, s, {}, &committed);
    CHECK(sol.fixed[0] == 1);
    CHECK(sol.fixed[1] == 0);
    CHECK(sol.alpha[0] == 10.0);
    CHECK(sol.alpha[1] == doctest::Approx(-10.0).epsilon(1e-9));
    CHECK(sol.value == doctest::Approx(45.0).epsilon(1e-9));
}

TEST_CASE("infeasible boundary volumes are reported") {
    // two short months cannot lift the level to the target
    StorageSpec s = monthly_store(Date{2026, 5, 1}, Date{2026, 7, 1}, 100, 1, 1, 0.0, 100.0);
    std::vector<CurvePoint> curve{{YearMonth{2026, 5}, 3.0}, {YearMonth{2026, 6}, 4.5}};
    CHECK_THROWS_AS(intrinsic_value(curve, Date{2026, 4, 15}, s), Error);
}

TEST_CASE("rolling a static curve keeps the initial plan") {
    StorageSpec s = monthly_store(Date{2026, 5, 1}, Date{2026, 9, 1}, 60, 2, 2);
    std::vector<CurvePoint> curve{{YearMonth{2026, 5}, 2.2},
                                  {YearMonth{2026, 6}, 4.1},
                                  {YearMonth{2026, 7}, 3.0},
                                  {YearMonth{2026, 8}, 5.3}};
    std::vector<Date> dates;
    std::vector<std::vector<CurvePoint>> snaps;
    for (int i = 0; i < 20; ++i) {
        dates.push_back(add_days(Date{2026, 4, 10}, i));
        snaps.push_back(curve);
    }
    RollingIntrinsicResult r = rolling_intrinsic(dates, snaps, s);
    CHECK(r.final_value == doctest::Approx(r.initial_value).epsilon(1e-12));
    for (const auto& pt : r.points) {
        CHECK(pt.improvement == 0.0);
        CHECK(pt.cumulative == doctest::Approx(r.initial_value).epsilon(1e-12));
    }
}

TEST_CASE("re-locking only ever adds value") {
    GabillonParams fut;
    fut.lambda = 0.79;
    fut.sigma_s = 0.46;
    fut.sigma_l = 0.17;
    fut.rho = 0.41;
    SpotParams sp;
    sp.model = 1;
    sp.a2 = 0.3;
    sp.a3 = 0.5;
    sp.garch = {1.5e-5, 0.85, 0.1};
    // weak seasonality so month orderings actually flip
    std::vector<CurvePoint> curve;
    for (int i = 0; i < 10; ++i) {
        const YearMonth m = add_months(YearMonth{2026, 5}, i);
        curve.push_back({m, 3.5 + 0.15 * std::cos(2.0 * M_PI * year_fraction(m.first_day()))});
    }
    PriceHistory h = synthesize_history(fut, sp, curve, 3.5, Date{2026, 4, 10},
                                        Date{2026, 9, 1}, 99);
    StorageSpec s = monthly_store(Date{2026, 5, 1}, Date{2026, 9, 1}, 60, 2, 2);
    std::vector<Date> dates;
    for (int i = 0; i < 100; ++i)
        dates.push_back(add_days(Date{2026, 4, 10}, i));
    RollingIntrinsicResult r = rolling_intrinsic(dates, curve_snapshots(h, dates), s);
    CHECK(r.final_value >= r.initial_value);
    double prev = r.initial_value;
    int relocks = 0;
    for (const auto& pt : r.points) {
        CHECK(pt.cumulative >= prev - 1e-12);
        CHECK(pt.improvement >= 0.0);
        if (pt.adopted && pt.improvement > 0.0)
            ++relocks;
        prev = pt.cumulative;
    }
    CHECK(relocks >= 1); // the weak seasonal curve must trigger at least one re-lock
    // final committed plan is volume neutral
    double v = 0.0;
    for (double a : r.alpha)
        v += a;
    CHECK(v == doctest::Approx(0.0).epsilon(1e-7));

    std::vector<Date> missing{Date{2031, 1, 1}};
    CHECK_THROWS_AS(curve_snapshots(h, missing), Error);
}
