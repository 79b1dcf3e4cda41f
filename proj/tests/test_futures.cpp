#include "gasval/futures_model.hpp"
#include "gasval/pipeline.hpp"
#include "gasval/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace gasval;

namespace {

GabillonParams table_params() {
    GabillonParams p;
    p.lambda = 0.7896;
    p.mu1 = 0.0246;
    p.mu2 = 0.0038;
    p.sigma_s = 0.4580;
    p.sigma_l = 0.1655;
    p.rho = 0.4113;
    return p;
}

std::vector<CurvePoint> seasonal_curve(YearMonth first, int n_months) {
    std::vector<CurvePoint> curve;
    YearMonth m = first;
    for (int i = 0; i < n_months; ++i, m = add_months(m, 1)) {
        const double t = year_fraction(m.first_day());
        curve.push_back({m, 3.5 + std::cos(2.0 * M_PI * t)});
    }
    return curve;
}

} // namespace

TEST_CASE("seasonal volatility weight at the calendar anchors") {
    GabillonParams p;
    p.mu1 = 0.2;
    p.mu2 = 0.1;
    // cos terms: 2 pi (t - 0) and 4 pi (t - 7/12)
    CHECK(p.seasonal_vol(0.0) == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(p.seasonal_vol(0.5) == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(p.seasonal_vol(2026.0) == doctest::Approx(p.seasonal_vol(0.0)).epsilon(1e-9));
}

TEST_CASE("parameter validation") {
    GabillonParams p = table_params();
    p.validate();
    GabillonParams bad = p;
    bad.sigma_s = -0.1;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = p;
    bad.rho = 1.5;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = p;
    bad.lambda = -0.5;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = p;
    bad.mu1 = 1.2; // pushes the seasonal weight below zero in summer
    bad.mu2 = 0.1;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("zero volatility leaves the curve untouched") {
    GabillonParams p = table_params();
    p.sigma_s = 0.0;
    p.sigma_l = 0.0;
    SimGrid grid = SimGrid::daily(Date{2026, 4, 1}, Date{2026, 6, 1});
    auto curve = seasonal_curve(YearMonth{2026, 4}, 8);
    CurvePathSet cs = simulate_curves(p, curve, grid, 3, 5);
    for (int m = 0; m < 3; ++m)
        for (int i = 0; i <= grid.n_steps(); ++i)
            for (size_t j = 0; j < cs.maturities.size(); ++j)
                CHECK(cs.price(m, i, static_cast<int>(j)) ==
                      doctest::Approx(curve[j].price).epsilon(1e-12));
}

TEST_CASE("simulated curves start on the initial curve and stay positive") {
    SimGrid grid = SimGrid::daily(Date{2026, 4, 1}, Date{2026, 7, 1});
    auto curve = seasonal_curve(YearMonth{2026, 4}, 10);
    CurvePathSet cs = simulate_curves(table_params(), curve, grid, 50, 7);
    REQUIRE(cs.maturities.size() == curve.size());
    for (int m = 0; m < cs.n_paths; ++m) {
        for (size_t j = 0; j < curve.size(); ++j)
            CHECK(cs.price(m, 0, static_cast<int>(j)) == curve[j].price);
        for (int i = 0; i <= grid.n_steps(); ++i)
            for (size_t j = 0; j < curve.size(); ++j)
                CHECK(cs.price(m, i, static_cast<int>(j)) > 0.0);
    }
}

TEST_CASE("contracts freeze at expiry") {
    SimGrid grid = SimGrid::daily(Date{2026, 4, 1}, Date{2026, 7, 1});
    auto curve = seasonal_curve(YearMonth{2026, 4}, 10);
    CurvePathSet cs = simulate_curves(table_params(), curve, grid, 20, 7);
    // the 2026-05 contract expires on 2026-05-01 (day 30 of the grid)
    const int j = 1;
    REQUIRE(cs.maturities[j] == YearMonth{2026, 5});
    const Date expiry = cs.expiry_date[j];
    for (int m = 0; m < cs.n_paths; ++m) {
        double frozen = -1.0;
        for (int i = 0; i <= grid.n_steps(); ++i) {
            if (grid.dates[i] < expiry)
                continue;
            if (frozen < 0.0)
                frozen = cs.price(m, i, j);
            CHECK(cs.price(m, i, j) == frozen);
        }
    }
}

TEST_CASE("prompt index rolls and prices are martingales") {
    SimGrid grid = SimGrid::daily(Date{2026, 4, 1}, Date{2026, 7, 1});
    auto curve = seasonal_curve(YearMonth{2026, 4}, 10);
    CurvePathSet cs = simulate_curves(table_params(), curve, grid, 2000, 13);

    // prompt on 2026-04-01 is the May contract; June after May 1
    CHECK(cs.maturities[cs.prompt_index[0]] == YearMonth{2026, 5});
    const long may1 = days_between(grid.dates[0], Date{2026, 5, 1});
    CHECK(cs.maturities[cs.prompt_index[may1]] == YearMonth{2026, 6});

    const int n = grid.n_steps();
    for (size_t j = 0; j < cs.maturities.size(); ++j) {
        std::vector<double> ratio(cs.n_paths);
        for (int m = 0; m < cs.n_paths; ++m)
            ratio[m] = cs.price(m, n, static_cast<int>(j)) / curve[j].price;
        const double mu = mean(ratio);
        const double se = sample_std(ratio) / std::sqrt(static_cast<double>(cs.n_paths));
        CHECK(std::abs(mu - 1.0) < 3.5 * se + 1e-12); // zero-width ratios once expired
    }
}

TEST_CASE("same seed reproduces paths, different seed moves them") {
    SimGrid grid = SimGrid::daily(Date{2026, 4, 1}, Date{2026, 5, 1});
    auto curve = seasonal_curve(YearMonth{2026, 4}, 6);
    CurvePathSet a = simulate_curves(table_params(), curve, grid, 10, 21);
    CurvePathSet b = simulate_curves(table_params(), curve, grid, 10, 21);
    CurvePathSet c = simulate_curves(table_params(), curve, grid, 10, 22);
    CHECK(a.data == b.data);
    CHECK(a.data != c.data);
}

TEST_CASE("factor inversion") {
    Eigen::MatrixXd h(4, 2);
    h << 1.0, 0.1, 0.8, 0.3, 0.5, 0.6, 0.2, 0.9;
    Eigen::Vector2d x_true(0.7, -0.4);
    Eigen::VectorXd z = h * x_true;
    Eigen::Vector2d x = invert_factors(z, h);
    CHECK(x(0) == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(x(1) == doctest::Approx(-0.4).epsilon(1e-10));

    Eigen::MatrixXd singular(4, 2);
    singular << 1.0, 2.0, 0.5, 1.0, 0.25, 0.5, 2.0, 4.0; // collinear loadings
    CHECK_THROWS_AS(invert_factors(z, singular), Error);
}

TEST_CASE("moment seeds from a synthetic history") {
    SpotParams sp;
    sp.model = 1;
    sp.a1 = 0.0;
    sp.a2 = 0.3;
    sp.a3 = 0.5;
    sp.garch = {1.5e-5, 0.85, 0.10};
    auto curve = seasonal_curve(YearMonth{2026, 4}, 60); // five years of quotes
    PriceHistory h = synthesize_history(table_params(), sp, curve, 3.5,
                                        Date{2026, 4, 1}, Date{2027, 4, 1}, 31);
    RoughEstimates r = rough_estimates(h);
    CHECK(r.n_obs > 300);
    CHECK(r.sigma_s > 0.1);
    CHECK(r.sigma_s < 1.5);
    CHECK(r.sigma_l > 0.01);
    CHECK(r.sigma_l < r.sigma_s); // long end moves less
    CHECK(std::abs(r.rho) < 1.0);
}
