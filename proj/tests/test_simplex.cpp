#include "gasval/simplex.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace gasval;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LpProblem make_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                  const std::vector<double>& c, const std::vector<double>& lo,
                  const std::vector<double>& hi) {
    LpProblem p;
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(c.size());
    p.a.resize(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            p.a(i, j) = a[i][j];
    p.b = Eigen::Map<const Eigen::VectorXd>(b.data(), m);
    p.c = Eigen::Map<const Eigen::VectorXd>(c.data(), n);
    p.lower = Eigen::Map<const Eigen::VectorXd>(lo.data(), n);
    p.upper = Eigen::Map<const Eigen::VectorXd>(hi.data(), n);
    return p;
}

// Exhaustive oracle: optima of a bounded feasible LP sit at basic solutions,
// so enumerate every (basis, bound-assignment) pair and keep the best
// feasible one. Only workable for tiny instances.
double enumerate_optimum(const LpProblem& p, bool* feasible) {
    const int m = static_cast<int>(p.a.rows());
    const int n = static_cast<int>(p.a.cols());
    double best = kInf;
    *feasible = false;

    std::vector<int> basis(m);
    std::vector<int> comb(m);
    for (int i = 0; i < m; ++i)
        comb[i] = i;
    auto next_comb = [&]() {
        int i = m - 1;
        while (i >= 0 && comb[i] == n - m + i)
            --i;
        if (i < 0)
            return false;
        ++comb[i];
        for (int j = i + 1; j < m; ++j)
            comb[j] = comb[j - 1] + 1;
        return true;
    };

    do {
        std::vector<int> nonbasic;
        for (int j = 0; j < n; ++j)
            if (std::find(comb.begin(), comb.end(), j) == comb.end())
                nonbasic.push_back(j);
        const int k = static_cast<int>(nonbasic.size());
        for (int mask = 0; mask < (1 << k); ++mask) {
            Eigen::VectorXd x(n);
            bool ok = true;
            Eigen::VectorXd rhs = p.b;
            for (int q = 0; q < k; ++q) {
                const int j = nonbasic[q];
                const double v = (mask >> q & 1) ? p.upper(j) : p.lower(j);
                if (!std::isfinite(v)) {
                    ok = false;
                    break;
                }
                x(j) = v;
                rhs -= p.a.col(j) * v;
            }
            if (!ok)
                continue;
            Eigen::MatrixXd ab(m, m);
            for (int q = 0; q < m; ++q)
                ab.col(q) = p.a.col(comb[q]);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(ab);
            if (!lu.isInvertible())
                continue;
            Eigen::VectorXd xb = lu.solve(rhs);
            for (int q = 0; q < m; ++q) {
                const int j = comb[q];
                if (xb(q) < p.lower(j) - 1e-8 || xb(q) > p.upper(j) + 1e-8) {
                    ok = false;
                    break;
                }
                x(j) = xb(q);
            }
            if (!ok)
                continue;
            *feasible = true;
            best = std::min(best, p.c.dot(x));
        }
    } while (next_comb());
    return best;
}

} // namespace

TEST_CASE("fixed instances match an external solver") {
    // optima computed once with an independent LP code and frozen here
    bool f = false;
    LpProblem p1 = make_lp({{1, 1, 1}, {1, -1, 0}}, {4, 1}, {1, 2, -1},
                           {0, 0, 0}, {3, 3, 3});
    LpSolution s1 = solve_lp(p1);
    REQUIRE(s1.status == LpStatus::optimal);
    CHECK(s1.objective == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(enumerate_optimum(p1, &f) == doctest::Approx(-2.0).epsilon(1e-9));

    LpProblem p2 = make_lp({{2, 1, 0, 1}}, {5}, {-1, 1, 0.5, 2},
                           {0, 1, -10, 0}, {2, 1, 10, 4}); // second variable pinned
    LpSolution s2 = solve_lp(p2);
    REQUIRE(s2.status == LpStatus::optimal);
    CHECK(s2.objective == doctest::Approx(-6.0).epsilon(1e-9));
    CHECK(s2.x(1) == doctest::Approx(1.0));

    LpProblem p3 = make_lp({{1, 2, -1, 0, 1}, {0, 1, 1, 1, 0}, {1, 0, 0, -1, 2}},
                           {3, 2, 1}, {1, -2, 3, 0.5, -1},
                           {-2, -2, -2, -2, -2}, {2, 2, 2, 2, 2});
    LpSolution s3 = solve_lp(p3);
    REQUIRE(s3.status == LpStatus::optimal);
    CHECK(s3.objective == doctest::Approx(-43.0 / 6.0).epsilon(1e-9));

    // prefix-sum structure of a monthly storage plan
    std::vector<std::vector<double>> a(4, std::vector<double>(8, 0.0));
    for (int r = 0; r < 4; ++r) {
        for (int j = 0; j <= r; ++j)
            a[r][j] = 1.0;
        a[r][4 + r] = -1.0;
    }
    LpProblem p4 = make_lp(a, {0, 0, 0, 0}, {3, 2.5, 4, 5, 0, 0, 0, 0},
                           {-30, -30, -30, -30, 0, 0, 0, 0},
                           {30, 30, 30, 30, 100, 100, 100, 0});
    LpSolution s4 = solve_lp(p4);
    REQUIRE(s4.status == LpStatus::optimal);
    CHECK(s4.objective == doctest::Approx(-105.0).epsilon(1e-9));
}

TEST_CASE("solution vector is feasible and complementary") {
    LpProblem p = make_lp({{1, 1, 1}, {1, -1, 0}}, {4, 1}, {1, 2, -1},
                          {0, 0, 0}, {3, 3, 3});
    LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::optimal);
    Eigen::VectorXd resid = p.a * s.x - p.b;
    CHECK(resid.cwiseAbs().maxCoeff() < 1e-9);
    for (int j = 0; j < 3; ++j) {
        CHECK(s.x(j) >= p.lower(j) - 1e-9);
        CHECK(s.x(j) <= p.upper(j) + 1e-9);
    }
    CHECK(s.objective == doctest::Approx(p.c.dot(s.x)).epsilon(1e-12));
}

TEST_CASE("infeasible and unbounded are detected") {
    LpProblem inf = make_lp({{1, 1}}, {10}, {1, 1}, {0, 0}, {3, 3});
    CHECK(solve_lp(inf).status == LpStatus::infeasible);

    LpProblem unb = make_lp({{1, -1}}, {0}, {-1, 0}, {0, 0}, {kInf, kInf});
    CHECK(solve_lp(unb).status == LpStatus::unbounded);
}

TEST_CASE("equal bounds pin variables") {
    LpProblem p = make_lp({{1, 1}}, {3}, {1, 5}, {2, 0}, {2, 10});
    LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.x(0) == doctest::Approx(2.0));
    CHECK(s.x(1) == doctest::Approx(1.0));
}

TEST_CASE("random instances agree with exhaustive enumeration") {
    std::mt19937_64 gen(2718);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<int> nd(3, 6);
    int solved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = nd(gen);
        const int m = std::uniform_int_distribution<int>(1, n - 1)(gen);
        std::vector<std::vector<double>> a(m, std::vector<double>(n));
        std::vector<double> c(n), lo(n), hi(n);
        for (int j = 0; j < n; ++j) {
            c[j] = u(gen);
            lo[j] = -std::abs(u(gen)) - 0.5;
            hi[j] = std::abs(u(gen)) + 0.5;
            for (int i = 0; i < m; ++i)
                a[i][j] = u(gen);
        }
        // rhs from a random feasible interior point keeps most cases feasible
        std::vector<double> b(m, 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                b[i] += a[i][j] * (lo[j] + 0.37 * (hi[j] - lo[j]));
        LpProblem p = make_lp(a, b, c, lo, hi);

        bool feasible = false;
        double oracle = enumerate_optimum(p, &feasible);
        LpSolution s = solve_lp(p);
        if (!feasible) {
            CHECK(s.status == LpStatus::infeasible);
            continue;
        }
        REQUIRE(s.status == LpStatus::optimal);
        CHECK(s.objective == doctest::Approx(oracle).epsilon(1e-7));
        ++solved;
    }
    CHECK(solved >= 40); // the generator must actually exercise the solver
}
