#include "gasval/storage.hpp"

#include "gasval/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gasval {

namespace {
constexpr double kVolumeTol = 1e-9;
}

void StorageSpec::validate() const {
    GASVAL_REQUIRE(v_max > v_min, ErrorKind::domain, "v_max must exceed v_min");
    GASVAL_REQUIRE(a_inj > 0.0 && a_with > 0.0, ErrorKind::domain, "rates must be positive");
    GASVAL_REQUIRE(v_start >= v_min && v_start <= v_max, ErrorKind::domain,
                   "v_start outside [v_min, v_max]");
    GASVAL_REQUIRE(v_end_target >= v_min && v_end_target <= v_max, ErrorKind::domain,
                   "v_end_target outside [v_min, v_max]");
    GASVAL_REQUIRE(dt_days > 0.0, ErrorKind::domain, "dt_days must be positive");
    GASVAL_REQUIRE(start < end, ErrorKind::domain, "lease start must precede end");
    GASVAL_REQUIRE(max_volume_nodes >= 2, ErrorKind::domain, "max_volume_nodes too small");
}

StorageSpec fast_storage(const Date& start, const Date& end) {
    StorageSpec s;
    s.v_min = 0.0;
    s.v_max = 100.0;
    s.a_inj = 4.0;
    s.a_with = 6.0;
    s.v_start = 0.0;
    s.v_end_target = 0.0;
    s.start = start;
    s.end = end;
    s.validate();
    return s;
}

StorageSpec slow_storage(const Date& start, const Date& end) {
    StorageSpec s = fast_storage(start, end);
    s.a_inj = 0.8;
    s.a_with = 1.2;
    return s;
}

double next_volume(const StorageSpec& s, double v, Action a) {
    double next = v;
    if (a == Action::inject)
        next = v + s.a_inj * s.dt_days;
    else if (a == Action::withdraw)
        next = v - s.a_with * s.dt_days;
    return std::clamp(next, s.v_min, s.v_max);
}

double cash_flow(double spot, double v, double v_next) { return spot * (v - v_next); }

namespace {

std::vector<double> dedup_sorted(std::vector<double>& vals) {
    std::sort(vals.begin(), vals.end());
    std::vector<double> out;
    out.reserve(vals.size());
    for (double v : vals) {
        if (out.empty() || v - out.back() > kVolumeTol)
            out.push_back(v);
    }
    return out;
}

std::vector<double> coarse_grid(const StorageSpec& s) {
    std::vector<double> g;
    const int n = s.max_volume_nodes;
    g.reserve(n + 2);
    const double step = (s.v_max - s.v_min) / (n - 1);
    for (int i = 0; i < n; ++i)
        g.push_back(s.v_min + step * i);
    g.push_back(s.v_start);
    g.push_back(s.v_end_target);
    return dedup_sorted(g);
}

} // namespace

std::vector<std::vector<double>> attainable_sets(const StorageSpec& s, int n_steps) {
    s.validate();
    GASVAL_REQUIRE(n_steps >= 0, ErrorKind::domain, "n_steps must be non-negative");
    std::vector<std::vector<double>> sets;
    sets.reserve(n_steps + 1);
    sets.push_back({s.v_start});
    bool coarsened = false;
    for (int i = 1; i <= n_steps; ++i) {
        if (coarsened) {
            sets.push_back(sets.back());
            continue;
        }
        std::vector<double> cand;
        cand.reserve(sets.back().size() * 3);
        for (double v : sets.back())
            for (Action a : {Action::hold, Action::inject, Action::withdraw})
                cand.push_back(next_volume(s, v, a));
        std::vector<double> next = dedup_sorted(cand);
        if (static_cast<int>(next.size()) > s.max_volume_nodes) {
            coarsened = true;
            next = coarse_grid(s);
        }
        sets.push_back(std::move(next));
    }
    return sets;
}

std::vector<double> attainable_volumes(const StorageSpec& s, int step) {
    return attainable_sets(s, step).back();
}

} // namespace gasval
