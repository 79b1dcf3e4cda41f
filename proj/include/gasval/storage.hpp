#pragma once

#include "gasval/calendar.hpp"

#include <vector>

namespace gasval {

/// Physical storage lease. Rates are volumes per day; injecting for one grid
/// step moves the level by a_inj * dt_days, withdrawing by a_with * dt_days,
/// both clamped to [v_min, v_max].
struct StorageSpec {
    double v_min = 0.0;
    double v_max = 0.0;
    double a_inj = 0.0;  // per day
    double a_with = 0.0; // per day
    double v_start = 0.0;
    double v_end_target = 0.0;
    Date start;
    Date end;
    double dt_days = 1.0;
    int max_volume_nodes = 2000;

    void validate() const;
};

// One-year leases with the level bounds and final-volume constraint of the
// two reference configurations.
StorageSpec fast_storage(const Date& start, const Date& end);
StorageSpec slow_storage(const Date& start, const Date& end);

enum class Action { hold = 0, inject = 1, withdraw = 2 };

double next_volume(const StorageSpec& s, double v, Action a);

// Cash paid/received over one step: spot * (v - v_next). Injection costs
// money (negative), withdrawal earns it.
double cash_flow(double spot, double v, double v_next);

// Volume sets reachable from v_start in exactly i steps, one sorted vector per
// step 0..n_steps. Values closer than 1e-9 are merged. If a set outgrows
// max_volume_nodes it is replaced by a uniform grid (v_min, v_max, v_start and
// v_end_target kept exact) which then persists for later steps.
std::vector<std::vector<double>> attainable_sets(const StorageSpec& s, int n_steps);
std::vector<double> attainable_volumes(const StorageSpec& s, int step);

} // namespace gasval
