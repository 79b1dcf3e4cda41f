#pragma once

#include "gasval/futures_model.hpp"
#include "gasval/hedging.hpp"
#include "gasval/spot_model.hpp"
#include "gasval/storage.hpp"

#include <limits>
#include <string>
#include <vector>

namespace gasval {

struct FamilyMember {
    SpotParams params;
    double loglik = 0.0;
    double ks_pvalue = 0.0;
};

/// One candidate draw. loglik and ks_pvalue stay NaN when the chain rejected
// the draw before computing them; reject_reason is empty for accepted draws.
struct FamilyAttempt {
    int draw = 0;         // 1-based attempt number
    int member_index = -1; // into members when accepted
    double loglik = std::numeric_limits<double>::quiet_NaN();
    double ks_pvalue = std::numeric_limits<double>::quiet_NaN();
    std::string reject_reason;
};

// Perturbed-parameter family around a fitted spot model. The base model is
// kept separate: risk spreads range over the members, the base only scales.
struct ModelFamily {
    FamilyMember base;
    std::vector<FamilyMember> members;
    std::vector<FamilyAttempt> log; // every draw in order
    int attempts = 0;
    int rejected_stationarity = 0;
    int rejected_ks = 0;
    int rejected_likelihood = 0;
    bool reached_target = false;
};

struct FamilyOptions {
    int n_target = 30;              // wanted number of accepted members
    double likelihood_slack = 0.05; // keep LL >= LL* - slack * |LL*|
    double ks_level = 0.05;
    int cap_multiplier = 50; // stop after cap_multiplier * n_target draws
    std::uint64_t seed = 1;
};

// Draws candidates around the fitted point using its estimated covariance and
// keeps those that are stationary, whose standardized residuals pass a
// normality check, and whose likelihood stays inside the slack band. Jump and
// decay settings are shared across members. Errors only when the attempt cap
// passes with nothing accepted; a short family is returned with
// reached_target = false.
ModelFamily generate_family(const SpotEstimate& fit, const PriceHistory& h, int model,
                            double spike_k, const FamilyOptions& opt,
                            const RollConvention& rc = {});

struct RiskMeasures {
    double base_value = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    double pi = 0.0; // (max - min) / base
    std::vector<double> member_values;
};

// Shared valuation setup: the futures model and its curve paths are common to
// every member, only spot dynamics vary.
struct RiskInputs {
    GabillonParams futures;
    std::vector<CurvePoint> initial_curve; // must quote months past the lease end
    double s0 = 0.0;
    StorageSpec spec;
    int n_paths = 0;
    std::uint64_t seed_backward = 0;
    std::uint64_t seed_forward = 0;
    HedgeVariant hedge_variant = HedgeVariant::value;
};

// Spread of simulated storage values: each member is valued with its own
// policy on paths simulated under its own dynamics.
RiskMeasures risk_pi1(const ModelFamily& family, const RiskInputs& in);

// Spread of realized wealth: each member's policy and hedge, both fitted on
// paths simulated under that member, replayed on one historical path.
RiskMeasures risk_pi2(const ModelFamily& family, const RiskInputs& in, const PriceHistory& h,
                      const RollConvention& rc = {});

} // namespace gasval
