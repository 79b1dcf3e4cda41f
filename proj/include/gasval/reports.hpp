#pragma once

#include "gasval/futures_model.hpp"
#include "gasval/intrinsic.hpp"
#include "gasval/key_value.hpp"
#include "gasval/model_risk.hpp"
#include "gasval/pipeline.hpp"
#include "gasval/spot_model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gasval {

// Report bodies as strings: tables as CSV with a header row, summaries as
// JSON. Every function is a pure formatter, so equal inputs give equal bytes
// and runs with the same seeds reproduce their reports exactly. Nothing here
// embeds a timestamp.

std::string value_summary_json(const ValuationJob& job, const ValuationResult& res);
// maturity,delta for the opening hedge position.
std::string deltas_csv(const std::vector<YearMonth>& maturities, const std::vector<double>& deltas);
// path,wealth,hedge,hedged across forward paths.
std::string wealth_csv(const ForwardResult& forward, const std::vector<double>& hedge);

// maturity,alpha for a locked monthly plan.
std::string positions_csv(const std::vector<YearMonth>& maturities,
                          const std::vector<double>& alpha);
std::string intrinsic_summary_json(const IntrinsicSolution& sol, const Date& valuation);
// date,improvement,cumulative,adopted along the re-lock sequence.
std::string rolling_csv(const RollingIntrinsicResult& res);
std::string rolling_summary_json(const RollingIntrinsicResult& res);

// year,iv,ev_sim,iv_hist,ev_hist,std_unhedged,std_hedged per processed year.
std::string backtest_csv(const BacktestReport& report);
std::string backtest_summary_json(const BacktestReport& report);

// member_id,J_star,wealth_hist,accepted,reject_reason: one row per draw in
// family order. j_star and wealth_hist hold per-member values when the
// matching measure was computed; fields outside a row's reach stay empty.
std::string family_members_csv(const ModelFamily& family, const std::vector<double>& j_star,
                               const std::vector<double>& wealth_hist);
std::string model_risk_summary_json(const ModelFamily& family, const FamilyOptions& opt,
                                    const RiskMeasures& pi1, const RiskMeasures& pi2);

std::string futures_calibration_json(const GabillonFit& fit);
std::string spot_calibration_json(const SpotEstimate& est);

// Path dumps. CSV forms carry one row per (path, step[, maturity]); binary
// forms are a fixed header ("GVCURVE1" / "GVSPOT01"), int64 dimensions and
// dates, then the price arrays as native doubles.
std::string curve_paths_csv(const CurvePathSet& curves);
std::string curve_paths_binary(const CurvePathSet& curves);
std::string spot_paths_csv(const SpotPathSet& spot);
std::string spot_paths_binary(const SpotPathSet& spot);

// Replay record written next to every subcommand's outputs: the resolved
// configuration and its hash, the seeds in use, input files consumed and
// report files produced.
std::string manifest_json(const std::string& subcommand, const KeyValueMap& resolved_config,
                          const std::vector<std::pair<std::string, std::string>>& inputs,
                          const std::vector<std::string>& outputs);

} // namespace gasval
