#include "gasval/reports.hpp"

#include "gasval/errors.hpp"
#include "gasval/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

namespace gasval {

namespace {

using nlohmann::json;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// NaN has no JSON literal; the summaries carry null instead.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* variant_name(HedgeVariant v) {
    return v == HedgeVariant::volume ? "volume" : "value";
}

void append_raw(std::string& out, const void* p, size_t n) {
    out.append(static_cast<const char*>(p), n);
}

void append_i64(std::string& out, std::int64_t v) { append_raw(out, &v, sizeof v); }

void append_doubles(std::string& out, const std::vector<double>& v) {
    append_raw(out, v.data(), v.size() * sizeof(double));
}

json risk_json(const RiskMeasures& m) {
    json j;
    j["base_value"] = num(m.base_value);
    j["min_value"] = num(m.min_value);
    j["max_value"] = num(m.max_value);
    j["pi"] = num(m.pi);
    return j;
}

} // namespace

std::string value_summary_json(const ValuationJob& job, const ValuationResult& res) {
    json j;
    j["lease"]["start"] = to_string(job.spec.start);
    j["lease"]["end"] = to_string(job.spec.end);
    j["model"] = job.spot.model;
    j["n_paths"] = job.n_paths;
    j["seed_backward"] = job.seed_backward;
    j["seed_forward"] = job.seed_forward;
    j["hedge_variant"] = variant_name(job.hedge_variant);
    j["intrinsic"] = num(res.intrinsic);
    j["backward_value"] = num(res.backward_value);
    j["forward"]["mean"] = num(res.forward.mean);
    j["forward"]["std"] = num(res.forward.std_dev);
    j["forward"]["std_err"] = num(res.forward.std_err);
    j["forward"]["max_terminal_gap"] = num(res.forward.max_terminal_gap);
    j["hedged"]["mean"] = num(res.hedged_mean);
    j["hedged"]["std"] = num(res.hedged_std);
    j["hedged"]["std_err"] = num(res.hedged_std_err);
    j["std_reduction"] =
        res.hedged_std > 0.0 ? num(res.forward.std_dev / res.hedged_std) : json(nullptr);
    j["ridge_fallbacks"] = res.policy.ridge_fallbacks;
    return dump(j);
}

std::string deltas_csv(const std::vector<YearMonth>& maturities,
                       const std::vector<double>& deltas) {
    GASVAL_REQUIRE(maturities.size() == deltas.size(), ErrorKind::config,
                   "deltas and maturities differ in length");
    std::string out = "maturity,delta\n";
    for (size_t i = 0; i < maturities.size(); ++i)
        out += to_string(maturities[i]) + "," + format_double(deltas[i]) + "\n";
    return out;
}

std::string wealth_csv(const ForwardResult& forward, const std::vector<double>& hedge) {
    GASVAL_REQUIRE(hedge.empty() || hedge.size() == forward.wealth.size(), ErrorKind::config,
                   "hedge leg and wealth differ in length");
    std::string out = "path,wealth,hedge,hedged\n";
    for (size_t p = 0; p < forward.wealth.size(); ++p) {
        const double leg = hedge.empty() ? 0.0 : hedge[p];
        out += std::to_string(p) + "," + format_double(forward.wealth[p]) + "," +
               format_double(leg) + "," + format_double(forward.wealth[p] + leg) + "\n";
    }
    return out;
}

std::string positions_csv(const std::vector<YearMonth>& maturities,
                          const std::vector<double>& alpha) {
    GASVAL_REQUIRE(maturities.size() == alpha.size(), ErrorKind::config,
                   "positions and maturities differ in length");
    std::string out = "maturity,alpha\n";
    for (size_t i = 0; i < maturities.size(); ++i)
        out += to_string(maturities[i]) + "," + format_double(alpha[i]) + "\n";
    return out;
}

std::string intrinsic_summary_json(const IntrinsicSolution& sol, const Date& valuation) {
    json j;
    j["value"] = num(sol.value);
    j["valuation_date"] = to_string(valuation);
    j["n_months"] = sol.maturities.size();
    j["n_fixed"] = std::count(sol.fixed.begin(), sol.fixed.end(), char(1));
    j["iterations"] = sol.iterations;
    return dump(j);
}

std::string rolling_csv(const RollingIntrinsicResult& res) {
    std::string out = "date,improvement,cumulative,adopted\n";
    for (const auto& pt : res.points)
        out += to_string(pt.date) + "," + format_double(pt.improvement) + "," +
               format_double(pt.cumulative) + "," + (pt.adopted ? "1" : "0") + "\n";
    return out;
}

std::string rolling_summary_json(const RollingIntrinsicResult& res) {
    int relocks = 0;
    for (const auto& pt : res.points)
        if (pt.adopted && pt.improvement > 0.0)
            ++relocks;
    json j;
    j["initial_value"] = num(res.initial_value);
    j["final_value"] = num(res.final_value);
    j["relocks"] = relocks;
    j["n_dates"] = res.points.size();
    return dump(j);
}

std::string backtest_csv(const BacktestReport& report) {
    std::string out = "year,iv,ev_sim,iv_hist,ev_hist,std_unhedged,std_hedged\n";
    for (const auto& r : report.rows)
        out += std::to_string(r.year) + "," + format_double(r.iv) + "," +
               format_double(r.ev_sim) + "," + format_double(r.iv_hist) + "," +
               format_double(r.ev_hist) + "," + format_double(r.std_unhedged) + "," +
               format_double(r.std_hedged) + "\n";
    return out;
}

std::string backtest_summary_json(const BacktestReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row;
        row["year"] = r.year;
        row["iv"] = num(r.iv);
        row["ev_sim"] = num(r.ev_sim);
        row["ev_sim_std_err"] = num(r.ev_sim_std_err);
        row["iv_hist"] = num(r.iv_hist);
        row["ev_hist"] = num(r.ev_hist);
        row["std_unhedged"] = num(r.std_unhedged);
        row["std_hedged"] = num(r.std_hedged);
        rows.push_back(row);
    }
    json j;
    j["rows"] = rows;
    j["skipped"] = report.skipped;
    return dump(j);
}

std::string family_members_csv(const ModelFamily& family, const std::vector<double>& j_star,
                               const std::vector<double>& wealth_hist) {
    std::string out = "member_id,J_star,wealth_hist,accepted,reject_reason\n";
    for (const auto& rec : family.log) {
        std::string id, js, wh;
        if (rec.member_index >= 0) {
            id = std::to_string(rec.member_index);
            const size_t m = static_cast<size_t>(rec.member_index);
            if (m < j_star.size())
                js = format_double(j_star[m]);
            if (m < wealth_hist.size())
                wh = format_double(wealth_hist[m]);
        }
        out += id + "," + js + "," + wh + "," + (rec.member_index >= 0 ? "1" : "0") + "," +
               rec.reject_reason + "\n";
    }
    return out;
}

std::string model_risk_summary_json(const ModelFamily& family, const FamilyOptions& opt,
                                    const RiskMeasures& pi1, const RiskMeasures& pi2) {
    json j;
    j["pi1"] = risk_json(pi1);
    j["pi2"] = risk_json(pi2);
    j["family"]["n_members"] = family.members.size();
    j["family"]["n_target"] = opt.n_target;
    j["family"]["reached_target"] = family.reached_target;
    j["family"]["attempts"] = family.attempts;
    j["family"]["rejected_stationarity"] = family.rejected_stationarity;
    j["family"]["rejected_ks"] = family.rejected_ks;
    j["family"]["rejected_likelihood"] = family.rejected_likelihood;
    j["family"]["likelihood_slack"] = num(opt.likelihood_slack);
    j["family"]["ks_level"] = num(opt.ks_level);
    j["family"]["seed"] = opt.seed;
    j["family"]["base_loglik"] = num(family.base.loglik);
    return dump(j);
}

std::string futures_calibration_json(const GabillonFit& fit) {
    json j;
    j["params"]["lambda"] = num(fit.params.lambda);
    j["params"]["mu1"] = num(fit.params.mu1);
    j["params"]["mu2"] = num(fit.params.mu2);
    j["params"]["sigma_s"] = num(fit.params.sigma_s);
    j["params"]["sigma_l"] = num(fit.params.sigma_l);
    j["params"]["rho"] = num(fit.params.rho);
    j["objective"] = num(fit.objective);
    j["n_obs"] = fit.n_obs;
    j["iterations"] = fit.iterations;
    j["covariance_ok"] = fit.covariance_ok;
    if (fit.covariance_ok) {
        static const char* names[6] = {"lambda", "mu1", "mu2", "sigma_s", "sigma_l", "rho"};
        for (int i = 0; i < 6; ++i) {
            j["wald_95"][names[i]]["lo"] = num(fit.wald_ci[i].first);
            j["wald_95"][names[i]]["hi"] = num(fit.wald_ci[i].second);
        }
    }
    return dump(j);
}

std::string spot_calibration_json(const SpotEstimate& est) {
    json j;
    j["model"] = est.params.model;
    j["params"]["a1"] = num(est.params.a1);
    j["params"]["a2"] = num(est.params.a2);
    j["params"]["a3"] = num(est.params.a3);
    j["params"]["kappa"] = num(est.params.garch.kappa);
    j["params"]["gamma1"] = num(est.params.garch.gamma1);
    j["params"]["alpha1"] = num(est.params.garch.alpha1);
    j["spikes"]["pos_intensity"] = num(est.params.spike_pos.intensity);
    j["spikes"]["pos_jump_mean"] = num(est.params.spike_pos.jump_mean);
    j["spikes"]["pos_jump_std"] = num(est.params.spike_pos.jump_std);
    j["spikes"]["neg_intensity"] = num(est.params.spike_neg.intensity);
    j["spikes"]["neg_jump_mean"] = num(est.params.spike_neg.jump_mean);
    j["spikes"]["neg_jump_std"] = num(est.params.spike_neg.jump_std);
    j["spikes"]["n_events"] = est.detection.total();
    j["spikes"]["threshold_k"] = num(est.detection.threshold_k);
    j["loglik"] = num(est.loglik);
    j["n_obs"] = est.n_obs;
    j["n_excised"] = est.n_excised;
    j["covariance_ok"] = est.covariance_ok;
    j["warnings"] = est.warnings;
    return dump(j);
}

std::string curve_paths_csv(const CurvePathSet& curves) {
    const int n_dates = static_cast<int>(curves.grid.dates.size());
    const int n_mats = static_cast<int>(curves.maturities.size());
    std::string out = "path,step,date,maturity,price\n";
    out.reserve(out.size() +
                static_cast<size_t>(curves.n_paths) * n_dates * n_mats * 48);
    for (int p = 0; p < curves.n_paths; ++p)
        for (int s = 0; s < n_dates; ++s) {
            const std::string prefix =
                std::to_string(p) + "," + std::to_string(s) + "," + to_string(curves.grid.dates[s]);
            for (int m = 0; m < n_mats; ++m)
                out += prefix + "," + to_string(curves.maturities[m]) + "," +
                       format_double(curves.price(p, s, m)) + "\n";
        }
    return out;
}

std::string curve_paths_binary(const CurvePathSet& curves) {
    std::string out;
    out.reserve(32 + curves.data.size() * sizeof(double));
    out.append("GVCURVE1", 8);
    append_i64(out, curves.n_paths);
    append_i64(out, static_cast<std::int64_t>(curves.grid.dates.size()));
    append_i64(out, static_cast<std::int64_t>(curves.maturities.size()));
    append_i64(out, static_cast<std::int64_t>(curves.seed));
    for (const Date& d : curves.grid.dates)
        append_i64(out, to_serial(d));
    for (const YearMonth& m : curves.maturities)
        append_i64(out, static_cast<std::int64_t>(m.year) * 100 + m.month);
    append_doubles(out, curves.data);
    return out;
}

std::string spot_paths_csv(const SpotPathSet& spot) {
    const int n_dates = static_cast<int>(spot.grid.dates.size());
    std::string out = "path,step,date,spot,variance\n";
    out.reserve(out.size() + static_cast<size_t>(spot.n_paths) * n_dates * 56);
    for (int p = 0; p < spot.n_paths; ++p)
        for (int s = 0; s < n_dates; ++s) {
            const size_t idx = static_cast<size_t>(p) * n_dates + s;
            out += std::to_string(p) + "," + std::to_string(s) + "," +
                   to_string(spot.grid.dates[s]) + "," + format_double(spot.spiked[idx]) + "," +
                   format_double(spot.variance[idx]) + "\n";
        }
    return out;
}

std::string spot_paths_binary(const SpotPathSet& spot) {
    std::string out;
    out.reserve(32 + (spot.spiked.size() + spot.variance.size()) * sizeof(double));
    out.append("GVSPOT01", 8);
    append_i64(out, spot.n_paths);
    append_i64(out, static_cast<std::int64_t>(spot.grid.dates.size()));
    append_i64(out, static_cast<std::int64_t>(spot.seed));
    for (const Date& d : spot.grid.dates)
        append_i64(out, to_serial(d));
    append_doubles(out, spot.spiked);
    append_doubles(out, spot.variance);
    return out;
}

std::string manifest_json(const std::string& subcommand, const KeyValueMap& resolved_config,
                          const std::vector<std::pair<std::string, std::string>>& inputs,
                          const std::vector<std::string>& outputs) {
    // Hash the canonical "key = value" rendering; the map iterates sorted, so
    // the hash is stable against config line order and comments.
    std::string canonical;
    for (const auto& [k, v] : resolved_config)
        canonical += k + " = " + v + "\n";
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(canonical)));

    json j;
    j["subcommand"] = subcommand;
    j["config_hash"] = hash;
    j["config"] = resolved_config;
    json in = json::object();
    for (const auto& [name, path] : inputs)
        in[name] = path;
    j["inputs"] = in;
    j["outputs"] = outputs;
    json seeds = json::object();
    for (const char* key : {"seed_backward", "seed_forward", "seed_risk"}) {
        auto it = resolved_config.find(key);
        if (it != resolved_config.end())
            seeds[key] = std::strtoull(it->second.c_str(), nullptr, 10);
    }
    j["seeds"] = seeds;
    return dump(j);
}

} // namespace gasval
