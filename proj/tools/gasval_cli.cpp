// Batch driver: calibrate, simulate, value, hedge and report on gas storage
// deals. Every subcommand resolves one flat key/value config (flags win over
// file entries, file entries win over defaults), runs a library pipeline and
// writes its reports plus a replay manifest into --out.

#include "gasval/errors.hpp"
#include "gasval/intrinsic.hpp"
#include "gasval/market_data.hpp"
#include "gasval/model_risk.hpp"
#include "gasval/params_io.hpp"
#include "gasval/pipeline.hpp"
#include "gasval/reports.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace gasval;

struct Run {
    KeyValueMap cfg;                 // fully resolved configuration
    std::set<std::string> explicit_keys; // set by file or flag, not defaulted
    std::string out_dir;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::string> outputs;

    bool was_set(const std::string& key) const { return explicit_keys.count(key) != 0; }
};

std::string kv_text(const KeyValuePairs& pairs) {
    std::string body;
    for (const auto& [k, v] : pairs)
        body += k + " = " + v + "\n";
    return body;
}

void write_report(Run& run, const std::string& name, const std::string& body) {
    std::filesystem::create_directories(run.out_dir);
    const std::filesystem::path path = std::filesystem::path(run.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    GASVAL_REQUIRE(out.good(), ErrorKind::io, "cannot write '" << path.string() << "'");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    GASVAL_REQUIRE(out.good(), ErrorKind::io, "write failed for '" << path.string() << "'");
    run.outputs.push_back(name);
}

void write_manifest(Run& run, const std::string& subcommand) {
    std::string name = "manifest_" + subcommand + ".json";
    for (char& c : name)
        if (c == '-')
            c = '_';
    const std::string body = manifest_json(subcommand, run.cfg, run.inputs, run.outputs);
    write_report(run, name, body);
}

std::uint64_t get_seed(const KeyValueMap& cfg, const std::string& key) {
    const std::string s = get_string_or(cfg, key, "");
    GASVAL_REQUIRE(!s.empty(), ErrorKind::config, "missing seed '" << key << "'");
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    GASVAL_REQUIRE(end == s.c_str() + s.size(), ErrorKind::parse,
                   "key '" << key << "': bad seed '" << s << "'");
    return v;
}

int checked_paths(const KeyValueMap& cfg) {
    const int n = get_int(cfg, "n_paths");
    GASVAL_REQUIRE(n >= 100, ErrorKind::config, "n_paths must be at least 100, got " << n);
    return n;
}

RollConvention roll_from(const KeyValueMap& cfg) {
    RollConvention rc;
    rc.expiry_day = get_int_or(cfg, "expiry_day", 1);
    return rc;
}

PriceHistory load_history(Run& run) {
    const std::string spot = get_string_or(run.cfg, "spot_csv", "");
    const std::string curve = get_string_or(run.cfg, "curve_csv", "");
    GASVAL_REQUIRE(!spot.empty() && !curve.empty(), ErrorKind::config,
                   "config needs 'spot_csv' and 'curve_csv'");
    run.inputs.emplace_back("spot_csv", spot);
    run.inputs.emplace_back("curve_csv", curve);
    return load_price_history(spot, curve);
}

StorageSpec storage_from(const KeyValueMap& cfg) {
    const std::string start_s = get_string_or(cfg, "lease_start", "");
    const std::string end_s = get_string_or(cfg, "lease_end", "");
    GASVAL_REQUIRE(!start_s.empty() && !end_s.empty(), ErrorKind::config,
                   "config needs 'lease_start' and 'lease_end'");
    const Date start = parse_date(start_s);
    const Date end = parse_date(end_s);

    const std::string preset = get_string_or(cfg, "preset", "");
    StorageSpec s;
    if (preset == "fast") {
        s = fast_storage(start, end);
    } else if (preset == "slow") {
        s = slow_storage(start, end);
    } else if (preset.empty()) {
        s.v_min = get_double_or(cfg, "v_min", 0.0);
        s.v_max = get_double(cfg, "v_max");
        s.a_inj = get_double(cfg, "a_inj");
        s.a_with = get_double(cfg, "a_with");
        s.v_start = get_double_or(cfg, "v_start", 0.0);
        s.v_end_target = get_double_or(cfg, "v_end_target", 0.0);
        s.start = start;
        s.end = end;
        s.dt_days = get_double_or(cfg, "dt_days", 1.0);
        s.max_volume_nodes = get_int_or(cfg, "max_volume_nodes", 2000);
    } else {
        GASVAL_REQUIRE(false, ErrorKind::config,
                       "unknown preset '" << preset << "' (expected fast or slow)");
    }
    s.validate();
    return s;
}

HedgeVariant variant_from(const KeyValueMap& cfg) {
    const std::string v = get_string_or(cfg, "hedge_variant", "value");
    if (v == "volume")
        return HedgeVariant::volume;
    GASVAL_REQUIRE(v == "value", ErrorKind::config,
                   "unknown hedge_variant '" << v << "' (expected volume or value)");
    return HedgeVariant::value;
}

Date valuation_date(const KeyValueMap& cfg, const StorageSpec& spec) {
    const std::string s = get_string_or(cfg, "valuation_date", "");
    return s.empty() ? spec.start : parse_date(s);
}

size_t index_of(const PriceHistory& h, const Date& d) {
    for (size_t i = 0; i < h.dates.size(); ++i)
        if (h.dates[i] == d)
            return i;
    GASVAL_REQUIRE(false, ErrorKind::gap, "history has no observation on " << to_string(d));
    return 0;
}

// Calibrates the curve model from history and stores the fit next to the
// other reports so later runs can load it.
GabillonFit fit_futures(Run& run, const PriceHistory& h) {
    GabillonParams init;
    init.sigma_s = 0.3;
    init.sigma_l = 0.15;
    try {
        // moment seeds sharpen the start point; a curve too short for the
        // long-tenor series just leaves the generic ones in place
        const RoughEstimates rough = rough_estimates(h, roll_from(run.cfg));
        if (rough.sigma_s > 0.0)
            init.sigma_s = rough.sigma_s;
        if (rough.sigma_l > 0.0)
            init.sigma_l = rough.sigma_l;
        if (std::isfinite(rough.rho))
            init.rho = rough.rho;
    } catch (const Error&) {
    }
    const GabillonFit fit = calibrate_mle(h, init, roll_from(run.cfg));
    write_report(run, "futures_params.kv", kv_text(gabillon_fit_to_pairs(fit)));
    write_report(run, "futures_calibration.json", futures_calibration_json(fit));
    return fit;
}

GabillonParams futures_from(Run& run, const PriceHistory& h) {
    const std::string path = get_string_or(run.cfg, "futures_params", "");
    if (path.empty())
        return fit_futures(run, h).params;
    run.inputs.emplace_back("futures_params", path);
    return gabillon_from_kv(read_key_value_file(path));
}

// Spot-side twin; the written file keeps the covariance so a later model-risk
// run can rebuild the estimate from it.
SpotEstimate fit_spot(Run& run, const PriceHistory& h) {
    const SpotEstimate est =
        estimate_spot(h, get_int(run.cfg, "model"), get_double_or(run.cfg, "spike_k", 3.0),
                      roll_from(run.cfg));
    write_report(run, "spot_params.kv", kv_text(spot_estimate_to_pairs(est)));
    write_report(run, "spot_calibration.json", spot_calibration_json(est));
    return est;
}

SpotEstimate spot_from(Run& run, const PriceHistory& h) {
    const std::string path = get_string_or(run.cfg, "spot_params", "");
    if (path.empty())
        return fit_spot(run, h);
    run.inputs.emplace_back("spot_params", path);
    const SpotEstimate est = spot_estimate_from_kv(read_key_value_file(path));
    GASVAL_REQUIRE(!run.was_set("model") || est.params.model == get_int(run.cfg, "model"),
                   ErrorKind::config, "spot_params file has model "
                                          << est.params.model << " but config asks for model "
                                          << get_int(run.cfg, "model"));
    return est;
}

ValuationJob job_from(Run& run, const PriceHistory& h, const GabillonParams& futures,
                      const SpotParams& spot) {
    ValuationJob job;
    job.futures = futures;
    job.spot = spot;
    job.spec = storage_from(run.cfg);
    const size_t i = index_of(h, valuation_date(run.cfg, job.spec));
    job.initial_curve = h.curves[i];
    job.s0 = get_double_or(run.cfg, "s0", h.spot[i]);
    job.n_paths = checked_paths(run.cfg);
    job.seed_backward = get_seed(run.cfg, "seed_backward");
    job.seed_forward = get_seed(run.cfg, "seed_forward");
    GASVAL_REQUIRE(job.seed_backward != job.seed_forward, ErrorKind::config,
                   "backward and forward phases must use distinct seeds");
    job.hedge_variant = variant_from(run.cfg);
    job.rc = roll_from(run.cfg);
    return job;
}

void cmd_calibrate_futures(Run& run) {
    const PriceHistory h = load_history(run);
    fit_futures(run, h);
    write_manifest(run, "calibrate-futures");
}

void cmd_calibrate_spot(Run& run) {
    const PriceHistory h = load_history(run);
    fit_spot(run, h);
    write_manifest(run, "calibrate-spot");
}

void cmd_simulate(Run& run) {
    const PriceHistory h = load_history(run);
    const GabillonParams futures = futures_from(run, h);
    const SpotEstimate est = spot_from(run, h);
    const StorageSpec spec = storage_from(run.cfg);
    const size_t i = index_of(h, valuation_date(run.cfg, spec));

    const SimGrid grid = SimGrid::daily(spec.start, spec.end);
    const int n_paths = checked_paths(run.cfg);
    const std::uint64_t seed = get_seed(run.cfg, "seed_forward");
    const CurvePathSet curves =
        simulate_curves(futures, h.curves[i], grid, n_paths, seed, roll_from(run.cfg));
    const double s0 = get_double_or(run.cfg, "s0", h.spot[i]);
    const SpotPathSet spot = simulate_spot_paths(est.params, curves, s0, seed);

    const std::string fmt = get_string_or(run.cfg, "path_format", "csv");
    if (fmt == "csv") {
        write_report(run, "curve_paths.csv", curve_paths_csv(curves));
        write_report(run, "spot_paths.csv", spot_paths_csv(spot));
    } else if (fmt == "bin") {
        write_report(run, "curve_paths.bin", curve_paths_binary(curves));
        write_report(run, "spot_paths.bin", spot_paths_binary(spot));
    } else {
        GASVAL_REQUIRE(false, ErrorKind::config,
                       "unknown path_format '" << fmt << "' (expected csv or bin)");
    }
    write_manifest(run, "simulate");
}

void cmd_value(Run& run) {
    const PriceHistory h = load_history(run);
    const GabillonParams futures = futures_from(run, h);
    const SpotEstimate est = spot_from(run, h);
    const ValuationJob job = job_from(run, h, futures, est.params);
    const ValuationResult res = run_valuation(job);

    write_report(run, "value_summary.json", value_summary_json(job, res));
    write_report(run, "deltas.csv", deltas_csv(res.plan.maturities, res.delta0));
    write_report(run, "wealth.csv", wealth_csv(res.forward, res.hedge));
    write_manifest(run, "value");
}

void cmd_intrinsic(Run& run) {
    const PriceHistory h = load_history(run);
    const StorageSpec spec = storage_from(run.cfg);
    const Date valuation = valuation_date(run.cfg, spec);
    const size_t i = index_of(h, valuation);
    const IntrinsicSolution sol =
        intrinsic_value(h.curves[i], valuation, spec, roll_from(run.cfg));

    write_report(run, "intrinsic_positions.csv", positions_csv(sol.maturities, sol.alpha));
    write_report(run, "intrinsic_summary.json", intrinsic_summary_json(sol, valuation));
    write_manifest(run, "intrinsic");
}

void cmd_rolling_intrinsic(Run& run) {
    const PriceHistory h = load_history(run);
    const StorageSpec spec = storage_from(run.cfg);
    const SimGrid grid = SimGrid::daily(spec.start, spec.end);
    const auto snapshots = curve_snapshots(h, grid.dates);
    const RollingIntrinsicResult res =
        rolling_intrinsic(grid.dates, snapshots, spec, roll_from(run.cfg));

    write_report(run, "rolling.csv", rolling_csv(res));
    write_report(run, "rolling_positions.csv", positions_csv(res.maturities, res.alpha));
    write_report(run, "rolling_summary.json", rolling_summary_json(res));
    write_manifest(run, "rolling-intrinsic");
}

void cmd_backtest(Run& run) {
    const PriceHistory h = load_history(run);
    const GabillonParams futures = futures_from(run, h);
    const SpotEstimate est = spot_from(run, h);

    const std::string years_s = get_string_or(run.cfg, "backtest_years", "");
    GASVAL_REQUIRE(!years_s.empty(), ErrorKind::config,
                   "backtest needs 'backtest_years' (comma separated)");
    std::vector<int> years;
    std::string item;
    std::istringstream ss(years_s);
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const long y = std::strtol(item.c_str(), &end, 10);
        GASVAL_REQUIRE(end == item.c_str() + item.size() && !item.empty(), ErrorKind::parse,
                       "bad year list '" << years_s << "'");
        years.push_back(static_cast<int>(y));
    }

    // the per-year window replaces the template lease, but the spec fields
    // still need to exist so shape and rates are defined
    ValuationJob tmpl;
    tmpl.futures = futures;
    tmpl.spot = est.params;
    tmpl.spec = storage_from(run.cfg);
    tmpl.n_paths = checked_paths(run.cfg);
    tmpl.seed_backward = get_seed(run.cfg, "seed_backward");
    tmpl.seed_forward = get_seed(run.cfg, "seed_forward");
    GASVAL_REQUIRE(tmpl.seed_backward != tmpl.seed_forward, ErrorKind::config,
                   "backward and forward phases must use distinct seeds");
    tmpl.hedge_variant = variant_from(run.cfg);
    tmpl.rc = roll_from(run.cfg);

    const int start_month = get_int_or(run.cfg, "backtest_start_month", 4);
    const BacktestReport report = run_backtest(h, tmpl, years, start_month);

    write_report(run, "backtest.csv", backtest_csv(report));
    write_report(run, "backtest_summary.json", backtest_summary_json(report));
    write_manifest(run, "backtest");
}

void cmd_model_risk(Run& run) {
    const PriceHistory h = load_history(run);
    const GabillonParams futures = futures_from(run, h);
    const SpotEstimate est = spot_from(run, h);

    FamilyOptions fopt;
    fopt.n_target = get_int_or(run.cfg, "family_target", 30);
    fopt.likelihood_slack = get_double_or(run.cfg, "likelihood_slack", 0.05);
    fopt.ks_level = get_double_or(run.cfg, "ks_level", 0.05);
    fopt.cap_multiplier = get_int_or(run.cfg, "cap_multiplier", 50);
    fopt.seed = get_seed(run.cfg, "seed_risk");
    const double spike_k = get_double_or(run.cfg, "spike_k", 3.0);
    const ModelFamily family =
        generate_family(est, h, est.params.model, spike_k, fopt, roll_from(run.cfg));

    RiskInputs in;
    in.futures = futures;
    in.spec = storage_from(run.cfg);
    const size_t i = index_of(h, valuation_date(run.cfg, in.spec));
    in.initial_curve = h.curves[i];
    in.s0 = get_double_or(run.cfg, "s0", h.spot[i]);
    in.n_paths = checked_paths(run.cfg);
    in.seed_backward = get_seed(run.cfg, "seed_backward");
    in.seed_forward = get_seed(run.cfg, "seed_forward");
    GASVAL_REQUIRE(in.seed_backward != in.seed_forward, ErrorKind::config,
                   "backward and forward phases must use distinct seeds");
    in.hedge_variant = variant_from(run.cfg);

    const RiskMeasures pi1 = risk_pi1(family, in);
    const RiskMeasures pi2 = risk_pi2(family, in, h, roll_from(run.cfg));

    write_report(run, "family_members.csv",
                 family_members_csv(family, pi1.member_values, pi2.member_values));
    write_report(run, "model_risk_summary.json",
                 model_risk_summary_json(family, fopt, pi1, pi2));
    write_manifest(run, "model-risk");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"natural gas storage valuation and hedging"};
    app.require_subcommand(1);
    app.fallthrough(true);

    std::string config_path;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "flat key = value configuration file");
    app.add_option("--out", out_dir, "output directory for reports and manifests");
    long long seed_backward = 0, seed_forward = 0, seed_risk = 0;
    auto* opt_sb = app.add_option("--seed-backward", seed_backward, "policy-fitting seed");
    auto* opt_sf = app.add_option("--seed-forward", seed_forward, "pricing seed");
    auto* opt_sr = app.add_option("--seed-risk", seed_risk, "family-generation seed");

    int paths = 0, model = 0;
    std::string preset, path_format;
    std::vector<const CLI::Option*> opt_paths, opt_model, opt_preset, opt_fmt;

    CLI::App* sub_cal_fut = app.add_subcommand("calibrate-futures", "fit the curve model");
    CLI::App* sub_cal_spot = app.add_subcommand("calibrate-spot", "fit a spot model");
    CLI::App* sub_sim = app.add_subcommand("simulate", "dump simulated paths");
    CLI::App* sub_value = app.add_subcommand("value", "full storage valuation with hedging");
    CLI::App* sub_intr = app.add_subcommand("intrinsic", "monthly plan against one curve");
    CLI::App* sub_roll = app.add_subcommand("rolling-intrinsic", "re-locked plan along history");
    CLI::App* sub_back = app.add_subcommand("backtest", "one lease per year over a history");
    CLI::App* sub_risk = app.add_subcommand("model-risk", "parameter-family risk measures");

    for (CLI::App* sub : {sub_cal_fut, sub_cal_spot, sub_sim, sub_value, sub_intr, sub_roll,
                          sub_back, sub_risk})
        sub->fallthrough(true);
    for (CLI::App* sub : {sub_sim, sub_value, sub_back, sub_risk})
        opt_paths.push_back(sub->add_option("--paths", paths, "number of Monte Carlo paths"));
    for (CLI::App* sub : {sub_cal_spot, sub_value, sub_back, sub_risk})
        opt_model.push_back(sub->add_option("--model", model, "spot model (1 or 2)"));
    for (CLI::App* sub : {sub_sim, sub_value, sub_back, sub_risk, sub_intr, sub_roll})
        opt_preset.push_back(sub->add_option("--preset", preset, "storage preset (fast or slow)"));
    opt_fmt.push_back(
        sub_sim->add_option("--path-format", path_format, "path dump format (csv or bin)"));

    CLI11_PARSE(app, argc, argv);

    try {
        Run run;
        run.out_dir = out_dir;
        if (!config_path.empty()) {
            run.cfg = read_key_value_file(config_path);
            for (const auto& [k, v] : run.cfg)
                run.explicit_keys.insert(k);
            run.inputs.emplace_back("config", config_path);
        }

        auto override_kv = [&run](const std::vector<const CLI::Option*>& opts,
                                  const std::string& key, const std::string& value) {
            for (const CLI::Option* opt : opts)
                if (opt->count() > 0) {
                    run.cfg[key] = value;
                    run.explicit_keys.insert(key);
                    return;
                }
        };
        override_kv({opt_sb}, "seed_backward", std::to_string(seed_backward));
        override_kv({opt_sf}, "seed_forward", std::to_string(seed_forward));
        override_kv({opt_sr}, "seed_risk", std::to_string(seed_risk));
        override_kv(opt_paths, "n_paths", std::to_string(paths));
        override_kv(opt_model, "model", std::to_string(model));
        override_kv(opt_preset, "preset", preset);
        override_kv(opt_fmt, "path_format", path_format);

        auto default_kv = [&run](const std::string& key, const std::string& value) {
            if (!run.cfg.count(key))
                run.cfg[key] = value;
        };
        default_kv("n_paths", "5000");
        default_kv("seed_backward", "1");
        default_kv("seed_forward", "2");
        default_kv("seed_risk", "3");
        default_kv("model", "1");

        if (app.got_subcommand(sub_cal_fut))
            cmd_calibrate_futures(run);
        else if (app.got_subcommand(sub_cal_spot))
            cmd_calibrate_spot(run);
        else if (app.got_subcommand(sub_sim))
            cmd_simulate(run);
        else if (app.got_subcommand(sub_value))
            cmd_value(run);
        else if (app.got_subcommand(sub_intr))
            cmd_intrinsic(run);
        else if (app.got_subcommand(sub_roll))
            cmd_rolling_intrinsic(run);
        else if (app.got_subcommand(sub_back))
            cmd_backtest(run);
        else if (app.got_subcommand(sub_risk))
            cmd_model_risk(run);
    } catch (const Error& e) {
        nlohmann::json j;
        j["error"]["kind"] = to_string(e.kind());
        j["error"]["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json j;
        j["error"]["kind"] = "internal";
        j["error"]["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return 1;
    }
    return 0;
}
