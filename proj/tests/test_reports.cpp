#include "gasval/reports.hpp"

#include "gasval/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstring>
#include <limits>
#include <string>
#include <vector>

using namespace gasval;
using nlohmann::json;

namespace {

CurvePathSet tiny_curves() {
    CurvePathSet c;
    c.grid = SimGrid::from_dates({{2026, 6, 1}, {2026, 6, 2}});
    c.maturities = {{2026, 7}, {2026, 8}};
    c.expiry_time = {year_fraction({2026, 7, 1}), year_fraction({2026, 8, 1})};
    c.expiry_date = {{2026, 7, 1}, {2026, 8, 1}};
    c.prompt_index = {0, 0};
    c.n_paths = 2;
    c.seed = 9;
    // dyadic prices so the text dump prints them verbatim
    c.data = {3.0, 3.5, 3.25, 3.125, 2.5, 3.75, 2.25, 3.0625};
    return c;
}

SpotPathSet tiny_spot() {
    SpotPathSet s;
    s.grid = SimGrid::from_dates({{2026, 6, 1}, {2026, 6, 2}});
    s.n_paths = 2;
    s.seed = 4;
    s.base = {3.0, 3.25, 2.75, 2.875};
    s.spiked = {3.0, 3.5, 2.75, 2.875};
    s.variance = {0.015625, 0.03125, 0.015625, 0.0625};
    s.floor_count = {0, 0};
    return s;
}

} // namespace

TEST_CASE("position tables print YYYY-MM rows in order") {
    const std::string csv =
        positions_csv({{2026, 7}, {2026, 11}}, {2.0, -2.0});
    CHECK(csv == "maturity,alpha\n2026-07,2\n2026-11,-2\n");
    CHECK_THROWS_AS(positions_csv({{2026, 7}}, {1.0, 2.0}), Error);

    const std::string d = deltas_csv({{2026, 7}}, {0.5});
    CHECK(d == "maturity,delta\n2026-07,0.5\n");
}

TEST_CASE("wealth table adds the hedge leg per path") {
    ForwardResult f;
    f.wealth = {10.0, 12.0};
    const std::string with = wealth_csv(f, {1.5, -0.5});
    CHECK(with == "path,wealth,hedge,hedged\n0,10,1.5,11.5\n1,12,-0.5,11.5\n");
    const std::string without = wealth_csv(f, {});
    CHECK(without == "path,wealth,hedge,hedged\n0,10,0,10\n1,12,0,12\n");
    const std::vector<double> short_leg{1.0};
    CHECK_THROWS_AS(wealth_csv(f, short_leg), Error);
}

TEST_CASE("rolling table flags adopted re-locks") {
    RollingIntrinsicResult r;
    r.initial_value = 5.0;
    r.final_value = 6.5;
    r.points = {{{2026, 6, 1}, 0.0, 5.0, true},
                {{2026, 6, 2}, 0.0, 5.0, false},
                {{2026, 6, 3}, 1.5, 6.5, true}};
    const std::string csv = rolling_csv(r);
    CHECK(csv ==
          "date,improvement,cumulative,adopted\n"
          "2026-06-01,0,5,1\n"
          "2026-06-02,0,5,0\n"
          "2026-06-03,1.5,6.5,1\n");

    const json j = json::parse(rolling_summary_json(r));
    // the lock-in at the start adopts with zero improvement and must not count
    CHECK(j["relocks"] == 1);
    CHECK(j["initial_value"] == 5.0);
    CHECK(j["final_value"] == 6.5);
}

TEST_CASE("backtest table carries the six value columns per year") {
    BacktestReport rep;
    rep.rows.push_back({2024, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 0.1});
    rep.rows.push_back({2025, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 0.2});
    rep.skipped = {"2023: no curve at lease start"};
    const std::string csv = backtest_csv(rep);
    CHECK(csv ==
          "year,iv,ev_sim,iv_hist,ev_hist,std_unhedged,std_hedged\n"
          "2024,1,2,3,4,5,6\n"
          "2025,1.5,2.5,3.5,4.5,5.5,6.5\n");

    const json j = json::parse(backtest_summary_json(rep));
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0]["ev_sim_std_err"] == 0.1);
    CHECK(j["skipped"].size() == 1);
}

TEST_CASE("member table reports every draw with blanks where nothing was computed") {
    ModelFamily fam;
    fam.attempts = 4;
    fam.rejected_stationarity = 1;
    fam.rejected_ks = 1;
    fam.reached_target = true;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    fam.log.push_back({1, -1, nan, nan, "non-stationary"});
    fam.log.push_back({2, 0, -100.5, 0.4, ""});
    fam.log.push_back({3, -1, nan, 0.01, "normality"});
    fam.log.push_back({4, 1, -101.25, 0.3, ""});
    fam.members.resize(2);

    const std::string csv = family_members_csv(fam, {7.5, 8.25}, {6.0, 5.5});
    CHECK(csv ==
          "member_id,J_star,wealth_hist,accepted,reject_reason\n"
          ",,,0,non-stationary\n"
          "0,7.5,6,1,\n"
          ",,,0,normality\n"
          "1,8.25,5.5,1,\n");

    // measures missing for a member leave the fields empty rather than guess
    const std::string partial = family_members_csv(fam, {7.5}, {});
    CHECK(partial ==
          "member_id,J_star,wealth_hist,accepted,reject_reason\n"
          ",,,0,non-stationary\n"
          "0,7.5,,1,\n"
          ",,,0,normality\n"
          "1,,,1,\n");
}

TEST_CASE("risk summary exposes both measures and the rejection breakdown") {
    ModelFamily fam;
    fam.attempts = 10;
    fam.rejected_stationarity = 2;
    fam.rejected_ks = 3;
    fam.rejected_likelihood = 1;
    fam.reached_target = true;
    fam.members.resize(4);
    fam.base.loglik = -200.0;
    FamilyOptions opt;
    opt.n_target = 4;
    opt.seed = 17;
    RiskMeasures pi1{10.0, 9.0, 11.0, 0.2, {9.0, 11.0, 10.0, 10.5}};
    RiskMeasures pi2{8.0, 8.0, 8.0, 0.0, {8.0, 8.0, 8.0, 8.0}};

    const std::string body = model_risk_summary_json(fam, opt, pi1, pi2);
    const json j = json::parse(body);
    CHECK(j["pi1"]["pi"] == 0.2);
    CHECK(j["pi2"]["pi"] == 0.0);
    CHECK(j["family"]["attempts"] == 10);
    CHECK(j["family"]["rejected_ks"] == 3);
    CHECK(j["family"]["n_members"] == 4);
    CHECK(j["family"]["seed"] == 17);
    CHECK(body == model_risk_summary_json(fam, opt, pi1, pi2));
}

TEST_CASE("value summary serializes cleanly and maps NaN to null") {
    ValuationJob job;
    job.spec.start = {2026, 6, 1};
    job.spec.end = {2027, 6, 1};
    job.spot.model = 2;
    job.n_paths = 500;
    ValuationResult res;
    res.backward_value = 4.25;
    res.forward.mean = 4.5;
    res.forward.std_dev = 1.0;
    res.forward.std_err = 0.05;
    res.hedged_mean = 4.4;
    res.hedged_std = 0.25;
    res.hedged_std_err = std::numeric_limits<double>::quiet_NaN();
    res.intrinsic = 3.0;

    const json j = json::parse(value_summary_json(job, res));
    CHECK(j["lease"]["start"] == "2026-06-01");
    CHECK(j["model"] == 2);
    CHECK(j["backward_value"] == 4.25);
    CHECK(j["std_reduction"] == 4.0);
    CHECK(j["hedged"]["std_err"].is_null());
    CHECK(j["hedge_variant"] == "value");
}

TEST_CASE("path dumps agree between text and binary layouts") {
    const CurvePathSet c = tiny_curves();
    const std::string csv = curve_paths_csv(c);
    CHECK(csv.substr(0, 30) == "path,step,date,maturity,price\n");
    CHECK(csv.find("0,0,2026-06-01,2026-07,3\n") != std::string::npos);
    CHECK(csv.find("1,1,2026-06-02,2026-08,3.0625\n") != std::string::npos);

    const std::string bin = curve_paths_binary(c);
    CHECK(bin.substr(0, 8) == "GVCURVE1");
    // header + 4 dims + 2 dates + 2 maturities + 8 prices
    CHECK(bin.size() == 8 + 8 * 8 + 8 * sizeof(double));
    double last = 0.0;
    std::memcpy(&last, bin.data() + bin.size() - sizeof(double), sizeof(double));
    CHECK(last == 3.0625);
    CHECK(bin == curve_paths_binary(c));

    const SpotPathSet s = tiny_spot();
    const std::string scsv = spot_paths_csv(s);
    CHECK(scsv.substr(0, 29) == "path,step,date,spot,variance\n");
    CHECK(scsv.find("0,1,2026-06-02,3.5,0.03125\n") != std::string::npos);

    const std::string sbin = spot_paths_binary(s);
    CHECK(sbin.substr(0, 8) == "GVSPOT01");
    CHECK(sbin.size() == 8 + 3 * 8 + 2 * 8 + 8 * sizeof(double));
}

TEST_CASE("manifest pins the resolved config behind a stable hash") {
    KeyValueMap cfg;
    cfg["n_paths"] = "500";
    cfg["seed_backward"] = "1";
    cfg["seed_forward"] = "2";
    cfg["spot_csv"] = "data/sample_spot.csv";

    const std::string body = manifest_json("value", cfg, {{"spot_csv", "data/sample_spot.csv"}},
                                           {"value_summary.json", "deltas.csv"});
    const json j = json::parse(body);
    CHECK(j["subcommand"] == "value");
    CHECK(j["config"]["n_paths"] == "500");
    CHECK(j["inputs"]["spot_csv"] == "data/sample_spot.csv");
    CHECK(j["outputs"].size() == 2);
    CHECK(j["seeds"]["seed_backward"] == 1);
    CHECK(j["seeds"]["seed_forward"] == 2);
    CHECK(!j["seeds"].contains("seed_risk"));
    CHECK(j["config_hash"].get<std::string>().size() == 16);

    // same map, same bytes; any config change moves the hash
    CHECK(manifest_json("value", cfg, {{"spot_csv", "data/sample_spot.csv"}},
                        {"value_summary.json", "deltas.csv"}) == body);
    KeyValueMap cfg2 = cfg;
    cfg2["n_paths"] = "501";
    const json j2 = json::parse(manifest_json("value", cfg2, {}, {}));
    CHECK(j2["config_hash"] != j["config_hash"]);
}
