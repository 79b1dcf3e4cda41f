#include "gasval/params_io.hpp"

#include "gasval/calendar.hpp"
#include "gasval/errors.hpp"

#include <cstdlib>
#include <sstream>

namespace gasval {

namespace {

std::string join_months(const std::vector<int>& months) {
    std::ostringstream ss;
    for (size_t i = 0; i < months.size(); ++i) {
        if (i)
            ss << ',';
        ss << months[i];
    }
    return ss.str();
}

std::vector<int> split_months(const std::string& key, const std::string& s) {
    std::vector<int> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        long v = std::strtol(item.c_str(), &end, 10);
        GASVAL_REQUIRE(end == item.c_str() + item.size() && !item.empty(), ErrorKind::parse,
                       "key '" << key << "': bad month list '" << s << "'");
        GASVAL_REQUIRE(v >= 1 && v <= 12, ErrorKind::parse,
                       "key '" << key << "': month " << v << " out of range");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

void append_spike(KeyValuePairs& kv, const std::string& prefix, const SpikeParams& sp) {
    kv.emplace_back(prefix + "_beta", format_double(sp.beta));
    kv.emplace_back(prefix + "_intensity", format_double(sp.intensity));
    kv.emplace_back(prefix + "_jump_mean", format_double(sp.jump_mean));
    kv.emplace_back(prefix + "_jump_std", format_double(sp.jump_std));
    kv.emplace_back(prefix + "_months", join_months(sp.months));
}

SpikeParams read_spike(const KeyValueMap& kv, const std::string& prefix,
                       const SpikeParams& fallback) {
    SpikeParams sp = fallback;
    sp.beta = get_double_or(kv, prefix + "_beta", sp.beta);
    sp.intensity = get_double_or(kv, prefix + "_intensity", sp.intensity);
    sp.jump_mean = get_double_or(kv, prefix + "_jump_mean", sp.jump_mean);
    sp.jump_std = get_double_or(kv, prefix + "_jump_std", sp.jump_std);
    auto it = kv.find(prefix + "_months");
    if (it != kv.end())
        sp.months = split_months(prefix + "_months", it->second);
    return sp;
}

// Symmetric matrices round-trip entry by entry; cov_i_j holds row i, column j.
void append_matrix(KeyValuePairs& kv, const Eigen::MatrixXd& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            std::ostringstream key;
            key << "cov_" << i << "_" << j;
            kv.emplace_back(key.str(), format_double(m(i, j)));
        }
}

Eigen::MatrixXd read_matrix(const KeyValueMap& kv, int n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::ostringstream key;
            key << "cov_" << i << "_" << j;
            m(i, j) = get_double(kv, key.str());
        }
    return m;
}

} // namespace

KeyValuePairs gabillon_to_pairs(const GabillonParams& p) {
    KeyValuePairs kv;
    kv.emplace_back("lambda", format_double(p.lambda));
    kv.emplace_back("mu1", format_double(p.mu1));
    kv.emplace_back("mu2", format_double(p.mu2));
    kv.emplace_back("t1", format_double(p.t1));
    kv.emplace_back("t2", format_double(p.t2));
    kv.emplace_back("sigma_s", format_double(p.sigma_s));
    kv.emplace_back("sigma_l", format_double(p.sigma_l));
    kv.emplace_back("rho", format_double(p.rho));
    return kv;
}

GabillonParams gabillon_from_kv(const KeyValueMap& kv) {
    GabillonParams p;
    p.lambda = get_double(kv, "lambda");
    p.mu1 = get_double(kv, "mu1");
    p.mu2 = get_double(kv, "mu2");
    p.t1 = get_double_or(kv, "t1", p.t1);
    p.t2 = get_double_or(kv, "t2", p.t2);
    p.sigma_s = get_double(kv, "sigma_s");
    p.sigma_l = get_double(kv, "sigma_l");
    p.rho = get_double(kv, "rho");
    p.validate();
    return p;
}

KeyValuePairs gabillon_fit_to_pairs(const GabillonFit& fit) {
    KeyValuePairs kv = gabillon_to_pairs(fit.params);
    kv.emplace_back("objective", format_double(fit.objective));
    kv.emplace_back("n_obs", std::to_string(fit.n_obs));
    kv.emplace_back("iterations", std::to_string(fit.iterations));
    kv.emplace_back("covariance_ok", fit.covariance_ok ? "1" : "0");
    if (fit.covariance_ok) {
        append_matrix(kv, fit.covariance);
        static const char* names[6] = {"lambda", "mu1", "mu2", "sigma_s", "sigma_l", "rho"};
        for (int i = 0; i < 6; ++i) {
            kv.emplace_back(std::string("ci_") + names[i] + "_lo",
                            format_double(fit.wald_ci[i].first));
            kv.emplace_back(std::string("ci_") + names[i] + "_hi",
                            format_double(fit.wald_ci[i].second));
        }
    }
    return kv;
}

KeyValuePairs spot_to_pairs(const SpotParams& p) {
    KeyValuePairs kv;
    kv.emplace_back("model", std::to_string(p.model));
    kv.emplace_back("a1", format_double(p.a1));
    kv.emplace_back("a2", format_double(p.a2));
    kv.emplace_back("a3", format_double(p.a3));
    kv.emplace_back("kappa", format_double(p.garch.kappa));
    kv.emplace_back("gamma1", format_double(p.garch.gamma1));
    kv.emplace_back("alpha1", format_double(p.garch.alpha1));
    append_spike(kv, "pos", p.spike_pos);
    append_spike(kv, "neg", p.spike_neg);
    return kv;
}

SpotParams spot_from_kv(const KeyValueMap& kv) {
    SpotParams p;
    p.model = get_int(kv, "model");
    p.a1 = get_double(kv, "a1");
    p.a2 = get_double(kv, "a2");
    p.a3 = get_double(kv, "a3");
    p.garch.kappa = get_double(kv, "kappa");
    p.garch.gamma1 = get_double(kv, "gamma1");
    p.garch.alpha1 = get_double(kv, "alpha1");
    p.spike_pos = read_spike(kv, "pos", p.spike_pos);
    p.spike_neg = read_spike(kv, "neg", p.spike_neg);
    p.validate();
    return p;
}

KeyValuePairs spot_estimate_to_pairs(const SpotEstimate& est) {
    KeyValuePairs kv = spot_to_pairs(est.params);
    kv.emplace_back("loglik", format_double(est.loglik));
    kv.emplace_back("n_obs", std::to_string(est.n_obs));
    kv.emplace_back("n_excised", std::to_string(est.n_excised));
    kv.emplace_back("covariance_ok", est.covariance_ok ? "1" : "0");
    if (est.covariance_ok)
        append_matrix(kv, est.covariance);
    return kv;
}

SpotEstimate spot_estimate_from_kv(const KeyValueMap& kv) {
    SpotEstimate est;
    est.params = spot_from_kv(kv);
    est.loglik = get_double(kv, "loglik");
    est.n_obs = get_int_or(kv, "n_obs", 0);
    est.n_excised = get_int_or(kv, "n_excised", 0);
    est.covariance_ok = get_int_or(kv, "covariance_ok", 0) != 0;
    est.covariance = est.covariance_ok ? read_matrix(kv, 6) : Eigen::MatrixXd::Zero(6, 6);
    return est;
}

KeyValuePairs storage_to_pairs(const StorageSpec& s) {
    KeyValuePairs kv;
    kv.emplace_back("v_min", format_double(s.v_min));
    kv.emplace_back("v_max", format_double(s.v_max));
    kv.emplace_back("a_inj", format_double(s.a_inj));
    kv.emplace_back("a_with", format_double(s.a_with));
    kv.emplace_back("v_start", format_double(s.v_start));
    kv.emplace_back("v_end_target", format_double(s.v_end_target));
    kv.emplace_back("start", to_string(s.start));
    kv.emplace_back("end", to_string(s.end));
    kv.emplace_back("dt_days", format_double(s.dt_days));
    kv.emplace_back("max_volume_nodes", std::to_string(s.max_volume_nodes));
    return kv;
}

StorageSpec storage_from_kv(const KeyValueMap& kv) {
    StorageSpec s;
    s.v_min = get_double(kv, "v_min");
    s.v_max = get_double(kv, "v_max");
    s.a_inj = get_double(kv, "a_inj");
    s.a_with = get_double(kv, "a_with");
    s.v_start = get_double(kv, "v_start");
    s.v_end_target = get_double(kv, "v_end_target");
    auto start_it = kv.find("start");
    auto end_it = kv.find("end");
    GASVAL_REQUIRE(start_it != kv.end() && end_it != kv.end(), ErrorKind::config,
                   "storage spec needs 'start' and 'end' dates");
    s.start = parse_date(start_it->second);
    s.end = parse_date(end_it->second);
    s.dt_days = get_double_or(kv, "dt_days", s.dt_days);
    s.max_volume_nodes = get_int_or(kv, "max_volume_nodes", s.max_volume_nodes);
    s.validate();
    return s;
}

} // namespace gasval
