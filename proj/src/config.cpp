#include "dynres/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dynres {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument(msg); }

// Strict schema: an object may only carry keys from its allowlist.
void require_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) bad(std::string(where) + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) bad(std::string(where) + ": unknown key \"" + key + "\"");
    }
}

const json& need(const json& j, const char* where, const char* key) {
    if (!j.contains(key)) bad(std::string(where) + ": missing key \"" + key + "\"");
    return j.at(key);
}

double get_real(const json& j, const char* where) {
    if (!j.is_number()) bad(std::string(where) + ": expected a number");
    return j.get<double>();
}

int get_int(const json& j, const char* where) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        bad(std::string(where) + ": expected an integer");
    return j.get<int>();
}

std::uint64_t get_seed(const json& j, const char* where) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        const auto v = j.get<long long>();
        if (v < 0) bad(std::string(where) + ": seed must be >= 0");
        return static_cast<std::uint64_t>(v);
    }
    bad(std::string(where) + ": expected an integer");
}

std::vector<double> get_real_array(const json& j, const char* where) {
    if (!j.is_array()) bad(std::string(where) + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(get_real(e, where));
    return out;
}

ValuationDistribution parse_distribution(const json& j, const char* where) {
    const std::string kind = need(j, where, "kind").get<std::string>();
    if (kind == "uniform") {
        require_keys(j, where, {"kind", "params"});
        const auto p = get_real_array(need(j, where, "params"), where);
        if (p.size() != 2) bad(std::string(where) + ": uniform wants params [lo, hi]");
        return ValuationDistribution::uniform(p[0], p[1]);
    }
    if (kind == "normal") {
        require_keys(j, where, {"kind", "params"});
        const auto p = get_real_array(need(j, where, "params"), where);
        if (p.size() != 2) bad(std::string(where) + ": normal wants params [mu, sigma]");
        return ValuationDistribution::normal(p[0], p[1]);
    }
    if (kind == "truncated_normal") {
        require_keys(j, where, {"kind", "params", "support"});
        const auto p = get_real_array(need(j, where, "params"), where);
        const auto s = get_real_array(need(j, where, "support"), where);
        if (p.size() != 2 || s.size() != 2)
            bad(std::string(where) + ": truncated_normal wants params [mu, sigma], support [lo, hi]");
        return ValuationDistribution::truncated_normal(p[0], p[1], s[0], s[1]);
    }
    if (kind == "exponential") {
        require_keys(j, where, {"kind", "params"});
        const auto p = get_real_array(need(j, where, "params"), where);
        if (p.size() != 1) bad(std::string(where) + ": exponential wants params [rate]");
        return ValuationDistribution::exponential(p[0]);
    }
    if (kind == "tabulated") {
        require_keys(j, where, {"kind", "values", "cdf"});
        return ValuationDistribution::tabulated(get_real_array(need(j, where, "values"), where),
                                                get_real_array(need(j, where, "cdf"), where));
    }
    bad(std::string(where) + ": unknown distribution kind \"" + kind + "\"");
}

MarketConfig parse_market(const json& j) {
    require_keys(j, "market", {"n", "T", "alpha", "alphas", "beta", "p_high", "low", "high"});
    MarketConfig cfg;
    cfg.n = get_int(need(j, "market", "n"), "market.n");
    cfg.T = get_int(need(j, "market", "T"), "market.T");
    const bool has_scalar = j.contains("alpha");
    const bool has_vector = j.contains("alphas");
    if (has_scalar == has_vector) bad("market: provide exactly one of alpha, alphas");
    if (has_scalar) {
        cfg.alphas.assign(static_cast<std::size_t>(std::max(cfg.n, 0)),
                          get_real(j.at("alpha"), "market.alpha"));
    } else {
        cfg.alphas = get_real_array(j.at("alphas"), "market.alphas");
        if (static_cast<int>(cfg.alphas.size()) != cfg.n)
            bad("market.alphas: need one entry per agent");
    }
    cfg.beta = j.contains("beta") ? get_real(j.at("beta"), "market.beta") : 0.0;
    cfg.p_high = j.contains("p_high") ? get_real(j.at("p_high"), "market.p_high") : 0.5;
    cfg.low = parse_distribution(need(j, "market", "low"), "market.low");
    cfg.high = parse_distribution(need(j, "market", "high"), "market.high");
    cfg.validate();
    return cfg;
}

ReservePolicy parse_mechanism(const json& j, int n) {
    const std::string kind = need(j, "mechanism", "kind").get<std::string>();
    if (kind == "static") {
        require_keys(j, "mechanism", {"kind", "reserve"});
        return ReservePolicy::static_reserve(get_real(need(j, "mechanism", "reserve"),
                                                      "mechanism.reserve"));
    }
    if (kind == "threshold") {
        require_keys(j, "mechanism", {"kind", "rho", "r_low", "r_high"});
        return ReservePolicy::threshold(get_real(need(j, "mechanism", "rho"), "mechanism.rho"),
                                        get_real(need(j, "mechanism", "r_low"), "mechanism.r_low"),
                                        get_real(need(j, "mechanism", "r_high"),
                                                 "mechanism.r_high"));
    }
    if (kind == "generalized") {
        require_keys(j, "mechanism", {"kind", "rho", "r_low", "r_high", "k"});
        return ReservePolicy::generalized(
            get_real(need(j, "mechanism", "rho"), "mechanism.rho"),
            get_real(need(j, "mechanism", "r_low"), "mechanism.r_low"),
            get_real(need(j, "mechanism", "r_high"), "mechanism.r_high"),
            get_int(need(j, "mechanism", "k"), "mechanism.k"), n);
    }
    bad("mechanism: unknown kind \"" + kind + "\"");
}

Strategy parse_strategy(const json& j, const char* where) {
    const std::string kind = need(j, where, "kind").get<std::string>();
    if (kind == "truthful") {
        require_keys(j, where, {"kind"});
        return Strategy::truthful();
    }
    if (kind == "capped") {
        require_keys(j, where, {"kind", "cap", "horizon"});
        return Strategy::capped(get_real(need(j, where, "cap"), where),
                                get_int(need(j, where, "horizon"), where));
    }
    if (kind == "one_shot") {
        require_keys(j, where, {"kind", "cap", "round"});
        return Strategy::one_shot(get_real(need(j, where, "cap"), where),
                                  get_int(need(j, where, "round"), where));
    }
    if (kind == "scripted") {
        require_keys(j, where, {"kind", "bids"});
        return Strategy::scripted(get_real_array(need(j, where, "bids"), where));
    }
    bad(std::string(where) + ": unknown strategy kind \"" + kind + "\"");
}

std::vector<Strategy> parse_strategies(const json& j, int n) {
    if (j.is_string()) {
        if (j.get<std::string>() != "truthful")
            bad("strategies: the only named profile is \"truthful\"");
        return std::vector<Strategy>(static_cast<std::size_t>(n), Strategy::truthful());
    }
    if (!j.is_array()) bad("strategies: expected \"truthful\" or an array");
    if (static_cast<int>(j.size()) != n) bad("strategies: need one entry per agent");
    std::vector<Strategy> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(parse_strategy(e, "strategies[]"));
    return out;
}

AuditSpec parse_audit(const json& j) {
    require_keys(j, "audit",
                 {"mode", "agent", "type", "valuations", "eps", "delta", "tau", "cap_count",
                  "rho"});
    AuditSpec spec;
    spec.mode = need(j, "audit", "mode").get<std::string>();
    if (spec.mode != "static" && spec.mode != "dynamic")
        bad("audit.mode: expected \"static\" or \"dynamic\"");
    if (j.contains("agent")) spec.agent = get_int(j.at("agent"), "audit.agent");
    if (j.contains("type")) {
        const std::string t = j.at("type").get<std::string>();
        if (t != "low" && t != "high") bad("audit.type: expected \"low\" or \"high\"");
        spec.type = t == "high" ? ItemType::high : ItemType::low;
    }
    if (j.contains("valuations"))
        spec.valuations = get_real_array(j.at("valuations"), "audit.valuations");
    if (j.contains("eps")) spec.eps = get_real(j.at("eps"), "audit.eps");
    if (j.contains("delta")) spec.delta = get_real(j.at("delta"), "audit.delta");
    if (j.contains("tau")) spec.tau = get_int(j.at("tau"), "audit.tau");
    if (j.contains("cap_count")) spec.cap_count = get_int(j.at("cap_count"), "audit.cap_count");
    if (j.contains("rho")) spec.rho = get_real(j.at("rho"), "audit.rho");
    if (spec.mode == "static" && spec.valuations.empty())
        bad("audit: static mode needs a nonempty valuations grid");
    if (spec.mode == "dynamic" && !j.contains("eps"))
        bad("audit: dynamic mode needs eps");
    if (spec.mode == "dynamic" && !j.contains("delta"))
        bad("audit: dynamic mode needs delta");
    return spec;
}

DiscreteInstance parse_oracle(const json& j) {
    require_keys(j, "oracle",
                 {"T", "n", "own_values", "opp_values", "opp_weights", "alphas", "bid_grid"});
    DiscreteInstance inst;
    inst.T = get_int(need(j, "oracle", "T"), "oracle.T");
    inst.n = get_int(need(j, "oracle", "n"), "oracle.n");
    inst.own_values = get_real_array(need(j, "oracle", "own_values"), "oracle.own_values");
    if (j.contains("opp_values"))
        inst.opp_values = get_real_array(j.at("opp_values"), "oracle.opp_values");
    if (j.contains("opp_weights"))
        inst.opp_weights = get_real_array(j.at("opp_weights"), "oracle.opp_weights");
    inst.alphas = get_real_array(need(j, "oracle", "alphas"), "oracle.alphas");
    inst.bid_grid = get_real_array(need(j, "oracle", "bid_grid"), "oracle.bid_grid");
    return inst;
}

// JSON numbers cannot hold infinities; they degrade to strings.
json num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    return x;
}

json to_json(const Estimate& e) { return {{"mean", num(e.mean)}, {"ci_halfwidth", num(e.ci_halfwidth)}}; }

json to_json(const TypeStats& t) {
    return {{"count", t.count},
            {"revenue_per_round", to_json(t.revenue_per_round)},
            {"welfare_per_participation", to_json(t.welfare_per_participation)}};
}

const char* preset_example1 = R"JSON({
  "market": {
    "n": 20, "T": 6800, "alpha": 0.05, "beta": 0.0, "p_high": 0.5,
    "low":  {"kind": "truncated_normal", "params": [1.0, 0.4], "support": [0.0, 3.0]},
    "high": {"kind": "normal", "params": [3.0, 0.8]}
  },
  "mechanism": {"kind": "threshold", "rho": 3.0, "r_low": 0.796, "r_high": 2.318},
  "strategies": "truthful",
  "replications": 2000,
  "seed": 1,
  "params": {"rho": 3.0, "eps": 0.009},
  "audit": {"mode": "static", "agent": 0, "type": "high",
            "valuations": [3.2, 3.6, 4.0], "tau": 20, "cap_count": 4}
})JSON";

const char* preset_transient = R"JSON({
  "market": {
    "n": 1, "T": 1000, "alpha": 1.0, "beta": 1.0, "p_high": 0.0,
    "low":  {"kind": "uniform", "params": [0.0, 1.0]},
    "high": {"kind": "uniform", "params": [0.0, 1.0]}
  },
  "mechanism": {"kind": "static", "reserve": 0.5},
  "strategies": "truthful",
  "replications": 2000,
  "seed": 1
})JSON";

const char* preset_disjoint = R"JSON({
  "market": {
    "n": 2, "T": 10, "alpha": 1.0, "beta": 0.0, "p_high": 0.5,
    "low":  {"kind": "uniform", "params": [0.0, 1.0]},
    "high": {"kind": "truncated_normal", "params": [3.0, 0.5], "support": [2.0, 5.0]}
  },
  "mechanism": {"kind": "threshold", "rho": 1.5, "r_low": 0.5,
                "r_high": 2.3841531507832689},
  "strategies": "truthful",
  "replications": 2000,
  "seed": 1,
  "audit": {"mode": "static", "agent": 0, "type": "low",
            "valuations": [0.25, 0.5, 0.75, 0.95], "tau": 3, "cap_count": 4},
  "oracle": {
    "T": 3, "n": 2,
    "own_values": [0.3, 0.9],
    "opp_values": [0.2, 0.7],
    "opp_weights": [0.6, 0.4],
    "alphas": [1.0, 1.0],
    "bid_grid": [0.2, 0.3, 0.5, 0.7, 0.9, 2.3841531507832689]
  }
})JSON";

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
    require_keys(j, "config",
                 {"market", "mechanism", "strategies", "replications", "seed", "params", "audit",
                  "oracle"});
    RunConfig out;
    out.market = parse_market(need(j, "config", "market"));
    out.policy = parse_mechanism(need(j, "config", "mechanism"), out.market.n);
    out.strategies = j.contains("strategies")
                         ? parse_strategies(j.at("strategies"), out.market.n)
                         : std::vector<Strategy>(static_cast<std::size_t>(out.market.n),
                                                 Strategy::truthful());
    if (j.contains("replications")) {
        out.replications = get_int(j.at("replications"), "config.replications");
        if (out.replications < 1) bad("config.replications: must be >= 1");
    }
    if (j.contains("seed")) out.seed = get_seed(j.at("seed"), "config.seed");
    if (j.contains("params")) {
        const auto& p = j.at("params");
        require_keys(p, "params", {"rho", "eps"});
        out.params = ParamsSpec{get_real(need(p, "params", "rho"), "params.rho"),
                                get_real(need(p, "params", "eps"), "params.eps")};
    }
    if (j.contains("audit")) out.audit = parse_audit(j.at("audit"));
    if (j.contains("oracle")) {
        out.oracle = parse_oracle(j.at("oracle"));
        out.oracle->policy = out.policy;
    }
    return out;
}

RunConfig load_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config file: " + path);
    json j;
    in >> j;
    return parse_run_config(j);
}

std::vector<std::string> preset_names() {
    return {"example1", "transient", "proposition1-disjoint"};
}

RunConfig load_preset(const std::string& name) {
    const char* text = nullptr;
    if (name == "example1") text = preset_example1;
    if (name == "transient") text = preset_transient;
    if (name == "proposition1-disjoint") text = preset_disjoint;
    if (!text) bad("unknown preset \"" + name + "\" (try example1, transient, proposition1-disjoint)");
    return parse_run_config(json::parse(text));
}

ReservePolicy parse_mechanism_string(const std::string& text, const ReservePolicy& from_config,
                                     int n) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t used = 0;
            double val = 0.0;
            try {
                val = std::stod(item, &used);
            } catch (const std::exception&) {
                bad("mechanism: cannot parse number \"" + item + "\"");
            }
            if (used != item.size()) bad("mechanism: cannot parse number \"" + item + "\"");
            args.push_back(val);
        }
    }

    const auto matches_config = [&](PolicyKind k) {
        if (from_config.kind != k) bad("mechanism \"" + kind + "\" given without parameters, but the config mechanism is a different kind");
        return from_config;
    };
    if (kind == "static") {
        if (args.empty()) return matches_config(PolicyKind::static_reserve);
        if (args.size() != 1) bad("mechanism: static wants static:RESERVE");
        return ReservePolicy::static_reserve(args[0]);
    }
    if (kind == "threshold") {
        if (args.empty()) return matches_config(PolicyKind::threshold);
        if (args.size() != 3) bad("mechanism: threshold wants threshold:RHO,R_LOW,R_HIGH");
        return ReservePolicy::threshold(args[0], args[1], args[2]);
    }
    if (kind == "generalized") {
        if (args.empty()) return matches_config(PolicyKind::generalized_threshold);
        if (args.size() != 4) bad("mechanism: generalized wants generalized:RHO,R_LOW,R_HIGH,K");
        return ReservePolicy::generalized(args[0], args[1], args[2],
                                          static_cast<int>(args[3]), n);
    }
    bad("mechanism: unknown kind \"" + kind + "\"");
}

nlohmann::json to_json(const ValuationDistribution& d) {
    json j;
    j["support"] = {num(d.support().lo), num(d.support().hi)};
    switch (d.kind()) {
        case DistKind::uniform:
            j["kind"] = "uniform";
            j["params"] = {d.param_a(), d.param_b()};
            break;
        case DistKind::normal:
            j["kind"] = "normal";
            j["params"] = {d.param_a(), d.param_b()};
            break;
        case DistKind::truncated_normal:
            j["kind"] = "truncated_normal";
            j["params"] = {d.param_a(), d.param_b()};
            break;
        case DistKind::exponential:
            j["kind"] = "exponential";
            j["params"] = {d.param_a()};
            break;
        case DistKind::tabulated:
            j["kind"] = "tabulated";
            j["values"] = d.table_values();
            j["cdf"] = d.table_cdf();
            break;
    }
    return j;
}

nlohmann::json to_json(const ReservePolicy& p) {
    switch (p.kind) {
        case PolicyKind::static_reserve:
            return {{"kind", "static"}, {"reserve", p.reserve}};
        case PolicyKind::threshold:
            return {{"kind", "threshold"}, {"rho", p.rho}, {"r_low", p.r_low},
                    {"r_high", p.r_high}};
        case PolicyKind::generalized_threshold:
            return {{"kind", "generalized"}, {"rho", p.rho}, {"r_low", p.r_low},
                    {"r_high", p.r_high}, {"k", p.k}};
    }
    return {};
}

nlohmann::json to_json(const SimulationSummary& s) {
    json triggers = json::object();
    for (const auto& [round, count] : s.trigger_round_counts)
        triggers[std::to_string(round)] = count;
    return {{"replications", s.replications},
            {"seed", s.seed},
            {"revenue_per_round", to_json(s.revenue_per_round)},
            {"welfare_per_participation", to_json(s.welfare_per_participation)},
            {"low", to_json(s.low)},
            {"high", to_json(s.high)},
            {"trigger_round_counts", triggers}};
}

nlohmann::json to_json(const GridSearchResult& g) {
    json reserves = json::array(), means = json::array(), cis = json::array();
    for (double r : g.reserves) reserves.push_back(num(r));
    for (double m : g.means) means.push_back(num(m));
    for (double c : g.cis) cis.push_back(num(c));
    return {{"reserves", reserves},
            {"means", means},
            {"cis", cis},
            {"best_index", g.best_index},
            {"best_reserve", num(g.best_reserve)}};
}

nlohmann::json to_json(const TheoremParams& p) {
    const auto regime_name = [](Thm5Regime r) {
        switch (r) {
            case Thm5Regime::below_range: return "below_range";
            case Thm5Regime::fixed_k: return "fixed_k";
            case Thm5Regime::linear_k: return "linear_k";
        }
        return "below_range";
    };
    return {{"eps", num(p.eps)},
            {"rho", num(p.rho)},
            {"r_low_star", num(p.r_low_star)},
            {"r_high_star", num(p.r_high_star)},
            {"gap", num(p.gap)},
            {"tail_high", num(p.tail_high)},
            {"lambda", num(p.lambda)},
            {"delta", num(p.delta)},
            {"thm2",
             {{"n0", num(p.thm2.n0)}, {"tau", num(p.thm2.tau)}, {"t0", num(p.thm2.t0)}}},
            {"thm3",
             {{"delta", num(p.thm3.delta)},
              {"n1", num(p.thm3.n1)},
              {"n2", num(p.thm3.n2)},
              {"tau", num(p.thm3.tau)},
              {"t1", num(p.thm3.t1)}}},
            {"thm5",
             {{"delta", num(p.thm5.delta)},
              {"n3", num(p.thm5.n3)},
              {"n4", num(p.thm5.n4)},
              {"n_bar", num(p.thm5.n_bar)},
              {"regime", regime_name(p.thm5.regime)},
              {"k", num(p.thm5.k)},
              {"tau", num(p.thm5.tau)},
              {"t1", num(p.thm5.t1)},
              {"hypothesis_ok", p.thm5.hypothesis_ok}}},
            {"t_delta", p.t_delta_rounds}};
}

nlohmann::json to_json(const ICReport& r) {
    json valuations = json::array();
    for (const auto& v : r.valuations)
        valuations.push_back({{"valuation", num(v.valuation)},
                              {"truthful_utility", num(v.truthful_utility)},
                              {"truthful_ci", num(v.truthful_ci)},
                              {"best_gain", num(v.best_gain)},
                              {"best_gain_ci", num(v.best_gain_ci)},
                              {"best_member", v.best_member}});
    json rounds = json::array();
    for (const auto& g : r.rounds)
        rounds.push_back({{"t", g.t},
                          {"reserve_low", g.reserve_low},
                          {"cells", g.cells},
                          {"mean_gain", num(g.mean_gain)},
                          {"ci", num(g.ci)},
                          {"mean_allowance", num(g.mean_allowance)}});
    return {{"agent", r.agent},
            {"normalizer", num(r.normalizer)},
            {"valuations", valuations},
            {"certified_epsilon", num(r.certified_epsilon)},
            {"certified_epsilon_ci", num(r.certified_epsilon_ci)},
            {"rounds", rounds},
            {"good_frequency", num(r.good_frequency)},
            {"good_frequency_ci", num(r.good_frequency_ci)},
            {"realizations", r.realizations},
            {"borderline_cells", r.borderline_cells},
            {"epsilon", num(r.epsilon)},
            {"delta", num(r.delta)}};
}

nlohmann::json to_json(const OracleResult& r) {
    json own = json::array(), truthful = json::array(), best = json::array();
    for (double v : r.own_values) own.push_back(num(v));
    for (double v : r.truthful_value) truthful.push_back(num(v));
    for (double v : r.best_value) best.push_back(num(v));
    json policy = json::array();
    for (const auto& e : r.policy)
        policy.push_back({{"t", e.t},
                          {"reserve_low", e.reserve_low},
                          {"trigger_round", e.trigger_round},
                          {"own_join_round", e.own_join_round},
                          {"value_index", e.value_index},
                          {"bid", num(e.bid)}});
    return {{"own_values", own},
            {"truthful_value", truthful},
            {"best_value", best},
            {"policy", policy},
            {"scenario_count", r.scenario_count},
            {"state_count", r.state_count}};
}

nlohmann::json to_json(const BenchmarkRevenue& b) {
    return {{"reserve_low", num(b.reserve_low)},
            {"reserve_high", num(b.reserve_high)},
            {"low", {{"mean", num(b.low.mean)}, {"ci_halfwidth", num(b.low.ci_halfwidth)}}},
            {"high", {{"mean", num(b.high.mean)}, {"ci_halfwidth", num(b.high.ci_halfwidth)}}},
            {"blended_mean", num(b.blended_mean)},
            {"blended_ci", num(b.blended_ci)}};
}

nlohmann::json to_json(const ReserveSolution& s) {
    return {{"reserve", num(s.reserve)}, {"residual", num(s.residual)},
            {"iterations", s.iterations}};
}

std::string format_sig4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string theorem_params_table(const TheoremParams& p) {
    std::vector<std::pair<std::string, std::string>> rows = {
        {"eps", format_sig4(p.eps)},
        {"rho", format_sig4(p.rho)},
        {"r_low_star", format_sig4(p.r_low_star)},
        {"r_high_star", format_sig4(p.r_high_star)},
        {"gap", format_sig4(p.gap)},
        {"tail_high", format_sig4(p.tail_high)},
        {"lambda", format_sig4(p.lambda)},
        {"delta", format_sig4(p.delta)},
        {"thm2.n0", format_sig4(p.thm2.n0)},
        {"thm2.tau", format_sig4(p.thm2.tau)},
        {"thm2.t0", format_sig4(p.thm2.t0)},
        {"thm3.n1", format_sig4(p.thm3.n1)},
        {"thm3.n2", format_sig4(p.thm3.n2)},
        {"thm3.tau", format_sig4(p.thm3.tau)},
        {"thm3.t1", format_sig4(p.thm3.t1)},
        {"thm5.n3", format_sig4(p.thm5.n3)},
        {"thm5.n4", format_sig4(p.thm5.n4)},
        {"thm5.n_bar", format_sig4(p.thm5.n_bar)},
        {"thm5.k", format_sig4(p.thm5.k)},
        {"thm5.tau", format_sig4(p.thm5.tau)},
        {"thm5.t1", format_sig4(p.thm5.t1)},
        {"thm5.hypothesis_ok", p.thm5.hypothesis_ok ? "yes" : "no"},
        {"t_delta", std::to_string(p.t_delta_rounds)},
    };
    std::size_t width = 0;
    for (const auto& [name, _] : rows) width = std::max(width, name.size());
    std::string out;
    for (const auto& [name, value] : rows) {
        out += name;
        out.append(width - name.size() + 2, ' ');
        out += value;
        out += '\n';
    }
    return out;
}

}  // namespace dynres
