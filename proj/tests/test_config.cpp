#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>

#include "dynres/config.hpp"

using namespace dynres;
using nlohmann::json;

namespace {

json base_config() {
    return json::parse(R"({
      "market": {
        "n": 2, "T": 5, "alpha": 0.5,
        "low":  {"kind": "uniform", "params": [0.0, 1.0]},
        "high": {"kind": "uniform", "params": [2.0, 3.0]}
      },
      "mechanism": {"kind": "static", "reserve": 0.4}
    })");
}

}  // namespace

TEST_CASE("example1 preset expands to the published configuration") {
    const RunConfig cfg = load_preset("example1");
    CHECK(cfg.market.n == 20);
    CHECK(cfg.market.T == 6800);
    REQUIRE(cfg.market.alphas.size() == 20);
    for (double a : cfg.market.alphas) CHECK(a == 0.05);
    CHECK(cfg.market.beta == 0.0);
    CHECK(cfg.market.p_high == 0.5);
    CHECK(cfg.market.low.kind() == DistKind::truncated_normal);
    CHECK(cfg.market.low.param_a() == 1.0);
    CHECK(cfg.market.low.param_b() == 0.4);
    CHECK(cfg.market.low.support().lo == 0.0);
    CHECK(cfg.market.low.support().hi == 3.0);
    CHECK(cfg.market.high.kind() == DistKind::normal);
    CHECK(cfg.market.high.param_a() == 3.0);
    CHECK(cfg.market.high.param_b() == 0.8);
    CHECK(cfg.policy.kind == PolicyKind::threshold);
    CHECK(cfg.policy.rho == 3.0);
    CHECK(cfg.policy.r_low == 0.796);
    CHECK(cfg.policy.r_high == 2.318);
    REQUIRE(cfg.strategies.size() == 20);
    for (const auto& s : cfg.strategies) CHECK(s.kind == StrategyKind::truthful);
    CHECK(cfg.replications == 2000);
    CHECK(cfg.seed == 1);
    REQUIRE(cfg.params.has_value());
    CHECK(cfg.params->rho == 3.0);
    CHECK(cfg.params->eps == 0.009);
    REQUIRE(cfg.audit.has_value());
    CHECK(cfg.audit->mode == "static");
    CHECK(cfg.audit->agent == 0);
    CHECK(cfg.audit->type == ItemType::high);
    CHECK(cfg.audit->valuations == std::vector<double>{3.2, 3.6, 4.0});
    CHECK(cfg.audit->tau == 20);
    CHECK(cfg.audit->cap_count == 4);
    CHECK(!cfg.oracle.has_value());
}

TEST_CASE("remaining presets load and carry their sections") {
    const auto names = preset_names();
    REQUIRE(names.size() == 3);
    for (const auto& name : names) CHECK_NOTHROW(load_preset(name));

    const RunConfig tr = load_preset("transient");
    CHECK(tr.market.n == 1);
    CHECK(tr.market.T == 1000);
    CHECK(tr.market.beta == 1.0);
    CHECK(tr.market.p_high == 0.0);
    CHECK(tr.policy.kind == PolicyKind::static_reserve);
    CHECK(tr.policy.reserve == 0.5);
    CHECK(!tr.params.has_value());
    CHECK(!tr.audit.has_value());

    const RunConfig dj = load_preset("proposition1-disjoint");
    CHECK(dj.market.n == 2);
    CHECK(dj.policy.kind == PolicyKind::threshold);
    CHECK(dj.policy.r_high == 2.3841531507832689);
    REQUIRE(dj.audit.has_value());
    CHECK(dj.audit->type == ItemType::low);
    CHECK(dj.audit->tau == 3);
    REQUIRE(dj.oracle.has_value());
    // the mechanism is injected into the oracle instance
    CHECK(dj.oracle->policy.kind == PolicyKind::threshold);
    CHECK(dj.oracle->policy.rho == 1.5);
    CHECK(dj.oracle->policy.r_high == 2.3841531507832689);
    CHECK(dj.oracle->T == 3);
    CHECK(dj.oracle->n == 2);
    CHECK(dj.oracle->bid_grid.size() == 6);

    CHECK_THROWS_AS(load_preset("nope"), std::invalid_argument);
}

TEST_CASE("unknown keys are rejected at every object level") {
    auto top = base_config();
    top["extra"] = 1;
    CHECK_THROWS_AS(parse_run_config(top), std::invalid_argument);

    auto market = base_config();
    market["market"]["gamma"] = 0.1;
    CHECK_THROWS_AS(parse_run_config(market), std::invalid_argument);

    auto mech = base_config();
    mech["mechanism"]["rho"] = 1.0;  // static takes only reserve
    CHECK_THROWS_AS(parse_run_config(mech), std::invalid_argument);

    auto dist = base_config();
    dist["market"]["low"]["support"] = {0.0, 1.0};  // uniform has no support key
    CHECK_THROWS_AS(parse_run_config(dist), std::invalid_argument);

    auto audit = base_config();
    audit["audit"] = {{"mode", "static"}, {"valuations", {0.5}}, {"rh0", 1.0}};
    CHECK_THROWS_AS(parse_run_config(audit), std::invalid_argument);

    auto params = base_config();
    params["params"] = {{"rho", 1.0}, {"eps", 0.01}, {"slack", 2}};
    CHECK_THROWS_AS(parse_run_config(params), std::invalid_argument);
}

TEST_CASE("required keys and sizes are enforced") {
    auto no_market = base_config();
    no_market.erase("market");
    CHECK_THROWS_AS(parse_run_config(no_market), std::invalid_argument);

    auto no_mech = base_config();
    no_mech.erase("mechanism");
    CHECK_THROWS_AS(parse_run_config(no_mech), std::invalid_argument);

    auto no_n = base_config();
    no_n["market"].erase("n");
    CHECK_THROWS_AS(parse_run_config(no_n), std::invalid_argument);

    auto both_alpha = base_config();
    both_alpha["market"]["alphas"] = {0.5, 0.5};
    CHECK_THROWS_AS(parse_run_config(both_alpha), std::invalid_argument);

    auto no_alpha = base_config();
    no_alpha["market"].erase("alpha");
    CHECK_THROWS_AS(parse_run_config(no_alpha), std::invalid_argument);

    auto short_alphas = base_config();
    short_alphas["market"].erase("alpha");
    short_alphas["market"]["alphas"] = {0.5};
    CHECK_THROWS_AS(parse_run_config(short_alphas), std::invalid_argument);

    auto vec = base_config();
    vec["market"].erase("alpha");
    vec["market"]["alphas"] = {0.5, 0.7};
    const RunConfig cfg = parse_run_config(vec);
    CHECK(cfg.market.alphas == std::vector<double>{0.5, 0.7});

    auto bad_reps = base_config();
    bad_reps["replications"] = 0;
    CHECK_THROWS_AS(parse_run_config(bad_reps), std::invalid_argument);

    auto neg_seed = base_config();
    neg_seed["seed"] = -3;
    CHECK_THROWS_AS(parse_run_config(neg_seed), std::invalid_argument);

    auto big_seed = base_config();
    big_seed["seed"] = 18446744073709551615ull;
    CHECK(parse_run_config(big_seed).seed == 18446744073709551615ull);
}

TEST_CASE("mechanism and distribution variants parse") {
    auto thr = base_config();
    thr["mechanism"] = {{"kind", "threshold"}, {"rho", 2.0}, {"r_low", 0.3}, {"r_high", 1.1}};
    const RunConfig a = parse_run_config(thr);
    CHECK(a.policy.kind == PolicyKind::threshold);
    CHECK(a.policy.rho == 2.0);
    CHECK(a.policy.r_low == 0.3);
    CHECK(a.policy.r_high == 1.1);

    auto gen = base_config();
    gen["mechanism"] = {{"kind", "generalized"}, {"rho", 2.0}, {"r_low", 0.3},
                        {"r_high", 1.1}, {"k", 2}};
    const RunConfig b = parse_run_config(gen);
    CHECK(b.policy.kind == PolicyKind::generalized_threshold);
    CHECK(b.policy.k == 2);

    auto bad = base_config();
    bad["mechanism"] = {{"kind", "dutch"}};
    CHECK_THROWS_AS(parse_run_config(bad), std::invalid_argument);

    auto tn = base_config();
    tn["market"]["high"] = {{"kind", "truncated_normal"}, {"params", {3.0, 0.5}},
                            {"support", {2.0, 5.0}}};
    const RunConfig c = parse_run_config(tn);
    CHECK(c.market.high.kind() == DistKind::truncated_normal);
    CHECK(c.market.high.support().hi == 5.0);

    auto tn_nosupport = base_config();
    tn_nosupport["market"]["high"] = {{"kind", "truncated_normal"}, {"params", {3.0, 0.5}}};
    CHECK_THROWS_AS(parse_run_config(tn_nosupport), std::invalid_argument);

    auto expo = base_config();
    expo["market"]["high"] = {{"kind", "exponential"}, {"params", {2.0}}};
    CHECK(parse_run_config(expo).market.high.kind() == DistKind::exponential);

    auto tab = base_config();
    tab["market"]["low"] = {{"kind", "tabulated"}, {"values", {0.0, 1.0, 2.0}},
                            {"cdf", {0.0, 0.7, 1.0}}};
    const RunConfig d = parse_run_config(tab);
    CHECK(d.market.low.kind() == DistKind::tabulated);
    CHECK(d.market.low.table_values().size() == 3);
}

TEST_CASE("strategy profiles parse by shorthand and per agent") {
    auto sh = base_config();
    sh["strategies"] = "truthful";
    const RunConfig a = parse_run_config(sh);
    REQUIRE(a.strategies.size() == 2);
    CHECK(a.strategies[1].kind == StrategyKind::truthful);

    auto arr = base_config();
    arr["strategies"] = json::array(
        {{{"kind", "capped"}, {"cap", 0.8}, {"horizon", 3}},
         {{"kind", "one_shot"}, {"cap", 0.6}, {"round", 2}}});
    const RunConfig b = parse_run_config(arr);
    CHECK(b.strategies[0].kind == StrategyKind::capped);
    CHECK(b.strategies[0].cap == 0.8);
    CHECK(b.strategies[0].horizon == 3);
    CHECK(b.strategies[1].kind == StrategyKind::one_shot_shade);
    CHECK(b.strategies[1].horizon == 2);

    auto scripted = base_config();
    scripted["strategies"] = json::array(
        {{{"kind", "scripted"}, {"bids", {0.1, 0.2}}}, {{"kind", "truthful"}}});
    const RunConfig c = parse_run_config(scripted);
    CHECK(c.strategies[0].kind == StrategyKind::scripted);
    CHECK(c.strategies[0].script.size() == 2);

    auto wrong_arity = base_config();
    wrong_arity["strategies"] = json::array({{{"kind", "truthful"}}});
    CHECK_THROWS_AS(parse_run_config(wrong_arity), std::invalid_argument);

    auto bad_name = base_config();
    bad_name["strategies"] = "greedy";
    CHECK_THROWS_AS(parse_run_config(bad_name), std::invalid_argument);

    auto bad_kind = base_config();
    bad_kind["strategies"] = json::array({{{"kind", "sniper"}}, {{"kind", "truthful"}}});
    CHECK_THROWS_AS(parse_run_config(bad_kind), std::invalid_argument);
}

TEST_CASE("audit section validation") {
    auto dyn = base_config();
    dyn["audit"] = {{"mode", "dynamic"}, {"eps", 0.01}, {"delta", 0.1}};
    const RunConfig a = parse_run_config(dyn);
    REQUIRE(a.audit.has_value());
    CHECK(a.audit->eps == 0.01);
    CHECK(a.audit->tau == 0);  // 0 means use T

    auto dyn_noeps = base_config();
    dyn_noeps["audit"] = {{"mode", "dynamic"}, {"delta", 0.1}};
    CHECK_THROWS_AS(parse_run_config(dyn_noeps), std::invalid_argument);

    auto st_novals = base_config();
    st_novals["audit"] = {{"mode", "static"}};
    CHECK_THROWS_AS(parse_run_config(st_novals), std::invalid_argument);

    auto bad_mode = base_config();
    bad_mode["audit"] = {{"mode", "fuzz"}, {"valuations", {0.5}}};
    CHECK_THROWS_AS(parse_run_config(bad_mode), std::invalid_argument);

    auto with_rho = base_config();
    with_rho["audit"] = {{"mode", "static"}, {"valuations", {0.5}}, {"rho", 0.9}};
    const RunConfig b = parse_run_config(with_rho);
    REQUIRE(b.audit->rho.has_value());
    CHECK(*b.audit->rho == 0.9);
}

TEST_CASE("mechanism override strings") {
    const ReservePolicy from = ReservePolicy::threshold(3.0, 0.796, 2.318);

    const ReservePolicy s = parse_mechanism_string("static:1.05", from, 20);
    CHECK(s.kind == PolicyKind::static_reserve);
    CHECK(s.reserve == 1.05);

    const ReservePolicy t = parse_mechanism_string("threshold:3,0.7,2.2", from, 20);
    CHECK(t.kind == PolicyKind::threshold);
    CHECK(t.rho == 3.0);
    CHECK(t.r_low == 0.7);
    CHECK(t.r_high == 2.2);

    const ReservePolicy g = parse_mechanism_string("generalized:3,0.7,2.2,2", from, 20);
    CHECK(g.kind == PolicyKind::generalized_threshold);
    CHECK(g.k == 2);

    // bare kind name falls back to the config mechanism when kinds agree
    const ReservePolicy bare = parse_mechanism_string("threshold", from, 20);
    CHECK(bare.r_low == 0.796);
    CHECK_THROWS_AS(parse_mechanism_string("static", from, 20), std::invalid_argument);

    CHECK_THROWS_AS(parse_mechanism_string("static:abc", from, 20), std::invalid_argument);
    CHECK_THROWS_AS(parse_mechanism_string("static:1.05x", from, 20), std::invalid_argument);
    CHECK_THROWS_AS(parse_mechanism_string("threshold:1,2", from, 20), std::invalid_argument);
    CHECK_THROWS_AS(parse_mechanism_string("english:1", from, 20), std::invalid_argument);
}

TEST_CASE("serializers keep full precision and spell infinities as strings") {
    const RunConfig cfg = load_preset("proposition1-disjoint");
    const json pol = to_json(cfg.policy);
    CHECK(pol["kind"] == "threshold");
    CHECK(pol["r_high"].get<double>() == 2.3841531507832689);
    // full round trip through text
    CHECK(json::parse(pol.dump())["r_high"].get<double>() == 2.3841531507832689);

    const json dist = to_json(cfg.market.high);
    CHECK(dist["kind"] == "truncated_normal");
    CHECK(dist["params"][1].get<double>() == 0.5);
    CHECK(dist["support"][0].get<double>() == 2.0);

    TheoremParams p{};
    p.thm3.n2 = std::numeric_limits<double>::infinity();
    p.thm5.regime = Thm5Regime::linear_k;
    p.thm5.hypothesis_ok = true;
    const json pj = to_json(p);
    CHECK(pj["thm3"]["n2"] == "inf");
    CHECK(pj["thm2"]["n0"].get<double>() == 0.0);
    CHECK(pj["thm5"]["regime"] == "linear_k");
    CHECK(pj["thm5"]["hypothesis_ok"] == true);

    ReserveSolution sol{0.7961234567890123, -1.5e-10, 31};
    const json sj = to_json(sol);
    CHECK(json::parse(sj.dump())["reserve"].get<double>() == 0.7961234567890123);
    CHECK(sj["iterations"] == 31);
}

TEST_CASE("simulation summary serializes without any thread count") {
    MarketConfig m;
    m.n = 1;
    m.T = 2;
    m.alphas = {1.0};
    m.beta = 0.0;
    m.p_high = 0.0;
    m.low = ValuationDistribution::uniform(0.0, 1.0);
    m.high = ValuationDistribution::uniform(0.0, 1.0);
    m.validate();
    const auto summary = estimate(m, ReservePolicy::static_reserve(0.3),
                                  {Strategy::truthful()}, 50, 9, 1);
    const json j = to_json(summary);
    CHECK(!j.contains("threads"));
    for (const char* key : {"replications", "seed", "revenue_per_round",
                            "welfare_per_participation", "low", "high",
                            "trigger_round_counts"})
        CHECK(j.contains(key));
    CHECK(j.size() == 7);
    CHECK(j["replications"] == 50);
    CHECK(j["seed"] == 9);
    const json again = json::parse(j.dump(2));
    CHECK(again["revenue_per_round"]["mean"].get<double>() == summary.revenue_per_round.mean);
    // a static mechanism never triggers
    CHECK(j["trigger_round_counts"].contains("-1"));
}

TEST_CASE("four significant digits for humans") {
    CHECK(format_sig4(0.93514) == "0.9351");
    CHECK(format_sig4(6764.44) == "6764");
    CHECK(format_sig4(19.519376) == "19.52");
    CHECK(format_sig4(0.000000123) == "1.23e-07");
    CHECK(format_sig4(0.5) == "0.5");

    const std::string table = theorem_params_table(TheoremParams{});
    CHECK(table.find("thm2.n0") != std::string::npos);
    CHECK(table.find("t_delta") != std::string::npos);
    CHECK(table.back() == '\n');
}

TEST_CASE("config files load from disk") {
    const auto path = std::filesystem::temp_directory_path() / "dynres_cfg_test.json";
    {
        std::ofstream f(path);
        f << base_config().dump();
    }
    const RunConfig cfg = load_run_config_file(path.string());
    CHECK(cfg.market.n == 2);
    CHECK(cfg.policy.reserve == 0.4);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_run_config_file(path.string()), std::invalid_argument);
}
