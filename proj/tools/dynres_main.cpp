#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "dynres/config.hpp"
#include "dynres/rng.hpp"

namespace {

using dynres::RunConfig;
using nlohmann::json;

struct SourceOpts {
    std::string config_path;
    std::string preset;
    std::string out_path;
};

void add_source_flags(CLI::App* cmd, SourceOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration file");
    cmd->add_option("--preset", o.preset, "embedded configuration: example1, transient, proposition1-disjoint");
    cmd->add_option("--out", o.out_path, "write the JSON result here instead of stdout");
}

RunConfig load_config(const SourceOpts& o) {
    if (!o.config_path.empty() && !o.preset.empty())
        throw std::invalid_argument("give either --config or --preset, not both");
    if (!o.config_path.empty()) return dynres::load_run_config_file(o.config_path);
    if (!o.preset.empty()) return dynres::load_preset(o.preset);
    throw std::invalid_argument("need --config FILE or --preset NAME");
}

// Results go to stdout (or --out) as JSON; everything human-facing goes to
// stderr so pipelines stay clean.
void emit(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
    f << text;
}

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string pm(double mean, double ci) {
    return dynres::format_sig4(mean) + " +/- " + dynres::format_sig4(ci);
}

void run_reserve(const SourceOpts& src) {
    const RunConfig cfg = load_config(src);
    json out;
    const std::pair<const char*, const dynres::ValuationDistribution*> sides[] = {
        {"low", &cfg.market.low}, {"high", &cfg.market.high}};
    for (const auto& [name, dist] : sides) {
        if (!dynres::check_regularity(*dist))
            throw std::domain_error(std::string("regularity violation: virtual value of the ") +
                                    name + " distribution is not nondecreasing");
        const auto sol = dynres::optimal_reserve(*dist);
        json side = dynres::to_json(sol);
        side["distribution"] = dynres::to_json(*dist);
        out[name] = side;
        std::cerr << "r_" << name << "  " << dynres::format_sig4(sol.reserve) << "\n";
    }
    emit(out, src.out_path);
}

void dump_trajectories(const RunConfig& cfg, const dynres::ReservePolicy& policy,
                       const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (int r = 0; r < cfg.replications; ++r) {
        dynres::SimulateOptions opts;
        opts.record_rounds = true;
        const auto traj = dynres::simulate_trajectory(cfg.market, policy, cfg.strategies,
                                                      dynres::derive_seed(cfg.seed, r), opts);
        char name[32];
        std::snprintf(name, sizeof name, "traj_%06d.csv", r);
        std::ofstream f(std::filesystem::path(dir) / name);
        if (!f) throw std::invalid_argument("cannot write trajectory file in " + dir);
        f << dynres::round_record_csv_header() << "\n";
        for (const auto& rec : traj.rounds) f << dynres::round_record_csv_row(rec) << "\n";
    }
}

void run_simulate(const SourceOpts& src, const std::string& mechanism, int threads,
                  const std::string& dump_dir, RunConfig cfg) {
    if (cfg.replications < 2)
        throw std::invalid_argument("need at least 2 replications for a confidence interval");
    if (mechanism == "benchmark") {
        const auto b = dynres::benchmark_revenue(cfg.market, cfg.replications, cfg.seed);
        std::cerr << "benchmark revenue/round  " << pm(b.blended_mean, b.blended_ci) << "\n";
        emit(dynres::to_json(b), src.out_path);
        return;
    }
    const dynres::ReservePolicy policy =
        mechanism.empty() ? cfg.policy
                          : dynres::parse_mechanism_string(mechanism, cfg.policy, cfg.market.n);
    const auto summary = dynres::estimate(cfg.market, policy, cfg.strategies, cfg.replications,
                                          cfg.seed, threads);
    std::cerr << "revenue/round            "
              << pm(summary.revenue_per_round.mean, summary.revenue_per_round.ci_halfwidth)
              << "\n"
              << "welfare/participation    "
              << pm(summary.welfare_per_participation.mean,
                    summary.welfare_per_participation.ci_halfwidth)
              << "\n";
    emit(dynres::to_json(summary), src.out_path);
    if (!dump_dir.empty()) dump_trajectories(cfg, policy, dump_dir);
}

void run_params(const SourceOpts& src) {
    const RunConfig cfg = load_config(src);
    if (!cfg.params)
        throw std::invalid_argument("config has no params section (needs rho and eps)");
    const auto p = dynres::compute_theorem_params(cfg.market, cfg.params->rho, cfg.params->eps);
    std::cerr << dynres::theorem_params_table(p);
    emit(dynres::to_json(p), src.out_path);
}

void run_audit(const SourceOpts& src, int threads, RunConfig cfg) {
    if (!cfg.audit) throw std::invalid_argument("config has no audit section");
    const dynres::AuditSpec& a = *cfg.audit;
    double rho = 0.0;
    if (a.rho) {
        rho = *a.rho;
    } else if (cfg.policy.kind == dynres::PolicyKind::static_reserve) {
        throw std::invalid_argument(
            "a static mechanism has no trigger level; set audit.rho for the deviation family");
    } else {
        rho = cfg.policy.rho;
    }
    const int tau = a.tau == 0 ? cfg.market.T : a.tau;
    if (a.mode == "static") {
        const auto family = dynres::make_capped_family(cfg.market.dist(a.type), rho, tau,
                                                       cfg.market.T, a.cap_count);
        const auto report = dynres::static_ic_gap(cfg.market, cfg.policy, a.agent, a.type,
                                                  a.valuations, family, cfg.replications,
                                                  cfg.seed, threads);
        std::cerr << "certified epsilon        "
                  << pm(report.certified_epsilon, report.certified_epsilon_ci) << "\n";
        emit(dynres::to_json(report), src.out_path);
    } else {
        const auto family =
            dynres::make_capped_family(cfg.market.high, rho, tau, cfg.market.T, a.cap_count);
        const auto report = dynres::dynamic_ic_audit(cfg.market, cfg.policy, a.eps, a.delta,
                                                     family, cfg.replications, cfg.seed,
                                                     threads);
        std::cerr << "good frequency           "
                  << pm(report.good_frequency, report.good_frequency_ci) << "\n";
        emit(dynres::to_json(report), src.out_path);
    }
}

void run_oracle(const SourceOpts& src) {
    const RunConfig cfg = load_config(src);
    if (!cfg.oracle) throw std::invalid_argument("config has no oracle section");
    const auto result = dynres::brute_force_best_response(*cfg.oracle);
    for (std::size_t i = 0; i < result.own_values.size(); ++i)
        std::cerr << "v=" << dynres::format_sig4(result.own_values[i]) << "  truthful "
                  << dynres::format_sig4(result.truthful_value[i]) << "  best "
                  << dynres::format_sig4(result.best_value[i]) << "\n";
    emit(dynres::to_json(result), src.out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"repeated second-price auctions with dynamic reserve prices"};
    app.require_subcommand(1);

    SourceOpts reserve_src;
    auto* cmd_reserve = app.add_subcommand("reserve", "solve the optimal static reserve of each valuation distribution");
    add_source_flags(cmd_reserve, reserve_src);

    SourceOpts sim_src;
    std::string sim_mechanism;
    std::string sim_dump_dir;
    int sim_threads = default_threads();
    int sim_replications = 0;
    std::uint64_t sim_seed = 0;
    auto* cmd_simulate = app.add_subcommand("simulate", "estimate revenue and welfare by Monte Carlo");
    add_source_flags(cmd_simulate, sim_src);
    cmd_simulate->add_option(
        "--mechanism", sim_mechanism,
        "override: static:R | threshold:RHO,RL,RH | generalized:RHO,RL,RH,K | benchmark");
    auto* sim_reps_opt = cmd_simulate->add_option("--replications", sim_replications,
                                                  "Monte Carlo replications");
    auto* sim_seed_opt = cmd_simulate->add_option("--seed", sim_seed, "master seed");
    cmd_simulate->add_option("--threads", sim_threads, "worker threads (default: all cores)");
    cmd_simulate->add_option("--dump-trajectories", sim_dump_dir,
                             "also write one per-round CSV per replication into this directory");

    SourceOpts params_src;
    auto* cmd_params = app.add_subcommand("params", "evaluate the incentive and revenue guarantee parameters");
    add_source_flags(cmd_params, params_src);

    SourceOpts audit_src;
    int audit_threads = default_threads();
    int audit_replications = 0;
    std::uint64_t audit_seed = 0;
    auto* cmd_audit = app.add_subcommand("audit", "measure deviation gains against the capped-bid family");
    add_source_flags(cmd_audit, audit_src);
    auto* audit_reps_opt = cmd_audit->add_option("--replications", audit_replications,
                                                 "paired replications per cell");
    auto* audit_seed_opt = cmd_audit->add_option("--seed", audit_seed, "master seed");
    cmd_audit->add_option("--threads", audit_threads, "worker threads (default: all cores)");

    SourceOpts oracle_src;
    auto* cmd_oracle = app.add_subcommand("oracle", "exact best response on a small discretized instance");
    add_source_flags(cmd_oracle, oracle_src);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_reserve->parsed()) {
            run_reserve(reserve_src);
        } else if (cmd_simulate->parsed()) {
            RunConfig cfg = load_config(sim_src);
            if (sim_reps_opt->count() > 0) cfg.replications = sim_replications;
            if (sim_seed_opt->count() > 0) cfg.seed = sim_seed;
            run_simulate(sim_src, sim_mechanism, sim_threads, sim_dump_dir, std::move(cfg));
        } else if (cmd_params->parsed()) {
            run_params(params_src);
        } else if (cmd_audit->parsed()) {
            RunConfig cfg = load_config(audit_src);
            if (audit_reps_opt->count() > 0) cfg.replications = audit_replications;
            if (audit_seed_opt->count() > 0) cfg.seed = audit_seed;
            run_audit(audit_src, audit_threads, std::move(cfg));
        } else if (cmd_oracle->parsed()) {
            run_oracle(oracle_src);
        }
        return 0;
    } catch (const dynres::SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
