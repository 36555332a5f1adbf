#ifndef DYNRES_CONFIG_HPP
#define DYNRES_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dynres/audit.hpp"
#include "dynres/engine.hpp"
#include "dynres/oracle.hpp"
#include "dynres/theory.hpp"

namespace dynres {

// Settings for the audit subcommand. Static mode measures per-valuation
// deviation gains for one agent of one type; dynamic mode samples whole
// realizations and checks every first participation against its allowance.
struct AuditSpec {
    std::string mode;  // "static" or "dynamic"
    int agent{0};
    ItemType type{ItemType::low};
    std::vector<double> valuations;
    double eps{0.0};
    double delta{0.1};
    int tau{0};        // middle shading horizon for the family; 0 = use T
    int cap_count{4};
    std::optional<double> rho;  // family trigger level; defaults to the mechanism's
};

struct ParamsSpec {
    double rho{0.0};
    double eps{0.0};
};

// One fully parsed run configuration. `strategies` always has exactly n
// entries after parsing.
struct RunConfig {
    MarketConfig market;
    ReservePolicy policy;
    std::vector<Strategy> strategies;
    int replications{2000};
    std::uint64_t seed{1};
    std::optional<ParamsSpec> params;
    std::optional<AuditSpec> audit;
    std::optional<DiscreteInstance> oracle;
};

// Strict parser: every object level rejects keys outside its schema, so a
// typo fails loudly instead of silently falling back to a default. Throws
// std::invalid_argument on schema violations and nlohmann::json exceptions
// on type mismatches.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config_file(const std::string& path);

// Embedded presets: example1, transient, proposition1-disjoint.
std::vector<std::string> preset_names();
RunConfig load_preset(const std::string& name);

// Mechanism override strings accepted by `simulate --mechanism`:
// "static:R", "threshold:RHO,RL,RH", "generalized:RHO,RL,RH,K", or a bare
// kind name matching the config mechanism. n sizes the generalized form.
ReservePolicy parse_mechanism_string(const std::string& text, const ReservePolicy& from_config,
                                     int n);

// JSON emitters. Doubles keep full round-trip precision; infinities become
// the string "inf" since JSON has no number for them.
nlohmann::json to_json(const ValuationDistribution& d);
nlohmann::json to_json(const ReservePolicy& p);
nlohmann::json to_json(const SimulationSummary& s);
nlohmann::json to_json(const GridSearchResult& g);
nlohmann::json to_json(const TheoremParams& p);
nlohmann::json to_json(const ICReport& r);
nlohmann::json to_json(const OracleResult& r);
nlohmann::json to_json(const BenchmarkRevenue& b);
nlohmann::json to_json(const ReserveSolution& s);

// 4 significant digits for human-facing tables ("0.935", "6764", "1.23e-07").
std::string format_sig4(double x);

// Aligned two-column text rendering of the params table.
std::string theorem_params_table(const TheoremParams& p);

}  // namespace dynres

#endif
