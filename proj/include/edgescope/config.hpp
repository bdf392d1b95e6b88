#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "edgescope/experiment/sweep.hpp"

namespace edgescope {

/// Malformed or invalid configuration.  The CLI maps this (and parse
/// failures) to exit code 1; genuine runtime failures exit with 2.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Everything a CLI invocation needs: the sweep settings plus the output
/// directory and the edge-bisection tolerance.  `base_seed` seeds single-run
/// subcommands and derives the default five-seed list.
struct RunConfig {
    SweepConfig sweep;
    std::string out_dir;          ///< empty = not set by the config file
    double edge_tolerance = 0.01;
    std::uint64_t base_seed = 1;
    bool explicit_seeds = false;  ///< [run].seeds was given verbatim
};

RunConfig default_run_config();

/// Replace the seed list with base, base+1, ..., base+4 (single-seed
/// subcommands use only the first entry).
void apply_base_seed(RunConfig& cfg, std::uint64_t base);

/// Parse and validate a configuration document.  Unknown sections or keys
/// and out-of-range values raise ConfigError naming the offending key
/// ("unknown key: sweep.foo", "reservoir.sigma: must be positive").
RunConfig config_from_json(const nlohmann::json& doc);

/// Read a .toml or .json file and parse it via config_from_json.
RunConfig load_run_config(const std::string& path);

/// Serialize every effective setting as TOML.  The result is itself a valid
/// configuration file; the CLI writes it into each output directory.
std::string config_to_toml(const RunConfig& cfg);

}  // namespace edgescope
