#pragma once

#include "fdstab/boundary.hpp"
#include "fdstab/presets.hpp"
#include "fdstab/stencil.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fdstab::app {

enum class Command { Catalog, VerifyInterior, VerifyBoundary, Simulate, Refute };

std::string_view to_string(Command c);
Command parse_command(std::string_view name);

/// Every field optional so a config file and command-line flags can be layered.
struct ExperimentConfig {
    std::optional<Command> command;
    std::optional<std::string> scheme;
    std::optional<double> z;
    std::optional<std::string> z_grid;
    std::optional<double> nu;
    std::optional<double> sigma;
    std::optional<double> tau;
    std::optional<std::string> closure;
    std::optional<std::string> h0;  ///< number or "optimal"
    std::optional<int> r;
    std::optional<int> order;
    std::optional<int> steps;
    std::optional<int> active;
    std::optional<std::string> profile;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;  ///< csv or json
    std::optional<int> restarts;
    std::optional<double> residual_tol;
    std::optional<unsigned> threads;
};

/// Keys are the long flag names ("z-grid" and "z_grid" both accepted). Unknown keys are errors.
ExperimentConfig config_from_json(const nlohmann::json& j);
/// Fields set in `over` replace those in `base`.
ExperimentConfig merge(ExperimentConfig base, const ExperimentConfig& over);

/// "lo:hi:n" (n equispaced points, endpoints included) or "z1,z2,...".
std::vector<double> parse_z_grid(std::string_view spec);

struct Row {
    double z = 0.0;
    std::string quantity;
    double value = 0.0;
};

struct Failure {
    std::string invariant;
    double z = 0.0;
    std::string params;
    std::uint64_t seed = 0;
    double value = 0.0;
    double tolerance = 0.0;
};

std::string describe(const Failure& f);

struct Outcome {
    Command command = Command::Catalog;
    std::vector<Row> rows;
    nlohmann::json document;  ///< JSON form of the same results
    std::vector<Failure> failures;
    /// Commands that produce a table rather than (z, quantity, value) rows.
    std::vector<std::string> table_header;
    std::vector<std::vector<std::string>> table;

    int exit_code() const { return failures.empty() ? 0 : 1; }
};

/// Throws ConfigError for anything that should map to a usage error.
Outcome run_command(const ExperimentConfig& config);

} // namespace fdstab::app
