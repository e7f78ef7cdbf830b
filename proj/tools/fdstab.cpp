#include "experiment.hpp"
#include "report.hpp"

#include "fdstab/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace fdstab;
using namespace fdstab::app;

namespace {

template <class T>
void add(CLI::App& app, const std::string& flag, std::optional<T>& dst, const std::string& help) {
    app.add_option_function<T>(flag, [&dst](const T& v) { dst = v; }, help);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-method stability experiments for explicit transport schemes on a half-line"};
    app.require_subcommand(1);

    ExperimentConfig cli;
    std::string config_path;

    auto opts = [&](CLI::App* sub) {
        add(*sub, "--scheme", cli.scheme, "named preset (see catalog)");
        add(*sub, "--z", cli.z, "single CFL value");
        add(*sub, "--z-grid", cli.z_grid, "lo:hi:n or a comma list (default 0.01:0.99:99)");
        add(*sub, "--nu", cli.nu, "three-point viscosity");
        add(*sub, "--sigma", cli.sigma, "five-point third-difference weight");
        add(*sub, "--tau", cli.tau, "five-point fourth-difference weight");
        add(*sub, "--closure", cli.closure, "extrap1, extrap2, type1, type2 or translatory2");
        add(*sub, "--h0", cli.h0, "last quadrature weight, or 'optimal'");
        add(*sub, "--r", cli.r, "number of modified weights (refute)");
        add(*sub, "--order", cli.order, "extrapolation order 1 or 2 (refute)");
        add(*sub, "--steps", cli.steps, "time steps (simulate)");
        add(*sub, "--active", cli.active, "active cells up to the boundary (simulate)");
        add(*sub, "--profile", cli.profile, "gaussian, gaussian:CENTER:WIDTH, delta:J or step:J");
        add(*sub, "--seed", cli.seed, "seed for random data and restarts");
        add(*sub, "--out", cli.out, "output file (default stdout)");
        add(*sub, "--format", cli.format, "csv or json");
        add(*sub, "--restarts", cli.restarts, "Nelder-Mead restarts (refute)");
        add(*sub, "--residual-tol", cli.residual_tol, "relative tolerance for identity residuals");
        add(*sub, "--threads", cli.threads, "worker threads");
        sub->add_option("--config", config_path, "JSON file with the same keys");
    };
    const std::pair<Command, const char*> commands[] = {
        {Command::Catalog, "list the preset schemes"},
        {Command::VerifyInterior, "dissipation matrix eigenvalues and the decomposition identity"},
        {Command::VerifyBoundary, "boundary matrix and semiboundedness verdict per z"},
        {Command::Simulate, "run the half-line solver and record the energy trace"},
        {Command::Refute, "exact certificate and numeric search for the boundary weights"},
    };
    for (const auto& [c, help] : commands) {
        CLI::App* sub = app.add_subcommand(std::string(to_string(c)), help);
        opts(sub);
        sub->callback([&cli, c = c] { cli.command = c; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw ConfigError("cannot open config file " + config_path);
            }
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("config file " + config_path + ": " + e.what());
            }
            cfg = config_from_json(j);
        }
        cfg = merge(cfg, cli);

        const Outcome outcome = run_command(cfg);
        const std::string fmt =
            cfg.format.value_or(outcome.command == Command::Refute ? "json" : "csv");
        if (fmt != "csv" && fmt != "json") {
            throw ConfigError("--format must be csv or json");
        }
        const std::string stamp = utc_timestamp();
        auto write = [&](std::ostream& os) {
            if (fmt == "csv") {
                write_csv(os, outcome, stamp);
            } else {
                write_json(os, outcome, stamp);
            }
        };
        if (cfg.out) {
            std::ofstream f(*cfg.out);
            if (!f) {
                throw ConfigError("cannot write " + *cfg.out);
            }
            write(f);
        } else {
            write(std::cout);
        }
        for (const auto& f : outcome.failures) {
            std::cerr << describe(f) << "\n";
        }
        return outcome.exit_code();
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
