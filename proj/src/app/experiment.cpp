#include "experiment.hpp"

#include "fdstab/decomposition.hpp"
#include "fdstab/error.hpp"
#include "fdstab/obstruction.hpp"
#include "fdstab/parallel.hpp"
#include "fdstab/random.hpp"
#include "fdstab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace fdstab::app {

std::string_view to_string(Command c) {
    switch (c) {
    case Command::Catalog: return "catalog";
    case Command::VerifyInterior: return "verify-interior";
    case Command::VerifyBoundary: return "verify-boundary";
    case Command::Simulate: return "simulate";
    case Command::Refute: return "refute";
    }
    return "?";
}

Command parse_command(std::string_view name) {
    for (Command c : {Command::Catalog, Command::VerifyInterior, Command::VerifyBoundary, Command::Simulate,
                      Command::Refute}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw ConfigError("unknown command '" + std::string(name) +
                      "'; expected catalog, verify-interior, verify-boundary, simulate or refute");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("config file must hold a JSON object");
    }
    ExperimentConfig c;
    for (const auto& [raw_key, v] : j.items()) {
        std::string key = raw_key;
        std::replace(key.begin(), key.end(), '_', '-');
        try {
            if (key == "command") c.command = parse_command(v.get<std::string>());
            else if (key == "scheme") c.scheme = v.get<std::string>();
            else if (key == "z") c.z = v.get<double>();
            else if (key == "z-grid") c.z_grid = v.get<std::string>();
            else if (key == "nu") c.nu = v.get<double>();
            else if (key == "sigma") c.sigma = v.get<double>();
            else if (key == "tau") c.tau = v.get<double>();
            else if (key == "closure") c.closure = v.get<std::string>();
            else if (key == "h0") c.h0 = v.is_string() ? v.get<std::string>() : std::to_string(v.get<double>());
            else if (key == "r") c.r = v.get<int>();
            else if (key == "order") c.order = v.get<int>();
            else if (key == "steps") c.steps = v.get<int>();
            else if (key == "active") c.active = v.get<int>();
            else if (key == "profile") c.profile = v.get<std::string>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "out") c.out = v.get<std::string>();
            else if (key == "format") c.format = v.get<std::string>();
            else if (key == "restarts") c.restarts = v.get<int>();
            else if (key == "residual-tol") c.residual_tol = v.get<double>();
            else if (key == "threads") c.threads = v.get<unsigned>();
            else throw ConfigError("unknown config key '" + raw_key + "'");
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config key '" + raw_key + "': " + e.what());
        }
    }
    return c;
}

ExperimentConfig merge(ExperimentConfig b, const ExperimentConfig& o) {
    auto take = [](auto& dst, const auto& src) {
        if (src) {
            dst = src;
        }
    };
    take(b.command, o.command);
    take(b.scheme, o.scheme);
    take(b.z, o.z);
    take(b.z_grid, o.z_grid);
    take(b.nu, o.nu);
    take(b.sigma, o.sigma);
    take(b.tau, o.tau);
    take(b.closure, o.closure);
    take(b.h0, o.h0);
    take(b.r, o.r);
    take(b.order, o.order);
    take(b.steps, o.steps);
    take(b.active, o.active);
    take(b.profile, o.profile);
    take(b.seed, o.seed);
    take(b.out, o.out);
    take(b.format, o.format);
    take(b.restarts, o.restarts);
    take(b.residual_tol, o.residual_tol);
    take(b.threads, o.threads);
    return b;
}

namespace {

double parse_number(std::string_view s, std::string_view what) {
    std::string str(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(str, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != str.size() || str.empty() || !std::isfinite(v)) {
        throw ConfigError("bad number '" + str + "' in " + std::string(what));
    }
    return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::vector<double> parse_z_grid(std::string_view spec) {
    std::vector<double> zs;
    if (spec.find(':') != std::string_view::npos) {
        const auto p = split(spec, ':');
        if (p.size() != 3) {
            throw ConfigError("z-grid '" + std::string(spec) + "' should read lo:hi:n");
        }
        const double lo = parse_number(p[0], "z-grid");
        const double hi = parse_number(p[1], "z-grid");
        const double nd = parse_number(p[2], "z-grid");
        if (nd < 1 || nd != std::floor(nd) || hi < lo) {
            throw ConfigError("z-grid needs n >= 1 and lo <= hi");
        }
        const auto n = static_cast<std::size_t>(nd);
        for (std::size_t i = 0; i < n; ++i) {
            zs.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        }
    } else {
        for (const auto& s : split(spec, ',')) {
            zs.push_back(parse_number(s, "z-grid"));
        }
    }
    for (double z : zs) {
        if (z < 0.0 || z > 1.0) {
            throw ConfigError("z = " + fmt(z) + " lies outside [0, 1]");
        }
    }
    return zs;
}

std::string describe(const Failure& f) {
    return "invariant violated: " + f.invariant + " (z=" + fmt(f.z) + ", " + f.params +
           ", seed=" + std::to_string(f.seed) + "): value " + fmt(f.value) + " exceeds tolerance " +
           fmt(f.tolerance);
}

namespace {

constexpr double kDefaultResidualTol = 1e-12;

/// Scheme selection resolved once; yields the scheme at any z.
struct SchemeChoice {
    std::optional<Preset> preset;
    SchemeFamily family = SchemeFamily::ThreePoint;
    std::optional<double> nu;
    std::optional<double> sigma;
    std::optional<double> tau;
    std::string name;

    SchemeSpec at(double z) const {
        if (preset) {
            return preset_scheme(*preset, z);
        }
        if (family == SchemeFamily::ThreePoint) {
            return build_three_point(z, *nu);
        }
        return build_five_point(z, *sigma, *tau);
    }

    std::string params(double z) const {
        const SchemeSpec s = at(z);
        std::string out = "scheme=" + name;
        if (s.family == SchemeFamily::ThreePoint) {
            out += ", nu=" + fmt(s.nu);
        } else {
            out += ", sigma=" + fmt(s.sigma) + ", tau=" + fmt(s.tau);
        }
        return out;
    }
};

SchemeChoice resolve_scheme(const ExperimentConfig& c) {
    SchemeChoice ch;
    const bool raw = c.nu || c.sigma || c.tau;
    if (c.scheme) {
        if (raw) {
            throw ConfigError("give either --scheme or raw parameters, not both");
        }
        ch.preset = parse_preset(*c.scheme);
        if (!ch.preset) {
            std::string names;
            for (const auto& p : all_presets()) {
                names += (names.empty() ? "" : ", ") + std::string(p.name);
            }
            throw ConfigError("unknown scheme '" + *c.scheme + "'; known presets: " + names);
        }
        ch.family = preset_info(*ch.preset).family;
        ch.name = *c.scheme;
        return ch;
    }
    if (c.nu) {
        if (c.sigma || c.tau) {
            throw ConfigError("--nu selects a three-point scheme; --sigma/--tau select a five-point one");
        }
        ch.family = SchemeFamily::ThreePoint;
        ch.nu = c.nu;
        ch.name = "three-point";
        return ch;
    }
    if (c.sigma && c.tau) {
        ch.family = SchemeFamily::FivePoint;
        ch.sigma = c.sigma;
        ch.tau = c.tau;
        ch.name = "five-point";
        return ch;
    }
    throw ConfigError("select a scheme with --scheme NAME, --nu, or --sigma and --tau");
}

std::vector<double> resolve_z(const ExperimentConfig& c) {
    if (c.z && c.z_grid) {
        throw ConfigError("give either --z or --z-grid");
    }
    if (c.z) {
        return parse_z_grid(fmt(*c.z));
    }
    return parse_z_grid(c.z_grid.value_or("0.01:0.99:99"));
}

unsigned thread_count(const ExperimentConfig& c) { return c.threads.value_or(default_thread_count()); }

/// Per-z results before they are flattened into rows.
struct Point {
    double z = 0.0;
    std::vector<std::pair<std::string, double>> values;
    nlohmann::json extra = nlohmann::json::object();
    std::vector<Failure> failures;

    void add(std::string q, double v) { values.emplace_back(std::move(q), v); }
};

void emit(Outcome& out, std::vector<Point>& points) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& p : points) {
        nlohmann::json o = {{"z", p.z}};
        for (const auto& [q, v] : p.values) {
            out.rows.push_back({p.z, q, v});
            o[q] = v;
        }
        for (auto& [k, v] : p.extra.items()) {
            o[k] = v;
        }
        arr.push_back(std::move(o));
        out.failures.insert(out.failures.end(), p.failures.begin(), p.failures.end());
    }
    out.document["points"] = std::move(arr);
}

nlohmann::json failures_json(const std::vector<Failure>& fs) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& f : fs) {
        a.push_back({{"invariant", f.invariant},
                     {"z", f.z},
                     {"params", f.params},
                     {"seed", f.seed},
                     {"value", f.value},
                     {"tolerance", f.tolerance}});
    }
    return a;
}

void check(Point& p, const std::string& invariant, double value, double tol, const std::string& params,
           std::uint64_t seed) {
    if (!(value <= tol)) {
        p.failures.push_back({invariant, p.z, params, seed, value, tol});
    }
}

std::string family_name(SchemeFamily f) { return f == SchemeFamily::ThreePoint ? "three-point" : "five-point"; }

Outcome run_catalog() {
    Outcome out;
    out.command = Command::Catalog;
    out.table_header = {"preset", "family", "parameters", "contractive"};
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : all_presets()) {
        out.table.push_back({std::string(p.name), family_name(p.family), std::string(p.parameters),
                             std::string(p.contractive)});
        arr.push_back({{"preset", p.name},
                       {"family", family_name(p.family)},
                       {"parameters", p.parameters},
                       {"contractive", p.contractive}});
    }
    out.document["presets"] = std::move(arr);
    return out;
}

Outcome run_verify_interior(const ExperimentConfig& c) {
    const SchemeChoice sch = resolve_scheme(c);
    const auto zs = resolve_z(c);
    const std::uint64_t seed = c.seed.value_or(1);
    const double tol = c.residual_tol.value_or(kDefaultResidualTol);
    constexpr int kSequences = 20;
    constexpr int kLength = 64;

    std::vector<Point> points(zs.size());
    parallel_for(zs.size(), thread_count(c), [&](std::size_t i) {
        Point& p = points[i];
        p.z = zs[i];
        const SchemeSpec s = sch.at(p.z);
        const std::string params = sch.params(p.z);
        const Decomposition dec = decomposition_for(s);
        const ContractivityVerdict cv = contractivity_verdict(dec);

        for (std::size_t k = 0; k < cv.eigenvalues.size(); ++k) {
            p.add("eigenvalue_" + std::to_string(k + 1), cv.eigenvalues[k]);
        }
        p.add("lambda_max", cv.lambda_max);
        p.add("contractive", cv.contractive ? 1.0 : 0.0);

        // numeric spectrum against the closed forms, sorted, relative to the matrix scale
        std::vector<double> closed = closed_form_eigenvalues(dec);
        for (std::size_t k = 0; k < closed.size(); ++k) {
            p.add("closed_form_" + std::to_string(k + 1), closed[k]);
        }
        std::vector<double> numeric = symmetric_eigenvalues(dec.M.matrix());
        std::sort(closed.begin(), closed.end());
        const double mscale = std::max(dec.M.matrix().max_abs(), 1e-300);
        double mismatch = 0.0;
        for (std::size_t k = 0; k < closed.size(); ++k) {
            mismatch = std::max(mismatch, std::abs(numeric[k] - closed[k]) / std::max(std::abs(closed[k]), mscale));
        }
        p.add("eigenvalue_mismatch", mismatch);
        check(p, "closed-form eigenvalues", mismatch, 1e-12, params, seed);

        if (sch.preset) {
            std::vector<double> named = preset_eigenvalues(*sch.preset, p.z);
            std::vector<double> general = closed_form_eigenvalues(dec);
            double d = 0.0;
            for (std::size_t k = 0; k < named.size(); ++k) {
                d = std::max(d, std::abs(named[k] - general[k]) / std::max(std::abs(general[k]), mscale));
            }
            p.add("named_formula_mismatch", d);
            check(p, "named eigenvalue formulas", d, 1e-12, params, seed);
        }

        const ConsistencyDefect cd = consistency_defect(s);
        p.add("consistency_defect", std::max(cd.zeroth, cd.first));
        check(p, "consistency", std::max(cd.zeroth, cd.first), 1e-14, params, seed);

        Rng rng(seed, i);
        double worst = 0.0;
        double scale = 1.0;
        for (int n = 0; n < kSequences; ++n) {
            GridFunction phi(0, rng.uniform_vector(kLength, -1.0, 1.0));
            scale = std::max(scale, phi.sup_norm() * phi.sup_norm());
            worst = std::max(worst, verify_decomposition_identity(s, dec, phi, 4, kLength - 4));
        }
        p.add("identity_residual", worst);
        check(p, "telescopic decomposition identity", worst, tol * scale, params, seed);
    });

    Outcome out;
    out.command = Command::VerifyInterior;
    emit(out, points);
    return out;
}

ClosureRule resolve_closure(const ExperimentConfig& c, SchemeFamily family, ClosureRule three, ClosureRule five) {
    if (c.closure) {
        return parse_closure(*c.closure);
    }
    return family == SchemeFamily::ThreePoint ? three : five;
}

/// r = 1 norm from --h0, or the unweighted norm when h0 is absent and `plain_default`.
std::function<WeightedNorm(const SchemeSpec&)> resolve_norm(const ExperimentConfig& c, bool plain_default) {
    if (!c.h0) {
        if (plain_default) {
            return [](const SchemeSpec&) { return WeightedNorm::unweighted(); };
        }
    } else if (*c.h0 != "optimal") {
        const double h = parse_number(*c.h0, "--h0");
        return [h](const SchemeSpec&) { return WeightedNorm::last_weight(h); };
    }
    return [](const SchemeSpec& s) {
        if (s.family == SchemeFamily::FivePoint) {
            return WeightedNorm::last_weight(0.5);
        }
        return WeightedNorm::last_weight(optimal_h0(s.z, s.nu));
    };
}

std::string norm_params(const WeightedNorm& n) {
    std::string s = ", r=" + std::to_string(n.r());
    for (double h : n.weights()) {
        s += ", h=" + fmt(h);
    }
    return s;
}

Outcome run_verify_boundary(const ExperimentConfig& c) {
    const SchemeChoice sch = resolve_scheme(c);
    const auto zs = resolve_z(c);
    const ClosureRule rule = resolve_closure(c, sch.family, ClosureRule::Extrap2Shared, ClosureRule::Extrap2Type2);
    const auto norm_for = resolve_norm(c, rule == ClosureRule::Extrap1);
    const std::uint64_t seed = c.seed.value_or(1);
    const double tol = c.residual_tol.value_or(kDefaultResidualTol);
    constexpr int kTrials = 20;

    std::vector<Point> points(zs.size());
    parallel_for(zs.size(), thread_count(c), [&](std::size_t i) {
        Point& p = points[i];
        p.z = zs[i];
        const SchemeSpec s = sch.at(p.z);
        const BoundaryClosure closure = make_closure(rule, s);
        const WeightedNorm norm = norm_for(s);
        const std::string params = sch.params(p.z) + ", closure=" + std::string(cli_name(rule)) + norm_params(norm);
        const SemiboundedPoint sp = semibounded_at(s, closure, norm);

        if (norm.r() == 1) {
            p.add("h0", norm.weights()[0]);
        }
        p.add("contractive", sp.contractive ? 1.0 : 0.0);
        for (std::size_t k = 0; k < sp.boundary_eigenvalues.size(); ++k) {
            p.add("boundary_eigenvalue_" + std::to_string(k + 1), sp.boundary_eigenvalues[k]);
        }
        p.add("lambda_max_boundary", sp.lambda_max_boundary);
        p.add("semibounded", sp.semibounded ? 1.0 : 0.0);
        if (sp.boundary.size() == 2 && sp.boundary(0, 0) != 0.0) {
            const RotatedDiagonal rd = rotate_to_diagonal(sp.boundary);
            p.add("diagonal_first", rd.first);
            p.add("diagonal_second", rd.gamma);
        }
        const std::size_t n = sp.boundary.size();
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                p.add("B" + std::to_string(a + 1) + std::to_string(b + 1), sp.boundary(a, b));
            }
        }
        p.extra["definiteness"] = to_string(sp.boundary_definiteness);
        p.extra["boundary_matrix_source"] = sp.closed_form ? "closed-form" : "assembled";
        if (sp.closed_form) {
            p.add("closed_vs_assembled", sp.closed_vs_assembled);
            check(p, "closed-form boundary matrix agrees with the assembled one", sp.closed_vs_assembled, 1e-12,
                  params, seed);
        }

        // exact global balance through one simulated step on random data
        Rng rng(seed, i);
        double worst = 0.0;
        for (int t = 0; t < kTrials; ++t) {
            SimConfig sc;
            sc.scheme = s;
            sc.closure = closure;
            sc.norm = norm;
            sc.n_steps = 1;
            sc.profile = Profile::from_values(rng.uniform_vector(32, -1.0, 1.0));
            sc.active_width = 32;
            sc.buffer_width = minimal_buffer(s, 1) + 4;
            const EnergyTrace tr = run(sc);
            worst = std::max(worst, std::abs(tr.balance_residuals[0]) / tr.scale);
        }
        p.add("balance_residual", worst);
        check(p, "global energy balance", worst, tol, params, seed);
    });

    Outcome out;
    out.command = Command::VerifyBoundary;
    out.document["closure"] = std::string(cli_name(rule));
    emit(out, points);
    return out;
}

Profile resolve_profile(const std::optional<std::string>& spec, Index active) {
    const std::string s = spec.value_or("gaussian");
    const auto parts = split(s, ':');
    const std::string& kind = parts[0];
    if (kind == "gaussian") {
        if (parts.size() == 1) {
            return Profile::gaussian(-static_cast<double>(active) / 4.0, static_cast<double>(active) / 40.0);
        }
        if (parts.size() == 3) {
            return Profile::gaussian(parse_number(parts[1], "--profile"), parse_number(parts[2], "--profile"));
        }
    } else if ((kind == "delta" || kind == "step") && parts.size() == 2) {
        const auto j = static_cast<Index>(parse_number(parts[1], "--profile"));
        return kind == "delta" ? Profile::delta(j) : Profile::step(j);
    }
    throw ConfigError("profile '" + s + "' should be gaussian, gaussian:CENTER:WIDTH, delta:J or step:J");
}

Outcome run_simulate(const ExperimentConfig& c) {
    const SchemeChoice sch = resolve_scheme(c);
    const auto zs = resolve_z(c);
    const ClosureRule rule = resolve_closure(c, sch.family, ClosureRule::Extrap1, ClosureRule::Extrap1);
    const auto norm_for = resolve_norm(c, rule == ClosureRule::Extrap1);
    const std::uint64_t seed = c.seed.value_or(1);
    const double tol = c.residual_tol.value_or(kDefaultResidualTol);
    const int steps = c.steps.value_or(200);
    const Index active = c.active.value_or(400);
    const Profile profile = resolve_profile(c.profile, active);

    std::vector<Point> points(zs.size());
    parallel_for(zs.size(), thread_count(c), [&](std::size_t i) {
        Point& p = points[i];
        p.z = zs[i];
        SimConfig sc;
        sc.scheme = sch.at(p.z);
        sc.closure = make_closure(rule, sc.scheme);
        sc.norm = norm_for(sc.scheme);
        sc.n_steps = steps;
        sc.profile = profile;
        sc.active_width = active;
        sc.buffer_width = minimal_buffer(sc.scheme, steps);
        const std::string params =
            sch.params(p.z) + ", closure=" + std::string(cli_name(rule)) + norm_params(sc.norm);
        const EnergyTrace tr = run(sc);

        double worst = 0.0;
        double increase = 0.0;
        for (std::size_t n = 0; n < tr.balance_residuals.size(); ++n) {
            worst = std::max(worst, std::abs(tr.balance_residuals[n]));
            increase = std::max(increase, tr.norms_sq[n + 1] - tr.norms_sq[n]);
        }
        p.add("max_balance_residual", worst);
        p.add("max_norm_increase", increase);
        p.add("nonincreasing", increase <= tol * tr.scale ? 1.0 : 0.0);
        p.add("scale", tr.scale);
        for (std::size_t n = 0; n < tr.norms_sq.size(); ++n) {
            p.add("norm_sq@" + std::to_string(n), tr.norms_sq[n]);
        }
        for (std::size_t n = 0; n < tr.boundary_energies.size(); ++n) {
            p.add("boundary_energy@" + std::to_string(n), tr.boundary_energies[n]);
        }
        check(p, "global energy balance", worst, tol * tr.scale, params, seed);
    });

    Outcome out;
    out.command = Command::Simulate;
    out.document["closure"] = std::string(cli_name(rule));
    out.document["steps"] = steps;
    emit(out, points);
    return out;
}

Outcome run_refute(const ExperimentConfig& c) {
    const std::string scheme = c.scheme.value_or("strang");
    const std::uint64_t seed = c.seed.value_or(1);
    const int r = c.r.value_or(1);
    if (r < 0) {
        throw ConfigError("--r must be nonnegative");
    }
    Outcome out;
    out.command = Command::Refute;
    Point p;

    if (scheme == "lax-wendroff") {
        // non-refutation sanity case: the same construction for a scheme known to be semibounded
        const ClosureRule rule = c.closure ? parse_closure(*c.closure) : ClosureRule::Extrap2Shared;
        const double h = c.h0 ? parse_number(*c.h0, "--h0") : 0.5;
        Matrix H(static_cast<std::size_t>(r));
        for (std::size_t k = 0; k < H.size(); ++k) {
            H(k, k) = h;
        }
        const SymbolicForm f = symbolic_derivative_form(lax_wendroff_derivative_stencil(), rule, r);
        const Matrix S = r == 0 ? f.evaluate(std::span<const double>{}) : f.evaluate(H);
        const double lm = lambda_max(S);
        p.add("lambda_max", lm);
        out.document["scheme"] = scheme;
        out.document["closure"] = std::string(cli_name(rule));
        out.document["lambda_max"] = lm;
        out.document["definiteness"] = to_string(classify(lm));
        out.rows = {{0.0, "lambda_max", lm}};
        return out;
    }
    if (scheme != "strang") {
        throw ConfigError("refute supports --scheme strang (obstruction) or lax-wendroff (sanity check)");
    }
    const int order = c.order.value_or(1);
    const std::string params = "scheme=strang, order=" + std::to_string(order) + ", r=" + std::to_string(r);
    const Certificate cert = infeasibility_certificate(r, order);
    out.document["certificate"] = to_json(cert);
    p.add("chain_length", static_cast<double>(cert.chain.size()));
    for (const auto& step : cert.chain) {
        if (!step.form_match) {
            p.failures.push_back({"reduction form-match at r=" + std::to_string(step.r), 0.0, params, seed, 1.0, 0.0});
        }
    }

    const SoundnessReport sound = certificate_soundness(cert, 1000, seed);
    p.add("soundness_trials", static_cast<double>(sound.trials));
    p.add("soundness_positive", static_cast<double>(sound.positive));
    p.add("soundness_min_lambda_max", sound.min_lambda_max);
    out.document["soundness"] = {{"trials", sound.trials},
                                 {"positive", sound.positive},
                                 {"min_lambda_max", sound.min_lambda_max}};
    if (sound.positive != sound.trials) {
        p.failures.push_back({"certificate soundness", 0.0, params, seed,
                              static_cast<double>(sound.trials - sound.positive), 0.0});
    }

    if (r <= 4) {
        const int restarts = c.restarts.value_or(200);
        const RefutationResult rr = numeric_refutation(r, order, restarts, seed, thread_count(c));
        p.add("best_lambda_max", rr.best_lambda_max);
        nlohmann::json H = nlohmann::json::array();
        for (std::size_t a = 0; a < rr.best_H.size(); ++a) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t b = 0; b < rr.best_H.size(); ++b) {
                row.push_back(rr.best_H(a, b));
            }
            H.push_back(std::move(row));
        }
        out.document["numeric_refutation"] = {{"restarts", restarts},
                                              {"best_lambda_max", rr.best_lambda_max},
                                              {"best_restart", rr.best_restart},
                                              {"best_H", H}};
        if (!(rr.best_lambda_max > 0.0)) {
            p.failures.push_back({"numeric refutation positivity", 0.0, params, seed, -rr.best_lambda_max, 0.0});
        }
    }
    for (const auto& [q, v] : p.values) {
        out.rows.push_back({0.0, q, v});
    }
    out.failures = p.failures;
    return out;
}

} // namespace

Outcome run_command(const ExperimentConfig& c) {
    if (!c.command) {
        throw ConfigError("no command given");
    }
    if (c.steps && *c.steps < 0) {
        throw ConfigError("--steps must be nonnegative");
    }
    if (c.restarts && *c.restarts < 1) {
        throw ConfigError("--restarts must be at least 1");
    }
    if (c.residual_tol && !(*c.residual_tol > 0.0)) {
        throw ConfigError("--residual-tol must be positive");
    }
    Outcome out;
    switch (*c.command) {
    case Command::Catalog: out = run_catalog(); break;
    case Command::VerifyInterior: out = run_verify_interior(c); break;
    case Command::VerifyBoundary: out = run_verify_boundary(c); break;
    case Command::Simulate: out = run_simulate(c); break;
    case Command::Refute: out = run_refute(c); break;
    }
    out.document["command"] = std::string(to_string(*c.command));
    if (c.seed) {
        out.document["seed"] = *c.seed;
    }
    out.document["failures"] = failures_json(out.failures);
    return out;
}

} // namespace fdstab::app
