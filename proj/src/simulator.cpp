#include "fdstab/simulator.hpp"

#include "fdstab/decomposition.hpp"
#include "fdstab/error.hpp"
#include "fdstab/summation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fdstab {

Index minimal_buffer(const SchemeSpec& scheme, int n_steps) {
    return static_cast<Index>(scheme.reach()) * n_steps;
}

GridFunction init_grid(const SimConfig& c) {
    if (c.n_steps < 0) {
        throw ConfigError("n_steps must be nonnegative");
    }
    if (c.buffer_width < minimal_buffer(c.scheme, c.n_steps)) {
        throw ConfigError("buffer width " + std::to_string(c.buffer_width) + " is below reach * n_steps = " +
                          std::to_string(minimal_buffer(c.scheme, c.n_steps)));
    }
    if (c.active_width < 3) {
        throw ConfigError("active region needs at least three points");
    }
    const Index j_min = -(c.buffer_width + c.active_width) + 1;
    const Index first_active = j_min + c.buffer_width;
    std::vector<double> v(static_cast<std::size_t>(c.buffer_width + c.active_width), 0.0);
    auto at = [&](Index j) -> double& { return v[static_cast<std::size_t>(j - j_min)]; };

    const Profile& p = c.profile;
    switch (p.kind) {
    case Profile::Kind::Gaussian:
        if (!(p.width > 0.0)) {
            throw ConfigError("gaussian width must be positive");
        }
        for (Index j = j_min; j <= 0; ++j) {
            const double s = (static_cast<double>(j) - p.center) / p.width;
            const double g = std::exp(-s * s);
            at(j) = g < 1e-300 ? 0.0 : g;
        }
        break;
    case Profile::Kind::Delta:
        if (p.j0 < first_active || p.j0 > 0) {
            throw ConfigError("delta location outside the active region");
        }
        at(p.j0) = 1.0;
        break;
    case Profile::Kind::Step:
        if (p.j0 < first_active || p.j0 > 0) {
            throw ConfigError("step location outside the active region");
        }
        for (Index j = p.j0; j <= 0; ++j) {
            at(j) = 1.0;
        }
        break;
    case Profile::Kind::Custom: {
        const Index n = static_cast<Index>(p.custom.size());
        if (n > c.active_width) {
            throw ConfigError("custom profile longer than the active region");
        }
        for (Index k = 0; k < n; ++k) {
            at(-n + 1 + k) = p.custom[static_cast<std::size_t>(k)];
        }
        break;
    }
    }
    for (Index j = j_min; j < first_active; ++j) {
        if (at(j) != 0.0) {
            throw ConfigError("initial profile reaches into the zero buffer at j = " + std::to_string(j));
        }
    }
    return GridFunction(j_min, std::move(v), 0);
}

GridFunction step(const SimConfig& c, const GridFunction& state) {
    const GridFunction filled = fill_ghosts(c.closure, state.without_ghosts());
    return apply_scheme(c.scheme, filled, LeftEdge::ZeroExtend);
}

double direct_dissipation(const SchemeSpec& s, const GridFunction& p, Index j) {
    auto lap = [&](Index k) { return p.value_or_zero(k - 1) - 2.0 * p.value_or_zero(k) + p.value_or_zero(k + 1); };
    if (s.family == SchemeFamily::ThreePoint) {
        const double a1 = -0.5 * (s.nu - s.z * s.z);
        const double a2 = 0.25 * (s.nu * s.nu - s.z * s.z);
        const double dj = p.value_or_zero(j) - p.value_or_zero(j - 1);
        const double dj1 = p.value_or_zero(j + 1) - p.value_or_zero(j);
        const double lj = lap(j);
        return a1 * (dj * dj + dj1 * dj1) + a2 * lj * lj;
    }
    const double z = s.z;
    const double a1 = 0.25 * z * z * (z * z - 1.0) + 2.0 * z * s.sigma + 2.0 * s.tau;
    const double a2 = -0.25 * z * s.sigma + 0.5 * s.sigma * s.sigma - 0.5 * z * z * s.tau;
    const double a3 = -0.25 * s.sigma * s.sigma + s.tau * s.tau;
    const double lm = lap(j - 1);
    const double l0 = lap(j);
    const double lp = lap(j + 1);
    const double dl0 = l0 - lm;
    const double dl1 = lp - l0;
    const double l2 = lm - 2.0 * l0 + lp;
    return a1 / 3.0 * (lm * lm + l0 * l0 + lp * lp) + a2 * (dl0 * dl0 + dl1 * dl1) + a3 * l2 * l2;
}

EnergyTrace run(const SimConfig& c) {
    if (c.closure.ghost_count != c.scheme.reach()) {
        throw ConfigError("closure ghost count does not match the scheme reach");
    }
    const Decomposition dec = decomposition_for(c.scheme);
    const int L = c.scheme.reach();
    const int r = c.norm.r();

    EnergyTrace tr;
    GridFunction u = init_grid(c);
    tr.scale = std::max(1.0, u.sup_norm() * u.sup_norm());

    auto record_state = [&](const GridFunction& s) {
        tr.norms_sq.push_back(weighted_norm_sq(c.norm, s));
        const double u0 = s[0];
        const double um1 = s[-1];
        const double um2 = s[-2];
        tr.boundary_values.push_back({u0, u0 - um1, u0 - 2.0 * um1 + um2});
    };
    record_state(u);

    for (int n = 0; n < c.n_steps; ++n) {
        const GridFunction filled = fill_ghosts(c.closure, u);
        CompensatedSum interior;
        CompensatedSum total;
        for (Index j = u.j_min() - L; j <= 0; ++j) {
            const double sj = direct_dissipation(c.scheme, filled, j);
            total += sj;
            if (j <= -r) {
                interior += sj;
            }
        }
        const double e = boundary_energy(dec, c.norm, filled);
        GridFunction next = apply_scheme(c.scheme, filled, LeftEdge::ZeroExtend);
        for (double v : next.values()) {
            if (!std::isfinite(v)) {
                throw NonFiniteError("simulation produced a non-finite value at step " + std::to_string(n + 1));
            }
        }
        const double before = tr.norms_sq.back();
        record_state(next);
        const double after = tr.norms_sq.back();
        tr.balance_residuals.push_back((after - before - interior.value()) - e);
        tr.boundary_energies.push_back(e);
        tr.interior_dissipation.push_back(interior.value());
        tr.total_dissipation.push_back(total.value());
        u = std::move(next);
    }
    tr.final_state = std::move(u);
    return tr;
}

} // namespace fdstab
