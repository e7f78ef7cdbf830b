#pragma once

#include "fdstab/boundary.hpp"
#include "fdstab/grid_function.hpp"
#include "fdstab/stencil.hpp"

#include <array>
#include <vector>

namespace fdstab {

struct Profile {
    enum class Kind { Gaussian, Delta, Step, Custom };

    Kind kind = Kind::Gaussian;
    double center = -20.0;
    double width = 5.0;
    Index j0 = 0;                ///< delta location, or first index of the step
    std::vector<double> custom;  ///< values ending at j = 0

    static Profile gaussian(double center, double width) { return {Kind::Gaussian, center, width, 0, {}}; }
    static Profile delta(Index j) { return {Kind::Delta, 0.0, 0.0, j, {}}; }
    static Profile step(Index j) { return {Kind::Step, 0.0, 0.0, j, {}}; }
    static Profile from_values(std::vector<double> v) { return {Kind::Custom, 0.0, 0.0, 0, std::move(v)}; }
};

struct SimConfig {
    SchemeSpec scheme;
    BoundaryClosure closure;
    WeightedNorm norm;
    int n_steps = 100;
    Profile profile;
    /// Zero cells on the far left; must be at least reach * n_steps.
    Index buffer_width = 0;
    /// Cells from the buffer up to and including j = 0.
    Index active_width = 200;
};

/// buffer_width = reach * n_steps, the smallest that keeps the left edge invisible.
Index minimal_buffer(const SchemeSpec& scheme, int n_steps);

/// Grid on [-(buffer + active) + 1, 0] holding the initial profile, no ghosts.
GridFunction init_grid(const SimConfig& config);

/// One time step: ghosts from the closure, scheme on every j <= 0, ghosts dropped.
GridFunction step(const SimConfig& config, const GridFunction& state);

struct EnergyTrace {
    std::vector<double> norms_sq;                      ///< ||u^n||_H^2, n = 0 .. n_steps
    std::vector<std::array<double, 3>> boundary_values;///< (u_0, D u_0, D^2 u_0) at n = 0 .. n_steps
    /// (||u^{n+1}||_H^2 - ||u^n||_H^2 - sum_{j<=-r} S_j^n) - E^n, n = 0 .. n_steps-1
    std::vector<double> balance_residuals;
    std::vector<double> boundary_energies;             ///< E^n
    std::vector<double> interior_dissipation;          ///< sum_{j <= -r} S_j^n
    std::vector<double> total_dissipation;             ///< sum_{j <= 0} S_j^n
    double scale = 1.0;                                ///< max(1, ||u^0||_inf^2)
    GridFunction final_state;
};

EnergyTrace run(const SimConfig& config);

/// S_j written out directly from the scheme parameters (no matrix form).
double direct_dissipation(const SchemeSpec& scheme, const GridFunction& phi, Index j);

} // namespace fdstab
