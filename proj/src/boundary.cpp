#include "fdstab/boundary.hpp"

#include "fdstab/error.hpp"
#include "fdstab/parallel.hpp"
#include "fdstab/summation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fdstab {

std::string_view to_string(ClosureRule rule) {
    switch (rule) {
    case ClosureRule::Extrap1: return "Extrap1";
    case ClosureRule::Extrap2Shared: return "Extrap2Shared";
    case ClosureRule::Extrap2Type1: return "Extrap2Type1";
    case ClosureRule::Extrap2Type2: return "Extrap2Type2";
    case ClosureRule::TranslatoryExtrap2: return "TranslatoryExtrap2";
    }
    return "?";
}

std::string_view cli_name(ClosureRule rule) {
    switch (rule) {
    case ClosureRule::Extrap1: return "extrap1";
    case ClosureRule::Extrap2Shared: return "extrap2";
    case ClosureRule::Extrap2Type1: return "type1";
    case ClosureRule::Extrap2Type2: return "type2";
    case ClosureRule::TranslatoryExtrap2: return "translatory2";
    }
    return "?";
}

ClosureRule parse_closure(std::string_view name) {
    for (ClosureRule r : {ClosureRule::Extrap1, ClosureRule::Extrap2Shared, ClosureRule::Extrap2Type1,
                          ClosureRule::Extrap2Type2, ClosureRule::TranslatoryExtrap2}) {
        if (cli_name(r) == name || to_string(r) == name) {
            return r;
        }
    }
    throw ConfigError("unknown closure '" + std::string(name) +
                      "'; expected extrap1, extrap2, type1, type2 or translatory2");
}

BoundaryClosure make_closure(ClosureRule rule, const SchemeSpec& scheme) {
    const bool five = scheme.family == SchemeFamily::FivePoint;
    switch (rule) {
    case ClosureRule::Extrap1:
        return {rule, scheme.reach()};
    case ClosureRule::Extrap2Shared:
        if (five) {
            throw ConfigError("extrap2 fixes only Phi_1; five-point schemes also need Phi_2 "
                              "(use type1, type2 or translatory2)");
        }
        return {rule, 1};
    case ClosureRule::Extrap2Type1:
    case ClosureRule::Extrap2Type2:
    case ClosureRule::TranslatoryExtrap2:
        if (!five) {
            throw ConfigError(std::string(cli_name(rule)) +
                              " defines two ghost values; three-point schemes use extrap1 or extrap2");
        }
        return {rule, 2};
    }
    throw InternalError("unknown closure rule");
}

std::vector<double> ghost_values(const BoundaryClosure& closure, const GridFunction& phi) {
    const Index b = phi.j_boundary();
    if (b - phi.j_min() + 1 < 3) {
        throw ConfigError("closure needs at least three interior points");
    }
    const double p0 = phi[b];
    const double pm1 = phi[b - 1];
    const double pm2 = phi[b - 2];
    const double p1 = 2.0 * p0 - pm1;  // Lap Phi_0 = 0
    const double lap_m1 = pm2 - 2.0 * pm1 + p0;

    switch (closure.rule) {
    case ClosureRule::Extrap1:
        return std::vector<double>(static_cast<std::size_t>(closure.ghost_count), p0);
    case ClosureRule::Extrap2Shared:
        return {p1};
    case ClosureRule::Extrap2Type1:
        // Lap Phi_1 = Lap Phi_{-1}
        return {p1, lap_m1 - p0 + 2.0 * p1};
    case ClosureRule::Extrap2Type2:
        // Lap Phi_1 = -Lap Phi_{-1}
        return {p1, -lap_m1 - p0 + 2.0 * p1};
    case ClosureRule::TranslatoryExtrap2:
        return {p1, 2.0 * p1 - p0};
    }
    throw InternalError("unknown closure rule");
}

GridFunction fill_ghosts(const BoundaryClosure& closure, const GridFunction& phi) {
    const auto g = ghost_values(closure, phi);
    return phi.with_ghosts(g);
}

WeightedNorm::WeightedNorm(int r, std::vector<double> weights) : r_(r), weights_(std::move(weights)) {
    if (r < 0 || static_cast<std::size_t>(r) != weights_.size()) {
        throw ConfigError("weighted norm: r = " + std::to_string(r) + " needs exactly r weights");
    }
    for (double h : weights_) {
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw ConfigError("weighted norm: quadrature weights must be positive and finite");
        }
    }
}

double WeightedNorm::weight(Index j) const noexcept {
    if (j >= 1) {
        return 0.0;
    }
    if (j <= -r_) {
        return 1.0;
    }
    return weights_[static_cast<std::size_t>(j + r_ - 1)];
}

double weighted_norm_sq(const WeightedNorm& norm, const GridFunction& phi) {
    const Index b = phi.j_boundary();
    CompensatedSum acc;
    for (Index j = phi.j_min(); j <= b; ++j) {
        const double v = phi[j];
        acc += norm.weight(j - b) * v * v;
    }
    return acc.value();
}

double boundary_energy(const Decomposition& dec, const WeightedNorm& norm, const GridFunction& phi) {
    const int L = dec.family == SchemeFamily::ThreePoint ? 1 : 2;
    if (phi.ghost_count() < L) {
        throw ConfigError("boundary energy needs " + std::to_string(L) + " ghost values");
    }
    const Index b = phi.j_boundary();
    const int r = norm.r();
    double e = 0.0;
    for (Index j = -r; j <= 0; ++j) {
        const double dh = norm.weight(j) - norm.weight(j + 1);
        if (dh != 0.0) {
            e += dh * telescopic_term(dec, phi, b + j);
        }
    }
    for (Index j = -r + 1; j <= 0; ++j) {
        e += norm.weight(j) * dissipative_term(dec, phi, b + j);
    }
    return e;
}

double boundary_energy(const SchemeSpec& scheme, const BoundaryClosure& closure,
                       const WeightedNorm& norm, const GridFunction& phi) {
    const GridFunction filled = fill_ghosts(closure, phi.without_ghosts());
    return boundary_energy(decomposition_for(scheme), norm, filled);
}

double optimal_h0(double z, double nu) {
    if (z == 0.0) {
        throw ConfigError("optimal h0 is undefined at z = 0 (it grows without bound as z -> 0)");
    }
    return 0.5 * (1.0 - z + nu / z);
}

bool has_closed_form_boundary_matrix(const SchemeSpec& scheme, const BoundaryClosure& closure,
                                     const WeightedNorm& norm) {
    if (norm.r() != 1) {
        return false;
    }
    if (scheme.family == SchemeFamily::ThreePoint) {
        return closure.rule == ClosureRule::Extrap2Shared;
    }
    return (closure.rule == ClosureRule::Extrap2Type1 || closure.rule == ClosureRule::Extrap2Type2) &&
           norm.weights()[0] == 0.5;
}

QuadraticForm boundary_matrix(const SchemeSpec& scheme, const BoundaryClosure& closure,
                              const WeightedNorm& norm) {
    if (!has_closed_form_boundary_matrix(scheme, closure, norm)) {
        throw ConfigError("no closed-form boundary matrix for " + std::string(to_string(scheme.family)) +
                          " + " + std::string(cli_name(closure.rule)) + " with r = " +
                          std::to_string(norm.r()) +
                          "; supported: three-point + extrap2 (r = 1, any h0), "
                          "five-point + type1 (r = 1, h0 = 1/2), five-point + type2 (r = 1, h0 = 1/2)");
    }
    const double z = scheme.z;
    const double z2 = z * z;
    if (scheme.family == SchemeFamily::ThreePoint) {
        const double h0 = norm.weights()[0];
        const double nu = scheme.nu;
        const double off = z * (0.5 - h0) + 0.5 * nu;
        return QuadraticForm(Matrix{{-z, off}, {off, h0 * z2 - 0.5 * nu * (1.0 + z)}}, {"Phi_0", "DPhi_0"});
    }
    const double s = scheme.sigma;
    const double t = scheme.tau;
    const double common = 2.0 * t / 3.0 + s * t + 5.0 * z * s / 12.0 - 0.5 * z2 * t - z2 * (1.0 - z2) / 12.0;
    Matrix b(3);
    b(0, 0) = -z;
    b(0, 1) = b(1, 0) = 0.5 * z2;
    b(1, 1) = -0.5 * z2 * z - s;
    if (closure.rule == ClosureRule::Extrap2Type1) {
        b(0, 2) = b(2, 0) = 0.5 * s;
        b(1, 2) = b(2, 1) = -0.5 * z * s;
        b(2, 2) = common + 2.0 * t * t;
    } else {
        b(0, 2) = b(2, 0) = -t;
        b(1, 2) = b(2, 1) = z * t;
        b(2, 2) = common + 0.5 * s * s;
    }
    return QuadraticForm(std::move(b), {"Phi_0", "DPhi_0", "D2Phi_0"});
}

std::vector<double> values_from_backward_differences(std::span<const double> coords) {
    const std::size_t n = coords.size();
    std::vector<double> out(n, 0.0);  // out[k] = Phi_{-(n-1)+k}
    // Row m of Pascal's triangle with alternating signs.
    std::vector<double> binom{1.0};
    for (std::size_t m = 0; m < n; ++m) {
        double v = 0.0;
        for (std::size_t k = 0; k <= m; ++k) {
            v += ((k % 2) ? -binom[k] : binom[k]) * coords[k];
        }
        out[n - 1 - m] = v;
        std::vector<double> next(binom.size() + 1, 0.0);
        for (std::size_t k = 0; k < binom.size(); ++k) {
            next[k] += binom[k];
            next[k + 1] += binom[k];
        }
        binom = std::move(next);
    }
    return out;
}

QuadraticForm assemble_boundary_matrix(const SchemeSpec& scheme, const BoundaryClosure& closure,
                                       const WeightedNorm& norm) {
    const int L = scheme.reach();
    const Index lo = std::min<Index>(-norm.r() - (L - 1), -L);
    const std::size_t n = static_cast<std::size_t>(1 - lo);
    const Decomposition dec = decomposition_for(scheme);
    const Index pad = 3;

    auto energy_of = [&](const std::vector<double>& coords) {
        const auto window = values_from_backward_differences(coords);
        std::vector<double> vals(static_cast<std::size_t>(pad), 0.0);
        vals.insert(vals.end(), window.begin(), window.end());
        const GridFunction phi(lo - pad, std::move(vals), 0);
        return boundary_energy(dec, norm, fill_ghosts(closure, phi));
    };

    std::vector<double> diag(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> e(n, 0.0);
        e[k] = 1.0;
        diag[k] = energy_of(e);
    }
    Matrix b(n);
    for (std::size_t k = 0; k < n; ++k) {
        b(k, k) = diag[k];
        for (std::size_t l = k + 1; l < n; ++l) {
            std::vector<double> e(n, 0.0);
            e[k] = 1.0;
            e[l] = 1.0;
            b(k, l) = b(l, k) = 0.5 * (energy_of(e) - diag[k] - diag[l]);
        }
    }
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < n; ++k) {
        labels.push_back(k == 0 ? "Phi_0" : (k == 1 ? "DPhi_0" : "D" + std::to_string(k) + "Phi_0"));
    }
    return QuadraticForm(std::move(b), std::move(labels));
}

RotatedDiagonal rotate_to_diagonal(const Matrix& b2) {
    if (b2.size() != 2 || b2(0, 0) == 0.0) {
        throw ConfigError("rotation needs a 2x2 matrix with nonzero leading entry");
    }
    Matrix r{{1.0, -b2(0, 1) / b2(0, 0)}, {0.0, 1.0}};
    const Matrix d = r.transposed() * b2 * r;
    return {d(0, 0), d(1, 1), std::max(std::abs(d(0, 1)), std::abs(d(1, 0)))};
}

SemiboundedPoint semibounded_at(const SchemeSpec& scheme, const BoundaryClosure& closure,
                                const WeightedNorm& norm, double tol) {
    SemiboundedPoint p;
    p.z = scheme.z;
    const auto cv = contractivity_verdict(decomposition_for(scheme), tol);
    p.contractive = cv.contractive;
    p.interior_eigenvalues = cv.eigenvalues;

    const QuadraticForm assembled = assemble_boundary_matrix(scheme, closure, norm);
    if (has_closed_form_boundary_matrix(scheme, closure, norm)) {
        const QuadraticForm closed = boundary_matrix(scheme, closure, norm);
        p.closed_form = true;
        p.closed_vs_assembled = max_abs_diff(closed.matrix(), assembled.matrix());
        p.boundary = closed.matrix();
    } else {
        p.boundary = assembled.matrix();
    }
    p.boundary_eigenvalues = symmetric_eigenvalues(p.boundary);
    p.lambda_max_boundary = p.boundary_eigenvalues.back();
    p.boundary_definiteness = classify(p.lambda_max_boundary, tol);
    p.semibounded = p.contractive && p.lambda_max_boundary <= tol;
    return p;
}

std::vector<SemiboundedPoint> semibounded_verdict(const SchemeAt& scheme_at, ClosureRule rule,
                                                  const NormFor& norm_for,
                                                  const std::vector<double>& z_grid, unsigned threads,
                                                  double tol) {
    std::vector<SemiboundedPoint> out(z_grid.size());
    parallel_for(z_grid.size(), threads, [&](std::size_t i) {
        const SchemeSpec s = scheme_at(z_grid[i]);
        out[i] = semibounded_at(s, make_closure(rule, s), norm_for(s), tol);
    });
    return out;
}

} // namespace fdstab
