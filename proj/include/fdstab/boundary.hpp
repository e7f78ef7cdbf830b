#pragma once

#include "fdstab/decomposition.hpp"
#include "fdstab/grid_function.hpp"
#include "fdstab/linalg.hpp"
#include "fdstab/stencil.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fdstab {

/// Extrapolation rules defining the ghost values Phi_1 (and Phi_2).
enum class ClosureRule {
    Extrap1,             ///< Phi_1 = Phi_0, and Phi_2 = Phi_1 when a second ghost is needed
    Extrap2Shared,       ///< Lap Phi_0 = 0 (three-point schemes)
    Extrap2Type1,        ///< Lap Phi_0 = 0 and D0 Lap Phi_0 = 0
    Extrap2Type2,        ///< Lap Phi_0 = 0 and Lap^2 Phi_0 = 0
    TranslatoryExtrap2,  ///< Lap Phi_1 = Lap Phi_0 = 0
};

std::string_view to_string(ClosureRule rule);
/// Command-line names: extrap1, extrap2, type1, type2, translatory2.
std::string_view cli_name(ClosureRule rule);
ClosureRule parse_closure(std::string_view name);

struct BoundaryClosure {
    ClosureRule rule = ClosureRule::Extrap1;
    int ghost_count = 1;
};

/// Pairs the rule with the scheme's right reach. Rejects pairings that leave a
/// ghost undetermined or define more ghosts than the stencil uses.
BoundaryClosure make_closure(ClosureRule rule, const SchemeSpec& scheme);

/// Ghost values (Phi_{b+1}, ..., Phi_{b+ghost_count}) from the interior of phi.
std::vector<double> ghost_values(const BoundaryClosure& closure, const GridFunction& phi);

/// Copy of phi (existing ghosts dropped) with the closure's ghosts appended.
/// Needs at least three interior points.
GridFunction fill_ghosts(const BoundaryClosure& closure, const GridFunction& phi);

/// Quadrature weights h_{-r+1} ... h_0 of the boundary-modified norm; h_j = 1 for
/// j <= -r, and the conventions h_{-r} = 1, h_1 = 0 are applied by weight().
class WeightedNorm {
public:
    WeightedNorm() = default;
    /// weights[k] is h_{-r+1+k}. Throws ConfigError unless r == weights.size() and all > 0.
    WeightedNorm(int r, std::vector<double> weights);

    static WeightedNorm unweighted() { return {}; }
    /// r = 1 with the single weight h_0.
    static WeightedNorm last_weight(double h0) { return WeightedNorm(1, {h0}); }

    int r() const noexcept { return r_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    /// h_j relative to the boundary index (j <= 0 interior, j = 1 gives 0).
    double weight(Index j) const noexcept;

private:
    int r_ = 0;
    std::vector<double> weights_;
};

/// sum_{j <= -r} Phi_j^2 + sum h_j Phi_j^2 over the non-ghost part; index 0 is phi.j_boundary().
double weighted_norm_sq(const WeightedNorm& norm, const GridFunction& phi);

/// E = sum_{j=-r}^{0} (h_j - h_{j+1}) T_j + sum_{j=-r+1}^{0} h_j S_j.
/// phi must carry the closure's ghosts and enough points to the left.
double boundary_energy(const Decomposition& dec, const WeightedNorm& norm, const GridFunction& phi);

/// Convenience overload: fills the ghosts of a ghost-free phi first.
double boundary_energy(const SchemeSpec& scheme, const BoundaryClosure& closure,
                       const WeightedNorm& norm, const GridFunction& phi);

/// h_0 = (1 - z + nu/z) / 2. Throws ConfigError at z = 0.
double optimal_h0(double z, double nu);

/// Closed-form boundary matrix in (Phi_0, D Phi_0) or (Phi_0, D Phi_0, D^2 Phi_0).
/// Supported: three-point + extrap2 with r = 1 (any h_0); five-point + type1 or
/// type2 with r = 1, h_0 = 1/2. Anything else throws ConfigError.
QuadraticForm boundary_matrix(const SchemeSpec& scheme, const BoundaryClosure& closure,
                              const WeightedNorm& norm);

bool has_closed_form_boundary_matrix(const SchemeSpec& scheme, const BoundaryClosure& closure,
                                     const WeightedNorm& norm);

/// Boundary matrix obtained by polarizing boundary_energy in the basis
/// (Phi_0, D Phi_0, ..., D^{n-1} Phi_0). Works for every valid pairing.
QuadraticForm assemble_boundary_matrix(const SchemeSpec& scheme, const BoundaryClosure& closure,
                                       const WeightedNorm& norm);

/// Phi_{-m} = sum_k C(m,k) (-1)^k D^k Phi_0: grid values on [-(n-1), 0] from the
/// backward-difference coordinates.
std::vector<double> values_from_backward_differences(std::span<const double> coords);

/// Congruence with R = [[1, -B12/B11], [0, 1]]: R^T B R = diag(B11, gamma).
struct RotatedDiagonal {
    double first = 0.0;
    double gamma = 0.0;
    double off_diagonal = 0.0;  ///< residual (0 up to rounding)
};

RotatedDiagonal rotate_to_diagonal(const Matrix& b2);

struct SemiboundedPoint {
    double z = 0.0;
    bool contractive = false;
    std::vector<double> interior_eigenvalues;
    std::vector<double> boundary_eigenvalues;  ///< ascending
    double lambda_max_boundary = 0.0;
    Definiteness boundary_definiteness = Definiteness::Indefinite;
    bool semibounded = false;
    bool closed_form = false;  ///< B from the closed form (else assembled)
    /// max |closed form - assembled| when both exist, else 0
    double closed_vs_assembled = 0.0;
    Matrix boundary;
};

SemiboundedPoint semibounded_at(const SchemeSpec& scheme, const BoundaryClosure& closure,
                                const WeightedNorm& norm, double tol = kTolPsd);

using SchemeAt = std::function<SchemeSpec(double z)>;
using NormFor = std::function<WeightedNorm(const SchemeSpec&)>;

/// One verdict per z, in grid order; z points are evaluated on `threads` workers.
std::vector<SemiboundedPoint> semibounded_verdict(const SchemeAt& scheme_at, ClosureRule rule,
                                                  const NormFor& norm_for,
                                                  const std::vector<double>& z_grid,
                                                  unsigned threads = 1, double tol = kTolPsd);

} // namespace fdstab
