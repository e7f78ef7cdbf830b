#pragma once

#include "fdstab/grid_function.hpp"

#include <string_view>
#include <vector>

namespace fdstab {

/// Normalized difference operators (grid spacing 1).
enum class DiffKind {
    D,      ///< backward difference  Phi_j - Phi_{j-1}
    D0,     ///< centered difference  (Phi_{j+1} - Phi_{j-1}) / 2
    Lap,    ///< discrete Laplacian   Phi_{j-1} - 2 Phi_j + Phi_{j+1}
    D0Lap,  ///< third difference     D0 applied to Lap
    Lap2,   ///< fourth difference    Lap applied to Lap
};

std::string_view to_string(DiffKind kind);

/// Evaluates one difference operator at j. Throws IndexError when the stencil
/// leaves the grid.
double apply_diff(DiffKind kind, const GridFunction& phi, Index j);

enum class SchemeFamily { ThreePoint, FivePoint };

std::string_view to_string(SchemeFamily family);

/// Explicit one-step scheme  u^{n+1}_j = sum_l a_l(z) u^n_{j+l}.
///
/// ThreePoint:  A = I - z D0 + (nu/2) Lap
/// FivePoint:   A = I - z D0 + (z^2/2) Lap + sigma D0 Lap + tau Lap^2
struct SchemeSpec {
    SchemeFamily family = SchemeFamily::ThreePoint;
    double z = 0.0;
    double nu = 0.0;     ///< three-point only
    double sigma = 0.0;  ///< five-point only
    double tau = 0.0;    ///< five-point only
    /// a_{-reach} ... a_{reach}
    std::vector<double> coeffs;

    /// Stencil half-width: l_- = l_+ = 1 or 2.
    int reach() const noexcept { return family == SchemeFamily::ThreePoint ? 1 : 2; }
    double coeff(int l) const { return coeffs.at(static_cast<std::size_t>(l + reach())); }
};

struct SchemeParams {
    double nu = 0.0;
    double sigma = 0.0;
    double tau = 0.0;
};

SchemeSpec build_three_point(double z, double nu);
SchemeSpec build_five_point(double z, double sigma, double tau);
SchemeSpec build_scheme(SchemeFamily family, double z, const SchemeParams& params);

/// |sum a_l - 1| and |sum l a_l + z|.
struct ConsistencyDefect {
    double zeroth = 0.0;
    double first = 0.0;
};

ConsistencyDefect consistency_defect(const SchemeSpec& scheme);

/// How apply_scheme treats the left end of the stored grid.
enum class LeftEdge {
    Shrink,      ///< output starts at j_min + reach; nothing outside the grid is assumed
    ZeroExtend,  ///< values left of j_min are taken as zero; output keeps j_min
};

/// Psi_j = A(z) Phi_j for every j up to j_boundary. Phi must carry at least
/// reach() ghost values. The result has no ghosts.
GridFunction apply_scheme(const SchemeSpec& scheme, const GridFunction& phi,
                          LeftEdge edge = LeftEdge::Shrink);

} // namespace fdstab
