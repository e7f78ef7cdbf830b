#pragma once

#include "fdstab/grid_function.hpp"
#include "fdstab/linalg.hpp"
#include "fdstab/stencil.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fdstab {

/// Psi_j^2 - Phi_j^2 = T_j - T_{j-1} + S_j with T_j = v^T Q v and S_j = w^T M w.
///
/// Three-point:  v = (Phi_j, D Phi_{j+1}),                       w = (D Phi_j, D Phi_{j+1})
/// Five-point:   v = (Phi_j, D Phi_{j+1}, Lap Phi_j, D Lap Phi_{j+1}),
///               w = (Lap Phi_{j-1}, Lap Phi_j, Lap Phi_{j+1})
struct Decomposition {
    SchemeFamily family = SchemeFamily::ThreePoint;
    QuadraticForm Q;
    QuadraticForm M;
    /// (a1, a2) or (a1, a2, a3)
    std::vector<double> aux_coeffs;
};

Decomposition lemma1_decomposition(double z, double nu);
Decomposition lemma2_decomposition(double z, double sigma, double tau);
Decomposition decomposition_for(const SchemeSpec& scheme);

/// Closed-form eigenvalues of M in the order of the eigenvectors
/// (1,1), (1,-1)  or  (1,1,1), (-1,0,1), (1,-2,1).
std::vector<double> closed_form_eigenvalues(const Decomposition& dec);

/// Eigenvectors matching closed_form_eigenvalues (unnormalized).
std::vector<std::vector<double>> closed_form_eigenvectors(SchemeFamily family);

/// T_j evaluated from the grid. Needs Phi_j, Phi_{j+1} (three-point) or Phi_{j-1..j+2}.
double telescopic_term(const Decomposition& dec, const GridFunction& phi, Index j);
/// S_j evaluated from the grid. Needs Phi_{j-1..j+1} (three-point) or Phi_{j-2..j+2}.
double dissipative_term(const Decomposition& dec, const GridFunction& phi, Index j);

inline constexpr double kTolPsd = 1e-12;

struct ContractivityVerdict {
    std::vector<double> eigenvalues;  ///< nondecreasing; values in (0, tol] reported as 0
    bool contractive = false;
    bool clamped = false;             ///< at least one eigenvalue was in (0, tol]
    double lambda_max = 0.0;          ///< unclamped
    Definiteness definiteness = Definiteness::Indefinite;
};

ContractivityVerdict contractivity_verdict(const Decomposition& dec, double tol = kTolPsd);

/// max over j in [j_lo, j_hi] of |Psi_j^2 - Phi_j^2 - (T_j - T_{j-1} + S_j)|, with
/// Psi_j the scheme applied to phi. Throws IndexError when the window exceeds the data.
double verify_decomposition_identity(const SchemeSpec& scheme, const Decomposition& dec,
                                     const GridFunction& phi, Index j_lo, Index j_hi);

/// Summation-by-parts identities used to build the decompositions.
enum class IbpIdentity { Tele01, Tele02, Tele03, Tele04, Tele11, Tele12, Tele13, Tele14 };

inline constexpr IbpIdentity kAllIbpIdentities[] = {
    IbpIdentity::Tele01, IbpIdentity::Tele02, IbpIdentity::Tele03, IbpIdentity::Tele04,
    IbpIdentity::Tele11, IbpIdentity::Tele12, IbpIdentity::Tele13, IbpIdentity::Tele14,
};

std::string_view to_string(IbpIdentity id);
/// Accepts "tele_01" ... "tele_14". Throws ConfigError on unknown names.
IbpIdentity parse_ibp_identity(std::string_view name);

/// Left and right sides of the identity at j.
struct IbpSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

IbpSides ibp_sides(IbpIdentity id, const GridFunction& phi, Index j);

/// |lhs - rhs| at j. Needs Phi_{j-2} ... Phi_{j+2}.
double verify_ibp_identity(IbpIdentity id, const GridFunction& phi, Index j);

} // namespace fdstab
