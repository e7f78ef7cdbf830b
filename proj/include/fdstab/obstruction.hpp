#pragma once

#include "fdstab/boundary.hpp"
#include "fdstab/linalg.hpp"
#include "fdstab/rational.hpp"
#include "fdstab/stencil.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fdstab {

/// d_l = dA/dz at z = 0, an antisymmetric stencil.
struct DerivativeStencil {
    int reach = 2;
    std::vector<Rational> d;  ///< d_{-reach} ... d_{reach}
    const Rational& at(int l) const { return d.at(static_cast<std::size_t>(l + reach)); }
};

DerivativeStencil strang_derivative_stencil();
DerivativeStencil lax_wendroff_derivative_stencil();

/// Extrapolation order 1 -> Phi_2 = Phi_1 = Phi_0; order 2 -> Lap Phi_1 = Lap Phi_0 = 0.
ClosureRule translatory_rule(int extrap_order);

enum class FormCoordinates {
    BackwardDifferences,  ///< y_l = D^{n-l} Phi_0, l = 1 .. n
    GridValues,           ///< Phi_{lo}, ..., Phi_0
};

/// Number of free entries of a symmetric r x r matrix, stored row-major upper triangle.
std::size_t h_param_count(int r);
std::size_t h_param_index(int r, int i, int k);
std::vector<std::string> h_param_names(int r);
std::vector<double> h_parameters(const Matrix& H);
Matrix h_matrix(int r, std::span<const double> params);

/// S(p) = constant + sum_k p_k terms[k] in doubles, for repeated numeric evaluation.
struct AffineMatrixDouble {
    Matrix constant;
    std::vector<Matrix> terms;
    Matrix at(std::span<const double> params) const;
};

/// f'(0) of the boundary-modified energy balance as a quadratic form in the free
/// grid values, with the ghost values substituted by the closure. The entries are
/// affine in the unknown entries of H.
struct SymbolicForm {
    int r = 0;
    ClosureRule rule = ClosureRule::Extrap1;
    FormCoordinates coords = FormCoordinates::BackwardDifferences;
    AffineMatrix S;
    std::vector<std::string> variables;
    std::vector<std::string> parameters;

    /// Numeric S(H). H must be r x r and symmetric to 1e-15.
    Matrix evaluate(const Matrix& H) const;
    Matrix evaluate(std::span<const double> params) const;
    AffineMatrixDouble numeric() const;
};

SymbolicForm symbolic_derivative_form(const DerivativeStencil& stencil, ClosureRule rule, int r,
                                      FormCoordinates coords = FormCoordinates::BackwardDifferences);

/// The Strang scheme with translatory extrapolation of the given order.
SymbolicForm strang_derivative_form(int r, int extrap_order,
                                    FormCoordinates coords = FormCoordinates::BackwardDifferences);

struct ObstructionProblem {
    int r = 0;
    int extrap_order = 1;
    Matrix H;  ///< r x r symmetric
};

/// S(H) in the variables y_1 ... y_{r+2}.
QuadraticForm derivative_form(const ObstructionProblem& problem);

/// Elimination step for r >= 2: the y_1 and y_2 rows of S must vanish, which fixes
/// the first row of H; the remainder is the problem with r - 1.
struct ForcedConstraints {
    int r = 0;
    int extrap_order = 1;
    bool zero_diagonal = false;           ///< S_11 and S_22 identically zero
    std::vector<AffineExpr> y1_relations; ///< each must equal 0
    std::vector<AffineExpr> y2_relations;
    std::vector<Rational> forced_row;     ///< h_11 ... h_1r
    SymbolicForm original;
    SymbolicForm reduced;                 ///< built directly at r - 1
    AffineMatrix substituted;             ///< original with the forced row, y_1 removed, reindexed
    bool form_match = false;              ///< substituted == reduced.S exactly
};

ForcedConstraints forced_constraints(int r, int extrap_order);

struct ReductionStep {
    int r = 0;
    std::vector<Rational> forced_row;
    std::vector<std::string> y1_relations;
    std::vector<std::string> y2_relations;
    bool form_match = false;
};

struct FormTerm {
    std::string monomial;     ///< "y3*y2", "y3^2"
    std::string coefficient;  ///< affine in the remaining H entries
};

struct BaseCase {
    enum class Kind {
        FixedIndefinite,           ///< no free parameter and the form is not <= 0
        IncompatibleRequirements,  ///< the vanishing cross terms demand different values
        IndefiniteAfterForcing,    ///< the forced values leave a form that is not <= 0
    };
    int r = 0;
    Kind kind = Kind::FixedIndefinite;
    std::vector<FormTerm> terms;
    std::vector<std::string> relations;
    std::vector<Rational> requirements;  ///< ascending; IncompatibleRequirements only
    std::vector<std::pair<std::string, Rational>> forced;
    std::vector<std::vector<Rational>> matrix;  ///< S after forcing, when constant
    std::vector<Rational> witness;              ///< y with y^T S y > 0
    Rational witness_value;
};

std::string to_string(BaseCase::Kind k);

struct Certificate {
    int r = 0;
    int extrap_order = 1;
    std::vector<ReductionStep> chain;
    BaseCase base;
    /// Entries of the original H fixed along the way (row-major upper triangle).
    std::vector<std::optional<Rational>> forced_parameters;
};

Certificate infeasibility_certificate(int r, int extrap_order);

nlohmann::json to_json(const Certificate& c);

struct SoundnessReport {
    std::size_t trials = 0;
    std::size_t positive = 0;
    double min_lambda_max = 0.0;
};

/// Samples the unforced entries of H uniformly in [-10, 10] and evaluates lambda_max(S(H)).
SoundnessReport certificate_soundness(const Certificate& c, std::size_t trials, std::uint64_t seed);

struct RefutationResult {
    int r = 0;
    int extrap_order = 1;
    double best_lambda_max = 0.0;
    Matrix best_H;
    std::size_t best_restart = 0;
    std::vector<double> restart_values;
};

/// Multistart Nelder-Mead on lambda_max(S(H)) over symmetric H.
RefutationResult numeric_refutation(int r, int extrap_order, int n_restarts, std::uint64_t seed = 1,
                                    unsigned threads = 1);

/// (argmin h, min lambda_max(S(h))) over h in [lo, hi] with the given step, for r = 1.
std::pair<double, double> scan_r1(int extrap_order, double lo = -10.0, double hi = 10.0, double step = 1e-4);

struct CentralDifference {
    double z = 0.0;
    double central = 0.0;  ///< (f(z) - f(-z)) / (2z)
    double exact = 0.0;    ///< y^T S(H) y
    double error = 0.0;
};

/// Central differences of the full balance functional f(z), computed by running the
/// scheme at +-z on the grid values encoded by y, against the closed form f'(0).
std::vector<CentralDifference> central_difference_check(const std::function<SchemeSpec(double)>& scheme_at,
                                                        const DerivativeStencil& stencil, ClosureRule rule,
                                                        int r, const Matrix& H, std::span<const double> y,
                                                        std::span<const double> zs);

} // namespace fdstab
