#include "fdstab/obstruction.hpp"

#include "fdstab/error.hpp"
#include "fdstab/parallel.hpp"
#include "fdstab/random.hpp"
#include "fdstab/summation.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fdstab {

DerivativeStencil strang_derivative_stencil() {
    // -D0 + (1/6) D0 Lap
    return {2, {make_rational(-1, 12), make_rational(2, 3), 0, make_rational(-2, 3), make_rational(1, 12)}};
}

DerivativeStencil lax_wendroff_derivative_stencil() {
    // -D0 (the Lap coefficient z^2/2 has zero derivative at 0)
    return {1, {make_rational(1, 2), 0, make_rational(-1, 2)}};
}

ClosureRule translatory_rule(int extrap_order) {
    if (extrap_order == 1) {
        return ClosureRule::Extrap1;
    }
    if (extrap_order == 2) {
        return ClosureRule::TranslatoryExtrap2;
    }
    throw ConfigError("extrapolation order must be 1 or 2");
}

std::size_t h_param_count(int r) { return static_cast<std::size_t>(r) * static_cast<std::size_t>(r + 1) / 2; }

std::size_t h_param_index(int r, int i, int k) {
    if (i > k) {
        std::swap(i, k);
    }
    // rows 0 .. i-1 hold r, r-1, ..., r-i+1 entries
    return static_cast<std::size_t>(i * r - i * (i - 1) / 2 + (k - i));
}

std::vector<std::string> h_param_names(int r) {
    std::vector<std::string> names(h_param_count(r));
    for (int i = 0; i < r; ++i) {
        for (int k = i; k < r; ++k) {
            names[h_param_index(r, i, k)] = "h" + std::to_string(i + 1) + "_" + std::to_string(k + 1);
        }
    }
    return names;
}

std::vector<double> h_parameters(const Matrix& H) {
    const int r = static_cast<int>(H.size());
    if (H.asymmetry() > 1e-15) {
        throw ConfigError("H must be symmetric");
    }
    std::vector<double> p(h_param_count(r));
    for (int i = 0; i < r; ++i) {
        for (int k = i; k < r; ++k) {
            p[h_param_index(r, i, k)] = H(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
        }
    }
    return p;
}

Matrix h_matrix(int r, std::span<const double> params) {
    if (params.size() != h_param_count(r)) {
        throw ConfigError("wrong number of H entries");
    }
    Matrix H(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        for (int k = 0; k < r; ++k) {
            H(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) = params[h_param_index(r, i, k)];
        }
    }
    return H;
}

Matrix SymbolicForm::evaluate(std::span<const double> params) const {
    const std::size_t n = S.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = S(i, j).evaluate(params);
        }
    }
    return m;
}

Matrix AffineMatrixDouble::at(std::span<const double> params) const {
    if (params.size() != terms.size()) {
        throw ConfigError("wrong number of H entries");
    }
    Matrix m = constant;
    const std::size_t n = m.size();
    for (std::size_t k = 0; k < terms.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) += params[k] * terms[k](i, j);
            }
        }
    }
    return m;
}

AffineMatrixDouble SymbolicForm::numeric() const {
    const std::size_t n = S.size();
    AffineMatrixDouble f{Matrix(n), std::vector<Matrix>(S.n_params(), Matrix(n))};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            f.constant(i, j) = to_double(S(i, j).constant());
            for (std::size_t k = 0; k < S.n_params(); ++k) {
                f.terms[k](i, j) = to_double(S(i, j).coeff(k));
            }
        }
    }
    return f;
}

Matrix SymbolicForm::evaluate(const Matrix& H) const {
    if (static_cast<int>(H.size()) != r) {
        throw ConfigError("H has size " + std::to_string(H.size()) + ", expected " + std::to_string(r));
    }
    const auto p = h_parameters(H);
    return evaluate(std::span<const double>(p));
}

namespace {

Index ghost_rule_min_index(ClosureRule rule) {
    switch (rule) {
    case ClosureRule::Extrap1: return 0;
    case ClosureRule::Extrap2Shared:
    case ClosureRule::TranslatoryExtrap2: return -1;
    case ClosureRule::Extrap2Type1:
    case ClosureRule::Extrap2Type2: return -2;
    }
    return 0;
}

/// Coefficients of Phi_1, Phi_2 on the free values Phi_{lo} .. Phi_0.
std::vector<std::vector<Rational>> ghost_rows(ClosureRule rule, int reach, Index lo) {
    const std::size_t nfree = static_cast<std::size_t>(1 - lo);
    auto pos = [&](Index j) { return static_cast<std::size_t>(j - lo); };
    std::vector<std::vector<Rational>> rows(2, std::vector<Rational>(nfree));
    auto& g1 = rows[0];
    auto& g2 = rows[1];
    switch (rule) {
    case ClosureRule::Extrap1:
        g1[pos(0)] = 1;
        g2[pos(0)] = 1;
        break;
    case ClosureRule::Extrap2Shared:
        if (reach > 1) {
            throw ConfigError("extrap2 leaves Phi_2 undetermined for a five-point stencil");
        }
        g1[pos(0)] = 2;
        g1[pos(-1)] = -1;
        break;
    case ClosureRule::TranslatoryExtrap2:
        g1[pos(0)] = 2;
        g1[pos(-1)] = -1;
        g2[pos(0)] = 3;
        g2[pos(-1)] = -2;
        break;
    case ClosureRule::Extrap2Type1:
        g1[pos(0)] = 2;
        g1[pos(-1)] = -1;
        g2[pos(0)] = 4;
        g2[pos(-1)] = -4;
        g2[pos(-2)] = 1;
        break;
    case ClosureRule::Extrap2Type2:
        g1[pos(0)] = 2;
        g1[pos(-1)] = -1;
        g2[pos(0)] = 2;
        g2[pos(-2)] = -1;
        break;
    }
    return rows;
}

/// out = T^T G T with T rational (rows of G by columns of out).
AffineMatrix congruence(const AffineMatrix& G, const std::vector<std::vector<Rational>>& T) {
    const std::size_t rows = G.size();
    const std::size_t cols = T.empty() ? 0 : T[0].size();
    AffineMatrix out(cols, G.n_params());
    for (std::size_t a = 0; a < rows; ++a) {
        for (std::size_t b = 0; b < rows; ++b) {
            const AffineExpr& g = G(a, b);
            if (g.is_zero()) {
                continue;
            }
            for (std::size_t i = 0; i < cols; ++i) {
                if (T[a][i] == 0) {
                    continue;
                }
                for (std::size_t j = 0; j < cols; ++j) {
                    if (T[b][j] == 0) {
                        continue;
                    }
                    out(i, j) += g * (T[a][i] * T[b][j]);
                }
            }
        }
    }
    return out;
}

std::string phi_label(Index j) { return j == 0 ? "Phi_0" : "Phi_{" + std::to_string(j) + "}"; }

} // namespace

SymbolicForm symbolic_derivative_form(const DerivativeStencil& stencil, ClosureRule rule, int r,
                                      FormCoordinates coords) {
    if (r < 0) {
        throw ConfigError("r must be nonnegative");
    }
    const int L = stencil.reach;
    const Index lo = std::min<Index>(-r - L + 1, ghost_rule_min_index(rule));
    const std::size_t nall = static_cast<std::size_t>(3 - lo);  // lo .. 2
    const std::size_t P = h_param_count(r);
    auto pos = [&](Index j) { return static_cast<std::size_t>(j - lo); };

    AffineMatrix G(nall, P);
    auto add = [&](Index a, Index b, const AffineExpr& c) {
        if (a == b) {
            G(pos(a), pos(a)) += c;
        } else {
            const AffineExpr half = c * make_rational(1, 2);
            G(pos(a), pos(b)) += half;
            G(pos(b), pos(a)) += half;
        }
    };

    // sum_{j <= -r} 2 Phi_j (d Phi)_j telescopes to these boundary products
    const Index J = -r;
    for (int l = 1; l <= L; ++l) {
        for (Index j = J - l + 1; j <= J; ++j) {
            add(j, j + l, AffineExpr(P, 2 * stencil.at(l)));
        }
    }
    // 2 (d Phi)_m^T H Phi_m over m = -r+1 .. 0
    for (int i = 0; i < r; ++i) {
        const Index mi = -r + 1 + i;
        for (int k = 0; k < r; ++k) {
            const Index mk = -r + 1 + k;
            const std::size_t p = h_param_index(r, i, k);
            for (int l = -L; l <= L; ++l) {
                if (stencil.at(l) == 0) {
                    continue;
                }
                add(mi + l, mk, AffineExpr::parameter(P, p, 2 * stencil.at(l)));
            }
        }
    }

    // Free values plus ghosts expressed through them.
    const std::size_t nfree = static_cast<std::size_t>(1 - lo);
    std::vector<std::vector<Rational>> T(nall, std::vector<Rational>(nfree));
    for (std::size_t k = 0; k < nfree; ++k) {
        T[k][k] = 1;
    }
    const auto ghosts = ghost_rows(rule, L, lo);
    T[pos(1)] = ghosts[0];
    T[pos(2)] = ghosts[1];
    AffineMatrix S = congruence(G, T);

    SymbolicForm f;
    f.r = r;
    f.rule = rule;
    f.coords = coords;
    f.parameters = h_param_names(r);
    if (coords == FormCoordinates::GridValues) {
        f.S = std::move(S);
        for (Index j = lo; j <= 0; ++j) {
            f.variables.push_back(phi_label(j));
        }
        return f;
    }

    // Phi_{-m} = sum_k C(m,k) (-1)^k D^k Phi_0, and D^k Phi_0 = y_{n-k}.
    const std::size_t n = nfree;
    std::vector<std::vector<Rational>> C(n, std::vector<Rational>(n));
    std::vector<Rational> binom{1};
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t row = n - 1 - m;  // position of Phi_{-m}
        for (std::size_t k = 0; k <= m; ++k) {
            C[row][n - 1 - k] = (k % 2) ? Rational(-binom[k]) : binom[k];
        }
        std::vector<Rational> next(binom.size() + 1);
        for (std::size_t k = 0; k < binom.size(); ++k) {
            next[k] += binom[k];
            next[k + 1] += binom[k];
        }
        binom = std::move(next);
    }
    f.S = congruence(S, C);
    for (std::size_t l = 1; l <= n; ++l) {
        f.variables.push_back("y" + std::to_string(l));
    }
    return f;
}

SymbolicForm strang_derivative_form(int r, int extrap_order, FormCoordinates coords) {
    return symbolic_derivative_form(strang_derivative_stencil(), translatory_rule(extrap_order), r, coords);
}

QuadraticForm derivative_form(const ObstructionProblem& problem) {
    const SymbolicForm f = strang_derivative_form(problem.r, problem.extrap_order);
    Matrix m = problem.r == 0 ? f.evaluate(std::span<const double>{}) : f.evaluate(problem.H);
    return QuadraticForm(std::move(m), f.variables);
}

ForcedConstraints forced_constraints(int r, int extrap_order) {
    if (r < 2) {
        throw ConfigError("forced constraints apply for r >= 2; r = 0 and r = 1 are base cases");
    }
    ForcedConstraints fc;
    fc.r = r;
    fc.extrap_order = extrap_order;
    fc.original = strang_derivative_form(r, extrap_order);
    fc.reduced = strang_derivative_form(r - 1, extrap_order);
    const AffineMatrix& S = fc.original.S;
    const std::size_t n = S.size();
    const std::size_t P = S.n_params();

    fc.zero_diagonal = S(0, 0).is_zero() && S(1, 1).is_zero();
    for (std::size_t k = 0; k < n; ++k) {
        if (k != 0 && !S(0, k).is_zero()) {
            fc.y1_relations.push_back(S(0, k));
        }
        if (k != 1 && !S(1, k).is_zero()) {
            fc.y2_relations.push_back(S(1, k));
        }
    }

    const LinearSolution sol = solve_linear(fc.y1_relations, P);
    if (!sol.consistent) {
        throw InternalError("the y1 relations are inconsistent at r = " + std::to_string(r));
    }
    AffineMatrix sub = S;
    for (int k = 0; k < r; ++k) {
        const std::size_t p = h_param_index(r, 0, k);
        if (!sol.solved[p] || !sol.solved[p]->is_constant()) {
            throw InternalError("the y1 relations do not determine h1_" + std::to_string(k + 1));
        }
        fc.forced_row.push_back(sol.solved[p]->constant());
        sub = sub.substitute(p, *sol.solved[p]);
    }
    for (std::size_t p = 0; p < P; ++p) {
        if (sol.solved[p] && p >= static_cast<std::size_t>(r)) {
            throw InternalError("the y1 relations constrain entries beyond the first row");
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!sub(0, k).is_zero()) {
            throw InternalError("the y1 row does not vanish after forcing the first row");
        }
    }
    std::vector<std::optional<std::size_t>> map(P);
    for (int i = 1; i < r; ++i) {
        for (int k = i; k < r; ++k) {
            map[h_param_index(r, i, k)] = h_param_index(r - 1, i - 1, k - 1);
        }
    }
    fc.substituted = sub.without(0).remap(h_param_count(r - 1), map);
    fc.form_match = fc.substituted == fc.reduced.S;
    return fc;
}

std::string to_string(BaseCase::Kind k) {
    switch (k) {
    case BaseCase::Kind::FixedIndefinite: return "fixed-form-not-nonpositive";
    case BaseCase::Kind::IncompatibleRequirements: return "incompatible-requirements";
    case BaseCase::Kind::IndefiniteAfterForcing: return "not-nonpositive-after-forcing";
    }
    return "?";
}

namespace {

std::vector<FormTerm> form_terms(const SymbolicForm& f) {
    std::vector<FormTerm> terms;
    const std::size_t n = f.S.size();
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j-- > 0;) {
            const AffineExpr c = i == j ? f.S(i, i) : f.S(i, j) * Rational(2);
            if (c.is_zero()) {
                continue;
            }
            const std::string mono =
                i == j ? f.variables[i] + "^2" : f.variables[i] + "*" + f.variables[j];
            terms.push_back({mono, c.to_string(f.parameters)});
        }
    }
    return terms;
}

/// Rational y with y^T S y > 0, when one of the simple patterns applies.
std::optional<std::vector<Rational>> rational_witness(const std::vector<std::vector<Rational>>& S) {
    const std::size_t n = S.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (S[i][i] > 0) {
            std::vector<Rational> y(n);
            y[i] = 1;
            return y;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (S[i][i] != 0) {
            continue;
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i || S[i][k] == 0) {
                continue;
            }
            // y = e_k + t e_i gives S_kk + 2 t S_ik = 1
            std::vector<Rational> y(n);
            y[k] = 1;
            y[i] = (1 - S[k][k]) / (2 * S[i][k]);
            return y;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i || S[k][k] >= 0) {
                continue;
            }
            if (S[i][i] * S[k][k] - S[i][k] * S[i][k] < 0) {
                // y = e_i + t e_k with t = -S_ik / S_kk gives det / S_kk > 0
                std::vector<Rational> y(n);
                y[i] = 1;
                y[k] = -S[i][k] / S[k][k];
                return y;
            }
        }
    }
    return std::nullopt;
}

Rational quadratic_value(const std::vector<std::vector<Rational>>& S, const std::vector<Rational>& y) {
    Rational v = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        for (std::size_t j = 0; j < S.size(); ++j) {
            v += y[i] * S[i][j] * y[j];
        }
    }
    return v;
}

BaseCase base_case(int r, int extrap_order, std::vector<std::optional<Rational>>& forced_params, int offset,
                   int r_total) {
    if (r > 1) {
        throw InternalError("base case requested for r > 1");
    }
    const SymbolicForm f = strang_derivative_form(r, extrap_order);
    const std::size_t n = f.S.size();
    const std::size_t P = f.S.n_params();
    BaseCase bc;
    bc.r = r;
    bc.terms = form_terms(f);

    std::vector<AffineExpr> relations;
    for (std::size_t i = 0; i < n; ++i) {
        if (!f.S(i, i).is_zero()) {
            continue;
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (k != i && !f.S(i, k).is_zero()) {
                relations.push_back(f.S(i, k));
                bc.relations.push_back(f.S(i, k).to_string(f.parameters) + " = 0");
            }
        }
    }

    AffineMatrix S = f.S;
    if (P > 0) {
        const LinearSolution sol = solve_linear(relations, P);
        if (!sol.consistent) {
            bc.kind = BaseCase::Kind::IncompatibleRequirements;
            for (const auto& e : relations) {
                const auto p = e.first_parameter();
                if (p && !e.is_constant()) {
                    AffineExpr rest = e;
                    rest.coeff(*p) = 0;
                    if (rest.is_constant()) {
                        bc.requirements.push_back(-rest.constant() / e.coeff(*p));
                    }
                }
            }
            std::sort(bc.requirements.begin(), bc.requirements.end());
            bc.requirements.erase(std::unique(bc.requirements.begin(), bc.requirements.end()),
                                  bc.requirements.end());
            return bc;
        }
        for (std::size_t p = 0; p < P; ++p) {
            if (!sol.solved[p]) {
                throw InternalError("base case leaves " + f.parameters[p] + " free");
            }
            if (!sol.solved[p]->is_constant()) {
                throw InternalError("base case does not fix " + f.parameters[p]);
            }
            bc.forced.emplace_back(f.parameters[p], sol.solved[p]->constant());
            S = S.substitute(p, *sol.solved[p]);
        }
        bc.kind = BaseCase::Kind::IndefiniteAfterForcing;
        // r <= 1 here, so the single parameter is the last diagonal entry of the original H
        forced_params[h_param_index(r_total, offset, offset)] = bc.forced.front().second;
    } else {
        bc.kind = BaseCase::Kind::FixedIndefinite;
    }

    std::vector<Rational> none(P);
    for (std::size_t p = 0; p < P; ++p) {
        for (const auto& [name, value] : bc.forced) {
            if (name == f.parameters[p]) {
                none[p] = value;
            }
        }
    }
    bc.matrix = S.evaluate_exact(none);
    const auto w = rational_witness(bc.matrix);
    if (!w) {
        throw InternalError("no rational witness found for the base case");
    }
    bc.witness = *w;
    bc.witness_value = quadratic_value(bc.matrix, bc.witness);
    if (bc.witness_value <= 0) {
        throw InternalError("witness does not give a positive value");
    }
    return bc;
}

} // namespace

Certificate infeasibility_certificate(int r, int extrap_order) {
    if (r < 0) {
        throw ConfigError("r must be nonnegative");
    }
    translatory_rule(extrap_order);
    Certificate c;
    c.r = r;
    c.extrap_order = extrap_order;
    c.forced_parameters.assign(h_param_count(r), std::nullopt);
    int level = r;
    int offset = 0;
    while (level >= 2) {
        const ForcedConstraints fc = forced_constraints(level, extrap_order);
        ReductionStep step;
        step.r = level;
        step.forced_row = fc.forced_row;
        step.form_match = fc.form_match;
        for (const auto& e : fc.y1_relations) {
            step.y1_relations.push_back(e.to_string(fc.original.parameters) + " = 0");
        }
        for (const auto& e : fc.y2_relations) {
            step.y2_relations.push_back(e.to_string(fc.original.parameters) + " = 0");
        }
        for (int k = 0; k < level; ++k) {
            c.forced_parameters[h_param_index(r, offset, offset + k)] = fc.forced_row[static_cast<std::size_t>(k)];
        }
        c.chain.push_back(std::move(step));
        --level;
        ++offset;
    }
    c.base = base_case(level, extrap_order, c.forced_parameters, offset, r);
    return c;
}

nlohmann::json to_json(const Certificate& c) {
    using nlohmann::json;
    auto rats = [](const std::vector<Rational>& v) {
        json a = json::array();
        for (const auto& q : v) {
            a.push_back(to_string(q));
        }
        return a;
    };
    json chain = json::array();
    for (const auto& s : c.chain) {
        chain.push_back({{"r", s.r},
                         {"forced_first_row", rats(s.forced_row)},
                         {"y1_relations", s.y1_relations},
                         {"y2_relations", s.y2_relations},
                         {"form_match", s.form_match},
                         {"reduced_r", s.r - 1}});
    }
    json terms = json::array();
    for (const auto& t : c.base.terms) {
        terms.push_back({{"monomial", t.monomial}, {"coefficient", t.coefficient}});
    }
    json forced = json::array();
    for (const auto& [name, v] : c.base.forced) {
        forced.push_back({{"entry", name}, {"value", to_string(v)}});
    }
    json matrix = json::array();
    for (const auto& row : c.base.matrix) {
        matrix.push_back(rats(row));
    }
    json base = {{"r", c.base.r},
                 {"kind", to_string(c.base.kind)},
                 {"form_terms", terms},
                 {"relations", c.base.relations},
                 {"requirements", rats(c.base.requirements)},
                 {"forced", forced},
                 {"matrix", matrix},
                 {"witness", rats(c.base.witness)},
                 {"witness_value", c.base.witness.empty() ? json(nullptr) : json(to_string(c.base.witness_value))}};
    json fp = json::array();
    const auto names = h_param_names(c.r);
    for (std::size_t p = 0; p < c.forced_parameters.size(); ++p) {
        fp.push_back({{"entry", names[p]},
                      {"value", c.forced_parameters[p] ? json(to_string(*c.forced_parameters[p])) : json(nullptr)}});
    }
    return {{"r", c.r},
            {"extrap_order", c.extrap_order},
            {"closure", std::string(cli_name(translatory_rule(c.extrap_order)))},
            {"chain_length", c.chain.size()},
            {"chain", chain},
            {"base_case", base},
            {"forced_entries", fp}};
}

SoundnessReport certificate_soundness(const Certificate& c, std::size_t trials, std::uint64_t seed) {
    const AffineMatrixDouble f = strang_derivative_form(c.r, c.extrap_order).numeric();
    SoundnessReport rep;
    rep.trials = trials;
    rep.min_lambda_max = std::numeric_limits<double>::infinity();
    Rng rng(seed, 0);
    std::vector<double> p(c.forced_parameters.size());
    for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t k = 0; k < p.size(); ++k) {
            p[k] = c.forced_parameters[k] ? to_double(*c.forced_parameters[k]) : rng.uniform(-10.0, 10.0);
        }
        const double lm = lambda_max(f.at(p));
        rep.min_lambda_max = std::min(rep.min_lambda_max, lm);
        if (lm > 0.0) {
            ++rep.positive;
        }
    }
    return rep;
}

namespace {

struct NmContext {
    const AffineMatrixDouble* form;
    std::vector<double> scratch;
};

double nm_objective(const gsl_vector* x, void* params) {
    auto* ctx = static_cast<NmContext*>(params);
    for (std::size_t k = 0; k < x->size; ++k) {
        ctx->scratch[k] = gsl_vector_get(x, k);
    }
    return lambda_max(ctx->form->at(ctx->scratch));
}

double nelder_mead(const AffineMatrixDouble& form, std::vector<double>& x0) {
    const std::size_t dim = x0.size();
    NmContext ctx{&form, std::vector<double>(dim)};
    gsl_multimin_function fn{&nm_objective, dim, &ctx};
    gsl_vector* x = gsl_vector_alloc(dim);
    gsl_vector* step = gsl_vector_alloc(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        gsl_vector_set(x, k, x0[k]);
    }
    gsl_vector_set_all(step, 1.0);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    for (int iter = 0; iter < 20000; ++iter) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) {
            break;
        }
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-10) == GSL_SUCCESS) {
            break;
        }
    }
    const double best = s->fval;
    for (std::size_t k = 0; k < dim; ++k) {
        x0[k] = gsl_vector_get(s->x, k);
    }
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return best;
}

} // namespace

RefutationResult numeric_refutation(int r, int extrap_order, int n_restarts, std::uint64_t seed, unsigned threads) {
    if (r < 0 || r > 4) {
        throw ConfigError("numeric refutation supports 0 <= r <= 4");
    }
    if (n_restarts < 1) {
        throw ConfigError("need at least one restart");
    }
    const SymbolicForm symbolic = strang_derivative_form(r, extrap_order);
    const AffineMatrixDouble form = symbolic.numeric();
    const std::size_t dim = h_param_count(r);
    RefutationResult res;
    res.r = r;
    res.extrap_order = extrap_order;
    if (dim == 0) {
        res.best_lambda_max = lambda_max(form.constant);
        res.best_H = Matrix(0);
        res.restart_values = {res.best_lambda_max};
        return res;
    }
    gsl_set_error_handler_off();
    const auto n = static_cast<std::size_t>(n_restarts);
    std::vector<double> values(n);
    std::vector<std::vector<double>> points(n);
    parallel_for(n, threads, [&](std::size_t i) {
        Rng rng(seed, i);
        std::vector<double> x = rng.uniform_vector(dim, -2.0, 2.0);
        values[i] = nelder_mead(form, x);
        points[i] = std::move(x);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (values[i] < values[best]) {
            best = i;
        }
    }
    res.best_lambda_max = values[best];
    res.best_H = h_matrix(r, points[best]);
    res.best_restart = best;
    res.restart_values = std::move(values);
    return res;
}

std::pair<double, double> scan_r1(int extrap_order, double lo, double hi, double step) {
    const AffineMatrixDouble form = strang_derivative_form(1, extrap_order).numeric();
    double best = std::numeric_limits<double>::infinity();
    double arg = lo;
    const auto n = static_cast<long long>(std::llround((hi - lo) / step));
    for (long long k = 0; k <= n; ++k) {
        const double h = lo + static_cast<double>(k) * step;
        const double v = lambda_max(form.at(std::span<const double>(&h, 1)));
        if (v < best) {
            best = v;
            arg = h;
        }
    }
    return {arg, best};
}

std::vector<CentralDifference> central_difference_check(const std::function<SchemeSpec(double)>& scheme_at,
                                                        const DerivativeStencil& stencil, ClosureRule rule,
                                                        int r, const Matrix& H, std::span<const double> y,
                                                        std::span<const double> zs) {
    const SymbolicForm form = symbolic_derivative_form(stencil, rule, r);
    if (y.size() != form.S.size()) {
        throw ConfigError("y has the wrong length for this form");
    }
    const Matrix S = r == 0 ? form.evaluate(std::span<const double>{}) : form.evaluate(H);
    double exact = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            exact += y[i] * S(i, j) * y[j];
        }
    }

    // y_l = D^{n-l} Phi_0, so reverse to get (Phi_0, D Phi_0, ...).
    std::vector<double> coords(y.rbegin(), y.rend());
    const auto window = values_from_backward_differences(coords);
    const Index lo = -static_cast<Index>(window.size()) + 1;
    const Index pad = 6;
    std::vector<double> vals(static_cast<std::size_t>(pad), 0.0);
    vals.insert(vals.end(), window.begin(), window.end());
    const GridFunction phi(lo - pad, std::move(vals), 0);

    auto f = [&](double z) {
        const SchemeSpec s = scheme_at(z);
        const GridFunction filled = fill_ghosts(make_closure(rule, s), phi);
        const GridFunction psi = apply_scheme(s, filled, LeftEdge::ZeroExtend);
        CompensatedSum acc;
        for (Index j = phi.j_min(); j <= -r; ++j) {
            acc += psi[j] * psi[j] - phi[j] * phi[j];
        }
        for (int i = 0; i < r; ++i) {
            for (int k = 0; k < r; ++k) {
                const Index mi = -r + 1 + i;
                const Index mk = -r + 1 + k;
                const double h = H(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
                acc += h * (psi[mi] * psi[mk] - phi[mi] * phi[mk]);
            }
        }
        return acc.value();
    };

    std::vector<CentralDifference> out;
    for (double z : zs) {
        CentralDifference cd;
        cd.z = z;
        cd.central = (f(z) - f(-z)) / (2.0 * z);
        cd.exact = exact;
        cd.error = std::abs(cd.central - exact);
        out.push_back(cd);
    }
    return out;
}

} // namespace fdstab
