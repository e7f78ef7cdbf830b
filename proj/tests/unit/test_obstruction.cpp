#include "fdstab/error.hpp"
#include "fdstab/obstruction.hpp"
#include "fdstab/presets.hpp"
#include "fdstab/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace fdstab;

namespace {

Rational q(long long n, long long d = 1) { return make_rational(n, d); }

Matrix random_h(Rng& rng, int r, double spread) {
    const auto p = rng.uniform_vector(h_param_count(r), -spread, spread);
    return h_matrix(r, p);
}

} // namespace

TEST_CASE("H parameter layout") {
    CHECK(h_param_count(0) == 0);
    CHECK(h_param_count(3) == 6);
    CHECK(h_param_index(3, 0, 2) == 2);
    CHECK(h_param_index(3, 1, 1) == 3);
    CHECK(h_param_index(3, 2, 1) == 4);
    CHECK(h_param_names(2) == std::vector<std::string>{"h1_1", "h1_2", "h2_2"});
    const double p[] = {1, 2, 3, 4, 5, 6};
    const Matrix H = h_matrix(3, p);
    CHECK(H(2, 0) == 3);
    CHECK(h_parameters(H) == std::vector<double>(p, p + 6));
    CHECK_THROWS_AS(h_parameters(Matrix{{1, 2}, {3, 1}}), ConfigError);
}

TEST_CASE("derivative stencils") {
    const auto s = strang_derivative_stencil();
    CHECK(s.at(-2) == q(-1, 12));
    CHECK(s.at(-1) == q(2, 3));
    CHECK(s.at(0) == 0);
    CHECK(s.at(1) == q(-2, 3));
    CHECK(s.at(2) == q(1, 12));
    // dA/dz at z = 0 from the coefficient formulas, by a central difference
    const double h = 1e-6;
    const SchemeSpec a = preset_scheme(Preset::Strang, h);
    const SchemeSpec b = preset_scheme(Preset::Strang, -h);
    for (int l = -2; l <= 2; ++l) {
        CHECK((a.coeff(l) - b.coeff(l)) / (2 * h) == doctest::Approx(to_double(s.at(l))).epsilon(1e-8));
    }
    CHECK(translatory_rule(1) == ClosureRule::Extrap1);
    CHECK(translatory_rule(2) == ClosureRule::TranslatoryExtrap2);
    CHECK_THROWS_AS(translatory_rule(3), ConfigError);
}

TEST_CASE("r = 0 base form") {
    const SymbolicForm g = strang_derivative_form(0, 1, FormCoordinates::GridValues);
    REQUIRE(g.S.size() == 2);
    // -(7/6) Phi_0^2 + (1/6) Phi_0 Phi_{-1}
    CHECK(g.S(1, 1) == AffineExpr(0, q(-7, 6)));
    CHECK(g.S(0, 1) * Rational(2) == AffineExpr(0, q(1, 6)));
    CHECK(g.S(0, 0).is_zero());
    CHECK(g.variables == std::vector<std::string>{"Phi_{-1}", "Phi_0"});

    const SymbolicForm y = strang_derivative_form(0, 1);
    CHECK(y.S(0, 0).is_zero());
    CHECK(y.S(0, 1) == AffineExpr(0, q(-1, 12)));
    CHECK(y.S(1, 1) == AffineExpr(0, q(-1)));

    const SymbolicForm o2 = strang_derivative_form(0, 2);
    CHECK(o2.S(0, 0) == AffineExpr(0, q(-1, 6)));
    CHECK(o2.S(0, 1) == AffineExpr(0, q(-1, 2)));
}

TEST_CASE("r = 1 base form") {
    const SymbolicForm f = strang_derivative_form(1, 1);
    REQUIRE(f.S.size() == 3);
    const AffineExpr h = AffineExpr::parameter(1, 0);
    CHECK(f.S(2, 2) == AffineExpr(1, -1));
    CHECK(f.S(2, 1) * Rational(2) == AffineExpr(1, q(5, 6)) - h);
    CHECK(f.S(2, 0) * Rational(2) == (AffineExpr(1, 1) - h) * q(1, 6));
    CHECK(f.S(0, 0).is_zero());
    CHECK(f.S(1, 1).is_zero());
    CHECK(f.S(0, 1).is_zero());
}

TEST_CASE("structure of S for every r") {
    Rng rng(61, 0);
    for (int order : {1, 2}) {
        for (int r = 0; r <= 5; ++r) {
            const SymbolicForm f = strang_derivative_form(r, order);
            REQUIRE(f.S.size() == static_cast<std::size_t>(r + 2));
            CHECK(f.variables.front() == "y1");
            for (std::size_t i = 0; i < f.S.size(); ++i) {
                for (std::size_t j = 0; j < f.S.size(); ++j) {
                    CHECK(f.S(i, j) == f.S(j, i));
                }
            }
            if (r >= 1) {
                CHECK(f.S(0, 0).is_zero());
            }
            if (r >= 2) {
                CHECK(f.S(1, 1).is_zero());
            }
            for (int t = 0; t < 20; ++t) {
                const Matrix S = r == 0 ? f.evaluate(std::span<const double>{}) : f.evaluate(random_h(rng, r, 5));
                CHECK(S.asymmetry() <= 1e-15);
                const std::vector<double> zero(S.size(), 0.0);
                CHECK(QuadraticForm(S, f.variables).evaluate(zero) == 0.0);
            }
        }
    }
}

TEST_CASE("numeric evaluation agrees with the exact form") {
    Rng rng(62, 0);
    const SymbolicForm f = strang_derivative_form(3, 2);
    const auto fast = f.numeric();
    for (int t = 0; t < 20; ++t) {
        const auto p = rng.uniform_vector(h_param_count(3), -3, 3);
        CHECK(max_abs_diff(fast.at(p), f.evaluate(std::span<const double>(p))) <= 1e-13);
    }
    CHECK_THROWS_AS(f.evaluate(Matrix(2)), ConfigError);
}

TEST_CASE("forced constraints") {
    const ForcedConstraints r2 = forced_constraints(2, 1);
    CHECK(r2.zero_diagonal);
    CHECK(r2.forced_row == std::vector<Rational>{1, 0});
    CHECK(r2.form_match);

    const ForcedConstraints r3 = forced_constraints(3, 1);
    CHECK(r3.forced_row == std::vector<Rational>{1, 0, 0});
    CHECK(r3.reduced.r == 2);
    CHECK(r3.form_match);

    for (int r = 2; r <= 5; ++r) {
        for (int order : {1, 2}) {
            const ForcedConstraints fc = forced_constraints(r, order);
            CHECK(fc.form_match);
            CHECK(fc.zero_diagonal);
            std::vector<Rational> want(static_cast<std::size_t>(r), 0);
            want[0] = 1;
            CHECK(fc.forced_row == want);
        }
    }
    CHECK_THROWS_AS(forced_constraints(1, 1), ConfigError);
}

TEST_CASE("form match also holds numerically") {
    // substitute the forced row, delete y1, compare to the form built at r - 1
    Rng rng(63, 0);
    for (int r = 2; r <= 4; ++r) {
        const SymbolicForm big = strang_derivative_form(r, 1);
        const SymbolicForm small = strang_derivative_form(r - 1, 1);
        for (int t = 0; t < 10; ++t) {
            const Matrix Hs = random_h(rng, r - 1, 4);
            Matrix H(static_cast<std::size_t>(r));
            H(0, 0) = 1;
            for (int i = 1; i < r; ++i) {
                for (int k = 1; k < r; ++k) {
                    H(i, k) = Hs(i - 1, k - 1);
                }
            }
            const Matrix S = big.evaluate(H);
            const Matrix R = small.evaluate(Hs);
            for (std::size_t i = 0; i < S.size(); ++i) {
                CHECK(std::abs(S(0, i)) <= 1e-14);
            }
            for (std::size_t i = 1; i < S.size(); ++i) {
                for (std::size_t k = 1; k < S.size(); ++k) {
                    CHECK(S(i, k) == doctest::Approx(R(i - 1, k - 1)).epsilon(1e-14).scale(1.0));
                }
            }
        }
    }
}

TEST_CASE("certificates") {
    const Certificate c0 = infeasibility_certificate(0, 1);
    CHECK(c0.chain.empty());
    CHECK(c0.base.kind == BaseCase::Kind::FixedIndefinite);
    CHECK(c0.base.witness_value > 0);

    const Certificate c1 = infeasibility_certificate(1, 1);
    CHECK(c1.base.kind == BaseCase::Kind::IncompatibleRequirements);
    CHECK(c1.base.requirements == std::vector<Rational>{q(5, 6), q(1)});

    const Certificate c4 = infeasibility_certificate(4, 1);
    CHECK(c4.chain.size() == 3);
    CHECK(c4.base.r == 1);
    CHECK(c4.base.requirements == std::vector<Rational>{q(5, 6), q(1)});
    // h11 = h22 = h33 = 1 with zero off-diagonal entries in the forced rows; h44 stays free
    CHECK(c4.forced_parameters[h_param_index(4, 0, 0)] == q(1));
    CHECK(c4.forced_parameters[h_param_index(4, 2, 3)] == q(0));
    CHECK_FALSE(c4.forced_parameters[h_param_index(4, 3, 3)]);

    const Certificate o2 = infeasibility_certificate(2, 2);
    CHECK(o2.chain.size() == 1);
    CHECK(o2.base.kind == BaseCase::Kind::IndefiniteAfterForcing);
    CHECK(o2.base.witness_value > 0);

    for (int order : {1, 2}) {
        for (int r = 0; r <= 6; ++r) {
            const Certificate c = infeasibility_certificate(r, order);
            CHECK(c.chain.size() == static_cast<std::size_t>(std::max(r - 1, 0)));
            for (const auto& step : c.chain) {
                CHECK(step.form_match);
            }
        }
    }
}

TEST_CASE("certificate json") {
    const auto j = to_json(infeasibility_certificate(3, 1));
    CHECK(j["chain_length"] == 2);
    CHECK(j["base_case"]["requirements"] == nlohmann::json::array({"5/6", "1"}));
    CHECK(j["chain"][0]["forced_first_row"] == nlohmann::json::array({"1", "0", "0"}));
    CHECK(j["closure"] == "extrap1");
}

TEST_CASE("certificate soundness") {
    for (int order : {1, 2}) {
        for (int r = 0; r <= 4; ++r) {
            const SoundnessReport s = certificate_soundness(infeasibility_certificate(r, order), 1000, 5);
            CHECK(s.trials == 1000);
            CHECK(s.positive == 1000);
            CHECK(s.min_lambda_max > 0);
        }
    }
}

TEST_CASE("numeric refutation stays positive") {
    const auto r0 = numeric_refutation(0, 1, 1);
    // 2x2 form [[0, -1/12], [-1/12, -1]]: lambda_max = (-1 + sqrt(1 + 1/36)) / 2
    CHECK(r0.best_lambda_max == doctest::Approx((-1 + std::sqrt(1 + 1.0 / 36)) / 2));
    for (int order : {1, 2}) {
        for (int r = 1; r <= 4; ++r) {
            const auto res = numeric_refutation(r, order, 16, 3, 2);
            CHECK(res.best_lambda_max > 0);
            CHECK(res.restart_values.size() == 16);
            CHECK(res.best_H.size() == static_cast<std::size_t>(r));
            // the reported value belongs to the reported H
            const Matrix S = strang_derivative_form(r, order).evaluate(res.best_H);
            CHECK(lambda_max(S) == doctest::Approx(res.best_lambda_max).epsilon(1e-12));
        }
    }
    // thread count does not change the result
    const auto a = numeric_refutation(2, 1, 8, 9, 1);
    const auto b = numeric_refutation(2, 1, 8, 9, 3);
    CHECK(a.restart_values == b.restart_values);
    CHECK_THROWS_AS(numeric_refutation(5, 1, 4), ConfigError);
}

TEST_CASE("one-dimensional scan at r = 1") {
    const auto [h, lm] = scan_r1(1);
    CHECK(lm > 0);
    CHECK(h > 5.0 / 6.0 - 0.05);
    CHECK(h < 1.0);
    const auto nm = numeric_refutation(1, 1, 50);
    CHECK(nm.best_lambda_max <= lm + 1e-9);
    CHECK(nm.best_lambda_max > 0);
}

TEST_CASE("lax-wendroff sanity case is not refuted") {
    const SymbolicForm f = symbolic_derivative_form(lax_wendroff_derivative_stencil(), ClosureRule::Extrap2Shared, 1);
    const Matrix S = f.evaluate(Matrix{{0.5}});
    CHECK(lambda_max(S) <= 1e-12);
    CHECK(classify(lambda_max(S)) != Definiteness::Indefinite);
}

TEST_CASE("central differences of the full balance agree with f'(0)") {
    Rng rng(64, 0);
    const double zs[] = {1e-3, 1e-4};
    for (int order : {1, 2}) {
        for (int r = 0; r <= 3; ++r) {
            const Matrix H = r == 0 ? Matrix(0) : random_h(rng, r, 2);
            const auto y = rng.uniform_vector(strang_derivative_form(r, order).S.size(), -1, 1);
            const auto res = central_difference_check([](double z) { return preset_scheme(Preset::Strang, z); },
                                                      strang_derivative_stencil(), translatory_rule(order), r, H,
                                                      y, zs);
            REQUIRE(res.size() == 2);
            const double scale = std::max(1.0, std::abs(res[0].exact));
            CHECK(res[0].error <= 1e-4 * scale);
            CHECK(res[1].error <= 1e-6 * scale);
        }
    }
    // LW with its own derivative stencil
    const auto lw_size = symbolic_derivative_form(lax_wendroff_derivative_stencil(), ClosureRule::Extrap2Shared, 1).S.size();
    const auto y = rng.uniform_vector(lw_size, -1, 1);
    const auto lw = central_difference_check([](double z) { return preset_scheme(Preset::LaxWendroff, z); },
                                             lax_wendroff_derivative_stencil(), ClosureRule::Extrap2Shared, 1,
                                             Matrix{{0.5}}, y, zs);
    CHECK(lw[1].error <= 1e-6);
}
