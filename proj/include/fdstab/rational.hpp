#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fdstab {

using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& q);
/// "p/q", or "p" for integers.
std::string to_string(const Rational& q);
Rational make_rational(long long num, long long den = 1);

/// c + sum_k a_k p_k, linear in a fixed list of unknown parameters p_k.
class AffineExpr {
public:
    AffineExpr() = default;
    explicit AffineExpr(std::size_t n_params, Rational constant = 0)
        : constant_(std::move(constant)), coeffs_(n_params) {}

    static AffineExpr parameter(std::size_t n_params, std::size_t k, Rational scale = 1);

    std::size_t n_params() const noexcept { return coeffs_.size(); }
    const Rational& constant() const noexcept { return constant_; }
    Rational& constant() noexcept { return constant_; }
    const Rational& coeff(std::size_t k) const { return coeffs_.at(k); }
    Rational& coeff(std::size_t k) { return coeffs_.at(k); }

    bool is_zero() const;
    bool is_constant() const;
    /// Index of the first parameter with a nonzero coefficient.
    std::optional<std::size_t> first_parameter() const;

    AffineExpr& operator+=(const AffineExpr& o);
    AffineExpr& operator-=(const AffineExpr& o);
    AffineExpr& operator*=(const Rational& s);
    friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
    friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
    friend AffineExpr operator*(AffineExpr a, const Rational& s) { return a *= s; }
    friend AffineExpr operator*(const Rational& s, AffineExpr a) { return a *= s; }
    bool operator==(const AffineExpr& o) const;

    /// Replaces p_k by the expression e (which must not contain p_k).
    AffineExpr substitute(std::size_t k, const AffineExpr& e) const;
    /// Rewrites into another parameter list: new index map[k] for each old k (all coefficients
    /// of unmapped parameters must be zero).
    AffineExpr remap(std::size_t n_new, std::span<const std::optional<std::size_t>> map) const;

    double evaluate(std::span<const double> params) const;
    Rational evaluate(std::span<const Rational> params) const;

    std::string to_string(std::span<const std::string> names) const;

private:
    Rational constant_;
    std::vector<Rational> coeffs_;
};

/// Symmetric matrix of affine expressions.
class AffineMatrix {
public:
    AffineMatrix() = default;
    AffineMatrix(std::size_t n, std::size_t n_params) : n_(n), n_params_(n_params), a_(n * n, AffineExpr(n_params)) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t n_params() const noexcept { return n_params_; }
    AffineExpr& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const AffineExpr& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    AffineMatrix substitute(std::size_t k, const AffineExpr& e) const;
    /// Removes row and column i.
    AffineMatrix without(std::size_t i) const;
    AffineMatrix remap(std::size_t n_new, std::span<const std::optional<std::size_t>> map) const;
    bool operator==(const AffineMatrix& o) const;

    std::vector<std::vector<Rational>> evaluate_exact(std::span<const Rational> params) const;

private:
    std::size_t n_ = 0;
    std::size_t n_params_ = 0;
    std::vector<AffineExpr> a_;
};

/// Result of exact elimination on a system { e_i = 0 }.
struct LinearSolution {
    bool consistent = true;
    /// Solved parameters: solved[k] expresses p_k through the still-free parameters.
    std::vector<std::optional<AffineExpr>> solved;
    /// First equation that reduced to a nonzero constant.
    std::optional<std::size_t> conflicting_equation;
};

LinearSolution solve_linear(std::span<const AffineExpr> equations, std::size_t n_params);

} // namespace fdstab
