#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fdstab {

/// Dense square matrix, row-major. Sizes here are tiny (at most a few dozen).
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    Matrix transposed() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix& operator+=(const Matrix& rhs);
    Matrix operator*(double s) const;

    double max_abs() const noexcept;
    /// Largest |a_ij - a_ji|.
    double asymmetry() const noexcept;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

double max_abs_diff(const Matrix& a, const Matrix& b);

/// Symmetric quadratic form v^T A v with named variables.
class QuadraticForm {
public:
    static constexpr double kSymmetryTol = 1e-15;

    QuadraticForm() = default;
    /// Throws ConfigError when the label count mismatches or A is not symmetric to 1e-15.
    QuadraticForm(Matrix matrix, std::vector<std::string> labels);

    const Matrix& matrix() const noexcept { return matrix_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return matrix_.size(); }

    double evaluate(std::span<const double> v) const;

private:
    Matrix matrix_;
    std::vector<std::string> labels_;
};

struct EigenSystem {
    std::vector<double> values;               ///< ascending
    std::vector<std::vector<double>> vectors; ///< vectors[k] pairs with values[k]
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below
/// off_tol times the Frobenius norm of the input.
EigenSystem jacobi_eigensystem(const Matrix& a, double off_tol = 1e-14);

/// Ascending eigenvalues. 2x2 uses the closed form; larger sizes use Jacobi.
std::vector<double> symmetric_eigenvalues(const Matrix& a);

std::array<double, 2> eigenvalues_2x2(double a11, double a12, double a22);

double lambda_max(const Matrix& a);

/// Negative-definiteness classes used by every verdict in the library.
enum class Definiteness { NegativeDefinite, NegativeSemidefinite, Indefinite };

Definiteness classify(double lambda_max, double tol = 1e-12);
std::string to_string(Definiteness d);

} // namespace fdstab
