#include "fdstab/linalg.hpp"

#include "fdstab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fdstab {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()), a_() {
    a_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) {
            throw ConfigError("Matrix initializer is not square");
        }
        a_.insert(a_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (rhs.n_ != n_) {
        throw ConfigError("matrix size mismatch");
    }
    Matrix p(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k < n_; ++k) {
            const double aik = (*this)(i, k);
            for (std::size_t j = 0; j < n_; ++j) {
                p(i, j) += aik * rhs(k, j);
            }
        }
    }
    return p;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    Matrix s = *this;
    s += rhs;
    return s;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (rhs.n_ != n_) {
        throw ConfigError("matrix size mismatch");
    }
    for (std::size_t k = 0; k < a_.size(); ++k) {
        a_[k] += rhs.a_[k];
    }
    return *this;
}

Matrix Matrix::operator*(double s) const {
    Matrix m = *this;
    for (double& v : m.a_) {
        v *= s;
    }
    return m;
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : a_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double Matrix::asymmetry() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
        }
    }
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.size() != b.size()) {
        throw ConfigError("matrix size mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
        }
    }
    return m;
}

QuadraticForm::QuadraticForm(Matrix matrix, std::vector<std::string> labels)
    : matrix_(std::move(matrix)), labels_(std::move(labels)) {
    if (labels_.size() != matrix_.size()) {
        throw ConfigError("quadratic form: " + std::to_string(labels_.size()) + " labels for a " +
                          std::to_string(matrix_.size()) + "x" + std::to_string(matrix_.size()) +
                          " matrix");
    }
    if (matrix_.asymmetry() > kSymmetryTol) {
        throw ConfigError("quadratic form matrix is not symmetric");
    }
}

double QuadraticForm::evaluate(std::span<const double> v) const {
    const std::size_t n = matrix_.size();
    if (v.size() != n) {
        throw ConfigError("quadratic form evaluated on a vector of the wrong length");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += matrix_(i, j) * v[j];
        }
        acc += v[i] * row;
    }
    return acc;
}

EigenSystem jacobi_eigensystem(const Matrix& input, double off_tol) {
    const std::size_t n = input.size();
    Matrix a = input;
    Matrix v = Matrix::identity(n);

    double fro = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            fro += a(i, j) * a(i, j);
        }
    }
    fro = std::sqrt(fro);
    const double target = off_tol * fro;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                s += 2.0 * a(i, j) * a(i, j);
            }
        }
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    EigenSystem es;
    for (std::size_t k : order) {
        es.values.push_back(a(k, k));
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = v(i, k);
        }
        es.vectors.push_back(std::move(col));
    }
    return es;
}

std::array<double, 2> eigenvalues_2x2(double a11, double a12, double a22) {
    const double mean = 0.5 * (a11 + a22);
    const double half_gap = std::hypot(0.5 * (a11 - a22), a12);
    return {mean - half_gap, mean + half_gap};
}

std::vector<double> symmetric_eigenvalues(const Matrix& a) {
    switch (a.size()) {
    case 0:
        return {};
    case 1:
        return {a(0, 0)};
    case 2: {
        const auto ev = eigenvalues_2x2(a(0, 0), 0.5 * (a(0, 1) + a(1, 0)), a(1, 1));
        return {ev[0], ev[1]};
    }
    default:
        return jacobi_eigensystem(a).values;
    }
}

double lambda_max(const Matrix& a) {
    const auto ev = symmetric_eigenvalues(a);
    return ev.empty() ? 0.0 : ev.back();
}

Definiteness classify(double lmax, double tol) {
    if (lmax < -tol) {
        return Definiteness::NegativeDefinite;
    }
    if (lmax <= tol) {
        return Definiteness::NegativeSemidefinite;
    }
    return Definiteness::Indefinite;
}

std::string to_string(Definiteness d) {
    switch (d) {
    case Definiteness::NegativeDefinite: return "negative-definite";
    case Definiteness::NegativeSemidefinite: return "negative-semidefinite";
    case Definiteness::Indefinite: return "not-semidefinite";
    }
    return "?";
}

} // namespace fdstab
