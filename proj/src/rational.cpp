#include "fdstab/rational.hpp"

#include "fdstab/error.hpp"


#include <sstream>

namespace fdstab {

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_string(const Rational& q) {
    const auto num = boost::multiprecision::numerator(q);
    const auto den = boost::multiprecision::denominator(q);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

Rational make_rational(long long num, long long den) {
    if (den == 0) {
        throw ConfigError("zero denominator");
    }
    return Rational(num) / Rational(den);
}

AffineExpr AffineExpr::parameter(std::size_t n_params, std::size_t k, Rational scale) {
    AffineExpr e(n_params);
    e.coeffs_.at(k) = std::move(scale);
    return e;
}

bool AffineExpr::is_zero() const { return constant_ == 0 && is_constant(); }

bool AffineExpr::is_constant() const {
    for (const auto& c : coeffs_) {
        if (c != 0) {
            return false;
        }
    }
    return true;
}

std::optional<std::size_t> AffineExpr::first_parameter() const {
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] != 0) {
            return k;
        }
    }
    return std::nullopt;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& o) {
    if (o.coeffs_.size() != coeffs_.size()) {
        throw InternalError("affine expressions over different parameter lists");
    }
    constant_ += o.constant_;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        coeffs_[k] += o.coeffs_[k];
    }
    return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& o) {
    if (o.coeffs_.size() != coeffs_.size()) {
        throw InternalError("affine expressions over different parameter lists");
    }
    constant_ -= o.constant_;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        coeffs_[k] -= o.coeffs_[k];
    }
    return *this;
}

AffineExpr& AffineExpr::operator*=(const Rational& s) {
    constant_ *= s;
    for (auto& c : coeffs_) {
        c *= s;
    }
    return *this;
}

bool AffineExpr::operator==(const AffineExpr& o) const {
    return constant_ == o.constant_ && coeffs_ == o.coeffs_;
}

AffineExpr AffineExpr::substitute(std::size_t k, const AffineExpr& e) const {
    if (e.coeff(k) != 0) {
        throw InternalError("substitution expression refers to the substituted parameter");
    }
    AffineExpr out = *this;
    const Rational c = out.coeffs_.at(k);
    if (c == 0) {
        return out;
    }
    out.coeffs_[k] = 0;
    out += e * c;
    return out;
}

AffineExpr AffineExpr::remap(std::size_t n_new, std::span<const std::optional<std::size_t>> map) const {
    AffineExpr out(n_new, constant_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0) {
            continue;
        }
        if (k >= map.size() || !map[k]) {
            throw InternalError("remap drops a parameter with nonzero coefficient");
        }
        out.coeffs_.at(*map[k]) += coeffs_[k];
    }
    return out;
}

double AffineExpr::evaluate(std::span<const double> params) const {
    if (params.size() != coeffs_.size()) {
        throw ConfigError("wrong number of parameters");
    }
    double v = to_double(constant_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] != 0) {
            v += to_double(coeffs_[k]) * params[k];
        }
    }
    return v;
}

Rational AffineExpr::evaluate(std::span<const Rational> params) const {
    if (params.size() != coeffs_.size()) {
        throw ConfigError("wrong number of parameters");
    }
    Rational v = constant_;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        v += coeffs_[k] * params[k];
    }
    return v;
}

std::string AffineExpr::to_string(std::span<const std::string> names) const {
    std::ostringstream os;
    bool first = true;
    auto term = [&](const Rational& c, const std::string& name) {
        if (c == 0) {
            return;
        }
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            os << (c < 0 ? "-" : "");
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (name.empty()) {
            os << fdstab::to_string(mag);
        } else if (mag == 1) {
            os << name;
        } else {
            os << fdstab::to_string(mag) << "*" << name;
        }
    };
    term(constant_, "");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        term(coeffs_[k], k < names.size() ? names[k] : "p" + std::to_string(k));
    }
    return first ? "0" : os.str();
}

AffineMatrix AffineMatrix::substitute(std::size_t k, const AffineExpr& e) const {
    AffineMatrix out = *this;
    for (auto& x : out.a_) {
        x = x.substitute(k, e);
    }
    return out;
}

AffineMatrix AffineMatrix::without(std::size_t i) const {
    AffineMatrix out(n_ - 1, n_params_);
    for (std::size_t r = 0, rr = 0; r < n_; ++r) {
        if (r == i) {
            continue;
        }
        for (std::size_t c = 0, cc = 0; c < n_; ++c) {
            if (c == i) {
                continue;
            }
            out(rr, cc) = (*this)(r, c);
            ++cc;
        }
        ++rr;
    }
    return out;
}

AffineMatrix AffineMatrix::remap(std::size_t n_new, std::span<const std::optional<std::size_t>> map) const {
    AffineMatrix out(n_, n_new);
    for (std::size_t k = 0; k < a_.size(); ++k) {
        out.a_[k] = a_[k].remap(n_new, map);
    }
    return out;
}

bool AffineMatrix::operator==(const AffineMatrix& o) const {
    return n_ == o.n_ && n_params_ == o.n_params_ && a_ == o.a_;
}

std::vector<std::vector<Rational>> AffineMatrix::evaluate_exact(std::span<const Rational> params) const {
    std::vector<std::vector<Rational>> m(n_, std::vector<Rational>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            m[i][j] = (*this)(i, j).evaluate(params);
        }
    }
    return m;
}

LinearSolution solve_linear(std::span<const AffineExpr> equations, std::size_t n_params) {
    LinearSolution sol;
    sol.solved.assign(n_params, std::nullopt);
    for (std::size_t i = 0; i < equations.size(); ++i) {
        AffineExpr e = equations[i];
        for (std::size_t k = 0; k < n_params; ++k) {
            if (sol.solved[k]) {
                e = e.substitute(k, *sol.solved[k]);
            }
        }
        const auto pivot = e.first_parameter();
        if (!pivot) {
            if (e.constant() != 0 && sol.consistent) {
                sol.consistent = false;
                sol.conflicting_equation = i;
            }
            continue;
        }
        // p = -(e - c p) / c
        const Rational c = e.coeff(*pivot);
        AffineExpr rest = e;
        rest.coeff(*pivot) = 0;
        rest *= Rational(-1) / c;
        for (auto& s : sol.solved) {
            if (s) {
                *s = s->substitute(*pivot, rest);
            }
        }
        sol.solved[*pivot] = rest;
    }
    return sol;
}

} // namespace fdstab
