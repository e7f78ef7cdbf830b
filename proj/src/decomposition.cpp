#include "fdstab/decomposition.hpp"

#include "fdstab/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace fdstab {

namespace {

double d_at(const GridFunction& p, Index j) { return p[j] - p[j - 1]; }
double lap_at(const GridFunction& p, Index j) { return p[j - 1] - 2.0 * p[j] + p[j + 1]; }
double d0_at(const GridFunction& p, Index j) { return 0.5 * (p[j + 1] - p[j - 1]); }
double dlap_at(const GridFunction& p, Index j) { return lap_at(p, j) - lap_at(p, j - 1); }
double d0lap_at(const GridFunction& p, Index j) { return 0.5 * (lap_at(p, j + 1) - lap_at(p, j - 1)); }
double lap2_at(const GridFunction& p, Index j) { return lap_at(p, j - 1) - 2.0 * lap_at(p, j) + lap_at(p, j + 1); }

double quad(const Matrix& m, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            acc += v[i] * m(i, k) * v[k];
        }
    }
    return acc;
}

} // namespace

Decomposition lemma1_decomposition(double z, double nu) {
    const double off = 0.5 * (nu - z);
    Matrix q{{-z, off}, {off, 0.5 * nu * (1.0 - z)}};

    const double a1 = -0.5 * (nu - z * z);
    const double a2 = 0.25 * (nu * nu - z * z);
    Matrix m{{a1 + a2, -a2}, {-a2, a1 + a2}};

    Decomposition d;
    d.family = SchemeFamily::ThreePoint;
    d.Q = QuadraticForm(std::move(q), {"Phi_j", "DPhi_{j+1}"});
    d.M = QuadraticForm(std::move(m), {"DPhi_j", "DPhi_{j+1}"});
    d.aux_coeffs = {a1, a2};
    return d;
}

Decomposition lemma2_decomposition(double z, double sigma, double tau) {
    const double z2 = z * z;
    const double a1 = 0.25 * z2 * (z2 - 1.0) + 2.0 * z * sigma + 2.0 * tau;
    const double a2 = -0.25 * z * sigma + 0.5 * sigma * sigma - 0.5 * z2 * tau;
    const double a3 = -0.25 * sigma * sigma + tau * tau;
    const double q = 0.5 * sigma + tau;

    const double q12 = -0.5 * z * (1.0 - z);
    const double q23 = 0.5 * sigma - z * sigma - tau;
    const double q34 = 0.5 * z * (1.0 + z) * q - a1 / 3.0;
    Matrix qm{
        {-z, q12, sigma, q},
        {q12, 0.5 * z2 * (1.0 - z) - sigma, q23, -z * q},
        {sigma, q23, 0.5 * z2 * sigma + z * tau, q34},
        {q, -z * q, q34, 0.25 * z * sigma + 0.5 * z2 * tau + sigma * tau - a1 / 3.0},
    };

    const double d = a1 / 3.0;
    Matrix m{
        {d + a2 + a3, -a2 - 2.0 * a3, a3},
        {-a2 - 2.0 * a3, d + 2.0 * a2 + 4.0 * a3, -a2 - 2.0 * a3},
        {a3, -a2 - 2.0 * a3, d + a2 + a3},
    };

    Decomposition out;
    out.family = SchemeFamily::FivePoint;
    out.Q = QuadraticForm(std::move(qm), {"Phi_j", "DPhi_{j+1}", "LapPhi_j", "DLapPhi_{j+1}"});
    out.M = QuadraticForm(std::move(m), {"LapPhi_{j-1}", "LapPhi_j", "LapPhi_{j+1}"});
    out.aux_coeffs = {a1, a2, a3};
    return out;
}

Decomposition decomposition_for(const SchemeSpec& scheme) {
    return scheme.family == SchemeFamily::ThreePoint
               ? lemma1_decomposition(scheme.z, scheme.nu)
               : lemma2_decomposition(scheme.z, scheme.sigma, scheme.tau);
}

std::vector<double> closed_form_eigenvalues(const Decomposition& dec) {
    const auto& a = dec.aux_coeffs;
    if (dec.family == SchemeFamily::ThreePoint) {
        return {a[0], a[0] + 2.0 * a[1]};
    }
    const double d = a[0] / 3.0;
    return {d, d + a[1], d + 3.0 * a[1] + 6.0 * a[2]};
}

std::vector<std::vector<double>> closed_form_eigenvectors(SchemeFamily family) {
    if (family == SchemeFamily::ThreePoint) {
        return {{1.0, 1.0}, {1.0, -1.0}};
    }
    return {{1.0, 1.0, 1.0}, {-1.0, 0.0, 1.0}, {1.0, -2.0, 1.0}};
}

double telescopic_term(const Decomposition& dec, const GridFunction& phi, Index j) {
    if (dec.family == SchemeFamily::ThreePoint) {
        const std::array<double, 2> v{phi[j], d_at(phi, j + 1)};
        return quad(dec.Q.matrix(), v);
    }
    const std::array<double, 4> v{phi[j], d_at(phi, j + 1), lap_at(phi, j), dlap_at(phi, j + 1)};
    return quad(dec.Q.matrix(), v);
}

double dissipative_term(const Decomposition& dec, const GridFunction& phi, Index j) {
    if (dec.family == SchemeFamily::ThreePoint) {
        const std::array<double, 2> w{d_at(phi, j), d_at(phi, j + 1)};
        return quad(dec.M.matrix(), w);
    }
    const std::array<double, 3> w{lap_at(phi, j - 1), lap_at(phi, j), lap_at(phi, j + 1)};
    return quad(dec.M.matrix(), w);
}

ContractivityVerdict contractivity_verdict(const Decomposition& dec, double tol) {
    ContractivityVerdict v;
    v.eigenvalues = symmetric_eigenvalues(dec.M.matrix());
    v.lambda_max = v.eigenvalues.empty() ? 0.0 : v.eigenvalues.back();
    for (double& e : v.eigenvalues) {
        if (e > 0.0 && e <= tol) {
            e = 0.0;
            v.clamped = true;
        }
    }
    v.contractive = v.lambda_max <= tol;
    v.definiteness = classify(v.lambda_max, tol);
    return v;
}

double verify_decomposition_identity(const SchemeSpec& scheme, const Decomposition& dec,
                                     const GridFunction& phi, Index j_lo, Index j_hi) {
    if (scheme.family != dec.family) {
        throw ConfigError("decomposition does not belong to this scheme family");
    }
    const int L = scheme.reach();
    double worst = 0.0;
    for (Index j = j_lo; j <= j_hi; ++j) {
        double psi = 0.0;
        for (int l = -L; l <= L; ++l) {
            psi += scheme.coeff(l) * phi[j + l];
        }
        const double lhs = psi * psi - phi[j] * phi[j];
        const double rhs = telescopic_term(dec, phi, j) - telescopic_term(dec, phi, j - 1) +
                           dissipative_term(dec, phi, j);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

std::string_view to_string(IbpIdentity id) {
    switch (id) {
    case IbpIdentity::Tele01: return "tele_01";
    case IbpIdentity::Tele02: return "tele_02";
    case IbpIdentity::Tele03: return "tele_03";
    case IbpIdentity::Tele04: return "tele_04";
    case IbpIdentity::Tele11: return "tele_11";
    case IbpIdentity::Tele12: return "tele_12";
    case IbpIdentity::Tele13: return "tele_13";
    case IbpIdentity::Tele14: return "tele_14";
    }
    return "?";
}

IbpIdentity parse_ibp_identity(std::string_view name) {
    for (IbpIdentity id : kAllIbpIdentities) {
        if (to_string(id) == name) {
            return id;
        }
    }
    throw ConfigError("unknown identity '" + std::string(name) +
                      "'; expected one of tele_01..tele_04, tele_11..tele_14");
}

IbpSides ibp_sides(IbpIdentity id, const GridFunction& p, Index j) {
    const double D_j = d_at(p, j);
    const double D_j1 = d_at(p, j + 1);
    const double L_jm = lap_at(p, j - 1);
    const double L_j = lap_at(p, j);
    const double DL_j = dlap_at(p, j);
    const double DL_j1 = dlap_at(p, j + 1);
    const double pj = p[j];
    const double pjm = p[j - 1];

    switch (id) {
    case IbpIdentity::Tele01: {
        const double d0 = d0_at(p, j);
        return {d0 * d0, 0.25 * (2.0 * D_j * D_j + 2.0 * D_j1 * D_j1 - L_j * L_j)};
    }
    case IbpIdentity::Tele02:
        return {2.0 * pj * d0_at(p, j), (pj * pj + pj * D_j1) - (pjm * pjm + pjm * D_j)};
    case IbpIdentity::Tele03:
        return {2.0 * d0_at(p, j) * L_j, D_j1 * D_j1 - D_j * D_j};
    case IbpIdentity::Tele04:
        return {2.0 * pj * L_j, -D_j * D_j - D_j1 * D_j1 + (2.0 * pj * D_j1 + D_j1 * D_j1) -
                                    (2.0 * pjm * D_j + D_j * D_j)};
    case IbpIdentity::Tele11:
        return {2.0 * d0_at(p, j) * d0lap_at(p, j),
                -2.0 * L_j * L_j + 0.25 * (DL_j * DL_j + DL_j1 * DL_j1) +
                    (D_j1 - 0.25 * DL_j1) * (DL_j1 + 2.0 * L_j) -
                    (D_j - 0.25 * DL_j) * (DL_j + 2.0 * L_jm)};
    case IbpIdentity::Tele12:
        return {2.0 * pj * d0lap_at(p, j),
                (pj * (DL_j1 + 2.0 * L_j) + (L_j - D_j1) * D_j1) -
                    (pjm * (DL_j + 2.0 * L_jm) + (L_jm - D_j) * D_j)};
    case IbpIdentity::Tele13:
        return {2.0 * d0_at(p, j) * lap2_at(p, j),
                (-(DL_j1 + L_j) * L_j + 2.0 * D_j1 * DL_j1) -
                    (-(DL_j + L_jm) * L_jm + 2.0 * D_j * DL_j)};
    case IbpIdentity::Tele14:
        return {2.0 * pj * lap2_at(p, j),
                2.0 * L_j * L_j + (2.0 * pj * DL_j1 - 2.0 * D_j1 * L_j) -
                    (2.0 * pjm * DL_j - 2.0 * D_j * L_jm)};
    }
    throw InternalError("unknown identity");
}

double verify_ibp_identity(IbpIdentity id, const GridFunction& phi, Index j) {
    const IbpSides s = ibp_sides(id, phi, j);
    return std::abs(s.lhs - s.rhs);
}

} // namespace fdstab
