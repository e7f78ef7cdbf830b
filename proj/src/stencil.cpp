#include "fdstab/stencil.hpp"

#include "fdstab/error.hpp"

#include <cmath>
#include <string>

namespace fdstab {

std::string_view to_string(DiffKind kind) {
    switch (kind) {
    case DiffKind::D: return "D";
    case DiffKind::D0: return "D0";
    case DiffKind::Lap: return "Lap";
    case DiffKind::D0Lap: return "D0Lap";
    case DiffKind::Lap2: return "Lap2";
    }
    return "?";
}

std::string_view to_string(SchemeFamily family) {
    return family == SchemeFamily::ThreePoint ? "three-point" : "five-point";
}

double apply_diff(DiffKind kind, const GridFunction& phi, Index j) {
    switch (kind) {
    case DiffKind::D:
        return phi[j] - phi[j - 1];
    case DiffKind::D0:
        return 0.5 * (phi[j + 1] - phi[j - 1]);
    case DiffKind::Lap:
        return phi[j - 1] - 2.0 * phi[j] + phi[j + 1];
    case DiffKind::D0Lap:
        return 0.5 * (-phi[j - 2] + 2.0 * phi[j - 1] - 2.0 * phi[j + 1] + phi[j + 2]);
    case DiffKind::Lap2:
        return phi[j - 2] - 4.0 * phi[j - 1] + 6.0 * phi[j] - 4.0 * phi[j + 1] + phi[j + 2];
    }
    throw InternalError("unknown difference kind");
}

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw NonFiniteError(std::string("scheme parameter ") + name + " is not finite");
    }
}

} // namespace

SchemeSpec build_three_point(double z, double nu) {
    require_finite(z, "z");
    require_finite(nu, "nu");
    SchemeSpec s;
    s.family = SchemeFamily::ThreePoint;
    s.z = z;
    s.nu = nu;
    s.coeffs = {0.5 * (nu + z), 1.0 - nu, 0.5 * (nu - z)};
    return s;
}

SchemeSpec build_five_point(double z, double sigma, double tau) {
    require_finite(z, "z");
    require_finite(sigma, "sigma");
    require_finite(tau, "tau");
    SchemeSpec s;
    s.family = SchemeFamily::FivePoint;
    s.z = z;
    s.sigma = sigma;
    s.tau = tau;
    const double z2 = z * z;
    s.coeffs = {
        -0.5 * sigma + tau,
        0.5 * z + 0.5 * z2 + sigma - 4.0 * tau,
        1.0 - z2 + 6.0 * tau,
        -0.5 * z + 0.5 * z2 - sigma - 4.0 * tau,
        0.5 * sigma + tau,
    };
    return s;
}

SchemeSpec build_scheme(SchemeFamily family, double z, const SchemeParams& params) {
    return family == SchemeFamily::ThreePoint ? build_three_point(z, params.nu)
                                              : build_five_point(z, params.sigma, params.tau);
}

ConsistencyDefect consistency_defect(const SchemeSpec& scheme) {
    double sum = 0.0;
    double moment = 0.0;
    const int L = scheme.reach();
    for (int l = -L; l <= L; ++l) {
        sum += scheme.coeff(l);
        moment += l * scheme.coeff(l);
    }
    return {std::abs(sum - 1.0), std::abs(moment + scheme.z)};
}

GridFunction apply_scheme(const SchemeSpec& scheme, const GridFunction& phi, LeftEdge edge) {
    const int L = scheme.reach();
    if (phi.ghost_count() < L) {
        throw ConfigError("scheme needs " + std::to_string(L) + " ghost values, grid has " +
                          std::to_string(phi.ghost_count()));
    }
    const Index first = edge == LeftEdge::Shrink ? phi.j_min() + L : phi.j_min();
    const Index last = phi.j_boundary();
    if (first > last) {
        throw ConfigError("grid too short for the stencil");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    for (Index j = first; j <= last; ++j) {
        double acc = 0.0;
        for (int l = -L; l <= L; ++l) {
            acc += scheme.coeffs[static_cast<std::size_t>(l + L)] * phi.value_or_zero(j + l);
        }
        out.push_back(acc);
    }
    return GridFunction(first, std::move(out), 0);
}

} // namespace fdstab
