#include "fdstab/presets.hpp"

#include "fdstab/error.hpp"

#include <array>

namespace fdstab {

namespace {

constexpr std::array<PresetInfo, 7> kPresets{{
    {Preset::EulerForward, "euler-forward", SchemeFamily::ThreePoint, "nu = 0", "never"},
    {Preset::LaxFriedrichs, "lax-friedrichs", SchemeFamily::ThreePoint, "nu = 1", "|z| <= 1"},
    {Preset::Upwind, "upwind", SchemeFamily::ThreePoint, "nu = z", "0 <= z <= 1"},
    {Preset::LaxWendroff, "lax-wendroff", SchemeFamily::ThreePoint, "nu = z^2", "|z| <= 1"},
    {Preset::LfAnalogue5, "lf-analogue-5pt", SchemeFamily::FivePoint,
     "sigma = 0, tau = -(1-z^2)/12", "|z| <= 1"},
    {Preset::UpwindAnalogue5, "upwind-analogue-5pt", SchemeFamily::FivePoint,
     "sigma = z(1-z^2)/6, tau = -sigma/2", "0 <= z <= 1"},
    {Preset::Strang, "strang", SchemeFamily::FivePoint,
     "sigma = z(1-z^2)/6, tau = -z^2(1-z^2)/24", "|z| <= 1"},
}};

} // namespace

std::span<const PresetInfo> all_presets() { return kPresets; }

const PresetInfo& preset_info(Preset p) {
    for (const auto& info : kPresets) {
        if (info.id == p) {
            return info;
        }
    }
    throw InternalError("unknown preset");
}

std::optional<Preset> parse_preset(std::string_view name) {
    for (const auto& info : kPresets) {
        if (info.name == name) {
            return info.id;
        }
    }
    return std::nullopt;
}

SchemeParams preset_params(Preset p, double z) {
    const double w = 1.0 - z * z;
    switch (p) {
    case Preset::EulerForward: return {0.0, 0.0, 0.0};
    case Preset::LaxFriedrichs: return {1.0, 0.0, 0.0};
    case Preset::Upwind: return {z, 0.0, 0.0};
    case Preset::LaxWendroff: return {z * z, 0.0, 0.0};
    case Preset::LfAnalogue5: return {0.0, 0.0, -w / 12.0};
    case Preset::UpwindAnalogue5: {
        const double sigma = z * w / 6.0;
        return {0.0, sigma, -0.5 * sigma};
    }
    case Preset::Strang: return {0.0, z * w / 6.0, -z * z * w / 24.0};
    }
    throw InternalError("unknown preset");
}

SchemeSpec preset_scheme(Preset p, double z) {
    return build_scheme(preset_info(p).family, z, preset_params(p, z));
}

std::vector<double> preset_eigenvalues(Preset p, double z) {
    const double z2 = z * z;
    const double w = 1.0 - z2;
    switch (p) {
    case Preset::EulerForward: return {0.5 * z2, 0.0};
    case Preset::LaxFriedrichs: return {-0.5 * w, 0.0};
    case Preset::Upwind: return {-0.5 * z * (1.0 - z), -0.5 * z * (1.0 - z)};
    // a1 + 2 a2 at nu = z^2; the often quoted -z^2(1-z^2)/4 is half of this.
    case Preset::LaxWendroff: return {0.0, -0.5 * z2 * w};
    case Preset::LfAnalogue5:
        return {-w * (2.0 + 3.0 * z2) / 36.0, -w * (4.0 + 3.0 * z2) / 72.0, -w / 72.0};
    case Preset::UpwindAnalogue5:
        return {-z * w * (2.0 - z) / 36.0, -z * w * (1.0 + z) * (2.0 - z) * (2.0 - z) / 72.0,
                -z * w * (2.0 - z) * (2.0 + 3.0 * z - 3.0 * z2) / 72.0};
    case Preset::Strang:
        return {0.0, -z2 * w * (4.0 - z2) / 144.0, -z2 * w * (3.0 - z2) * (4.0 - z2) / 96.0};
    }
    throw InternalError("unknown preset");
}

} // namespace fdstab
