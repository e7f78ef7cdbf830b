#pragma once

#include "fdstab/stencil.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fdstab {

enum class Preset {
    EulerForward,
    LaxFriedrichs,
    Upwind,
    LaxWendroff,
    LfAnalogue5,
    UpwindAnalogue5,
    Strang,
};

struct PresetInfo {
    Preset id;
    std::string_view name;        ///< command-line name
    SchemeFamily family;
    std::string_view parameters;  ///< parameter formulas in z
    std::string_view contractive; ///< z-range where the interior scheme is contractive
};

std::span<const PresetInfo> all_presets();
const PresetInfo& preset_info(Preset p);
std::optional<Preset> parse_preset(std::string_view name);

SchemeParams preset_params(Preset p, double z);
SchemeSpec preset_scheme(Preset p, double z);

/// Named eigenvalue formulas of the dissipation matrix, in the order
/// (1,1),(1,-1) for three-point and (1,1,1),(-1,0,1),(1,-2,1) for five-point.
std::vector<double> preset_eigenvalues(Preset p, double z);

} // namespace fdstab
