#include "fdstab/grid_function.hpp"

#include "fdstab/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fdstab {

GridFunction::GridFunction(Index j_min, std::vector<double> values, int ghost_count)
    : j_min_(j_min), values_(std::move(values)), ghost_count_(ghost_count) {
    if (ghost_count_ < 0 || ghost_count_ > 2) {
        throw ConfigError("ghost_count must be 0, 1 or 2, got " + std::to_string(ghost_count_));
    }
    if (values_.size() <= static_cast<std::size_t>(ghost_count_)) {
        throw ConfigError("grid function needs at least one non-ghost value");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw NonFiniteError("non-finite value at grid index " +
                                 std::to_string(j_min_ + static_cast<Index>(k)));
        }
    }
}

GridFunction GridFunction::zeros(Index j_min, Index j_boundary) {
    if (j_boundary < j_min) {
        throw ConfigError("empty grid: j_boundary < j_min");
    }
    return GridFunction(j_min, std::vector<double>(static_cast<std::size_t>(j_boundary - j_min + 1), 0.0));
}

double GridFunction::operator[](Index j) const {
    if (!contains(j)) {
        throw IndexError(j, j_min_, j_max());
    }
    return values_[static_cast<std::size_t>(j - j_min_)];
}

double GridFunction::value_or_zero(Index j) const {
    if (j < j_min_) {
        return 0.0;
    }
    return (*this)[j];
}

double GridFunction::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

GridFunction GridFunction::without_ghosts() const {
    std::vector<double> v(values_.begin(), values_.end() - ghost_count_);
    return GridFunction(j_min_, std::move(v), 0);
}

GridFunction GridFunction::with_ghosts(std::span<const double> ghosts) const {
    std::vector<double> v(values_.begin(), values_.end() - ghost_count_);
    v.insert(v.end(), ghosts.begin(), ghosts.end());
    return GridFunction(j_min_, std::move(v), static_cast<int>(ghosts.size()));
}

} // namespace fdstab
