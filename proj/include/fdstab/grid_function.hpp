#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fdstab {

using Index = std::ptrdiff_t;

/// Real sequence on a truncated half-line grid, indices j_min ... j_max.
///
/// The outflow point x = 0 sits at j_boundary; the ghost_count entries above it are
/// extrapolated values Phi_1, Phi_2 (0 when ghosts are not filled). Values are
/// always finite.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(Index j_min, std::vector<double> values, int ghost_count = 0);

    /// Zero sequence on [j_min, j_boundary] with no ghosts.
    static GridFunction zeros(Index j_min, Index j_boundary);

    Index j_min() const noexcept { return j_min_; }
    Index j_max() const noexcept { return j_min_ + static_cast<Index>(values_.size()) - 1; }
    Index j_boundary() const noexcept { return j_max() - ghost_count_; }
    int ghost_count() const noexcept { return ghost_count_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool contains(Index j) const noexcept { return j >= j_min_ && j <= j_max(); }

    /// Checked access; throws IndexError naming the missing index.
    double operator[](Index j) const;

    /// Zero to the left of j_min (compactly supported data); throws above j_max.
    double value_or_zero(Index j) const;

    std::span<const double> values() const noexcept { return values_; }

    /// Max |Phi_j| over stored values (ghosts included).
    double sup_norm() const noexcept;

    /// Copy of the non-ghost part (j_min ... j_boundary).
    GridFunction without_ghosts() const;

    /// Replaces any existing ghosts with the given ones (Phi_{b+1}, Phi_{b+2}, ...).
    GridFunction with_ghosts(std::span<const double> ghosts) const;

private:
    Index j_min_ = 0;
    std::vector<double> values_;
    int ghost_count_ = 0;
};

} // namespace fdstab
