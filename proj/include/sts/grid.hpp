#pragma once

#include <cstddef>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

namespace sts {

enum class Boundary { dirichlet_zero, periodic };

// Smallest spacing refine_middle_half() may create, as a fraction of the
// domain length 2a.
inline constexpr double kDefaultSpacingFloorFraction = 0x1p-160;

/**
 * Non-uniform, symmetric 1-D mesh on [-a, a] built by nested bisection of a
 * uniform grid.
 *
 * Coordinates are stored in units of the half-width a, so every node is a
 * dyadic rational in [-1, 1] and spacings are exact in binary. Physical
 * coordinates are a * unit. Periodic grids omit the node at +a.
 */
class Grid1D {
 public:
  static Grid1D uniform(double half_width, int n_intervals, Boundary bc);

  std::size_t size() const noexcept { return units_.size(); }
  double half_width() const noexcept { return half_width_; }
  Boundary boundary() const noexcept { return bc_; }
  bool periodic() const noexcept { return bc_ == Boundary::periodic; }
  int base_intervals() const noexcept { return base_intervals_; }
  int finest_level() const noexcept { return finest_level_; }

  double x(std::size_t i) const noexcept { return half_width_ * units_[i]; }
  double unit(std::size_t i) const noexcept { return units_[i]; }
  int level(std::size_t i) const noexcept { return levels_[i]; }
  std::span<const double> units() const noexcept { return units_; }
  std::span<const int> levels() const noexcept { return levels_; }
  std::vector<double> coordinates() const;

  // x_{i+1} - x_i. For periodic grids the last node wraps to the first; for
  // Dirichlet grids i must be < size() - 1.
  double spacing_right(std::size_t i) const noexcept;
  double min_spacing() const noexcept;
  double base_spacing() const noexcept { return 2.0 * half_width_ / base_intervals_; }

  // Index of the node at x = 0 (always present).
  std::size_t center_index() const noexcept { return center_; }

  // Half-width, in units of a, of the contiguous finest-spacing region.
  double finest_region_half_width() const noexcept;

  /**
   * Bisects every interval whose midpoint lies in the middle half of the
   * current finest region. Throws ResolutionFloorReached when the new spacing
   * would drop below floor_fraction * 2a.
   */
  Grid1D refine_middle_half(double floor_fraction = kDefaultSpacingFloorFraction) const;

  // True when every node of other is also a node of this grid.
  bool contains_nodes_of(const Grid1D& other) const;

  // Plain-text dump: header "x,unit,level" then one node per line.
  void write_csv(std::ostream& out) const;

 private:
  Grid1D() = default;
  void finalize();

  double half_width_ = 1.0;
  Boundary bc_ = Boundary::dirichlet_zero;
  int base_intervals_ = 0;
  int finest_level_ = 0;
  std::size_t center_ = 0;
  std::vector<double> units_;
  std::vector<int> levels_;
};

using GridPtr = std::shared_ptr<const Grid1D>;

// Solution values on a grid at a given time.
class Field {
 public:
  Field(GridPtr grid, std::vector<double> values, double time = 0.0);

  const Grid1D& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double value(std::size_t i) const noexcept { return values_[i]; }
  double time() const noexcept { return time_; }
  std::size_t size() const noexcept { return values_.size(); }

  bool all_finite() const noexcept;
  Field with_values(std::vector<double> values, double time) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  double time_;
};

GridPtr make_grid(Grid1D grid);

/**
 * Moves f onto g_new, which must contain every node of f's grid. Shared
 * nodes are copied bit for bit; new nodes are filled from a natural cubic
 * spline through the old values.
 */
Field transfer(const Field& f, GridPtr g_new);

}  // namespace sts
