#include "sts/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sts/errors.hpp"
#include "sts/spline.hpp"

namespace sts {

Grid1D Grid1D::uniform(double half_width, int n_intervals, Boundary bc) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidArgument("uniform_grid: half-width must be positive and finite");
  }
  if (n_intervals < 4 || !std::has_single_bit(static_cast<unsigned>(n_intervals))) {
    throw InvalidArgument("uniform_grid: n_intervals must be a power of two >= 4, got " +
                          std::to_string(n_intervals));
  }
  Grid1D g;
  g.half_width_ = half_width;
  g.bc_ = bc;
  g.base_intervals_ = n_intervals;
  const double step = 2.0 / n_intervals;  // exact: power of two
  const int count = bc == Boundary::periodic ? n_intervals : n_intervals + 1;
  g.units_.resize(count);
  for (int k = 0; k < count; ++k) g.units_[k] = -1.0 + k * step;
  g.levels_.assign(count, 0);
  g.finalize();
  return g;
}

void Grid1D::finalize() {
  const auto it = std::find(units_.begin(), units_.end(), 0.0);
  center_ = static_cast<std::size_t>(it - units_.begin());
}

std::vector<double> Grid1D::coordinates() const {
  std::vector<double> xs(units_.size());
  for (std::size_t i = 0; i < units_.size(); ++i) xs[i] = x(i);
  return xs;
}

double Grid1D::spacing_right(std::size_t i) const noexcept {
  if (i + 1 < units_.size()) return half_width_ * (units_[i + 1] - units_[i]);
  // periodic wrap: from the last node to +1, identified with -1
  return half_width_ * (1.0 - units_[i]);
}

double Grid1D::min_spacing() const noexcept {
  return half_width_ * (2.0 / base_intervals_) * std::ldexp(1.0, -finest_level_);
}

double Grid1D::finest_region_half_width() const noexcept { return std::ldexp(1.0, -finest_level_); }

Grid1D Grid1D::refine_middle_half(double floor_fraction) const {
  const double fine_step = (2.0 / base_intervals_) * std::ldexp(1.0, -finest_level_);
  const double new_step = 0.5 * fine_step;
  if (new_step * 0.5 < floor_fraction) {  // new_step * a / (2a)
    throw ResolutionFloorReached("refine_middle_half: spacing floor reached at level " +
                                 std::to_string(finest_level_ + 1));
  }
  const double inner = 0.5 * finest_region_half_width();
  const int new_level = finest_level_ + 1;

  Grid1D g;
  g.half_width_ = half_width_;
  g.bc_ = bc_;
  g.base_intervals_ = base_intervals_;
  g.finest_level_ = new_level;
  g.units_.reserve(units_.size() + base_intervals_ / 2 + 1);
  g.levels_.reserve(units_.size() + base_intervals_ / 2 + 1);

  std::vector<int> levels(levels_);
  for (std::size_t i = 0; i < units_.size(); ++i) {
    g.units_.push_back(units_[i]);
    g.levels_.push_back(levels[i]);
    if (i + 1 == units_.size()) break;
    const double mid = 0.5 * (units_[i] + units_[i + 1]);
    if (mid > -inner && mid < inner) {
      g.levels_.back() = std::max(g.levels_.back(), new_level);
      g.units_.push_back(mid);
      g.levels_.push_back(new_level);
      levels[i + 1] = std::max(levels[i + 1], new_level);
    }
  }
  g.finalize();
  return g;
}

bool Grid1D::contains_nodes_of(const Grid1D& other) const {
  if (other.half_width_ != half_width_ || other.bc_ != bc_) return false;
  std::size_t j = 0;
  for (double u : other.units_) {
    while (j < units_.size() && units_[j] < u) ++j;
    if (j == units_.size() || units_[j] != u) return false;
  }
  return true;
}

void Grid1D::write_csv(std::ostream& out) const {
  out << "x,unit,level\n";
  char buf[96];
  for (std::size_t i = 0; i < units_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", x(i), units_[i], levels_[i]);
    out << buf;
  }
}

GridPtr make_grid(Grid1D grid) { return std::make_shared<const Grid1D>(std::move(grid)); }

Field::Field(GridPtr grid, std::vector<double> values, double time)
    : grid_(std::move(grid)), values_(std::move(values)), time_(time) {
  if (!grid_) throw InvalidArgument("Field: null grid");
  if (values_.size() != grid_->size()) {
    throw InvalidArgument("Field: " + std::to_string(values_.size()) + " values for " +
                          std::to_string(grid_->size()) + " nodes");
  }
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field Field::with_values(std::vector<double> values, double time) const {
  return Field(grid_, std::move(values), time);
}

Field transfer(const Field& f, GridPtr g_new) {
  const Grid1D& old_grid = f.grid();
  if (!g_new->contains_nodes_of(old_grid)) {
    throw InvalidArgument("transfer: new grid is missing nodes of the old grid");
  }
  if (g_new->size() == old_grid.size()) {
    return Field(std::move(g_new), std::vector<double>(f.values().begin(), f.values().end()), f.time());
  }
  const std::vector<double> xs = old_grid.coordinates();
  const NaturalCubicSpline spline(xs, f.values());
  std::vector<double> values(g_new->size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < g_new->size(); ++i) {
    const double u = g_new->unit(i);
    while (j < old_grid.size() && old_grid.unit(j) < u) ++j;
    if (j < old_grid.size() && old_grid.unit(j) == u) {
      values[i] = f.value(j);
    } else {
      values[i] = spline(g_new->x(i));
    }
  }
  return Field(std::move(g_new), std::move(values), f.time());
}

}  // namespace sts
