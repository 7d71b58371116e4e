#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "uvm/array2d.hpp"
#include "uvm/grid.hpp"
#include "uvm/model.hpp"

namespace uvm {

enum class SurfaceKind { kFullDelta, kLimitP0, kCorrectorP1 };

std::string_view to_string(SurfaceKind kind) noexcept;

/// Cell and weights for bilinear interpolation at (x, v), clamped to the grid
/// rectangle. Reusable across fields sharing the grid.
struct BilinearStencil {
  std::size_t i = 0;
  std::size_t j = 0;
  double wx = 0.0;
  double wv = 0.0;

  double apply(const Array2D<double>& f) const noexcept {
    return (1.0 - wx) * ((1.0 - wv) * f(i, j) + wv * f(i, j + 1)) +
           wx * ((1.0 - wv) * f(i + 1, j) + wv * f(i + 1, j + 1));
  }
};

BilinearStencil bilinear_stencil(const GridSpec& grid, double x, double v) noexcept;

inline double bilinear(const Array2D<double>& field, const GridSpec& grid, double x,
                       double v) noexcept {
  return bilinear_stencil(grid, x, v).apply(field);
}

/// Discrete solution P(t_n, x_i, v_j) on a subset of the time levels.
///
/// Slices are (n_x + 2) x n_v arrays indexed (i, j). Time indices refer to the
/// grid's levels t_n = n dt, n = 0..n_t; levels 0 and n_t are always kept.
class PriceSurface {
 public:
  PriceSurface(GridSpec grid, ModelParams params, SurfaceKind kind,
               std::vector<std::size_t> kept_times, std::vector<Array2D<double>> slices);

  const GridSpec& grid() const noexcept { return grid_; }
  const ModelParams& params() const noexcept { return params_; }
  SurfaceKind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& kept_times() const noexcept { return kept_; }

  bool retains(std::size_t time_index) const noexcept;
  bool retains_every_level() const noexcept { return kept_.size() == grid_.n_t() + 1; }

  /// Throws ValidationError if the level was not retained.
  const Array2D<double>& slice(std::size_t time_index) const;
  const Array2D<double>& initial() const noexcept { return slices_.front(); }
  const Array2D<double>& terminal() const noexcept { return slices_.back(); }

  /// Level `time_index` itself when retained; otherwise linear interpolation in
  /// time between the bracketing retained levels, written to `scratch`.
  const Array2D<double>& level(std::size_t time_index, Array2D<double>& scratch) const;

  /// Retained level closest to time t (ties resolve to the later level).
  std::size_t nearest_retained(double t) const noexcept;

  /// Bilinear value at (x, v) on a retained level.
  double value(std::size_t time_index, double x, double v) const;
  double value_at_start(double x, double v) const noexcept {
    return bilinear(initial(), grid_, x, v);
  }

  std::size_t slot_count() const noexcept { return slices_.size(); }
  const Array2D<double>& slot(std::size_t s) const noexcept { return slices_[s]; }

 private:
  std::optional<std::size_t> slot_of(std::size_t time_index) const noexcept;

  GridSpec grid_;
  ModelParams params_;
  SurfaceKind kind_;
  std::vector<std::size_t> kept_;
  std::vector<Array2D<double>> slices_;
};

}  // namespace uvm
