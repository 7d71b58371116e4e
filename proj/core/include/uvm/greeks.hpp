#pragma once

#include <cstddef>

#include "uvm/array2d.hpp"
#include "uvm/grid.hpp"
#include "uvm/surface.hpp"

namespace uvm {

/// Finite-difference sensitivities of one price slice on the grid nodes:
/// second-order central differences inside, second-order one-sided at the edges.
struct GreeksField {
  Array2D<double> delta;  // dP/dx
  Array2D<double> gamma;  // d2P/dx2
  Array2D<double> vega;   // dP/dv
  Array2D<double> vanna;  // d2P/dxdv
  Array2D<double> vomma;  // d2P/dv2
};

GreeksField greeks_of_slice(const Array2D<double>& slice, const GridSpec& grid);

/// Greeks of a retained level; throws ValidationError for a missing level.
GreeksField greeks(const PriceSurface& surface, std::size_t time_index);

/// Greeks at an off-grid point, bilinear in each field.
struct PointGreeks {
  double value = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double vega = 0.0;
  double vanna = 0.0;
  double vomma = 0.0;
};

/// Nearest-retained-level Greeks of a surface, evaluated lazily and cached per
/// level so a time-major path loop pays one field evaluation per level.
class SurfaceProbe {
 public:
  explicit SurfaceProbe(const PriceSurface& surface) : surface_(&surface) {}

  /// Selects the retained level nearest to t.
  void seek(double t);
  std::size_t current_level() const noexcept { return level_; }

  PointGreeks at(double x, double v) const noexcept;
  double value(double x, double v) const noexcept;

  const PriceSurface& surface() const noexcept { return *surface_; }
  const GreeksField& field() const noexcept { return field_; }

 private:
  const PriceSurface* surface_;
  std::size_t level_ = static_cast<std::size_t>(-1);
  const Array2D<double>* values_ = nullptr;
  GreeksField field_;
};

}  // namespace uvm
