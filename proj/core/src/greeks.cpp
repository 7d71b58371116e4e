#include "uvm/greeks.hpp"

namespace uvm {

namespace {

// First and second derivative along one axis of a strided sequence.
struct AxisDiff {
  double first;
  double second;
};

inline AxisDiff axis_diff(const double* p, std::size_t k, std::size_t n, std::size_t stride,
                          double h) noexcept {
  auto at = [&](std::size_t m) { return p[m * stride]; };
  const double h2 = h * h;
  if (k == 0)
    return {(-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h),
            (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2};
  if (k == n - 1)
    return {(3.0 * at(k) - 4.0 * at(k - 1) + at(k - 2)) / (2.0 * h),
            (2.0 * at(k) - 5.0 * at(k - 1) + 4.0 * at(k - 2) - at(k - 3)) / h2};
  return {(at(k + 1) - at(k - 1)) / (2.0 * h), (at(k + 1) - 2.0 * at(k) + at(k - 1)) / h2};
}

}  // namespace

GreeksField greeks_of_slice(const Array2D<double>& slice, const GridSpec& grid) {
  const std::size_t nx = grid.nx_total();
  const std::size_t nv = grid.n_v();
  const double dx = grid.dx();
  const double dv = grid.dv();
  GreeksField g{Array2D<double>(nx, nv), Array2D<double>(nx, nv), Array2D<double>(nx, nv),
                Array2D<double>(nx, nv), Array2D<double>(nx, nv)};
  const double* base = slice.flat().data();
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      const AxisDiff ax = axis_diff(base + j, i, nx, nv, dx);
      const AxisDiff av = axis_diff(base + i * nv, j, nv, 1, dv);
      g.delta(i, j) = ax.first;
      g.gamma(i, j) = ax.second;
      g.vega(i, j) = av.first;
      g.vomma(i, j) = av.second;
    }
  }
  const double* vega = g.vega.flat().data();
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nv; ++j) g.vanna(i, j) = axis_diff(vega + j, i, nx, nv, dx).first;
  return g;
}

GreeksField greeks(const PriceSurface& surface, std::size_t time_index) {
  return greeks_of_slice(surface.slice(time_index), surface.grid());
}

void SurfaceProbe::seek(double t) {
  const std::size_t level = surface_->nearest_retained(t);
  if (level == level_) return;
  level_ = level;
  values_ = &surface_->slice(level);
  field_ = greeks_of_slice(*values_, surface_->grid());
}

PointGreeks SurfaceProbe::at(double x, double v) const noexcept {
  const BilinearStencil st = bilinear_stencil(surface_->grid(), x, v);
  return {st.apply(*values_),     st.apply(field_.delta), st.apply(field_.gamma),
          st.apply(field_.vega),  st.apply(field_.vanna), st.apply(field_.vomma)};
}

double SurfaceProbe::value(double x, double v) const noexcept {
  return bilinear(*values_, surface_->grid(), x, v);
}

}  // namespace uvm
