#include "uvm/surface.hpp"

#include <algorithm>
#include <cmath>

#include "uvm/error.hpp"

namespace uvm {

std::string_view to_string(SurfaceKind kind) noexcept {
  switch (kind) {
    case SurfaceKind::kFullDelta:
      return "full_delta";
    case SurfaceKind::kLimitP0:
      return "limit_p0";
    case SurfaceKind::kCorrectorP1:
      return "corrector_p1";
  }
  return "unknown";
}

BilinearStencil bilinear_stencil(const GridSpec& g, double x, double v) noexcept {
  const std::size_t nx = g.nx_total();
  const std::size_t nv = g.n_v();
  const double sx = std::clamp((x - g.x_min()) / g.dx(), 0.0, static_cast<double>(nx - 1));
  const double sv = std::clamp((v - g.v_min()) / g.dv(), 0.0, static_cast<double>(nv - 1));
  BilinearStencil st;
  st.i = std::min(static_cast<std::size_t>(sx), nx - 2);
  st.j = std::min(static_cast<std::size_t>(sv), nv - 2);
  st.wx = sx - static_cast<double>(st.i);
  st.wv = sv - static_cast<double>(st.j);
  return st;
}

PriceSurface::PriceSurface(GridSpec grid, ModelParams params, SurfaceKind kind,
                           std::vector<std::size_t> kept_times,
                           std::vector<Array2D<double>> slices)
    : grid_(std::move(grid)),
      params_(std::move(params)),
      kind_(kind),
      kept_(std::move(kept_times)),
      slices_(std::move(slices)) {
  if (kept_.size() != slices_.size() || kept_.size() < 2)
    throw ValidationError("kept_times", "one slice per kept level, at least two levels");
  if (kept_.front() != 0 || kept_.back() != grid_.n_t())
    throw ValidationError("kept_times", "must include t=0 and t=T");
  if (!std::is_sorted(kept_.begin(), kept_.end()) ||
      std::adjacent_find(kept_.begin(), kept_.end()) != kept_.end())
    throw ValidationError("kept_times", "must be strictly increasing");
  for (const auto& s : slices_)
    if (s.rows() != grid_.nx_total() || s.cols() != grid_.n_v())
      throw ValidationError("slices", "slice shape does not match the grid");
}

std::optional<std::size_t> PriceSurface::slot_of(std::size_t time_index) const noexcept {
  const auto it = std::lower_bound(kept_.begin(), kept_.end(), time_index);
  if (it == kept_.end() || *it != time_index) return std::nullopt;
  return static_cast<std::size_t>(it - kept_.begin());
}

bool PriceSurface::retains(std::size_t time_index) const noexcept {
  return slot_of(time_index).has_value();
}

const Array2D<double>& PriceSurface::slice(std::size_t time_index) const {
  const auto s = slot_of(time_index);
  if (!s)
    throw ValidationError("time_index",
                          "level " + std::to_string(time_index) + " was not retained");
  return slices_[*s];
}

const Array2D<double>& PriceSurface::level(std::size_t time_index,
                                           Array2D<double>& scratch) const {
  if (time_index > grid_.n_t()) throw ValidationError("time_index", "beyond the horizon");
  const auto it = std::lower_bound(kept_.begin(), kept_.end(), time_index);
  const std::size_t hi = static_cast<std::size_t>(it - kept_.begin());
  if (kept_[hi] == time_index) return slices_[hi];
  const std::size_t lo = hi - 1;
  const double w = static_cast<double>(time_index - kept_[lo]) /
                   static_cast<double>(kept_[hi] - kept_[lo]);
  if (scratch.rows() != grid_.nx_total() || scratch.cols() != grid_.n_v())
    scratch = Array2D<double>(grid_.nx_total(), grid_.n_v());
  auto out = scratch.flat();
  const auto a = slices_[lo].flat();
  const auto b = slices_[hi].flat();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (1.0 - w) * a[k] + w * b[k];
  return scratch;
}

std::size_t PriceSurface::nearest_retained(double t) const noexcept {
  const double target = std::clamp(t / grid_.dt(), 0.0, static_cast<double>(grid_.n_t()));
  const auto it = std::lower_bound(kept_.begin(), kept_.end(), target,
                                   [](std::size_t k, double x) { return static_cast<double>(k) < x; });
  if (it == kept_.end()) return kept_.back();
  if (it == kept_.begin()) return kept_.front();
  const std::size_t hi = *it;
  const std::size_t lo = *(it - 1);
  return (target - static_cast<double>(lo) < static_cast<double>(hi) - target) ? lo : hi;
}

double PriceSurface::value(std::size_t time_index, double x, double v) const {
  return bilinear(slice(time_index), grid_, x, v);
}

}  // namespace uvm
