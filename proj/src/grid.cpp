#include "gcg/grid.hpp"

#include <cmath>

namespace gcg {

Grid::Grid(FeatureSpace space, int steps) : space_(std::move(space)), steps_(steps) {
  if (steps_ <= 0) throw InvalidInput("grid needs at least one step per axis");
  double cells = std::pow(static_cast<double>(steps_), space_.dim());
  if (cells > 9.0e18) throw ResourceLimit("grid cell count overflows");
  num_cells_ = 1;
  for (int k = 0; k < space_.dim(); ++k) num_cells_ *= steps_;
}

std::vector<int> Grid::unflatten(std::int64_t cell) const {
  std::vector<int> idx(static_cast<std::size_t>(space_.dim()));
  for (int k = space_.dim() - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(cell % steps_);
    cell /= steps_;
  }
  return idx;
}

std::int64_t Grid::flatten(const std::vector<int>& idx) const {
  std::int64_t flat = 0;
  for (int k = 0; k < space_.dim(); ++k) {
    flat = flat * steps_ + idx[static_cast<std::size_t>(k)];
  }
  return flat;
}

FeatureVector Grid::cell_lower(std::int64_t cell) const {
  auto idx = unflatten(cell);
  FeatureVector lo(space_.dim());
  for (int k = 0; k < space_.dim(); ++k) {
    double width = (space_.upper[k] - space_.lower[k]) / steps_;
    lo[k] = space_.lower[k] + idx[static_cast<std::size_t>(k)] * width;
  }
  return lo;
}

FeatureVector Grid::cell_upper(std::int64_t cell) const {
  auto idx = unflatten(cell);
  FeatureVector hi(space_.dim());
  for (int k = 0; k < space_.dim(); ++k) {
    double width = (space_.upper[k] - space_.lower[k]) / steps_;
    hi[k] = space_.lower[k] + (idx[static_cast<std::size_t>(k)] + 1) * width;
    if (idx[static_cast<std::size_t>(k)] == steps_ - 1) hi[k] = space_.upper[k];
  }
  return hi;
}

std::optional<std::int64_t> Grid::locate(const FeatureVector& f) const {
  if (f.size() != space_.dim()) throw InvalidInput("grid query dimension mismatch");
  std::int64_t flat = 0;
  for (int k = 0; k < space_.dim(); ++k) {
    double width = (space_.upper[k] - space_.lower[k]) / steps_;
    std::int64_t idx = static_cast<std::int64_t>(std::floor((f[k] - space_.lower[k]) / width));
    if (f[k] == space_.upper[k]) idx = steps_ - 1;  // closed top face
    if (idx < 0 || idx >= steps_) return std::nullopt;
    flat = flat * steps_ + idx;
  }
  return flat;
}

}  // namespace gcg
