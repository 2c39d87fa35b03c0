#pragma once

#include <cstdint>
#include <optional>

#include "gcg/types.hpp"

namespace gcg {

// Uniform discretization of the feature space: every axis is divided into
// `steps` equal subintervals, d^n cells total. Cells are half-open at the
// top except along the box's upper face, which is closed so in-box points
// always land in a cell.
class Grid {
 public:
  Grid(FeatureSpace space, int steps);

  const FeatureSpace& space() const { return space_; }
  int steps() const { return steps_; }
  std::int64_t num_cells() const { return num_cells_; }

  FeatureVector cell_lower(std::int64_t cell) const;
  FeatureVector cell_upper(std::int64_t cell) const;

  // Representative attacker action: the reward-maximizing corner. Only
  // valid for rewards monotone on the box; callers validate.
  FeatureVector cell_attack_point(std::int64_t cell) const { return cell_upper(cell); }

  // Cell containing f, or nullopt when f falls outside the box.
  std::optional<std::int64_t> locate(const FeatureVector& f) const;

  std::vector<int> unflatten(std::int64_t cell) const;
  std::int64_t flatten(const std::vector<int>& idx) const;

 private:
  FeatureSpace space_;
  int steps_;
  std::int64_t num_cells_;
};

}  // namespace gcg
