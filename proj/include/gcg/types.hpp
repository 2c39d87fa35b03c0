#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gcg/common.hpp"

namespace gcg {

// A feature vector is a point in the n-dimensional feature space; a Sample
// stores one point per row.
using FeatureVector = Eigen::VectorXd;
using Sample = Eigen::MatrixXd;

// Axis-aligned bounded box [lower, upper] the game is played over.
struct FeatureSpace {
  FeatureVector lower;
  FeatureVector upper;

  FeatureSpace() = default;
  FeatureSpace(FeatureVector lo, FeatureVector up);

  // Uniform box [lo, hi]^dim.
  static FeatureSpace cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const FeatureVector& f) const;
  double diagonal() const { return (upper - lower).norm(); }
  FeatureVector clamp(const FeatureVector& f) const;
};

enum class RewardKind { SumOfFeatures, ProductOfFirstTwo, WeightedSum };

// Non-negative attacker reward over the feature space.
struct RewardFunction {
  RewardKind kind = RewardKind::SumOfFeatures;
  Eigen::VectorXd weights;  // WeightedSum only

  static RewardFunction sum() { return {RewardKind::SumOfFeatures, {}}; }
  static RewardFunction product_first_two() { return {RewardKind::ProductOfFirstTwo, {}}; }
  static RewardFunction weighted(Eigen::VectorXd w) { return {RewardKind::WeightedSum, std::move(w)}; }

  double value(const FeatureVector& f) const;
  Eigen::VectorXd value_batch(const Sample& points) const;

  // Extremes over a box; closed form because all kinds are monotone
  // coordinate-wise once validated against the box.
  double max_over(const FeatureSpace& space) const;
  double min_over(const FeatureSpace& space) const;

  // True when the reward never decreases as any coordinate grows on this box.
  bool monotone_on(const FeatureSpace& space) const;

  // Throws InvalidInput unless R(f) >= 0 for every f inside the box.
  void validate_non_negative(const FeatureSpace& space) const;
};

enum class TransformKind { Identity, Additive };

struct GameConfig {
  FeatureSpace space;
  RewardFunction reward;
  TransformKind transform = TransformKind::Identity;
  double fp_budget = 0.05;  // phi
  std::uint64_t seed = 1;

  void validate() const;
};

}  // namespace gcg
