#include "gcg/types.hpp"

#include <cmath>

namespace gcg {

FeatureSpace::FeatureSpace(FeatureVector lo, FeatureVector up)
    : lower(std::move(lo)), upper(std::move(up)) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw InvalidInput("feature space bounds must share a positive dimension");
  }
  for (int i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
      throw InvalidInput("feature space requires finite lower < upper per axis");
    }
  }
}

FeatureSpace FeatureSpace::cube(int dim, double lo, double hi) {
  if (dim <= 0) throw InvalidInput("dimension must be positive");
  return FeatureSpace(FeatureVector::Constant(dim, lo), FeatureVector::Constant(dim, hi));
}

bool FeatureSpace::contains(const FeatureVector& f) const {
  if (f.size() != lower.size()) return false;
  for (int i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i]) || f[i] < lower[i] || f[i] > upper[i]) return false;
  }
  return true;
}

FeatureVector FeatureSpace::clamp(const FeatureVector& f) const {
  return f.cwiseMax(lower).cwiseMin(upper);
}

double RewardFunction::value(const FeatureVector& f) const {
  switch (kind) {
    case RewardKind::SumOfFeatures:
      return f.sum();
    case RewardKind::ProductOfFirstTwo:
      if (f.size() < 2) throw InvalidInput("product reward needs at least two features");
      return f[0] * f[1];
    case RewardKind::WeightedSum:
      if (weights.size() != f.size()) throw InvalidInput("reward weight dimension mismatch");
      return weights.dot(f);
  }
  throw InvalidInput("unknown reward kind");
}

Eigen::VectorXd RewardFunction::value_batch(const Sample& points) const {
  switch (kind) {
    case RewardKind::SumOfFeatures:
      return points.rowwise().sum();
    case RewardKind::ProductOfFirstTwo:
      if (points.cols() < 2) throw InvalidInput("product reward needs at least two features");
      return points.col(0).cwiseProduct(points.col(1));
    case RewardKind::WeightedSum:
      if (weights.size() != points.cols()) throw InvalidInput("reward weight dimension mismatch");
      return points * weights;
  }
  throw InvalidInput("unknown reward kind");
}

double RewardFunction::max_over(const FeatureSpace& space) const {
  switch (kind) {
    case RewardKind::SumOfFeatures:
      return space.upper.sum();
    case RewardKind::ProductOfFirstTwo: {
      if (space.dim() < 2) throw InvalidInput("product reward needs at least two features");
      // candidates are corners in the first two axes
      double best = -HUGE_VAL;
      for (double a : {space.lower[0], space.upper[0]})
        for (double b : {space.lower[1], space.upper[1]}) best = std::max(best, a * b);
      return best;
    }
    case RewardKind::WeightedSum: {
      if (weights.size() != space.dim()) throw InvalidInput("reward weight dimension mismatch");
      double v = 0.0;
      for (int i = 0; i < weights.size(); ++i) {
        v += weights[i] * (weights[i] >= 0 ? space.upper[i] : space.lower[i]);
      }
      return v;
    }
  }
  throw InvalidInput("unknown reward kind");
}

double RewardFunction::min_over(const FeatureSpace& space) const {
  switch (kind) {
    case RewardKind::SumOfFeatures:
      return space.lower.sum();
    case RewardKind::ProductOfFirstTwo: {
      if (space.dim() < 2) throw InvalidInput("product reward needs at least two features");
      double worst = HUGE_VAL;
      for (double a : {space.lower[0], space.upper[0]})
        for (double b : {space.lower[1], space.upper[1]}) worst = std::min(worst, a * b);
      return worst;
    }
    case RewardKind::WeightedSum: {
      if (weights.size() != space.dim()) throw InvalidInput("reward weight dimension mismatch");
      double v = 0.0;
      for (int i = 0; i < weights.size(); ++i) {
        v += weights[i] * (weights[i] >= 0 ? space.lower[i] : space.upper[i]);
      }
      return v;
    }
  }
  throw InvalidInput("unknown reward kind");
}

bool RewardFunction::monotone_on(const FeatureSpace& space) const {
  switch (kind) {
    case RewardKind::SumOfFeatures:
      return true;
    case RewardKind::ProductOfFirstTwo:
      return space.dim() >= 2 && space.lower[0] >= 0.0 && space.lower[1] >= 0.0;
    case RewardKind::WeightedSum:
      return weights.size() == space.dim() && (weights.array() >= 0.0).all();
  }
  return false;
}

void RewardFunction::validate_non_negative(const FeatureSpace& space) const {
  if (min_over(space) < 0.0) {
    throw InvalidInput("reward can be negative inside the feature-space box");
  }
}

void GameConfig::validate() const {
  if (space.dim() <= 0) throw InvalidInput("game needs a feature space");
  if (!(fp_budget >= 0.0 && fp_budget <= 1.0)) {
    throw InvalidInput("false-positive budget must lie in [0, 1]");
  }
  reward.validate_non_negative(space);
}

}  // namespace gcg
