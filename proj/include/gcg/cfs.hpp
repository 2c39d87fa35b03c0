#pragma once

#include <memory>

#include "gcg/classifier.hpp"
#include "gcg/types.hpp"

namespace gcg {

struct CfsSearchConfig {
  double epsilon = 0.0;  // absolute tolerance on V; 0 -> 1e-6 * v_hi
  double v_hi = -1.0;    // initial upper bound; negative -> max reward over the box
};

struct CfsResult {
  ClosedFormClassifier classifier;
  double v_final = 0.0;
  int iterations = 0;
  double train_fp = 0.0;
  double epsilon = 0.0;
  double v_hi = 0.0;
};

// Builds c(f) = max{1 - value/R(f), 0}. Throws InvalidInput for negative value.
ClosedFormClassifier cfs_classifier(int dim, double value, const RewardFunction& reward);

// Bisection on the game value for the identity-transform game: shrink
// [v_lo, v_hi] around the smallest value whose closed-form classifier keeps
// the training false-positive rate within the budget; returns the classifier
// at the feasible upper end. Throws UnsupportedConfig for non-identity
// transforms.
CfsResult cfs_search(const GameConfig& cfg, const Sample& benign_train,
                     const CfsSearchConfig& sc = {});

}  // namespace gcg
