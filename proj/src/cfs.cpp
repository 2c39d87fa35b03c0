#include "gcg/cfs.hpp"

#include <cmath>

#include "gcg/game.hpp"

namespace gcg {

ClosedFormClassifier cfs_classifier(int dim, double value, const RewardFunction& reward) {
  if (value < 0.0) throw InvalidInput("closed-form value must be non-negative");
  return ClosedFormClassifier(dim, value, reward);
}

CfsResult cfs_search(const GameConfig& cfg, const Sample& benign_train,
                     const CfsSearchConfig& sc) {
  if (cfg.transform != TransformKind::Identity) {
    throw UnsupportedConfig("CFS requires the identity transform");
  }
  if (benign_train.rows() == 0) throw InvalidInput("CFS needs a benign training sample");
  cfg.validate();

  double v_hi = sc.v_hi >= 0.0 ? sc.v_hi : cfg.reward.max_over(cfg.space);
  double v_max_box = cfg.reward.max_over(cfg.space);
  if (v_hi < v_max_box) {
    throw InvalidInput("cfs upper bound below the maximal reward over the box");
  }
  double epsilon = sc.epsilon > 0.0 ? sc.epsilon : 1e-6 * std::max(v_hi, 1e-300);

  Eigen::VectorXd rewards = cfg.reward.value_batch(benign_train);
  auto train_fp_at = [&](double v) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < rewards.size(); ++i) {
      if (rewards[i] > 0.0) acc += std::max(1.0 - v / rewards[i], 0.0);
    }
    return acc / static_cast<double>(rewards.size());
  };

  double lo = 0.0, hi = v_hi;
  int iterations = 0;
  while (hi - lo >= epsilon) {
    double mid = 0.5 * (lo + hi);
    if (train_fp_at(mid) > cfg.fp_budget) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iterations;
  }

  CfsResult result{cfs_classifier(cfg.space.dim(), hi, cfg.reward), hi, iterations,
                   train_fp_at(hi), epsilon, v_hi};
  return result;
}

}  // namespace gcg
