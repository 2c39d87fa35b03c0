#include "gcg/game.hpp"

#include <algorithm>

namespace gcg {

namespace {
// Bounds peak memory of the additive candidate-x-benign expansion.
constexpr Eigen::Index kMaxExpandedRows = 1 << 18;
}  // namespace

double detection_prob(const Classifier& c, TransformKind transform,
                      const FeatureVector& f_a, const Sample& benign) {
  if (transform == TransformKind::Identity) {
    return c.evaluate(f_a);
  }
  if (benign.rows() == 0) {
    throw InvalidInput("additive transform needs a non-empty benign sample");
  }
  if (benign.cols() != f_a.size()) {
    throw InvalidInput("benign sample dimension mismatch");
  }
  Sample shifted = benign;
  shifted.rowwise() += f_a.transpose();
  return c.evaluate_batch(shifted).mean();
}

Eigen::VectorXd detection_probs(const Classifier& c, TransformKind transform,
                                const Sample& candidates, const Sample& benign) {
  if (transform == TransformKind::Identity) {
    return c.evaluate_batch(candidates);
  }
  if (benign.rows() == 0) {
    throw InvalidInput("additive transform needs a non-empty benign sample");
  }
  const Eigen::Index m = candidates.rows();
  const Eigen::Index b = benign.rows();
  const Eigen::Index n = candidates.cols();
  Eigen::VectorXd out(m);
  Eigen::Index slab = std::max<Eigen::Index>(1, kMaxExpandedRows / std::max<Eigen::Index>(1, b));
  Sample expanded(std::min(slab, m) * b, n);
  for (Eigen::Index lo = 0; lo < m; lo += slab) {
    Eigen::Index count = std::min(slab, m - lo);
    for (Eigen::Index i = 0; i < count; ++i) {
      expanded.middleRows(i * b, b) = benign.rowwise() + candidates.row(lo + i);
    }
    Eigen::VectorXd probs = c.evaluate_batch(expanded.topRows(count * b));
    for (Eigen::Index i = 0; i < count; ++i) {
      out[lo + i] = probs.segment(i * b, b).mean();
    }
  }
  return out;
}

double attacker_utility(const Classifier& c, const GameConfig& cfg,
                        const FeatureVector& f_a, const Sample& benign) {
  double rho = detection_prob(c, cfg.transform, f_a, benign);
  return (1.0 - rho) * cfg.reward.value(f_a);
}

Eigen::VectorXd attacker_utilities(const Classifier& c, const GameConfig& cfg,
                                   const Sample& candidates, const Sample& benign) {
  Eigen::VectorXd rho = detection_probs(c, cfg.transform, candidates, benign);
  Eigen::VectorXd rewards = cfg.reward.value_batch(candidates);
  return (1.0 - rho.array()).matrix().cwiseProduct(rewards);
}

double false_positive_rate(const Classifier& c, const Sample& benign) {
  if (benign.rows() == 0) {
    throw InvalidInput("false-positive rate needs a non-empty sample");
  }
  return c.evaluate_batch(benign).mean();
}

}  // namespace gcg
