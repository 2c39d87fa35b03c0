#pragma once

#include "gcg/classifier.hpp"
#include "gcg/types.hpp"

namespace gcg {

// Expected probability that classifier c flags the attacker action f_a.
// Identity: c(f_a) exactly. Additive: Monte-Carlo mean of c(f_a + f_b)
// over the provided benign sample (deterministic given the sample).
double detection_prob(const Classifier& c, TransformKind transform,
                      const FeatureVector& f_a, const Sample& benign);

// Batched variant: one detection probability per candidate row. Work is
// chunked to bound peak memory under the additive transform.
Eigen::VectorXd detection_probs(const Classifier& c, TransformKind transform,
                                const Sample& candidates, const Sample& benign);

// (1 - detection_prob) * R(f_a); never negative.
double attacker_utility(const Classifier& c, const GameConfig& cfg,
                        const FeatureVector& f_a, const Sample& benign);

Eigen::VectorXd attacker_utilities(const Classifier& c, const GameConfig& cfg,
                                   const Sample& candidates, const Sample& benign);

// Empirical false-positive rate: mean inspection probability over the sample.
double false_positive_rate(const Classifier& c, const Sample& benign);

}  // namespace gcg
