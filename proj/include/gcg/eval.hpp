#pragma once

#include <string>

#include "gcg/best_response.hpp"
#include "gcg/classifier.hpp"
#include "gcg/data.hpp"
#include "gcg/types.hpp"

namespace gcg {

struct EvalReport {
  std::string solver;
  double exploitability = 0.0;      // u* of the sampled best response
  FeatureVector best_action;        // f_a*
  double best_action_reward = 0.0;  // R(f_a*)
  double train_fp = 0.0, val_fp = 0.0, test_fp = 0.0;
  double wall_time_ms = 0.0;        // reported separately from report.json
  std::string config_hash;
};

// 100 * (u_c - u_base) / u_base; u_base must be positive.
double relative_regret(double u_c, double u_base);

// Evaluation protocol: unrefined sampled best response (the benign sample
// backing additive detection probabilities is the test split) plus
// false-positive rates on all three splits.
EvalReport evaluate(const Classifier& c, const GameConfig& cfg, const DataSplit& data,
                    const BrConfig& br, const std::string& solver_name = "");

}  // namespace gcg
