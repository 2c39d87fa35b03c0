#pragma once

#include <memory>
#include <vector>

#include "gcg/best_response.hpp"
#include "gcg/data.hpp"
#include "gcg/mlp.hpp"
#include "gcg/types.hpp"

namespace gcg {

struct EdaConfig {
  int max_iters = 3000;
  int frontier_patience = 50;   // stop when the frontier is unchanged this long
  int stall_limit = 500;        // restart when fp sticks to 0/1 this long
  double stall_band = 0.01;
  double alpha0 = 1e-2;         // net learning-rate constant
  double beta0 = 1e-3;          // multiplier learning-rate constant
  double rate_scale_iters = 1000.0;  // alpha_i = alpha0 / (1 + i/scale)
  double beta_exponent = 0.8;        // beta_i = beta0 / (1 + i/scale)^exp
  double restart_shrink = 0.9;
  int minibatch = 256;          // capped at |train|; 0 -> full batch
  BrConfig train_br;            // num_samples 0 -> 256 * dim during training
  double init_lambda = 1.0;
};

struct TraceRow {
  int iter = 0;
  double lambda = 0.0;
  double fp_hat = 0.0;  // minibatch estimate driving the Lagrangian
  double u_hat = 0.0;   // sampled best-response utility
  double alpha = 0.0;
  double beta = 0.0;
  int restart_count = 0;
};

struct ParetoPoint {
  double exploitability = 0.0;  // sampled best-response utility at snapshot time
  double fp = 0.0;              // full-training-sample false-positive rate
  int iter = 0;
  std::shared_ptr<const MlpClassifier> snapshot;
};

// Inserts candidate if no stored point weakly dominates it and drops the
// points it dominates; returns whether the stored set changed.
bool update_frontier(std::vector<ParetoPoint>& frontier, const ParetoPoint& candidate);

struct OutputSelection {
  std::unique_ptr<Classifier> classifier;
  double bound = 0.0;        // convex upper bound on attacker utility
  double mix_fp = 0.0;
  bool fallback = false;     // mixed with the constant-zero classifier
};

// Picks the single frontier point or two-point convex mixture minimizing the
// utility bound subject to the mixed false-positive rate staying within the
// budget (the lower convex hull of the frontier evaluated at the budget).
// `unconstrained_value` is the attacker optimum against the inspect-nothing
// classifier, used only for the all-points-over-budget fallback.
OutputSelection output_classifier(const std::vector<ParetoPoint>& frontier, double phi,
                                  double unconstrained_value);

struct LagrangianParts {
  double total = 0.0;
  double attack_term = 0.0;      // -mean log c over the transformed samples
  double constraint_term = 0.0;  // lambda * (fp_hat - phi)
};

// Loss of Algorithm 2 line 6 for a fixed best response. `attack_obs` holds
// the transformed observation samples ({f_a} under identity, f_a + benign
// minibatch under additive).
LagrangianParts lagrangian_loss(const MlpNet& net, const Sample& attack_obs,
                                const Sample& benign_batch, double lambda, double phi);

struct TrainState {
  MlpNet net;
  double lambda = 1.0;
  int iter = 0;                  // global iteration (monotone in the trace)
  int iters_since_restart = 0;   // drives the learning-rate schedule
  double alpha0 = 1e-2, beta0 = 1e-3;
  int restart_count = 0;
  int stall_counter = 0;
  std::uint64_t seed = 1;

  // Filled by eda_step for the caller (trace + frontier bookkeeping).
  double last_fp_hat = 0.0;
  double last_u_hat = 0.0;
  FeatureVector last_best_response;
  double last_alpha = 0.0, last_beta = 0.0;
};

// One iteration of Algorithm 2: best response, minibatch fp estimate,
// Lagrangian gradient step on the weights, projected ascent step on lambda.
void eda_step(TrainState& state, const GameConfig& cfg, const Sample& train,
              const EdaConfig& eda);

struct EdaResult {
  std::unique_ptr<Classifier> classifier;
  std::vector<TraceRow> trace;
  std::vector<ParetoPoint> frontier;
  bool converged = false;        // frontier stabilized before the cap
  bool fallback_mix = false;
  int restarts = 0;
  double final_bound = 0.0;
};

EdaResult eda_train(const GameConfig& cfg, const DataSplit& data, const EdaConfig& eda);

}  // namespace gcg
