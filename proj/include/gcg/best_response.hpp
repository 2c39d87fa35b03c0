#pragma once

#include <cstdint>
#include <utility>

#include "gcg/classifier.hpp"
#include "gcg/types.hpp"

namespace gcg {

struct BrConfig {
  int num_samples = 0;        // 0 -> 2000 * dim (evaluation default)
  bool refine = false;        // hill-climbing refinement of each sample
  int hc_iters = 100;
  double hc_sigma0_frac = 0.05;  // of the box diagonal
  double hc_decay = 0.95;
  int refine_top = 0;         // refine only the best k initial samples; 0 = all
  std::uint64_t seed = 1;

  int samples_for(int dim) const { return num_samples > 0 ? num_samples : 2000 * dim; }
};

struct BestResponse {
  FeatureVector action;
  double utility = 0.0;
};

// Draws uniform candidate actions over the box, optionally hill-climbs each
// one (Gaussian coordinate perturbations with a shrinking scale, clamped to
// bounds, improvements kept), and returns the utility argmax. Deterministic
// given (classifier, config, benign sample, seed); ties break toward the
// lower candidate index.
BestResponse sample_best_response(const Classifier& c, const GameConfig& cfg,
                                  const Sample& benign, const BrConfig& br);

struct BrVarianceSummary {
  double min = 0.0, max = 0.0, mean = 0.0;
  std::vector<double> values;
  std::vector<std::int64_t> histogram;  // fixed equal-width bins over [min, max]
  double bin_lo = 0.0, bin_width = 0.0;
};

// Repeats the unrefined sampled best response with independent seeds and
// summarizes the spread of the value estimates.
BrVarianceSummary br_variance_study(const Classifier& c, const GameConfig& cfg,
                                    const Sample& benign, int num_samples, int reps,
                                    int histogram_bins = 30);

}  // namespace gcg
