#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gcg/cfs.hpp"
#include "gcg/data.hpp"
#include "gcg/eda.hpp"
#include "gcg/eval.hpp"
#include "gcg/lp.hpp"

namespace gcg {

// One synthetic problem instance: dataset, splits, and the game played on it.
struct SynthInstance {
  GameConfig cfg;
  DataSplit data;
};

SynthInstance make_synth_instance(int dim, TransformKind transform, std::uint64_t seed,
                                  double fp_budget = 0.05, double box_hi = 15.0);

// Grid resolution defaults (per dimension): 1000, 80, 12, 5, 4 for n = 1..5
// and 4 beyond.
int default_grid_steps(int dim);

struct BandwidthSearch {
  double h_lo = 0.0, h_hi = 0.0;  // 0 -> scaled from pooled train stddev
  double fitted_h = 0.0;          // output
  double exceedance = 0.0;        // output metadata
};

struct LpRun {
  LpSolution solution;
  std::unique_ptr<Classifier> classifier;
  KdeModel kde;
  BandwidthSearch bandwidth;
  int grid_steps = 0;
};

LpRun train_lp(const GameConfig& cfg, const DataSplit& data, int grid_steps = 0,
               const LpBuildOptions& opts = {}, BandwidthSearch bw = {});

struct ExperimentOptions {
  std::string report_dir = "reports";
  std::vector<int> dims;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  EdaConfig eda;
  LpBuildOptions lp;
  std::string config_hash;
  unsigned threads = 0;  // 0 -> hardware
};

// Named experiment protocols; each writes report.json / trace.csv /
// frontier.csv / regret.csv per (dimension, seed) plus aggregate CSVs.
// Valid names: scalability, identity_quality, general_quality, case_study,
// br_variance.
void run_experiment(const std::string& name, const ExperimentOptions& opts);

}  // namespace gcg
