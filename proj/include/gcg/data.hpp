#pragma once

#include <cstdint>
#include <string>

#include "gcg/types.hpp"

namespace gcg {

// Train/validation/test partition, 50/25/25 after a seeded shuffle.
struct DataSplit {
  Sample train;
  Sample validation;
  Sample test;
};

DataSplit split_data(const Sample& rows, std::uint64_t seed);

// Synthetic benign-data recipe: per-dimension means from U(1.6, 8.4) and
// standard deviations from U(1.0, 1.25), drawn once per dataset; rows are
// clamped to the feature-space box.
struct SynthSpec {
  int dim = 1;
  double mu_lo = 1.6, mu_hi = 8.4;
  double sigma_lo = 1.0, sigma_hi = 1.25;
  int num_samples = 0;  // 0 -> 1000 * dim
  std::uint64_t seed = 1;

  int rows() const { return num_samples > 0 ? num_samples : 1000 * dim; }
};

Sample gen_synth(const SynthSpec& spec, const FeatureSpace& space);

// CSV with header f0,f1,...,f{n-1}; full-precision decimal floats. Lines
// starting with '#' are treated as metadata and skipped on read.
Sample load_feature_csv(const std::string& path);
void save_feature_csv(const std::string& path, const Sample& rows,
                      const std::string& config_hash = "");

// Writes <prefix>.train.csv / .val.csv / .test.csv.
void save_split(const std::string& prefix, const DataSplit& split,
                const std::string& config_hash = "");
DataSplit load_split(const std::string& prefix);

}  // namespace gcg
