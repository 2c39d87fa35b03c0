#pragma once

#include "gcg/rng.hpp"
#include "gcg/types.hpp"

namespace gcg {

// Gaussian product-kernel density estimate of the benign distribution.
// Immutable after construction; queries are pure and thread-safe.
class KdeModel {
 public:
  KdeModel(Sample anchors, double bandwidth);

  int dim() const { return static_cast<int>(anchors_.cols()); }
  double bandwidth() const { return bandwidth_; }
  const Sample& anchors() const { return anchors_; }

  double density(const FeatureVector& f) const;
  Eigen::VectorXd density_batch(const Sample& points) const;

  // Analytic probability mass of the axis-aligned box [lo, hi]; products of
  // univariate Gaussian CDF differences averaged over anchors. Degenerate
  // boxes (zero width in some axis) have zero mass. Use +/-infinity bounds
  // for half-open boxes.
  double cell_mass(const FeatureVector& lo, const FeatureVector& hi) const;

  FeatureVector sample(Rng& rng) const;

 private:
  Sample anchors_;
  double bandwidth_;
};

// Binary search (at most 40 halvings) for the smallest bandwidth in
// [h_lo, h_hi] whose phi-quantile density threshold fitted on `train`
// keeps the validation exceedance rate within phi + 0.01; returns h_hi
// when no bandwidth in the interval qualifies.
double fit_bandwidth(const Sample& train, const Sample& validation, double phi,
                     double h_lo, double h_hi);

// Validation exceedance rate of the phi-quantile density-threshold rule;
// exposed for tests and run metadata.
double bandwidth_exceedance(const Sample& train, const Sample& validation,
                            double phi, double h);

}  // namespace gcg
