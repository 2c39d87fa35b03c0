#pragma once

#include <memory>

#include "gcg/classifier.hpp"
#include "gcg/types.hpp"

namespace gcg {

// Outlier score = Euclidean distance to the k-th nearest training point.
class KnnScorer final : public AnomalyScorer {
 public:
  KnnScorer(Sample train, int k);

  int dim() const override { return static_cast<int>(train_.cols()); }
  double score(const FeatureVector& f) const override;
  std::string kind() const override { return "knn"; }
  std::unique_ptr<AnomalyScorer> clone() const override;
  nlohmann::json to_json() const override;

  int k() const { return k_; }
  const Sample& train() const { return train_; }

 private:
  Sample train_;
  int k_;
};

// Outlier score = squared reconstruction error after projecting the centered
// point onto the top principal axes of the training data.
class PcaScorer final : public AnomalyScorer {
 public:
  // Fits mean and axes from data; sign convention: the largest-magnitude
  // loading of each axis is positive, so fits are deterministic.
  PcaScorer(const Sample& train, int num_components);
  PcaScorer(FeatureVector mean, Eigen::MatrixXd axes);  // deserialization

  int dim() const override { return static_cast<int>(mean_.size()); }
  double score(const FeatureVector& f) const override;
  Eigen::VectorXd score_batch(const Sample& points) const override;
  std::string kind() const override { return "pca"; }
  std::unique_ptr<AnomalyScorer> clone() const override;
  nlohmann::json to_json() const override;

  const FeatureVector& mean() const { return mean_; }
  const Eigen::MatrixXd& axes() const { return axes_; }  // one axis per column

 private:
  FeatureVector mean_;
  Eigen::MatrixXd axes_;
};

// Smallest threshold whose validation exceedance rate (fraction of scores
// strictly above it) stays within phi. phi = 1 admits -infinity.
double threshold_fit(const AnomalyScorer& scorer, const Sample& validation, double phi);

}  // namespace gcg
