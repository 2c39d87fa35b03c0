#include "gcg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <vector>

#include "gcg/common.hpp"

namespace gcg {

KnnScorer::KnnScorer(Sample train, int k) : train_(std::move(train)), k_(k) {
  if (k_ < 1) throw InvalidInput("knn needs k >= 1");
  if (k_ >= train_.rows()) throw InvalidInput("knn needs k < |train|");
}

double KnnScorer::score(const FeatureVector& f) const {
  if (f.size() != train_.cols()) throw InvalidInput("knn query dimension mismatch");
  std::vector<double> d2(static_cast<std::size_t>(train_.rows()));
  for (Eigen::Index i = 0; i < train_.rows(); ++i) {
    d2[static_cast<std::size_t>(i)] = (train_.row(i).transpose() - f).squaredNorm();
  }
  std::nth_element(d2.begin(), d2.begin() + (k_ - 1), d2.end());
  return std::sqrt(d2[static_cast<std::size_t>(k_ - 1)]);
}

std::unique_ptr<AnomalyScorer> KnnScorer::clone() const {
  return std::make_unique<KnnScorer>(*this);
}

nlohmann::json KnnScorer::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < train_.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < train_.cols(); ++j) row.push_back(to_hex_float(train_(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"kind", "knn"}, {"k", k_}, {"train", rows}};
}

PcaScorer::PcaScorer(const Sample& train, int num_components) {
  const int n = static_cast<int>(train.cols());
  if (num_components < 1 || num_components >= n) {
    throw InvalidInput("pca needs 1 <= components < dim");
  }
  if (train.rows() < 2) throw InvalidInput("pca needs at least two training rows");
  mean_ = train.colwise().mean().transpose();
  Sample centered = train.rowwise() - mean_.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered /
                        static_cast<double>(train.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // eigenvalues ascend; take the trailing columns
  axes_.resize(n, num_components);
  for (int c = 0; c < num_components; ++c) {
    Eigen::VectorXd axis = eig.eigenvectors().col(n - 1 - c);
    Eigen::Index peak = 0;
    axis.cwiseAbs().maxCoeff(&peak);
    if (axis[peak] < 0.0) axis = -axis;  // deterministic sign
    axes_.col(c) = axis;
  }
}

PcaScorer::PcaScorer(FeatureVector mean, Eigen::MatrixXd axes)
    : mean_(std::move(mean)), axes_(std::move(axes)) {
  if (axes_.rows() != mean_.size() || axes_.cols() < 1) {
    throw InvalidInput("pca axes shape mismatch");
  }
}

double PcaScorer::score(const FeatureVector& f) const {
  if (f.size() != mean_.size()) throw InvalidInput("pca query dimension mismatch");
  FeatureVector centered = f - mean_;
  FeatureVector projected = axes_ * (axes_.transpose() * centered);
  return (centered - projected).squaredNorm();
}

Eigen::VectorXd PcaScorer::score_batch(const Sample& points) const {
  Sample centered = points.rowwise() - mean_.transpose();
  Sample residual = centered - (centered * axes_) * axes_.transpose();
  return residual.rowwise().squaredNorm();
}

std::unique_ptr<AnomalyScorer> PcaScorer::clone() const {
  return std::make_unique<PcaScorer>(*this);
}

nlohmann::json PcaScorer::to_json() const {
  nlohmann::json mean = nlohmann::json::array();
  for (Eigen::Index i = 0; i < mean_.size(); ++i) mean.push_back(to_hex_float(mean_[i]));
  nlohmann::json axes = nlohmann::json::array();
  for (Eigen::Index c = 0; c < axes_.cols(); ++c) {
    nlohmann::json col = nlohmann::json::array();
    for (Eigen::Index r = 0; r < axes_.rows(); ++r) col.push_back(to_hex_float(axes_(r, c)));
    axes.push_back(std::move(col));
  }
  return {{"kind", "pca"}, {"mean", mean}, {"axes", axes}};
}

double threshold_fit(const AnomalyScorer& scorer, const Sample& validation, double phi) {
  if (validation.rows() == 0) throw InvalidInput("threshold fit needs validation data");
  Eigen::VectorXd scores = scorer.score_batch(validation);
  std::vector<double> sorted(scores.data(), scores.data() + scores.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  // allow floor(phi * N) exceedances
  auto allowed = static_cast<std::size_t>(std::floor(phi * static_cast<double>(sorted.size())));
  if (allowed >= sorted.size()) return -HUGE_VAL;
  return sorted[allowed];
}

}  // namespace gcg
