#include "gcg/classifier.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "gcg/common.hpp"

namespace gcg {

namespace {

nlohmann::json vector_to_hex(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(to_hex_float(v[i]));
  return arr;
}

nlohmann::json reward_to_json(const RewardFunction& r) {
  nlohmann::json doc;
  switch (r.kind) {
    case RewardKind::SumOfFeatures:
      doc["kind"] = "sum";
      break;
    case RewardKind::ProductOfFirstTwo:
      doc["kind"] = "product_first_two";
      break;
    case RewardKind::WeightedSum:
      doc["kind"] = "weighted_sum";
      doc["weights"] = vector_to_hex(r.weights);
      break;
  }
  return doc;
}

}  // namespace

Eigen::VectorXd Classifier::evaluate_batch(const Sample& points) const {
  check_dim_batch(points);
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out[i] = evaluate(points.row(i).transpose());
  }
  return out;
}

void Classifier::check_dim(const FeatureVector& f) const {
  if (f.size() != dim()) {
    throw InvalidInput("feature vector dimension mismatch: got " + std::to_string(f.size()) +
                       ", classifier expects " + std::to_string(dim()));
  }
}

void Classifier::check_dim_batch(const Sample& points) const {
  if (points.cols() != dim()) {
    throw InvalidInput("sample dimension mismatch: got " + std::to_string(points.cols()) +
                       ", classifier expects " + std::to_string(dim()));
  }
}

// ---- ConstantClassifier ----

ConstantClassifier::ConstantClassifier(int dim, double p) : dim_(dim), p_(p) {
  if (dim <= 0) throw InvalidInput("classifier dimension must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("constant probability must lie in [0,1]");
}

double ConstantClassifier::evaluate(const FeatureVector& f) const {
  check_dim(f);
  return p_;
}

Eigen::VectorXd ConstantClassifier::evaluate_batch(const Sample& points) const {
  check_dim_batch(points);
  return Eigen::VectorXd::Constant(points.rows(), p_);
}

std::unique_ptr<Classifier> ConstantClassifier::clone() const {
  return std::make_unique<ConstantClassifier>(*this);
}

nlohmann::json ConstantClassifier::to_json() const {
  return {{"variant", "constant"}, {"dim", dim_}, {"p", to_hex_float(p_)}};
}

// ---- ClosedFormClassifier ----

ClosedFormClassifier::ClosedFormClassifier(int dim, double value, RewardFunction reward)
    : dim_(dim), value_(value), reward_(std::move(reward)) {
  if (dim <= 0) throw InvalidInput("classifier dimension must be positive");
  if (value < 0.0) throw InvalidInput("closed-form classifier value must be non-negative");
}

double ClosedFormClassifier::evaluate(const FeatureVector& f) const {
  check_dim(f);
  double r = reward_.value(f);
  if (r <= 0.0) return 0.0;  // zero-reward actions never need inspection
  return std::max(1.0 - value_ / r, 0.0);
}

Eigen::VectorXd ClosedFormClassifier::evaluate_batch(const Sample& points) const {
  check_dim_batch(points);
  Eigen::VectorXd rewards = reward_.value_batch(points);
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index i = 0; i < rewards.size(); ++i) {
    out[i] = rewards[i] <= 0.0 ? 0.0 : std::max(1.0 - value_ / rewards[i], 0.0);
  }
  return out;
}

std::unique_ptr<Classifier> ClosedFormClassifier::clone() const {
  return std::make_unique<ClosedFormClassifier>(*this);
}

nlohmann::json ClosedFormClassifier::to_json() const {
  return {{"variant", "closed_form"},
          {"dim", dim_},
          {"v", to_hex_float(value_)},
          {"reward", reward_to_json(reward_)}};
}

// ---- GridTableClassifier ----

GridTableClassifier::GridTableClassifier(FeatureSpace space, int steps,
                                         Eigen::VectorXd cell_probs, double sink_prob)
    : space_(std::move(space)), steps_(steps), cell_probs_(std::move(cell_probs)),
      sink_prob_(sink_prob) {
  if (steps_ <= 0) throw InvalidInput("grid needs at least one step per axis");
  double expected = std::pow(static_cast<double>(steps_), space_.dim());
  if (static_cast<double>(cell_probs_.size()) != expected) {
    throw InvalidInput("grid table cell count does not match steps^dim");
  }
  for (Eigen::Index i = 0; i < cell_probs_.size(); ++i) {
    if (!(cell_probs_[i] >= -1e-12 && cell_probs_[i] <= 1.0 + 1e-12)) {
      throw InvalidInput("grid cell probability outside [0,1]");
    }
    cell_probs_[i] = std::min(1.0, std::max(0.0, cell_probs_[i]));
  }
  sink_prob_ = std::min(1.0, std::max(0.0, sink_prob_));
}

double GridTableClassifier::evaluate(const FeatureVector& f) const {
  check_dim(f);
  std::int64_t flat = 0;
  for (int k = 0; k < space_.dim(); ++k) {
    double width = (space_.upper[k] - space_.lower[k]) / steps_;
    double rel = (f[k] - space_.lower[k]) / width;
    // boundary points belong to the higher cell; the box top stays in-grid
    std::int64_t idx = static_cast<std::int64_t>(std::floor(rel));
    if (f[k] == space_.upper[k]) idx = steps_ - 1;
    if (idx < 0 || idx >= steps_) return sink_prob_;
    flat = flat * steps_ + idx;
  }
  return cell_probs_[flat];
}

std::unique_ptr<Classifier> GridTableClassifier::clone() const {
  return std::make_unique<GridTableClassifier>(*this);
}

nlohmann::json GridTableClassifier::to_json() const {
  return {{"variant", "grid_table"},
          {"dim", space_.dim()},
          {"steps", steps_},
          {"lower", vector_to_hex(space_.lower)},
          {"upper", vector_to_hex(space_.upper)},
          {"cells", vector_to_hex(cell_probs_)},
          {"sink", to_hex_float(sink_prob_)}};
}

// ---- MixtureClassifier ----

MixtureClassifier::MixtureClassifier(std::vector<std::pair<double, ClassifierPtr>> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidInput("mixture needs at least one component");
  double total = 0.0;
  int d = components_.front().second->dim();
  for (const auto& [w, c] : components_) {
    if (!c) throw InvalidInput("mixture component is null");
    if (w < 0.0) throw InvalidInput("mixture weights must be non-negative");
    if (c->dim() != d) throw InvalidInput("mixture components disagree on dimension");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidInput("mixture weights must sum to 1");
  }
}

int MixtureClassifier::dim() const { return components_.front().second->dim(); }

double MixtureClassifier::evaluate(const FeatureVector& f) const {
  double p = 0.0;
  for (const auto& [w, c] : components_) p += w * c->evaluate(f);
  return p;
}

Eigen::VectorXd MixtureClassifier::evaluate_batch(const Sample& points) const {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(points.rows());
  for (const auto& [w, c] : components_) p += w * c->evaluate_batch(points);
  return p;
}

std::unique_ptr<Classifier> MixtureClassifier::clone() const {
  std::vector<std::pair<double, ClassifierPtr>> copies;
  copies.reserve(components_.size());
  for (const auto& [w, c] : components_) copies.emplace_back(w, c->clone());
  return std::make_unique<MixtureClassifier>(std::move(copies));
}

nlohmann::json MixtureClassifier::to_json() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& [w, c] : components_) {
    comps.push_back({{"weight", to_hex_float(w)}, {"classifier", c->to_json()}});
  }
  return {{"variant", "mixture"}, {"dim", dim()}, {"components", comps}};
}

// ---- AnomalyScorer / ScoreThresholdClassifier ----

Eigen::VectorXd AnomalyScorer::score_batch(const Sample& points) const {
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) out[i] = score(points.row(i).transpose());
  return out;
}

ScoreThresholdClassifier::ScoreThresholdClassifier(std::unique_ptr<AnomalyScorer> scorer,
                                                   double threshold)
    : scorer_(std::move(scorer)), threshold_(threshold) {
  if (!scorer_) throw InvalidInput("score-threshold classifier needs a scorer");
}

double ScoreThresholdClassifier::evaluate(const FeatureVector& f) const {
  check_dim(f);
  return scorer_->score(f) > threshold_ ? 1.0 : 0.0;
}

Eigen::VectorXd ScoreThresholdClassifier::evaluate_batch(const Sample& points) const {
  check_dim_batch(points);
  Eigen::VectorXd scores = scorer_->score_batch(points);
  return (scores.array() > threshold_).cast<double>();
}

std::unique_ptr<Classifier> ScoreThresholdClassifier::clone() const {
  return std::make_unique<ScoreThresholdClassifier>(scorer_->clone(), threshold_);
}

nlohmann::json ScoreThresholdClassifier::to_json() const {
  return {{"variant", "score_threshold"},
          {"dim", dim()},
          {"threshold", to_hex_float(threshold_)},
          {"scorer", scorer_->to_json()}};
}

}  // namespace gcg
