#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gcg/types.hpp"

namespace gcg {

// A classifier maps an observed feature vector to an inspection probability
// in [0,1]. Implementations are immutable after construction and safe to
// evaluate from many threads.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual int dim() const = 0;
  virtual double evaluate(const FeatureVector& f) const = 0;

  // One probability per row of `points`. The default loops; dense models
  // override with batched linear algebra.
  virtual Eigen::VectorXd evaluate_batch(const Sample& points) const;

  virtual std::string variant() const = 0;
  virtual std::unique_ptr<Classifier> clone() const = 0;
  virtual nlohmann::json to_json() const = 0;

 protected:
  void check_dim(const FeatureVector& f) const;
  void check_dim_batch(const Sample& points) const;
};

using ClassifierPtr = std::unique_ptr<Classifier>;

// Constant inspection probability; the degenerate but useful corner of the
// classifier family (c == 0 is the "inspect nothing" fallback component).
class ConstantClassifier final : public Classifier {
 public:
  ConstantClassifier(int dim, double p);

  int dim() const override { return dim_; }
  double evaluate(const FeatureVector& f) const override;
  Eigen::VectorXd evaluate_batch(const Sample& points) const override;
  std::string variant() const override { return "constant"; }
  std::unique_ptr<Classifier> clone() const override;
  nlohmann::json to_json() const override;

  double probability() const { return p_; }

 private:
  int dim_;
  double p_;
};

// c(f) = max{1 - value/R(f), 0}; R(f) == 0 evaluates to 0.
class ClosedFormClassifier final : public Classifier {
 public:
  ClosedFormClassifier(int dim, double value, RewardFunction reward);

  int dim() const override { return dim_; }
  double evaluate(const FeatureVector& f) const override;
  Eigen::VectorXd evaluate_batch(const Sample& points) const override;
  std::string variant() const override { return "closed_form"; }
  std::unique_ptr<Classifier> clone() const override;
  nlohmann::json to_json() const override;

  double value() const { return value_; }
  const RewardFunction& reward() const { return reward_; }

 private:
  int dim_;
  double value_;
  RewardFunction reward_;
};

// Piecewise-constant over a uniform grid; observations outside the box get
// the sink probability. Interior cell boundaries belong to the higher cell;
// the box's top face belongs to the top cell.
class GridTableClassifier final : public Classifier {
 public:
  GridTableClassifier(FeatureSpace space, int steps, Eigen::VectorXd cell_probs,
                      double sink_prob);

  int dim() const override { return space_.dim(); }
  double evaluate(const FeatureVector& f) const override;
  std::string variant() const override { return "grid_table"; }
  std::unique_ptr<Classifier> clone() const override;
  nlohmann::json to_json() const override;

  const FeatureSpace& space() const { return space_; }
  int steps() const { return steps_; }
  const Eigen::VectorXd& cell_probs() const { return cell_probs_; }
  double sink_prob() const { return sink_prob_; }

 private:
  FeatureSpace space_;
  int steps_;
  Eigen::VectorXd cell_probs_;
  double sink_prob_;
};

// Convex combination realized by randomizing which component classifies.
class MixtureClassifier final : public Classifier {
 public:
  MixtureClassifier(std::vector<std::pair<double, ClassifierPtr>> components);

  int dim() const override;
  double evaluate(const FeatureVector& f) const override;
  Eigen::VectorXd evaluate_batch(const Sample& points) const override;
  std::string variant() const override { return "mixture"; }
  std::unique_ptr<Classifier> clone() const override;
  nlohmann::json to_json() const override;

  const std::vector<std::pair<double, ClassifierPtr>>& components() const {
    return components_;
  }

 private:
  std::vector<std::pair<double, ClassifierPtr>> components_;
};

// Anomaly-score interface for the classical baselines (KNN, PCA).
class AnomalyScorer {
 public:
  virtual ~AnomalyScorer() = default;
  virtual int dim() const = 0;
  virtual double score(const FeatureVector& f) const = 0;
  virtual Eigen::VectorXd score_batch(const Sample& points) const;
  virtual std::string kind() const = 0;
  virtual std::unique_ptr<AnomalyScorer> clone() const = 0;
  virtual nlohmann::json to_json() const = 0;
};

// Hard detector: inspect with probability 1 iff score > threshold.
class ScoreThresholdClassifier final : public Classifier {
 public:
  ScoreThresholdClassifier(std::unique_ptr<AnomalyScorer> scorer, double threshold);

  int dim() const override { return scorer_->dim(); }
  double evaluate(const FeatureVector& f) const override;
  Eigen::VectorXd evaluate_batch(const Sample& points) const override;
  std::string variant() const override { return "score_threshold"; }
  std::unique_ptr<Classifier> clone() const override;
  nlohmann::json to_json() const override;

  double threshold() const { return threshold_; }
  const AnomalyScorer& scorer() const { return *scorer_; }

 private:
  std::unique_ptr<AnomalyScorer> scorer_;
  double threshold_;
};

}  // namespace gcg
