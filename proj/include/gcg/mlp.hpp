#pragma once

#include <vector>

#include "gcg/classifier.hpp"
#include "gcg/rng.hpp"
#include "gcg/types.hpp"

namespace gcg {

// Fully-connected net with rectifier hidden layers and a logistic-sigmoid
// head, trained by the hand-rolled backward pass below. Inputs are mapped
// affinely from [lower, upper] to [0,1] per dimension; the mapping is part
// of the model so serialized classifiers are self-contained.
struct MlpNet {
  std::vector<int> layer_sizes;          // [n, h1, ..., 1]
  std::vector<Eigen::MatrixXd> weights;  // weights[l]: (sizes[l+1] x sizes[l])
  std::vector<Eigen::VectorXd> biases;
  Eigen::VectorXd scale_lo, scale_hi;    // input mapping

  // Paper architecture for dimension n: hidden 32+2n, 32+2n, 16+2n.
  static std::vector<int> default_sizes(int dim);

  static MlpNet make(const std::vector<int>& sizes, const FeatureSpace& space);

  // Symmetric uniform init scaled by 1/sqrt(fan_in); biases zero.
  void init_random(Rng& rng);

  int dim() const { return layer_sizes.front(); }

  // Pre-sigmoid outputs for a batch (one row per point).
  Eigen::VectorXd logits_batch(const Sample& points) const;
  Eigen::VectorXd forward_batch(const Sample& points) const;
  double forward(const FeatureVector& f) const;

  struct ForwardCache {
    Sample input_scaled;                   // B x n
    std::vector<Eigen::MatrixXd> hidden;   // post-relu activations per hidden layer
    Eigen::VectorXd logits;                // B
  };
  ForwardCache forward_cache(const Sample& points) const;

  struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    void scale_add(const Gradients& other, double factor);
    double max_abs() const;
  };
  Gradients zero_gradients() const;

  // Exact analytic gradients given dLoss/dlogit per batch row.
  Gradients backward(const ForwardCache& cache, const Eigen::VectorXd& dloss_dlogit) const;

  void apply_update(const Gradients& grads, double step);  // theta -= step * grads
};

double sigmoid(double z);
double softplus(double z);  // log(1 + e^z), overflow-safe

class MlpClassifier final : public Classifier {
 public:
  explicit MlpClassifier(MlpNet net);

  int dim() const override { return net_.dim(); }
  double evaluate(const FeatureVector& f) const override;
  Eigen::VectorXd evaluate_batch(const Sample& points) const override;
  std::string variant() const override { return "mlp"; }
  std::unique_ptr<Classifier> clone() const override;
  nlohmann::json to_json() const override;

  const MlpNet& net() const { return net_; }

 private:
  MlpNet net_;
};

}  // namespace gcg
