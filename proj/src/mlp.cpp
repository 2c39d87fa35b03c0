#include "gcg/mlp.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "gcg/common.hpp"

namespace gcg {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

std::vector<int> MlpNet::default_sizes(int dim) {
  return {dim, 32 + 2 * dim, 32 + 2 * dim, 16 + 2 * dim, 1};
}

MlpNet MlpNet::make(const std::vector<int>& sizes, const FeatureSpace& space) {
  if (sizes.size() < 2 || sizes.back() != 1) {
    throw InvalidInput("MLP needs at least input and a single output unit");
  }
  if (sizes.front() != space.dim()) throw InvalidInput("MLP input size mismatch");
  MlpNet net;
  net.layer_sizes = sizes;
  net.scale_lo = space.lower;
  net.scale_hi = space.upper;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    net.weights.emplace_back(Eigen::MatrixXd::Zero(sizes[l + 1], sizes[l]));
    net.biases.emplace_back(Eigen::VectorXd::Zero(sizes[l + 1]));
  }
  return net;
}

void MlpNet::init_random(Rng& rng) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    double s = 1.0 / std::sqrt(static_cast<double>(weights[l].cols()));
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) {
        weights[l](r, c) = rng.uniform(-s, s);
      }
    }
    biases[l].setZero();
  }
}

Eigen::VectorXd MlpNet::logits_batch(const Sample& points) const {
  return forward_cache(points).logits;
}

Eigen::VectorXd MlpNet::forward_batch(const Sample& points) const {
  Eigen::VectorXd z = logits_batch(points);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sigmoid(z[i]);
  return z;
}

double MlpNet::forward(const FeatureVector& f) const {
  Sample row(1, f.size());
  row.row(0) = f.transpose();
  return forward_batch(row)[0];
}

MlpNet::ForwardCache MlpNet::forward_cache(const Sample& points) const {
  if (points.cols() != dim()) throw InvalidInput("MLP batch dimension mismatch");
  ForwardCache cache;
  Eigen::RowVectorXd span = (scale_hi - scale_lo).transpose();
  cache.input_scaled =
      (points.rowwise() - scale_lo.transpose()).array().rowwise() / span.array();

  const Sample* activ = &cache.input_scaled;
  cache.hidden.reserve(weights.size() - 1);
  for (std::size_t l = 0; l + 1 < weights.size(); ++l) {
    Eigen::MatrixXd z = (*activ) * weights[l].transpose();
    z.rowwise() += biases[l].transpose();
    cache.hidden.push_back(z.cwiseMax(0.0));
    activ = &cache.hidden.back();
  }
  const auto& w_out = weights.back();
  cache.logits = (*activ) * w_out.row(0).transpose();
  cache.logits.array() += biases.back()[0];
  return cache;
}

MlpNet::Gradients MlpNet::zero_gradients() const {
  Gradients g;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    g.weights.emplace_back(Eigen::MatrixXd::Zero(weights[l].rows(), weights[l].cols()));
    g.biases.emplace_back(Eigen::VectorXd::Zero(biases[l].size()));
  }
  return g;
}

void MlpNet::Gradients::scale_add(const Gradients& other, double factor) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += factor * other.weights[l];
    biases[l] += factor * other.biases[l];
  }
}

double MlpNet::Gradients::max_abs() const {
  double m = 0.0;
  for (const auto& w : weights) m = std::max(m, w.cwiseAbs().maxCoeff());
  for (const auto& b : biases) {
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  }
  return m;
}

MlpNet::Gradients MlpNet::backward(const ForwardCache& cache,
                                   const Eigen::VectorXd& dloss_dlogit) const {
  const std::size_t layers = weights.size();
  Gradients grads = zero_gradients();

  const Sample& last_act = layers >= 2 ? cache.hidden.back() : cache.input_scaled;
  grads.weights[layers - 1].row(0) = dloss_dlogit.transpose() * last_act;
  grads.biases[layers - 1][0] = dloss_dlogit.sum();

  Eigen::MatrixXd delta = dloss_dlogit * weights.back().row(0);  // B x h_last
  for (std::size_t l = layers - 1; l-- > 0;) {
    // mask by the rectifier's active set
    delta = delta.cwiseProduct((cache.hidden[l].array() > 0.0).cast<double>().matrix());
    const Sample& prev = l == 0 ? cache.input_scaled : cache.hidden[l - 1];
    grads.weights[l] = delta.transpose() * prev;
    grads.biases[l] = delta.colwise().sum().transpose();
    if (l > 0) delta = delta * weights[l];
  }
  return grads;
}

void MlpNet::apply_update(const Gradients& grads, double step) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] -= step * grads.weights[l];
    biases[l] -= step * grads.biases[l];
  }
}

MlpClassifier::MlpClassifier(MlpNet net) : net_(std::move(net)) {}

double MlpClassifier::evaluate(const FeatureVector& f) const {
  check_dim(f);
  return net_.forward(f);
}

Eigen::VectorXd MlpClassifier::evaluate_batch(const Sample& points) const {
  check_dim_batch(points);
  return net_.forward_batch(points);
}

std::unique_ptr<Classifier> MlpClassifier::clone() const {
  return std::make_unique<MlpClassifier>(*this);
}

nlohmann::json MlpClassifier::to_json() const {
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (std::size_t l = 0; l < net_.weights.size(); ++l) {
    nlohmann::json w = nlohmann::json::array();
    for (Eigen::Index r = 0; r < net_.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < net_.weights[l].cols(); ++c) {
        w.push_back(to_hex_float(net_.weights[l](r, c)));
      }
    }
    weights.push_back(std::move(w));
    nlohmann::json b = nlohmann::json::array();
    for (Eigen::Index r = 0; r < net_.biases[l].size(); ++r) {
      b.push_back(to_hex_float(net_.biases[l][r]));
    }
    biases.push_back(std::move(b));
  }
  nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
  for (Eigen::Index i = 0; i < net_.scale_lo.size(); ++i) {
    lo.push_back(to_hex_float(net_.scale_lo[i]));
    hi.push_back(to_hex_float(net_.scale_hi[i]));
  }
  return {{"variant", "mlp"},       {"dim", dim()},          {"layer_sizes", net_.layer_sizes},
          {"weights", weights},     {"biases", biases},      {"scale_lo", lo},
          {"scale_hi", hi}};
}

}  // namespace gcg
