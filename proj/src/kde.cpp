#include "gcg/kde.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gcg {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double gauss_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

// phi-quantile of the train densities: the threshold below which at most a
// phi fraction of train points fall.
double density_quantile(const Eigen::VectorXd& densities, double phi) {
  const Eigen::Index n = densities.size();
  std::vector<double> sorted(densities.data(), densities.data() + n);
  std::sort(sorted.begin(), sorted.end());
  Eigen::Index k = static_cast<Eigen::Index>(std::floor(phi * static_cast<double>(n)));
  if (k <= 0) return -HUGE_VAL;
  if (k >= n) return HUGE_VAL;
  return sorted[k];
}

}  // namespace

KdeModel::KdeModel(Sample anchors, double bandwidth)
    : anchors_(std::move(anchors)), bandwidth_(bandwidth) {
  if (anchors_.rows() == 0) throw InvalidInput("KDE needs at least one anchor");
  if (!(bandwidth_ > 0.0)) throw InvalidInput("KDE bandwidth must be positive");
}

double KdeModel::density(const FeatureVector& f) const {
  if (f.size() != anchors_.cols()) throw InvalidInput("KDE query dimension mismatch");
  const double h = bandwidth_;
  const int n = dim();
  const double norm = std::pow(kInvSqrt2Pi / h, n);
  double acc = 0.0;
  for (Eigen::Index a = 0; a < anchors_.rows(); ++a) {
    double q = (f.transpose() - anchors_.row(a)).squaredNorm() / (h * h);
    acc += std::exp(-0.5 * q);
  }
  return norm * acc / static_cast<double>(anchors_.rows());
}

Eigen::VectorXd KdeModel::density_batch(const Sample& points) const {
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out[i] = density(points.row(i).transpose());
  }
  return out;
}

double KdeModel::cell_mass(const FeatureVector& lo, const FeatureVector& hi) const {
  if (lo.size() != anchors_.cols() || hi.size() != anchors_.cols()) {
    throw InvalidInput("KDE cell dimension mismatch");
  }
  for (int k = 0; k < lo.size(); ++k) {
    if (!(hi[k] > lo[k])) return 0.0;  // degenerate or inverted axis
  }
  const double h = bandwidth_;
  double acc = 0.0;
  for (Eigen::Index a = 0; a < anchors_.rows(); ++a) {
    double prod = 1.0;
    for (int k = 0; k < lo.size(); ++k) {
      double c = anchors_(a, k);
      double upper = std::isinf(hi[k]) && hi[k] > 0 ? 1.0 : gauss_cdf((hi[k] - c) / h);
      double lower = std::isinf(lo[k]) && lo[k] < 0 ? 0.0 : gauss_cdf((lo[k] - c) / h);
      prod *= std::max(0.0, upper - lower);
      if (prod == 0.0) break;
    }
    acc += prod;
  }
  return acc / static_cast<double>(anchors_.rows());
}

FeatureVector KdeModel::sample(Rng& rng) const {
  Eigen::Index a = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(anchors_.rows())));
  FeatureVector f = anchors_.row(a).transpose();
  for (int k = 0; k < dim(); ++k) f[k] += bandwidth_ * rng.normal();
  return f;
}

double bandwidth_exceedance(const Sample& train, const Sample& validation, double phi,
                            double h) {
  KdeModel model(train, h);
  double tau = density_quantile(model.density_batch(train), phi);
  if (std::isinf(tau) && tau < 0) return 0.0;  // nothing flagged
  Eigen::VectorXd val_density = model.density_batch(validation);
  double exceed = 0.0;
  for (Eigen::Index i = 0; i < val_density.size(); ++i) {
    if (val_density[i] < tau) exceed += 1.0;
  }
  return exceed / static_cast<double>(val_density.size());
}

double fit_bandwidth(const Sample& train, const Sample& validation, double phi,
                     double h_lo, double h_hi) {
  if (train.rows() == 0 || validation.rows() == 0) {
    throw InvalidInput("bandwidth search needs non-empty samples");
  }
  if (!(h_lo > 0.0) || !(h_lo < h_hi)) {
    throw InvalidInput("bandwidth search needs 0 < h_lo < h_hi");
  }
  const double slack = phi + 0.01;
  auto qualifies = [&](double h) { return bandwidth_exceedance(train, validation, phi, h) <= slack; };

  if (!qualifies(h_hi)) return h_hi;  // no bandwidth in the interval fits
  if (qualifies(h_lo)) {
    // keep shrinking toward h_lo for determinism with the general loop
    return h_lo;
  }
  double lo = h_lo, hi = h_hi;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    if (qualifies(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace gcg
