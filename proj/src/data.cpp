#include "gcg/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "gcg/rng.hpp"

namespace gcg {

DataSplit split_data(const Sample& rows, std::uint64_t seed) {
  const Eigen::Index n = rows.rows();
  if (n < 4) throw InvalidInput("split needs at least 4 rows");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    Eigen::Index j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[i], order[j]);
  }

  Eigen::Index n_train = static_cast<Eigen::Index>(std::floor(0.50 * n + 0.5));
  Eigen::Index n_val = static_cast<Eigen::Index>(std::floor(0.25 * n + 0.5));
  n_train = std::max<Eigen::Index>(1, std::min(n_train, n - 2));
  n_val = std::max<Eigen::Index>(1, std::min(n_val, n - n_train - 1));
  Eigen::Index n_test = n - n_train - n_val;

  DataSplit out;
  out.train.resize(n_train, rows.cols());
  out.validation.resize(n_val, rows.cols());
  out.test.resize(n_test, rows.cols());
  for (Eigen::Index i = 0; i < n_train; ++i) out.train.row(i) = rows.row(order[i]);
  for (Eigen::Index i = 0; i < n_val; ++i) out.validation.row(i) = rows.row(order[n_train + i]);
  for (Eigen::Index i = 0; i < n_test; ++i) out.test.row(i) = rows.row(order[n_train + n_val + i]);
  return out;
}

Sample gen_synth(const SynthSpec& spec, const FeatureSpace& space) {
  if (spec.dim < 1) throw InvalidInput("synthetic data needs dim >= 1");
  if (space.dim() != spec.dim) throw InvalidInput("synthetic spec/space dimension mismatch");
  Rng rng(spec.seed);
  Eigen::VectorXd mu(spec.dim), sigma(spec.dim);
  for (int k = 0; k < spec.dim; ++k) mu[k] = rng.uniform(spec.mu_lo, spec.mu_hi);
  for (int k = 0; k < spec.dim; ++k) sigma[k] = rng.uniform(spec.sigma_lo, spec.sigma_hi);

  const int rows = spec.rows();
  Sample out(rows, spec.dim);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < spec.dim; ++k) {
      double v = rng.normal(mu[k], sigma[k]);
      out(i, k) = std::min(space.upper[k], std::max(space.lower[k], v));
    }
  }
  return out;
}

Sample load_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool header_seen = false;
  Eigen::Index cols = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // f0,f1,... header
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw IoError("bad numeric field in " + path + ": " + field);
      }
    }
    if (cols < 0) cols = static_cast<Eigen::Index>(row.size());
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw IoError("ragged row in " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("no data rows in " + path);
  Sample out(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = rows[i][j];
  return out;
}

void save_feature_csv(const std::string& path, const Sample& rows,
                      const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << "\n";
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    if (j) out << ',';
    out << 'f' << j;
  }
  out << '\n';
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      if (j) out << ',';
      out << format_double(rows(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

void save_split(const std::string& prefix, const DataSplit& split,
                const std::string& config_hash) {
  save_feature_csv(prefix + ".train.csv", split.train, config_hash);
  save_feature_csv(prefix + ".val.csv", split.validation, config_hash);
  save_feature_csv(prefix + ".test.csv", split.test, config_hash);
}

DataSplit load_split(const std::string& prefix) {
  DataSplit out;
  out.train = load_feature_csv(prefix + ".train.csv");
  out.validation = load_feature_csv(prefix + ".val.csv");
  out.test = load_feature_csv(prefix + ".test.csv");
  return out;
}

}  // namespace gcg
