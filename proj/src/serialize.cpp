#include "gcg/serialize.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gcg/baselines.hpp"
#include "gcg/common.hpp"
#include "gcg/mlp.hpp"

namespace gcg {

namespace {

Eigen::VectorXd hex_vector(const nlohmann::json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = from_hex_float(arr[i].get<std::string>());
  }
  return v;
}

RewardFunction reward_from_json(const nlohmann::json& doc) {
  std::string kind = doc.at("kind").get<std::string>();
  if (kind == "sum") return RewardFunction::sum();
  if (kind == "product_first_two") return RewardFunction::product_first_two();
  if (kind == "weighted_sum") return RewardFunction::weighted(hex_vector(doc.at("weights")));
  throw InvalidInput("unknown reward kind: " + kind);
}

}  // namespace

std::unique_ptr<AnomalyScorer> scorer_from_json(const nlohmann::json& doc) {
  std::string kind = doc.at("kind").get<std::string>();
  if (kind == "knn") {
    const auto& rows = doc.at("train");
    if (rows.empty()) throw InvalidInput("knn scorer needs training rows");
    Sample train(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        train(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            from_hex_float(rows[i][j].get<std::string>());
      }
    }
    return std::make_unique<KnnScorer>(std::move(train), doc.at("k").get<int>());
  }
  if (kind == "pca") {
    FeatureVector mean = hex_vector(doc.at("mean"));
    const auto& cols = doc.at("axes");
    Eigen::MatrixXd axes(mean.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      axes.col(static_cast<Eigen::Index>(c)) = hex_vector(cols[c]);
    }
    return std::make_unique<PcaScorer>(std::move(mean), std::move(axes));
  }
  throw InvalidInput("unknown scorer kind: " + kind);
}

ClassifierPtr classifier_from_json(const nlohmann::json& doc) {
  std::string variant = doc.at("variant").get<std::string>();
  int dim = doc.at("dim").get<int>();

  if (variant == "constant") {
    return std::make_unique<ConstantClassifier>(dim, from_hex_float(doc.at("p").get<std::string>()));
  }
  if (variant == "closed_form") {
    return std::make_unique<ClosedFormClassifier>(
        dim, from_hex_float(doc.at("v").get<std::string>()), reward_from_json(doc.at("reward")));
  }
  if (variant == "grid_table") {
    FeatureSpace space(hex_vector(doc.at("lower")), hex_vector(doc.at("upper")));
    return std::make_unique<GridTableClassifier>(std::move(space), doc.at("steps").get<int>(),
                                                 hex_vector(doc.at("cells")),
                                                 from_hex_float(doc.at("sink").get<std::string>()));
  }
  if (variant == "mixture") {
    std::vector<std::pair<double, ClassifierPtr>> comps;
    for (const auto& entry : doc.at("components")) {
      comps.emplace_back(from_hex_float(entry.at("weight").get<std::string>()),
                         classifier_from_json(entry.at("classifier")));
    }
    return std::make_unique<MixtureClassifier>(std::move(comps));
  }
  if (variant == "score_threshold") {
    return std::make_unique<ScoreThresholdClassifier>(
        scorer_from_json(doc.at("scorer")),
        from_hex_float(doc.at("threshold").get<std::string>()));
  }
  if (variant == "mlp") {
    std::vector<int> sizes = doc.at("layer_sizes").get<std::vector<int>>();
    FeatureSpace space(hex_vector(doc.at("scale_lo")), hex_vector(doc.at("scale_hi")));
    MlpNet net = MlpNet::make(sizes, space);
    const auto& weights = doc.at("weights");
    const auto& biases = doc.at("biases");
    if (weights.size() != net.weights.size() || biases.size() != net.biases.size()) {
      throw InvalidInput("mlp layer count mismatch");
    }
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      const auto& w = weights[l];
      if (static_cast<Eigen::Index>(w.size()) != net.weights[l].size()) {
        throw InvalidInput("mlp weight count mismatch");
      }
      Eigen::Index pos = 0;
      for (Eigen::Index r = 0; r < net.weights[l].rows(); ++r) {
        for (Eigen::Index c = 0; c < net.weights[l].cols(); ++c) {
          net.weights[l](r, c) = from_hex_float(w[static_cast<std::size_t>(pos++)].get<std::string>());
        }
      }
      net.biases[l] = hex_vector(biases[l]);
    }
    return std::make_unique<MlpClassifier>(std::move(net));
  }
  throw InvalidInput("unknown classifier variant: " + variant);
}

ClassifierPtr load_classifier(const std::string& path) {
  return classifier_from_json(load_json(path));
}

void save_classifier(const std::string& path, const Classifier& c) {
  save_json(path, c.to_json());
}

std::string config_hash(const nlohmann::json& config) {
  // nlohmann objects keep keys sorted, so dump() is canonical
  std::uint64_t h = fnv1a64(config.dump());
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad JSON in " + path + ": " + e.what());
  }
  return doc;
}

void save_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace gcg
