#include <cmath>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "gcg/game.hpp"
#include "gcg/mlp.hpp"
#include "gcg/rng.hpp"
#include "gcg/serialize.hpp"

using namespace gcg;

namespace {

FeatureVector vec(std::initializer_list<double> vals) {
  FeatureVector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

Sample rows(std::initializer_list<std::initializer_list<double>> data) {
  auto it = data.begin();
  Sample m(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(it->size()));
  Eigen::Index r = 0;
  for (const auto& row : data) {
    Eigen::Index c = 0;
    for (double x : row) m(r, c++) = x;
    ++r;
  }
  return m;
}

// step classifier 1[f0 >= threshold] used by several spec examples
class StepClassifier final : public Classifier {
 public:
  StepClassifier(int dim, double threshold) : dim_(dim), threshold_(threshold) {}
  int dim() const override { return dim_; }
  double evaluate(const FeatureVector& f) const override {
    check_dim(f);
    return f[0] >= threshold_ ? 1.0 : 0.0;
  }
  std::string variant() const override { return "test_step"; }
  std::unique_ptr<Classifier> clone() const override {
    return std::make_unique<StepClassifier>(*this);
  }
  nlohmann::json to_json() const override { throw UnsupportedConfig("test-only"); }

 private:
  int dim_;
  double threshold_;
};

}  // namespace

TEST_CASE("reward kinds") {
  CHECK(RewardFunction::sum().value(vec({2, 3})) == 5.0);
  CHECK(RewardFunction::product_first_two().value(vec({4, 2, 7})) == 8.0);
  CHECK(RewardFunction::sum().value(FeatureVector::Zero(4)) == 0.0);

  CHECK_THROWS_AS(RewardFunction::weighted(vec({1.0, 2.0})).value(vec({1.0})), InvalidInput);
  CHECK_THROWS_AS(RewardFunction::product_first_two().value(vec({3.0})), InvalidInput);
}

TEST_CASE("reward extremes and validation") {
  FeatureSpace box = FeatureSpace::cube(3, 0.0, 15.0);
  CHECK(RewardFunction::sum().max_over(box) == doctest::Approx(45.0));
  CHECK(RewardFunction::product_first_two().max_over(box) == doctest::Approx(225.0));
  CHECK(RewardFunction::sum().min_over(box) == 0.0);

  // a weighted reward dipping negative on the box must be rejected
  FeatureSpace shifted(vec({-1.0, 0.0}), vec({1.0, 1.0}));
  CHECK_THROWS_AS(RewardFunction::weighted(vec({1.0, 0.0})).validate_non_negative(shifted),
                  InvalidInput);
  CHECK_NOTHROW(RewardFunction::sum().validate_non_negative(FeatureSpace::cube(2, 0, 1)));
}

TEST_CASE("detection_prob identity and additive") {
  ConstantClassifier c03(1, 0.3);
  Sample benign = rows({{1.0}, {3.0}});

  CHECK(detection_prob(c03, TransformKind::Identity, vec({2.0}), benign) == 0.3);

  ConstantClassifier c1(1, 1.0);
  CHECK(detection_prob(c1, TransformKind::Additive, vec({7.0}), benign) == 1.0);

  // 1D, c(f) = 1[f >= 5], f_a = 3, benign {1, 3}: observations {4, 6}
  StepClassifier step(1, 5.0);
  CHECK(detection_prob(step, TransformKind::Additive, vec({3.0}), benign) ==
        doctest::Approx(0.5));

  Sample empty(0, 1);
  CHECK_THROWS_AS(detection_prob(step, TransformKind::Additive, vec({3.0}), empty),
                  InvalidInput);
}

TEST_CASE("attacker_utility") {
  GameConfig cfg;
  cfg.space = FeatureSpace::cube(1, 0.0, 15.0);
  cfg.reward = RewardFunction::sum();
  Sample benign = rows({{1.0}, {3.0}});

  ConstantClassifier never(1, 0.0);
  GameConfig cfg10 = cfg;
  CHECK(attacker_utility(never, cfg10, vec({10.0}), benign) == doctest::Approx(10.0));

  ConstantClassifier always(1, 1.0);
  CHECK(attacker_utility(always, cfg, vec({10.0}), benign) == 0.0);

  // rho = 0.5 from the step example composed with R(3) = 3
  StepClassifier step(1, 5.0);
  GameConfig add = cfg;
  add.transform = TransformKind::Additive;
  CHECK(attacker_utility(step, add, vec({3.0}), benign) == doctest::Approx(1.5));
}

TEST_CASE("false_positive_rate") {
  Sample sample = rows({{1.0}, {6.0}, {7.0}, {2.0}});
  CHECK(false_positive_rate(ConstantClassifier(1, 0.0), sample) == 0.0);
  CHECK(false_positive_rate(ConstantClassifier(1, 1.0), sample) == 1.0);
  CHECK(false_positive_rate(StepClassifier(1, 5.0), sample) == doctest::Approx(0.5));
  Sample empty(0, 1);
  CHECK_THROWS_AS(false_positive_rate(ConstantClassifier(1, 0.5), empty), InvalidInput);
}

TEST_CASE("classifier outputs stay inside [0,1] on random in-box points") {
  Rng rng(99);
  FeatureSpace box = FeatureSpace::cube(2, 0.0, 15.0);

  MlpNet net = MlpNet::make(MlpNet::default_sizes(2), box);
  net.init_random(rng);
  MlpClassifier mlp(net);

  ClosedFormClassifier cf(2, 7.0, RewardFunction::sum());
  Eigen::VectorXd cells(4);
  cells << 0.0, 0.25, 0.75, 1.0;
  GridTableClassifier grid(box, 2, cells, 0.5);

  std::vector<std::pair<double, ClassifierPtr>> comps;
  comps.emplace_back(0.25, mlp.clone());
  comps.emplace_back(0.75, cf.clone());
  MixtureClassifier mix(std::move(comps));

  for (int i = 0; i < 2000; ++i) {
    FeatureVector f = vec({rng.uniform(0, 15), rng.uniform(0, 15)});
    for (const Classifier* c :
         {static_cast<const Classifier*>(&mlp), static_cast<const Classifier*>(&cf),
          static_cast<const Classifier*>(&grid), static_cast<const Classifier*>(&mix)}) {
      double p = c->evaluate(f);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("identity detection equals direct evaluation exactly") {
  Rng rng(7);
  FeatureSpace box = FeatureSpace::cube(3, 0.0, 15.0);
  MlpNet net = MlpNet::make(MlpNet::default_sizes(3), box);
  net.init_random(rng);
  MlpClassifier mlp(net);
  Sample benign = rows({{1.0, 1.0, 1.0}});
  for (int i = 0; i < 100; ++i) {
    FeatureVector f = vec({rng.uniform(0, 15), rng.uniform(0, 15), rng.uniform(0, 15)});
    CHECK(detection_prob(mlp, TransformKind::Identity, f, benign) == mlp.evaluate(f));
  }
}

TEST_CASE("mixture false-positive rate is the weight combination of components") {
  Rng rng(1234);
  FeatureSpace box = FeatureSpace::cube(2, 0.0, 15.0);
  Sample sample(500, 2);
  for (Eigen::Index i = 0; i < sample.rows(); ++i) {
    sample(i, 0) = rng.uniform(0, 15);
    sample(i, 1) = rng.uniform(0, 15);
  }
  for (int trial = 0; trial < 20; ++trial) {
    MlpNet a = MlpNet::make(MlpNet::default_sizes(2), box);
    a.init_random(rng);
    MlpNet b = MlpNet::make(MlpNet::default_sizes(2), box);
    b.init_random(rng);
    double w = rng.uniform();
    std::vector<std::pair<double, ClassifierPtr>> comps;
    comps.emplace_back(w, std::make_unique<MlpClassifier>(a));
    comps.emplace_back(1.0 - w, std::make_unique<MlpClassifier>(b));
    MixtureClassifier mix(std::move(comps));

    double combo = w * false_positive_rate(MlpClassifier(a), sample) +
                   (1.0 - w) * false_positive_rate(MlpClassifier(b), sample);
    CHECK(std::abs(false_positive_rate(mix, sample) - combo) < 1e-12);
  }
}

TEST_CASE("mixture weights must be a distribution") {
  std::vector<std::pair<double, ClassifierPtr>> bad;
  bad.emplace_back(0.6, std::make_unique<ConstantClassifier>(1, 0.1));
  bad.emplace_back(0.5, std::make_unique<ConstantClassifier>(1, 0.2));
  CHECK_THROWS_AS(MixtureClassifier(std::move(bad)), InvalidInput);
}

TEST_CASE("classifier JSON round trips are bit-faithful") {
  Rng rng(42);
  FeatureSpace box = FeatureSpace::cube(2, 0.0, 15.0);
  MlpNet net = MlpNet::make(MlpNet::default_sizes(2), box);
  net.init_random(rng);

  Eigen::VectorXd cells(4);
  cells << 0.123456789123456789, 1.0 / 3.0, 0.0, 1.0;
  std::vector<std::pair<double, ClassifierPtr>> comps;
  comps.emplace_back(1.0 / 3.0, std::make_unique<MlpClassifier>(net));
  comps.emplace_back(2.0 / 3.0,
                     std::make_unique<GridTableClassifier>(box, 2, cells, 0.25));
  MixtureClassifier mix(std::move(comps));

  auto restored = classifier_from_json(mix.to_json());
  Rng probe(5);
  for (int i = 0; i < 200; ++i) {
    FeatureVector f = vec({probe.uniform(-5, 20), probe.uniform(-5, 20)});
    CHECK(restored->evaluate(f) == mix.evaluate(f));  // exact, not approximate
  }

  ClosedFormClassifier cf(2, 0.1 + 0.2, RewardFunction::sum());
  auto cf2 = classifier_from_json(cf.to_json());
  CHECK(cf2->evaluate(vec({3.0, 4.0})) == cf.evaluate(vec({3.0, 4.0})));
}

TEST_CASE("game config validation") {
  GameConfig cfg;
  cfg.space = FeatureSpace::cube(2, 0.0, 1.0);
  cfg.fp_budget = 1.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.fp_budget = 0.05;
  CHECK_NOTHROW(cfg.validate());
}
