// Command-line driver: data generation, featurization, training with any
// solver, evaluation, and experiment orchestration. Exit codes: 0 success,
// 2 usage/config error, 3 resource limit, 4 I/O error.

#include <CLI11.hpp>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>

#include "gcg/baselines.hpp"
#include "gcg/best_response.hpp"
#include "gcg/cfs.hpp"
#include "gcg/data.hpp"
#include "gcg/dns.hpp"
#include "gcg/eda.hpp"
#include "gcg/eval.hpp"
#include "gcg/experiments.hpp"
#include "gcg/game.hpp"
#include "gcg/lp.hpp"
#include "gcg/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using gcg::InvalidInput;

void check_keys(const json& doc, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!doc.is_object()) throw InvalidInput(where + " must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (key == k) {
        known = true;
        break;
      }
    }
    if (!known) throw InvalidInput("unknown config key: " + where + "." + key);
  }
}

Eigen::VectorXd bound_vector(const json& v, int dim, const char* what) {
  Eigen::VectorXd out(dim);
  if (v.is_number()) {
    out.setConstant(v.get<double>());
  } else if (v.is_array()) {
    if (static_cast<int>(v.size()) != dim) {
      throw InvalidInput(std::string(what) + " length must equal dim");
    }
    for (int i = 0; i < dim; ++i) out[i] = v[static_cast<std::size_t>(i)].get<double>();
  } else {
    throw InvalidInput(std::string(what) + " must be a number or array");
  }
  return out;
}

gcg::GameConfig parse_game(const json& doc) {
  check_keys(doc, "game", {"dim", "lower", "upper", "reward", "transform", "fp_budget", "seed"});
  int dim = doc.at("dim").get<int>();
  if (dim < 1) throw InvalidInput("game.dim must be positive");

  gcg::GameConfig cfg;
  cfg.space = gcg::FeatureSpace(
      bound_vector(doc.value("lower", json(0.0)), dim, "game.lower"),
      bound_vector(doc.value("upper", json(15.0)), dim, "game.upper"));

  if (doc.contains("reward")) {
    const json& r = doc.at("reward");
    check_keys(r, "game.reward", {"kind", "weights"});
    std::string kind = r.at("kind").get<std::string>();
    if (kind == "sum") {
      cfg.reward = gcg::RewardFunction::sum();
    } else if (kind == "product_first_two") {
      cfg.reward = gcg::RewardFunction::product_first_two();
    } else if (kind == "weighted_sum") {
      Eigen::VectorXd w = bound_vector(r.at("weights"), dim, "game.reward.weights");
      cfg.reward = gcg::RewardFunction::weighted(w);
    } else {
      throw InvalidInput("unknown reward kind: " + kind);
    }
  }

  std::string transform = doc.value("transform", "identity");
  if (transform == "identity") {
    cfg.transform = gcg::TransformKind::Identity;
  } else if (transform == "additive") {
    cfg.transform = gcg::TransformKind::Additive;
  } else {
    throw InvalidInput("unknown transform: " + transform);
  }

  cfg.fp_budget = doc.value("fp_budget", 0.05);
  cfg.seed = doc.value("seed", static_cast<std::uint64_t>(1));
  cfg.validate();
  return cfg;
}

gcg::BrConfig parse_br(const json& doc, const gcg::GameConfig& cfg) {
  gcg::BrConfig br;
  br.seed = gcg::Rng::derive_seed(cfg.seed, 0xE7A1ULL);
  if (!doc.contains("br")) return br;
  const json& b = doc.at("br");
  check_keys(b, "br", {"num_samples", "refine", "hc_iters", "hc_sigma0_frac", "hc_decay",
                       "refine_top", "seed"});
  br.num_samples = b.value("num_samples", 0);
  br.refine = b.value("refine", false);
  br.hc_iters = b.value("hc_iters", 100);
  br.hc_sigma0_frac = b.value("hc_sigma0_frac", 0.05);
  br.hc_decay = b.value("hc_decay", 0.95);
  br.refine_top = b.value("refine_top", 0);
  if (b.contains("seed")) br.seed = b.at("seed").get<std::uint64_t>();
  return br;
}

gcg::EdaConfig parse_eda(const json& doc) {
  gcg::EdaConfig eda;
  eda.train_br.refine = true;
  if (!doc.contains("eda")) return eda;
  const json& e = doc.at("eda");
  check_keys(e, "solver.eda",
             {"max_iters", "frontier_patience", "stall_limit", "alpha0", "beta0",
              "minibatch", "train_br_samples", "train_hc_iters", "train_refine_top"});
  eda.max_iters = e.value("max_iters", eda.max_iters);
  eda.frontier_patience = e.value("frontier_patience", eda.frontier_patience);
  eda.stall_limit = e.value("stall_limit", eda.stall_limit);
  eda.alpha0 = e.value("alpha0", eda.alpha0);
  eda.beta0 = e.value("beta0", eda.beta0);
  eda.minibatch = e.value("minibatch", eda.minibatch);
  eda.train_br.num_samples = e.value("train_br_samples", 0);
  eda.train_br.hc_iters = e.value("train_hc_iters", 40);
  eda.train_br.refine_top = e.value("train_refine_top", 32);
  return eda;
}

gcg::DataSplit load_data(const json& doc, const gcg::GameConfig& cfg) {
  if (!doc.contains("data")) throw InvalidInput("config needs a data section");
  const json& d = doc.at("data");
  check_keys(d, "data", {"dataset", "split_prefix", "split_seed"});
  if (d.contains("split_prefix")) {
    return gcg::load_split(d.at("split_prefix").get<std::string>());
  }
  gcg::Sample rows = gcg::load_feature_csv(d.at("dataset").get<std::string>());
  std::uint64_t seed = d.value("split_seed", gcg::Rng::derive_seed(cfg.seed, 0x5EED5EEDULL));
  return gcg::split_data(rows, seed);
}

json eval_to_json(const gcg::EvalReport& r) {
  json best = json::array();
  for (Eigen::Index i = 0; i < r.best_action.size(); ++i) best.push_back(r.best_action[i]);
  return {{"solver", r.solver},
          {"exploitability", r.exploitability},
          {"best_action", best},
          {"best_action_reward", r.best_action_reward},
          {"train_fp", r.train_fp},
          {"val_fp", r.val_fp},
          {"test_fp", r.test_fp},
          {"config_hash", r.config_hash}};
}

void validate_config(const json& doc) {
  check_keys(doc, "config",
             {"game", "data", "solver", "br", "eda", "lp", "report_dir", "experiment"});
}

int cmd_gen_synth(int dim, std::uint64_t seed, const std::string& out, double box_hi) {
  if (dim < 1) throw InvalidInput("--dim must be positive");
  gcg::FeatureSpace box = gcg::FeatureSpace::cube(dim, 0.0, box_hi);
  gcg::SynthSpec spec;
  spec.dim = dim;
  spec.seed = seed;
  gcg::Sample rows = gcg::gen_synth(spec, box);

  json meta = {{"command", "gen-synth"}, {"dim", dim}, {"seed", seed}, {"box_hi", box_hi}};
  std::string hash = gcg::config_hash(meta);
  gcg::save_feature_csv(out, rows, hash);
  gcg::DataSplit split = gcg::split_data(rows, gcg::Rng::derive_seed(seed, 0x5EED5EEDULL));
  fs::path base(out);
  std::string prefix = (base.parent_path() / base.stem()).string();
  gcg::save_split(prefix, split, hash);

  json report = {{"rows", rows.rows()},
                 {"train", split.train.rows()},
                 {"val", split.validation.rows()},
                 {"test", split.test.rows()},
                 {"config_hash", hash}};
  std::cout << report.dump() << "\n";
  return 0;
}

int cmd_train(const std::string& solver, const std::string& config_path,
              const std::string& model_out) {
  json doc = gcg::load_json(config_path);
  validate_config(doc);
  gcg::GameConfig cfg = parse_game(doc.at("game"));
  gcg::DataSplit data = load_data(doc, cfg);
  std::string hash = gcg::config_hash(doc);
  std::string report_dir = doc.value("report_dir", std::string("reports"));
  fs::create_directories(report_dir);

  json summary = {{"solver", solver}, {"config_hash", hash}};

  if (solver == "cfs") {
    gcg::CfsResult res = gcg::cfs_search(cfg, data.train);
    gcg::save_classifier(model_out, res.classifier);
    summary["v_final"] = res.v_final;
    summary["iterations"] = res.iterations;
    summary["train_fp"] = res.train_fp;
    summary["val_fp"] = gcg::false_positive_rate(res.classifier, data.validation);
    summary["test_fp"] = gcg::false_positive_rate(res.classifier, data.test);
    gcg::save_json((fs::path(report_dir) / "cfs_report.json").string(), summary);
  } else if (solver == "lp") {
    gcg::LpBuildOptions opts;
    int steps = 0;
    bool dump = false;
    if (doc.contains("lp")) {
      const json& l = doc.at("lp");
      check_keys(l, "lp", {"steps", "memory_cap_bytes", "dump", "h_lo", "h_hi"});
      steps = l.value("steps", 0);
      opts.memory_cap_bytes = l.value("memory_cap_bytes", opts.memory_cap_bytes);
      dump = l.value("dump", false);
    }
    gcg::BandwidthSearch bw;
    if (doc.contains("lp")) {
      bw.h_lo = doc.at("lp").value("h_lo", 0.0);
      bw.h_hi = doc.at("lp").value("h_hi", 0.0);
    }
    gcg::LpRun run = gcg::train_lp(cfg, data, steps, opts, bw);
    gcg::save_classifier(model_out, *run.classifier);
    summary["value"] = run.solution.value;
    summary["certificate"] = run.solution.certificate;
    summary["method"] = run.solution.method;
    summary["grid_steps"] = run.grid_steps;
    summary["bandwidth"] = run.bandwidth.fitted_h;
    summary["bandwidth_exceedance"] = run.bandwidth.exceedance;
    summary["train_fp"] = gcg::false_positive_rate(*run.classifier, data.train);
    summary["val_fp"] = gcg::false_positive_rate(*run.classifier, data.validation);
    summary["test_fp"] = gcg::false_positive_rate(*run.classifier, data.test);
    gcg::save_json((fs::path(report_dir) / "lp_report.json").string(), summary);
    if (dump) {
      gcg::KdeModel kde(data.train, run.bandwidth.fitted_h);
      gcg::Grid grid(cfg.space, run.grid_steps);
      gcg::dump_lp(gcg::build_discretized_game(cfg, kde, grid, opts),
                   (fs::path(report_dir) / "lp_dump").string());
    }
  } else if (solver == "eda") {
    gcg::EdaConfig eda = parse_eda(doc);
    gcg::EdaResult res = gcg::eda_train(cfg, data, eda);
    gcg::save_classifier(model_out, *res.classifier);
    summary["converged"] = res.converged;
    summary["restarts"] = res.restarts;
    summary["fallback_mix"] = res.fallback_mix;
    summary["bound"] = res.final_bound;
    summary["iterations"] = res.trace.size();
    summary["train_fp"] = gcg::false_positive_rate(*res.classifier, data.train);
    summary["val_fp"] = gcg::false_positive_rate(*res.classifier, data.validation);
    summary["test_fp"] = gcg::false_positive_rate(*res.classifier, data.test);
    gcg::save_json((fs::path(report_dir) / "eda_report.json").string(), summary);

    std::ofstream trace(fs::path(report_dir) / "trace.csv");
    trace << "# config_hash=" << hash << "\n";
    trace << "iter,lambda,fp_hat,u_hat,alpha,beta,restart_count\n";
    for (const auto& row : res.trace) {
      trace << row.iter << ',' << gcg::format_double(row.lambda) << ','
            << gcg::format_double(row.fp_hat) << ',' << gcg::format_double(row.u_hat) << ','
            << gcg::format_double(row.alpha) << ',' << gcg::format_double(row.beta) << ','
            << row.restart_count << '\n';
    }
    std::ofstream frontier(fs::path(report_dir) / "frontier.csv");
    frontier << "# config_hash=" << hash << "\n";
    frontier << "iter,fp,exploitability\n";
    for (const auto& p : res.frontier) {
      frontier << p.iter << ',' << gcg::format_double(p.fp) << ','
               << gcg::format_double(p.exploitability) << '\n';
    }
  } else if (solver == "knn" || solver == "pca") {
    std::unique_ptr<gcg::AnomalyScorer> scorer;
    if (solver == "knn") {
      int k = 5;
      if (doc.contains("solver")) {
        check_keys(doc.at("solver"), "solver", {"name", "k", "components"});
        k = doc.at("solver").value("k", 5);
      }
      scorer = std::make_unique<gcg::KnnScorer>(data.train, k);
    } else {
      int comps = std::max(1, cfg.space.dim() - 1);
      if (doc.contains("solver")) {
        check_keys(doc.at("solver"), "solver", {"name", "k", "components"});
        comps = doc.at("solver").value("components", comps);
      }
      scorer = std::make_unique<gcg::PcaScorer>(data.train, comps);
    }
    double tau = gcg::threshold_fit(*scorer, data.validation, cfg.fp_budget);
    gcg::ScoreThresholdClassifier cls(std::move(scorer), tau);
    gcg::save_classifier(model_out, cls);
    summary["threshold"] = tau;
    summary["val_fp"] = gcg::false_positive_rate(cls, data.validation);
    summary["test_fp"] = gcg::false_positive_rate(cls, data.test);
    gcg::save_json((fs::path(report_dir) / (solver + "_report.json")).string(), summary);
  } else {
    throw InvalidInput("unknown solver: " + solver);
  }

  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& config_path, int samples) {
  json doc = gcg::load_json(config_path);
  validate_config(doc);
  gcg::GameConfig cfg = parse_game(doc.at("game"));
  gcg::DataSplit data = load_data(doc, cfg);
  auto model = gcg::load_classifier(model_path);
  if (model->dim() != cfg.space.dim()) {
    throw InvalidInput("model dimension does not match the game");
  }
  gcg::BrConfig br = parse_br(doc, cfg);
  if (samples > 0) br.num_samples = samples;
  gcg::EvalReport rep = gcg::evaluate(*model, cfg, data, br, model->variant());
  rep.config_hash = gcg::config_hash(doc);
  std::cout << eval_to_json(rep).dump() << "\n";
  return 0;
}

int cmd_regret(const std::string& model_path, const std::string& base_path,
               const std::string& config_path, int samples) {
  json doc = gcg::load_json(config_path);
  validate_config(doc);
  gcg::GameConfig cfg = parse_game(doc.at("game"));
  gcg::DataSplit data = load_data(doc, cfg);
  auto model = gcg::load_classifier(model_path);
  auto base = gcg::load_classifier(base_path);
  gcg::BrConfig br = parse_br(doc, cfg);
  if (samples > 0) br.num_samples = samples;

  gcg::EvalReport a = gcg::evaluate(*model, cfg, data, br, "model");
  gcg::EvalReport b = gcg::evaluate(*base, cfg, data, br, "baseline");
  json out = {{"model", eval_to_json(a)},
              {"baseline", eval_to_json(b)},
              {"relative_regret_pct",
               gcg::relative_regret(a.exploitability, b.exploitability)},
              {"config_hash", gcg::config_hash(doc)}};
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_experiment(const std::string& name, const std::string& config_path) {
  json doc = gcg::load_json(config_path);
  validate_config(doc);
  gcg::ExperimentOptions opts;
  opts.config_hash = gcg::config_hash(doc);
  opts.report_dir = doc.value("report_dir", std::string("reports"));
  if (doc.contains("experiment")) {
    const json& e = doc.at("experiment");
    check_keys(e, "experiment", {"name", "dims", "seeds"});
    if (e.contains("dims")) opts.dims = e.at("dims").get<std::vector<int>>();
    if (e.contains("seeds")) opts.seeds = e.at("seeds").get<std::vector<std::uint64_t>>();
  }
  opts.eda = parse_eda(doc);
  if (doc.contains("lp")) {
    opts.lp.memory_cap_bytes =
        doc.at("lp").value("memory_cap_bytes", opts.lp.memory_cap_bytes);
  }
  gcg::run_experiment(name, opts);
  json out = {{"experiment", name},
              {"report_dir", opts.report_dir},
              {"config_hash", opts.config_hash}};
  std::cout << out.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized anomaly-detection classifiers as solutions of a "
               "generalized classification game"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-synth", "generate a synthetic benign dataset");
  int gen_dim = 1;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "synth.csv";
  double gen_hi = 15.0;
  gen->add_option("--dim", gen_dim, "feature dimension")->required();
  gen->add_option("--seed", gen_seed, "dataset seed");
  gen->add_option("--out", gen_out, "output CSV path")->required();
  gen->add_option("--box-hi", gen_hi, "upper feature bound");

  auto* gdns = app.add_subcommand("gen-dns", "generate synthetic DNS window features");
  std::uint64_t dns_seed = 1;
  int dns_windows = 2000;
  bool dns_attacker_free = true;
  std::string dns_out = "dns_features.csv";
  gdns->add_option("--seed", dns_seed, "generator seed");
  gdns->add_option("--windows", dns_windows, "benign window count");
  gdns->add_flag("!--with-attacks", dns_attacker_free, "append exfiltration-like windows");
  gdns->add_option("--out", dns_out, "output CSV path")->required();

  auto* feat = app.add_subcommand("featurize", "aggregate a DNS query log into windows");
  std::string feat_in, feat_out;
  feat->add_option("--in", feat_in, "input CSV (timestamp,qname)")->required();
  feat->add_option("--out", feat_out, "output feature CSV")->required();

  auto* train = app.add_subcommand("train", "train a classifier");
  std::string train_solver, train_config, train_model = "model.json";
  train->add_option("--solver", train_solver, "cfs|lp|eda|knn|pca")->required();
  train->add_option("--config", train_config, "run config JSON")->required();
  train->add_option("--out-model", train_model, "classifier output path");

  auto* evalc = app.add_subcommand("eval", "evaluate a serialized classifier");
  std::string eval_model, eval_config;
  int eval_samples = 0;
  evalc->add_option("--model", eval_model, "classifier JSON")->required();
  evalc->add_option("--config", eval_config, "run config JSON")->required();
  evalc->add_option("--samples", eval_samples, "best-response sample count");

  auto* regret = app.add_subcommand("regret", "relative regret of one model vs another");
  std::string reg_model, reg_base, reg_config;
  int reg_samples = 0;
  regret->add_option("--model", reg_model, "classifier JSON")->required();
  regret->add_option("--baseline-model", reg_base, "baseline classifier JSON")->required();
  regret->add_option("--config", reg_config, "run config JSON")->required();
  regret->add_option("--samples", reg_samples, "best-response sample count");

  auto* exp = app.add_subcommand("experiment", "run a named experiment protocol");
  std::string exp_name, exp_config;
  exp->add_option("--name", exp_name,
                  "scalability|identity_quality|general_quality|case_study|br_variance")
      ->required();
  exp->add_option("--config", exp_config, "run config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen_synth(gen_dim, gen_seed, gen_out, gen_hi);
    if (gdns->parsed()) {
      auto rows = gcg::gen_dns_like(dns_seed, dns_windows, dns_attacker_free);
      json meta = {{"command", "gen-dns"}, {"seed", dns_seed}, {"windows", dns_windows}};
      gcg::save_dns_features_csv(dns_out, rows, gcg::config_hash(meta));
      std::cout << json{{"rows", rows.size()}}.dump() << "\n";
      return 0;
    }
    if (feat->parsed()) {
      auto records = gcg::load_dns_records_csv(feat_in);
      auto result = gcg::dns_featurize(records);
      gcg::save_dns_features_csv(feat_out, result.rows, "");
      std::cout << json{{"rows", result.rows.size()},
                        {"skipped", result.skipped_records}}
                       .dump()
                << "\n";
      return 0;
    }
    if (train->parsed()) return cmd_train(train_solver, train_config, train_model);
    if (evalc->parsed()) return cmd_eval(eval_model, eval_config, eval_samples);
    if (regret->parsed()) return cmd_regret(reg_model, reg_base, reg_config, reg_samples);
    if (exp->parsed()) return cmd_experiment(exp_name, exp_config);
  } catch (const gcg::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const gcg::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const gcg::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const gcg::UnsupportedConfig& e) {
    std::cerr << "unsupported configuration: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
