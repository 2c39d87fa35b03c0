#include "gcg/experiments.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gcg/baselines.hpp"
#include "gcg/best_response.hpp"
#include "gcg/common.hpp"
#include "gcg/dns.hpp"
#include "gcg/game.hpp"
#include "gcg/serialize.hpp"

namespace gcg {

namespace fs = std::filesystem;

namespace {

nlohmann::json report_json(const EvalReport& r) {
  nlohmann::json best = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.best_action.size(); ++i) {
    best.push_back(format_double(r.best_action[i]));
  }
  // wall time goes to timing.csv so reports stay byte-identical across runs
  return {{"solver", r.solver},
          {"exploitability", format_double(r.exploitability)},
          {"best_action", best},
          {"best_action_reward", format_double(r.best_action_reward)},
          {"train_fp", format_double(r.train_fp)},
          {"val_fp", format_double(r.val_fp)},
          {"test_fp", format_double(r.test_fp)},
          {"config_hash", r.config_hash}};
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const std::string& hash) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (!hash.empty()) out << "# config_hash=" << hash << "\n";
  out << "iter,lambda,fp_hat,u_hat,alpha,beta,restart_count\n";
  for (const auto& row : trace) {
    out << row.iter << ',' << format_double(row.lambda) << ',' << format_double(row.fp_hat)
        << ',' << format_double(row.u_hat) << ',' << format_double(row.alpha) << ','
        << format_double(row.beta) << ',' << row.restart_count << '\n';
  }
}

void write_frontier_csv(const std::string& path, const std::vector<ParetoPoint>& frontier,
                        const std::string& hash) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (!hash.empty()) out << "# config_hash=" << hash << "\n";
  out << "iter,fp,exploitability\n";
  for (const auto& p : frontier) {
    out << p.iter << ',' << format_double(p.fp) << ',' << format_double(p.exploitability)
        << '\n';
  }
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

}  // namespace

SynthInstance make_synth_instance(int dim, TransformKind transform, std::uint64_t seed,
                                  double fp_budget, double box_hi) {
  SynthInstance inst;
  inst.cfg.space = FeatureSpace::cube(dim, 0.0, box_hi);
  inst.cfg.reward = RewardFunction::sum();
  inst.cfg.transform = transform;
  inst.cfg.fp_budget = fp_budget;
  inst.cfg.seed = seed;

  SynthSpec spec;
  spec.dim = dim;
  spec.seed = seed;
  Sample rows = gen_synth(spec, inst.cfg.space);
  inst.data = split_data(rows, Rng::derive_seed(seed, 0x5EED5EEDULL));
  return inst;
}

int default_grid_steps(int dim) {
  switch (dim) {
    case 1: return 1000;
    case 2: return 80;
    case 3: return 12;
    case 4: return 5;
    default: return 4;
  }
}

LpRun train_lp(const GameConfig& cfg, const DataSplit& data, int grid_steps,
               const LpBuildOptions& opts, BandwidthSearch bw) {
  int steps = grid_steps > 0 ? grid_steps : default_grid_steps(cfg.space.dim());

  if (bw.h_lo <= 0.0 || bw.h_hi <= 0.0) {
    // interval scaled from the pooled per-dimension standard deviation
    Eigen::RowVectorXd mean = data.train.colwise().mean();
    Eigen::RowVectorXd var =
        (data.train.rowwise() - mean).array().square().colwise().mean();
    double pooled = std::sqrt(var.mean());
    if (!(pooled > 0.0)) pooled = 1.0;
    if (bw.h_lo <= 0.0) bw.h_lo = 0.05 * pooled;
    if (bw.h_hi <= 0.0) bw.h_hi = 2.0 * pooled;
  }
  bw.fitted_h = fit_bandwidth(data.train, data.validation, cfg.fp_budget, bw.h_lo, bw.h_hi);
  bw.exceedance = bandwidth_exceedance(data.train, data.validation, cfg.fp_budget, bw.fitted_h);

  KdeModel kde(data.train, bw.fitted_h);
  Grid grid(cfg.space, steps);
  DiscretizedGame game = build_discretized_game(cfg, kde, grid, opts);
  LpSolution sol = solve_lp(game);
  auto classifier = lp_classifier(sol, grid);
  return LpRun{std::move(sol), std::move(classifier), std::move(kde), bw, steps};
}

namespace {

struct RunOutput {
  nlohmann::json report = nlohmann::json::object();
  std::vector<TraceRow> trace;
  std::vector<ParetoPoint> frontier;
  nlohmann::json regret_rows = nlohmann::json::array();
  nlohmann::json timing = nlohmann::json::object();
};

void write_run(const fs::path& dir, const RunOutput& run, const std::string& hash) {
  fs::create_directories(dir);
  nlohmann::json report = run.report;
  report["config_hash"] = hash;
  save_json((dir / "report.json").string(), report);
  write_trace_csv((dir / "trace.csv").string(), run.trace, hash);
  write_frontier_csv((dir / "frontier.csv").string(), run.frontier, hash);

  std::ofstream regret(dir / "regret.csv");
  if (!hash.empty()) regret << "# config_hash=" << hash << "\n";
  regret << "classifier,baseline,relative_regret_pct\n";
  for (const auto& row : run.regret_rows) {
    regret << row.at("classifier").get<std::string>() << ','
           << row.at("baseline").get<std::string>() << ','
           << row.at("value").get<std::string>() << '\n';
  }
  save_json((dir / "timing.json").string(), run.timing);
}

BrConfig eval_protocol(int dim, std::uint64_t seed) {
  BrConfig br;
  br.num_samples = 2000 * dim;
  br.refine = false;
  br.seed = Rng::derive_seed(seed, 0xE7A1ULL);
  return br;
}

void run_identity_or_general(const std::string& name, const ExperimentOptions& opts,
                             bool identity) {
  std::vector<int> dims = opts.dims;
  if (dims.empty()) dims = identity ? std::vector<int>{1, 2} : std::vector<int>{3, 4, 5};
  TransformKind transform = identity ? TransformKind::Identity : TransformKind::Additive;

  std::ostringstream summary;
  summary << "experiment,n,seed,solver,exploitability,best_reward,test_fp,regret_vs_base\n";

  for (int n : dims) {
    for (std::uint64_t seed : opts.seeds) {
      SynthInstance inst = make_synth_instance(n, transform, seed);
      BrConfig br = eval_protocol(n, seed);
      RunOutput run;

      std::optional<EvalReport> cfs_report;
      if (identity) {
        Timer t;
        CfsResult cfs = cfs_search(inst.cfg, inst.data.train);
        cfs_report = evaluate(cfs.classifier, inst.cfg, inst.data, br, "cfs");
        run.timing["cfs_ms"] = t.ms();
        run.report["cfs"] = report_json(*cfs_report);
        run.report["cfs"]["v_final"] = format_double(cfs.v_final);
        run.report["cfs"]["iterations"] = cfs.iterations;
      }

      Timer t_lp;
      LpRun lp = train_lp(inst.cfg, inst.data, 0, opts.lp);
      EvalReport lp_report = evaluate(*lp.classifier, inst.cfg, inst.data, br, "lp");
      run.timing["lp_ms"] = t_lp.ms();
      run.report["lp"] = report_json(lp_report);
      run.report["lp"]["value"] = format_double(lp.solution.value);
      run.report["lp"]["certificate"] = format_double(lp.solution.certificate);
      run.report["lp"]["bandwidth"] = format_double(lp.bandwidth.fitted_h);

      Timer t_eda;
      EdaConfig eda = opts.eda;
      EdaResult trained = eda_train(inst.cfg, inst.data, eda);
      EvalReport eda_report = evaluate(*trained.classifier, inst.cfg, inst.data, br, "eda");
      run.timing["eda_ms"] = t_eda.ms();
      run.report["eda"] = report_json(eda_report);
      run.report["eda"]["converged"] = trained.converged;
      run.report["eda"]["restarts"] = trained.restarts;
      run.trace = trained.trace;
      run.frontier = trained.frontier;

      double base = identity ? cfs_report->exploitability : lp_report.exploitability;
      std::string base_name = identity ? "cfs" : "lp";
      auto add_regret = [&](const std::string& who, double u) {
        double reg = relative_regret(u, base);
        run.regret_rows.push_back({{"classifier", who},
                                   {"baseline", base_name},
                                   {"value", format_double(reg)}});
        return reg;
      };
      double lp_reg = identity ? add_regret("lp", lp_report.exploitability) : 0.0;
      double eda_reg = add_regret("eda", eda_report.exploitability);

      fs::path dir = fs::path(opts.report_dir) / name / std::to_string(n) /
                     std::to_string(seed);
      write_run(dir, run, opts.config_hash);

      if (identity) {
        summary << name << ',' << n << ',' << seed << ",cfs,"
                << format_double(cfs_report->exploitability) << ','
                << format_double(cfs_report->best_action_reward) << ','
                << format_double(cfs_report->test_fp) << ",0\n";
        summary << name << ',' << n << ',' << seed << ",lp,"
                << format_double(lp_report.exploitability) << ','
                << format_double(lp_report.best_action_reward) << ','
                << format_double(lp_report.test_fp) << ',' << format_double(lp_reg) << '\n';
      } else {
        summary << name << ',' << n << ',' << seed << ",lp,"
                << format_double(lp_report.exploitability) << ','
                << format_double(lp_report.best_action_reward) << ','
                << format_double(lp_report.test_fp) << ",0\n";
      }
      summary << name << ',' << n << ',' << seed << ",eda,"
              << format_double(eda_report.exploitability) << ','
              << format_double(eda_report.best_action_reward) << ','
              << format_double(eda_report.test_fp) << ',' << format_double(eda_reg) << '\n';
    }
  }
  fs::create_directories(fs::path(opts.report_dir) / name);
  write_text_file((fs::path(opts.report_dir) / name / "summary.csv").string(), summary.str());
}

void run_scalability(const ExperimentOptions& opts) {
  std::vector<int> dims = opts.dims;
  if (dims.empty()) dims = {1, 2, 3, 4, 5, 10};

  std::ostringstream summary;
  summary << "n,lp_steps,lp_status,eda_status\n";
  for (int n : dims) {
    std::uint64_t seed = opts.seeds.empty() ? 1 : opts.seeds.front();
    SynthInstance inst = make_synth_instance(n, TransformKind::Additive, seed);
    int steps = default_grid_steps(n);

    std::string lp_status = "ok";
    RunOutput run;
    Timer t_lp;
    try {
      LpRun lp = train_lp(inst.cfg, inst.data, steps, opts.lp);
      run.report["lp"] = {{"value", format_double(lp.solution.value)},
                          {"certificate", format_double(lp.solution.certificate)},
                          {"steps", steps}};
    } catch (const ResourceLimit& e) {
      lp_status = "N/A";  // mirrors the unrunnable high-dimension rows
      run.report["lp"] = {{"error", e.what()}, {"steps", steps}};
    }
    run.timing["lp_ms"] = t_lp.ms();

    Timer t_eda;
    EdaConfig eda = opts.eda;
    EdaResult trained = eda_train(inst.cfg, inst.data, eda);
    run.timing["eda_ms"] = t_eda.ms();
    run.report["eda"] = {{"converged", trained.converged},
                         {"iterations", static_cast<int>(trained.trace.size())}};
    run.trace = trained.trace;
    run.frontier = trained.frontier;

    fs::path dir = fs::path(opts.report_dir) / "scalability" / std::to_string(n) /
                   std::to_string(seed);
    write_run(dir, run, opts.config_hash);
    summary << n << ',' << steps << ',' << lp_status << ",ok\n";
  }
  fs::create_directories(fs::path(opts.report_dir) / "scalability");
  write_text_file((fs::path(opts.report_dir) / "scalability" / "summary.csv").string(),
                  summary.str());
}

struct CaseStudyData {
  GameConfig cfg;
  DataSplit data;
};

CaseStudyData make_case_study(std::uint64_t seed, int windows) {
  CaseStudyData out;
  FeatureVector lo = FeatureVector::Zero(3);
  FeatureVector hi(3);
  hi << 800.0, 100.0, 40.0;
  out.cfg.space = FeatureSpace(lo, hi);
  out.cfg.reward = RewardFunction::product_first_two();
  out.cfg.transform = TransformKind::Additive;
  out.cfg.fp_budget = 0.05;
  out.cfg.seed = seed;

  auto rows = gen_dns_like(Rng::derive_seed(seed, 0xD45D45ULL), windows, true);
  Sample features = dns_features_matrix(rows);
  // keep every generated point inside the game box
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      features(i, j) = std::min(out.cfg.space.upper[j], features(i, j));
    }
  }
  out.data = split_data(features, Rng::derive_seed(seed, 0x5EEDD45ULL));
  return out;
}

void run_case_study(const ExperimentOptions& opts) {
  std::vector<std::uint64_t> seeds = opts.seeds;
  if (seeds.size() > 3) seeds.resize(3);

  std::ostringstream summary;
  summary << "seed,solver,exploitability,best_reward,test_fp\n";
  for (std::uint64_t seed : seeds) {
    CaseStudyData cs = make_case_study(seed, 2000);
    BrConfig br;
    br.num_samples = 30000;
    br.refine = false;
    br.seed = Rng::derive_seed(seed, 0xE7A1ULL);

    RunOutput run;

    Timer t_eda;
    EdaResult trained = eda_train(cs.cfg, cs.data, opts.eda);
    EvalReport eda_report = evaluate(*trained.classifier, cs.cfg, cs.data, br, "eda");
    run.timing["eda_ms"] = t_eda.ms();
    run.report["eda"] = report_json(eda_report);
    run.trace = trained.trace;
    run.frontier = trained.frontier;

    KnnScorer knn(cs.data.train, 5);
    ScoreThresholdClassifier knn_cls(knn.clone(), threshold_fit(knn, cs.data.validation,
                                                                cs.cfg.fp_budget));
    EvalReport knn_report = evaluate(knn_cls, cs.cfg, cs.data, br, "knn");
    run.report["knn"] = report_json(knn_report);

    PcaScorer pca(cs.data.train, 2);
    ScoreThresholdClassifier pca_cls(pca.clone(), threshold_fit(pca, cs.data.validation,
                                                                cs.cfg.fp_budget));
    EvalReport pca_report = evaluate(pca_cls, cs.cfg, cs.data, br, "pca");
    run.report["pca"] = report_json(pca_report);

    for (const auto* rep : {&knn_report, &pca_report}) {
      run.regret_rows.push_back(
          {{"classifier", rep->solver},
           {"baseline", "eda"},
           {"value", format_double(relative_regret(rep->exploitability,
                                                   eda_report.exploitability))}});
    }

    fs::path dir = fs::path(opts.report_dir) / "case_study" / "3" / std::to_string(seed);
    write_run(dir, run, opts.config_hash);
    for (const auto* rep : {&eda_report, &pca_report, &knn_report}) {
      summary << seed << ',' << rep->solver << ',' << format_double(rep->exploitability)
              << ',' << format_double(rep->best_action_reward) << ','
              << format_double(rep->test_fp) << '\n';
    }
  }
  fs::create_directories(fs::path(opts.report_dir) / "case_study");
  write_text_file((fs::path(opts.report_dir) / "case_study" / "summary.csv").string(),
                  summary.str());
}

void run_br_variance(const ExperimentOptions& opts) {
  std::uint64_t seed = opts.seeds.empty() ? 1 : opts.seeds.front();
  CaseStudyData cs = make_case_study(seed, 2000);
  EdaResult trained = eda_train(cs.cfg, cs.data, opts.eda);

  // fixed benign subsample: the repetition spread measures candidate
  // sampling only
  Sample benign = cs.data.train.topRows(std::min<Eigen::Index>(64, cs.data.train.rows()));
  BrVarianceSummary summary =
      br_variance_study(*trained.classifier, cs.cfg, benign, 30000, 1000);

  fs::path dir = fs::path(opts.report_dir) / "br_variance" / "3" / std::to_string(seed);
  fs::create_directories(dir);
  std::ostringstream hist;
  hist << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < summary.histogram.size(); ++i) {
    double lo = summary.bin_lo + static_cast<double>(i) * summary.bin_width;
    hist << format_double(lo) << ',' << format_double(lo + summary.bin_width) << ','
         << summary.histogram[i] << '\n';
  }
  write_text_file((dir / "histogram.csv").string(), hist.str());
  save_json((dir / "report.json").string(),
            {{"min", format_double(summary.min)},
             {"max", format_double(summary.max)},
             {"mean", format_double(summary.mean)},
             {"relative_spread", format_double((summary.max - summary.min) / summary.mean)},
             {"config_hash", opts.config_hash}});
}

}  // namespace

void run_experiment(const std::string& name, const ExperimentOptions& opts) {
  if (name == "identity_quality") {
    run_identity_or_general(name, opts, true);
  } else if (name == "general_quality") {
    run_identity_or_general(name, opts, false);
  } else if (name == "scalability") {
    run_scalability(opts);
  } else if (name == "case_study") {
    run_case_study(opts);
  } else if (name == "br_variance") {
    run_br_variance(opts);
  } else {
    throw InvalidInput("unknown experiment: " + name);
  }
}

}  // namespace gcg
