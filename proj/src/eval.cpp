#include "gcg/eval.hpp"

#include <chrono>

#include "gcg/game.hpp"

namespace gcg {

double relative_regret(double u_c, double u_base) {
  if (!(u_base > 0.0)) throw InvalidInput("relative regret needs a positive baseline value");
  return 100.0 * (u_c - u_base) / u_base;
}

EvalReport evaluate(const Classifier& c, const GameConfig& cfg, const DataSplit& data,
                    const BrConfig& br, const std::string& solver_name) {
  auto start = std::chrono::steady_clock::now();
  BrConfig protocol = br;
  protocol.refine = false;  // evaluation uses the raw sampled best response

  BestResponse best = sample_best_response(c, cfg, data.test, protocol);

  EvalReport report;
  report.solver = solver_name;
  report.exploitability = best.utility;
  report.best_action = best.action;
  report.best_action_reward = cfg.reward.value(best.action);
  report.train_fp = false_positive_rate(c, data.train);
  report.val_fp = false_positive_rate(c, data.validation);
  report.test_fp = false_positive_rate(c, data.test);
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace gcg
