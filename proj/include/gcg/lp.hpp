#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gcg/classifier.hpp"
#include "gcg/grid.hpp"
#include "gcg/kde.hpp"
#include "gcg/types.hpp"

namespace gcg {

// Matrix game over grid cells. Observation columns are the grid cells plus
// one sink cell (index num_cells) that absorbs out-of-box observation mass
// and carries its own inspection variable.
struct DiscretizedGame {
  Grid grid;
  Eigen::VectorXd attack_reward;          // per attacker cell
  bool one_hot_transition = false;        // identity transform
  std::vector<std::int64_t> one_hot_col;  // when one_hot_transition
  std::vector<Eigen::VectorXd> transition_rows;  // dense rows otherwise, size num_cells+1
  Eigen::VectorXd benign_mass;            // per observation column incl. sink
  double fp_budget = 0.05;

  std::int64_t num_obs() const { return grid.num_cells() + 1; }
  std::int64_t sink() const { return grid.num_cells(); }
  double transition(std::int64_t attacker, std::int64_t obs) const;
};

struct LpBuildOptions {
  // Refuses to build when steps^dim * (steps^dim + 8) * 8 bytes exceeds this.
  std::uint64_t memory_cap_bytes = 2ULL << 30;
};

DiscretizedGame build_discretized_game(const GameConfig& cfg, const KdeModel& kde,
                                       const Grid& grid, const LpBuildOptions& opts = {});

struct LpSolution {
  double value = 0.0;
  Eigen::VectorXd inspect_prob;  // per observation column incl. sink
  double certificate = 0.0;      // max primal violation / duality gap
  std::string method;            // "simplex" or "separable"
  int iterations = 0;
};

// Exact optimum of: min V  s.t.  per attacker cell
//   R(cell) * sum_o Pr[o | T(cell)] (1 - c_o) <= V,
//   sum_o benign_mass_o c_o <= fp_budget,  0 <= c <= 1.
// One-hot transition games are solved by an exact parametric sweep, general
// games by the bounded simplex; both directions construct dual multipliers
// and the reported certificate is verified against the game itself.
LpSolution solve_lp(const DiscretizedGame& game);

// Max violation of primal constraints plus |primal - dual objective| for
// given duals; used internally and by tests.
double lp_certificate(const DiscretizedGame& game, const Eigen::VectorXd& inspect,
                      double value, const Eigen::VectorXd& attacker_dual,
                      double fp_dual);

std::unique_ptr<Classifier> lp_classifier(const LpSolution& sol, const Grid& grid);

// Sparse-triplet interchange dump (matrix.csv, bounds.csv, objective.csv)
// so third-party solvers can cross-check the LP.
void dump_lp(const DiscretizedGame& game, const std::string& dir);

}  // namespace gcg
