#include "gcg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "gcg/classifier.hpp"
#include "gcg/common.hpp"
#include "gcg/simplex.hpp"

namespace gcg {

namespace {

double gauss_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

// Per-axis table of anchor CDF differences across the cell edges, shifted
// by the attacker point: table(i, j) = mass of cell-interval i along axis k
// for anchor j of the KDE translated by fa[k].
Eigen::MatrixXd axis_mass_table(const Grid& grid, const KdeModel& kde, int axis,
                                double shift) {
  const int d = grid.steps();
  const auto& space = grid.space();
  const double width = (space.upper[axis] - space.lower[axis]) / d;
  const Eigen::Index anchors = kde.anchors().rows();
  const double h = kde.bandwidth();
  Eigen::MatrixXd table(d, anchors);
  for (Eigen::Index j = 0; j < anchors; ++j) {
    double center = kde.anchors()(j, axis) + shift;
    double prev = gauss_cdf((space.lower[axis] - center) / h);
    for (int i = 0; i < d; ++i) {
      double edge = space.lower[axis] + (i + 1) * width;
      double cur = gauss_cdf((edge - center) / h);
      table(i, j) = std::max(0.0, cur - prev);
      prev = cur;
    }
  }
  return table;
}

// Row of in-box observation-cell masses for a shifted KDE, flattened in the
// grid's cell order (first axis major).
Eigen::VectorXd shifted_cell_masses(const Grid& grid, const KdeModel& kde,
                                    const FeatureVector& fa) {
  const int n = grid.space().dim();
  const Eigen::Index anchors = kde.anchors().rows();
  Eigen::MatrixXd tail = n > 1 ? axis_mass_table(grid, kde, n - 1, fa[n - 1])
                               : Eigen::MatrixXd::Ones(1, anchors);
  for (int axis = n - 2; axis >= 1; --axis) {
    Eigen::MatrixXd head = axis_mass_table(grid, kde, axis, fa[axis]);
    Eigen::MatrixXd merged(head.rows() * tail.rows(), anchors);
    for (Eigen::Index i = 0; i < head.rows(); ++i) {
      for (Eigen::Index r = 0; r < tail.rows(); ++r) {
        merged.row(i * tail.rows() + r) = head.row(i).cwiseProduct(tail.row(r));
      }
    }
    tail = std::move(merged);
  }
  Eigen::MatrixXd first = axis_mass_table(grid, kde, 0, fa[0]);
  Eigen::MatrixXd cells = first * tail.transpose();  // d x d^(n-1)
  Eigen::VectorXd flat(grid.num_cells());
  const Eigen::Index block = tail.rows();
  for (Eigen::Index i = 0; i < first.rows(); ++i) {
    flat.segment(i * block, block) = cells.row(i).transpose();
  }
  return flat / static_cast<double>(anchors);
}

struct GameDuals {
  Eigen::VectorXd attacker;  // per attacker cell, zero where reward is zero
  double fp = 0.0;
};

// Exact parametric solution for one-hot transitions: the LP separates into
// c_a >= 1 - V / R_a, so the optimal V is the root of the piecewise-linear
// benign-mass requirement g(V) = sum_a b_a max(0, 1 - V/R_a) = phi.
void solve_separable(const DiscretizedGame& game, LpSolution& sol, GameDuals& duals) {
  const std::int64_t cells = game.grid.num_cells();
  const Eigen::VectorXd& reward = game.attack_reward;
  Eigen::VectorXd mass(cells);  // benign mass seen by each attacker cell's column
  for (std::int64_t a = 0; a < cells; ++a) mass[a] = game.benign_mass[game.one_hot_col[a]];

  double g0 = 0.0;
  for (std::int64_t a = 0; a < cells; ++a) {
    if (reward[a] > 0.0) g0 += mass[a];
  }

  double v = 0.0;
  if (g0 <= game.fp_budget) {
    v = 0.0;
  } else {
    std::vector<std::int64_t> order;
    order.reserve(static_cast<std::size_t>(cells));
    for (std::int64_t a = 0; a < cells; ++a) {
      if (reward[a] > 0.0) order.push_back(a);
    }
    std::sort(order.begin(), order.end(), [&](std::int64_t x, std::int64_t y) {
      return reward[x] > reward[y];
    });
    double acc_mass = 0.0, acc_ratio = 0.0;
    bool found = false;
    for (std::size_t pos = 0; pos < order.size() && !found;) {
      double level = reward[order[pos]];
      while (pos < order.size() && reward[order[pos]] == level) {
        acc_mass += mass[order[pos]];
        acc_ratio += mass[order[pos]] / level;
        ++pos;
      }
      double next_level = pos < order.size() ? reward[order[pos]] : 0.0;
      if (acc_ratio > 0.0) {
        double candidate = (acc_mass - game.fp_budget) / acc_ratio;
        if (candidate <= level + 1e-12 && candidate >= next_level - 1e-12) {
          v = std::max(candidate, 0.0);
          found = true;
        }
      }
    }
    if (!found) throw NumericalError("separable LP sweep found no root");
  }

  sol.inspect_prob = Eigen::VectorXd::Zero(game.num_obs());
  for (std::int64_t a = 0; a < cells; ++a) {
    double c = 0.0;
    if (reward[a] > 0.0) {
      c = v == 0.0 ? 1.0 : std::max(0.0, 1.0 - v / reward[a]);
    }
    sol.inspect_prob[game.one_hot_col[a]] = c;
  }
  sol.value = v;
  sol.method = "separable";

  duals.attacker = Eigen::VectorXd::Zero(cells);
  duals.fp = 0.0;
  if (v > 0.0) {
    double active_ratio = 0.0;
    for (std::int64_t a = 0; a < cells; ++a) {
      if (reward[a] > v) active_ratio += mass[a] / reward[a];
    }
    if (active_ratio > 0.0) {
      duals.fp = 1.0 / active_ratio;
      for (std::int64_t a = 0; a < cells; ++a) {
        if (reward[a] > v) duals.attacker[a] = duals.fp * mass[a] / reward[a];
      }
    } else {
      // benign-free optimum (phi effectively zero): support the dual on the
      // most rewarding cell that carries benign mass
      std::int64_t best = -1;
      for (std::int64_t a = 0; a < cells; ++a) {
        if (mass[a] > 0.0 && (best < 0 || reward[a] > reward[best])) best = a;
      }
      if (best >= 0) {
        duals.attacker[best] = 1.0;
        duals.fp = reward[best] / mass[best];
      }
    }
  }
}

void solve_general(const DiscretizedGame& game, LpSolution& sol, GameDuals& duals) {
  const std::int64_t cells = game.grid.num_cells();
  const std::int64_t obs = game.num_obs();
  std::vector<std::int64_t> active_rows;
  for (std::int64_t a = 0; a < cells; ++a) {
    if (game.attack_reward[a] > 0.0) active_rows.push_back(a);
  }
  const Eigen::Index m = static_cast<Eigen::Index>(active_rows.size()) + 1;
  const Eigen::Index nv = obs + 1;  // inspection vars + V

  double v_max = game.attack_reward.maxCoeff();
  double v_cap = v_max * (1.0 + 1e-6) + 1e-9;

  LpProblem lp;
  lp.a.setZero(m, nv);
  lp.rhs.resize(m);
  lp.sense.assign(static_cast<std::size_t>(m), '>');
  for (Eigen::Index r = 0; r + 1 < m; ++r) {
    std::int64_t a = active_rows[static_cast<std::size_t>(r)];
    lp.a.row(r).head(obs) = game.transition_rows[static_cast<std::size_t>(a)].transpose();
    lp.a(r, obs) = 1.0 / game.attack_reward[a];
    lp.rhs[r] = 1.0;
  }
  lp.a.row(m - 1).head(obs) = game.benign_mass.transpose();
  lp.rhs[m - 1] = game.fp_budget;
  lp.sense[static_cast<std::size_t>(m - 1)] = '<';
  lp.obj.setZero(nv);
  lp.obj[obs] = 1.0;
  lp.lo.setZero(nv);
  lp.up.setOnes(nv);
  lp.up[obs] = v_cap;

  Eigen::VectorXd start = Eigen::VectorXd::Zero(nv);
  start[obs] = v_cap;

  LpResult res = solve_bounded_lp(lp, start);
  sol.inspect_prob = res.x.head(obs).cwiseMax(0.0).cwiseMin(1.0);
  sol.value = res.x[obs];
  sol.method = "simplex";
  sol.iterations = res.iterations;

  duals.attacker = Eigen::VectorXd::Zero(cells);
  for (Eigen::Index r = 0; r + 1 < m; ++r) {
    std::int64_t a = active_rows[static_cast<std::size_t>(r)];
    duals.attacker[a] = res.row_dual[r] / game.attack_reward[a];
  }
  duals.fp = res.row_dual[m - 1];
}

}  // namespace

double DiscretizedGame::transition(std::int64_t attacker, std::int64_t obs) const {
  if (one_hot_transition) {
    return one_hot_col[static_cast<std::size_t>(attacker)] == obs ? 1.0 : 0.0;
  }
  return transition_rows[static_cast<std::size_t>(attacker)][obs];
}

DiscretizedGame build_discretized_game(const GameConfig& cfg, const KdeModel& kde,
                                       const Grid& grid, const LpBuildOptions& opts) {
  cfg.validate();
  if (kde.dim() != cfg.space.dim()) throw InvalidInput("KDE dimension mismatch");
  if (!cfg.reward.monotone_on(cfg.space)) {
    throw UnsupportedConfig(
        "per-cell attack points need a reward monotone on the box; got a "
        "non-monotone kind");
  }

  const double cells_est = std::pow(static_cast<double>(grid.steps()), cfg.space.dim());
  const double bytes_est = cells_est * (cells_est + 8.0) * 8.0;
  if (bytes_est > static_cast<double>(opts.memory_cap_bytes)) {
    throw ResourceLimit("discretized game estimate " + std::to_string(bytes_est) +
                        " bytes exceeds the configured cap");
  }

  DiscretizedGame game{grid, {}, false, {}, {}, {}, cfg.fp_budget};
  const std::int64_t cells = grid.num_cells();

  game.attack_reward.resize(cells);
  for (std::int64_t a = 0; a < cells; ++a) {
    game.attack_reward[a] = cfg.reward.value(grid.cell_attack_point(a));
  }

  game.benign_mass = Eigen::VectorXd::Zero(cells + 1);
  std::vector<double> cell_mass(static_cast<std::size_t>(cells));
  parallel_for(static_cast<std::size_t>(cells), [&](std::size_t a) {
    auto idx = static_cast<std::int64_t>(a);
    cell_mass[a] = kde.cell_mass(grid.cell_lower(idx), grid.cell_upper(idx));
  });
  double in_box = 0.0;
  for (std::int64_t a = 0; a < cells; ++a) {
    game.benign_mass[a] = cell_mass[static_cast<std::size_t>(a)];
    in_box += cell_mass[static_cast<std::size_t>(a)];
  }
  game.benign_mass[cells] = std::max(0.0, 1.0 - in_box);  // KDE mass outside the box

  if (cfg.transform == TransformKind::Identity) {
    game.one_hot_transition = true;
    game.one_hot_col.resize(static_cast<std::size_t>(cells));
    for (std::int64_t a = 0; a < cells; ++a) {
      game.one_hot_col[static_cast<std::size_t>(a)] = a;
    }
    return game;
  }

  game.transition_rows.assign(static_cast<std::size_t>(cells),
                              Eigen::VectorXd::Zero(cells + 1));
  parallel_for(static_cast<std::size_t>(cells), [&](std::size_t a) {
    FeatureVector fa = grid.cell_attack_point(static_cast<std::int64_t>(a));
    Eigen::VectorXd row(cells + 1);
    row.head(cells) = shifted_cell_masses(grid, kde, fa);
    row[cells] = std::max(0.0, 1.0 - row.head(cells).sum());
    game.transition_rows[a] = std::move(row);
  });
  return game;
}

double lp_certificate(const DiscretizedGame& game, const Eigen::VectorXd& inspect,
                      double value, const Eigen::VectorXd& attacker_dual,
                      double fp_dual) {
  const std::int64_t cells = game.grid.num_cells();
  const std::int64_t obs = game.num_obs();
  double viol = 0.0;

  for (std::int64_t a = 0; a < cells; ++a) {
    double r = game.attack_reward[a];
    if (r <= 0.0) continue;
    double undetected;
    if (game.one_hot_transition) {
      undetected = 1.0 - inspect[game.one_hot_col[static_cast<std::size_t>(a)]];
    } else {
      undetected = 1.0 - game.transition_rows[static_cast<std::size_t>(a)].dot(inspect);
    }
    viol = std::max(viol, r * undetected - value);
  }
  viol = std::max(viol, game.benign_mass.dot(inspect) - game.fp_budget);
  viol = std::max(viol, -value);
  for (std::int64_t o = 0; o < obs; ++o) {
    viol = std::max(viol, -inspect[o]);
    viol = std::max(viol, inspect[o] - 1.0);
  }

  // dual feasibility and the duality gap
  viol = std::max(viol, -fp_dual);
  double dual_sum = 0.0;
  Eigen::VectorXd weighted = Eigen::VectorXd::Zero(obs);
  for (std::int64_t a = 0; a < cells; ++a) {
    double p = attacker_dual[a];
    viol = std::max(viol, -p);
    if (p == 0.0) continue;
    dual_sum += p;
    double pr = p * game.attack_reward[a];
    if (game.one_hot_transition) {
      weighted[game.one_hot_col[static_cast<std::size_t>(a)]] += pr;
    } else {
      weighted += pr * game.transition_rows[static_cast<std::size_t>(a)];
    }
  }
  viol = std::max(viol, dual_sum - 1.0);

  double dual_obj = 0.0;
  for (std::int64_t a = 0; a < cells; ++a) {
    dual_obj += attacker_dual[a] * game.attack_reward[a];
  }
  dual_obj -= fp_dual * game.fp_budget;
  for (std::int64_t o = 0; o < obs; ++o) {
    dual_obj -= std::max(0.0, weighted[o] - fp_dual * game.benign_mass[o]);
  }
  viol = std::max(viol, std::abs(value - dual_obj));
  return viol;
}

LpSolution solve_lp(const DiscretizedGame& game) {
  LpSolution sol;
  GameDuals duals;
  if (game.one_hot_transition) {
    solve_separable(game, sol, duals);
  } else {
    solve_general(game, sol, duals);
  }
  sol.certificate = lp_certificate(game, sol.inspect_prob, sol.value, duals.attacker,
                                   duals.fp);
  if (!(sol.certificate <= 1e-7)) {
    throw NumericalError("LP certificate " + std::to_string(sol.certificate) +
                         " exceeds 1e-7");
  }
  return sol;
}

std::unique_ptr<Classifier> lp_classifier(const LpSolution& sol, const Grid& grid) {
  const std::int64_t cells = grid.num_cells();
  if (sol.inspect_prob.size() != cells + 1) {
    throw InvalidInput("LP solution does not match the grid");
  }
  return std::make_unique<GridTableClassifier>(grid.space(), grid.steps(),
                                               sol.inspect_prob.head(cells),
                                               sol.inspect_prob[cells]);
}

void dump_lp(const DiscretizedGame& game, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::int64_t cells = game.grid.num_cells();
  const std::int64_t obs = game.num_obs();

  std::ofstream mat(fs::path(dir) / "matrix.csv");
  if (!mat) throw IoError("cannot write LP matrix dump");
  mat << "constraint,variable,coefficient\n";
  // rows 0..cells-1: attacker constraints (>= 1 after reward scaling);
  // row `cells`: false-positive budget; variable `obs` is the game value
  for (std::int64_t a = 0; a < cells; ++a) {
    double r = game.attack_reward[a];
    if (r <= 0.0) continue;
    for (std::int64_t o = 0; o < obs; ++o) {
      double t = game.transition(a, o);
      if (t != 0.0) mat << a << ',' << o << ',' << format_double(t) << '\n';
    }
    mat << a << ',' << obs << ',' << format_double(1.0 / r) << '\n';
  }
  for (std::int64_t o = 0; o < obs; ++o) {
    if (game.benign_mass[o] != 0.0) {
      mat << cells << ',' << o << ',' << format_double(game.benign_mass[o]) << '\n';
    }
  }

  std::ofstream bounds(fs::path(dir) / "bounds.csv");
  bounds << "entity,kind,lo,hi\n";
  for (std::int64_t a = 0; a < cells; ++a) {
    if (game.attack_reward[a] > 0.0) bounds << 'r' << a << ",constraint,1,inf\n";
  }
  bounds << 'r' << cells << ",constraint,-inf," << format_double(game.fp_budget) << '\n';
  for (std::int64_t o = 0; o < obs; ++o) bounds << 'x' << o << ",variable,0,1\n";
  bounds << 'x' << obs << ",variable,0,inf\n";

  std::ofstream objf(fs::path(dir) / "objective.csv");
  objf << "variable,coefficient,direction\n";
  objf << 'x' << obs << ",1,min\n";
}

}  // namespace gcg
