#include "gcg/simplex.hpp"

#include <cmath>
#include <limits>

#include "gcg/common.hpp"

namespace gcg {

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-8;
constexpr double kRatioTieTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarStatus : unsigned char { AtLower, AtUpper, Basic };

}  // namespace

// Bounded-variable primal simplex on the full tableau. Rows are normalized
// to <= internally; slacks get bounds [0, inf). Degenerate stalls switch
// pricing to Bland's rule until a positive step is made.
LpResult solve_bounded_lp(const LpProblem& problem, const Eigen::VectorXd& start) {
  const Eigen::Index m = problem.a.rows();
  const Eigen::Index n = problem.a.cols();
  if (problem.rhs.size() != m || static_cast<Eigen::Index>(problem.sense.size()) != m ||
      problem.obj.size() != n || problem.lo.size() != n || problem.up.size() != n ||
      start.size() != n) {
    throw InvalidInput("inconsistent LP dimensions");
  }

  const Eigen::Index total = n + m;  // structurals then slacks
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor tab(m, total);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double flip = problem.sense[static_cast<std::size_t>(i)] == '>' ? -1.0 : 1.0;
    tab.row(i).head(n) = flip * problem.a.row(i);
    tab.row(i).tail(m).setZero();
    tab(i, n + i) = 1.0;
    rhs[i] = flip * problem.rhs[i];
  }

  Eigen::VectorXd lo(total), up(total), x(total);
  lo.head(n) = problem.lo;
  up.head(n) = problem.up;
  lo.tail(m).setConstant(0.0);
  up.tail(m).setConstant(kInf);

  std::vector<VarStatus> status(static_cast<std::size_t>(total));
  for (Eigen::Index j = 0; j < n; ++j) {
    x[j] = start[j];
    if (x[j] == problem.lo[j]) {
      status[static_cast<std::size_t>(j)] = VarStatus::AtLower;
    } else if (x[j] == problem.up[j]) {
      status[static_cast<std::size_t>(j)] = VarStatus::AtUpper;
    } else {
      throw InvalidInput("simplex start must put every variable at a bound");
    }
  }

  // slack basis; beta = current basic values
  std::vector<Eigen::Index> basic(static_cast<std::size_t>(m));
  Eigen::VectorXd beta = rhs - tab.leftCols(n) * x.head(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    basic[static_cast<std::size_t>(i)] = n + i;
    status[static_cast<std::size_t>(n + i)] = VarStatus::Basic;
    x[n + i] = beta[i];
    if (beta[i] < -1e-9) throw InvalidInput("simplex start violates a row constraint");
  }

  Eigen::VectorXd dcost(total);
  dcost.head(n) = problem.obj;
  dcost.tail(m).setZero();

  const long max_iters = 40 * static_cast<long>(m + n) + 10000;
  int degenerate_streak = 0;
  bool bland = false;
  long iter = 0;

  for (; iter < max_iters; ++iter) {
    // pricing
    Eigen::Index enter = -1;
    double best_score = kCostTol;
    for (Eigen::Index j = 0; j < total; ++j) {
      VarStatus st = status[static_cast<std::size_t>(j)];
      double d = dcost[j];
      bool eligible = (st == VarStatus::AtLower && d < -kCostTol) ||
                      (st == VarStatus::AtUpper && d > kCostTol);
      if (!eligible) continue;
      if (bland) {
        enter = j;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        enter = j;
      }
    }
    if (enter < 0) break;  // optimal

    double dir = status[static_cast<std::size_t>(enter)] == VarStatus::AtLower ? 1.0 : -1.0;
    Eigen::VectorXd alpha = tab.col(enter);

    // ratio test: smallest step at which a basic variable hits a bound,
    // capped by the entering variable's own range
    double t_flip = up[enter] - lo[enter];
    double t_best = t_flip;
    Eigen::Index leave_row = -1;
    double leave_pivot = 0.0;
    bool leave_to_upper = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      double rate = dir * alpha[i];  // beta_i decreases at this rate
      Eigen::Index bv = basic[static_cast<std::size_t>(i)];
      double t = kInf;
      bool to_upper = false;
      if (rate > kPivotTol) {
        t = (beta[i] - lo[bv]) / rate;
      } else if (rate < -kPivotTol && std::isfinite(up[bv])) {
        t = (up[bv] - beta[i]) / (-rate);
        to_upper = true;
      } else {
        continue;
      }
      if (t < -1e-12) t = 0.0;
      bool better = t < t_best - kRatioTieTol;
      bool tie = std::abs(t - t_best) <= kRatioTieTol && leave_row >= 0;
      if (better || (tie && std::abs(alpha[i]) > std::abs(leave_pivot))) {
        t_best = t;
        leave_row = i;
        leave_pivot = alpha[i];
        leave_to_upper = to_upper;
      }
    }

    if (!std::isfinite(t_best)) {
      throw NumericalError("LP is unbounded; the game formulation precludes this");
    }

    if (t_best <= 1e-12) {
      ++degenerate_streak;
      if (degenerate_streak > 40) bland = true;
    } else {
      degenerate_streak = 0;
      bland = false;
    }

    if (leave_row < 0) {
      // bound flip, no pivot
      x[enter] = dir > 0 ? up[enter] : lo[enter];
      status[static_cast<std::size_t>(enter)] =
          dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
      beta -= dir * t_best * alpha;
      for (Eigen::Index i = 0; i < m; ++i) x[basic[static_cast<std::size_t>(i)]] = beta[i];
      continue;
    }

    // pivot: entering moves t_best from its bound, basic[leave_row] exits
    double enter_val =
        (dir > 0 ? lo[enter] : up[enter]) + dir * t_best;
    beta -= dir * t_best * alpha;
    Eigen::Index leave_var = basic[static_cast<std::size_t>(leave_row)];
    status[static_cast<std::size_t>(leave_var)] =
        leave_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
    x[leave_var] = leave_to_upper ? up[leave_var] : lo[leave_var];

    double p = tab(leave_row, enter);
    if (std::abs(p) < kPivotTol) {
      throw NumericalError("simplex pivot element vanished");
    }
    tab.row(leave_row) /= p;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == leave_row) continue;
      double f = tab(i, enter);
      if (f != 0.0) tab.row(i) -= f * tab.row(leave_row);
    }
    double dected = dcost[enter];
    if (dected != 0.0) dcost -= dected * tab.row(leave_row).transpose();

    basic[static_cast<std::size_t>(leave_row)] = enter;
    status[static_cast<std::size_t>(enter)] = VarStatus::Basic;
    beta[leave_row] = enter_val;
    x[enter] = enter_val;
    for (Eigen::Index i = 0; i < m; ++i) x[basic[static_cast<std::size_t>(i)]] = beta[i];
  }

  if (iter >= max_iters) {
    throw NumericalError("simplex iteration cap exceeded");
  }

  LpResult result;
  result.x = x.head(n);
  result.objective = problem.obj.dot(result.x);
  result.iterations = static_cast<int>(iter);
  // duals in the caller's row orientation: reduced cost of slack i equals
  // the multiplier of internal row i, valid for both senses
  result.row_dual = dcost.tail(m).cwiseMax(0.0);
  result.reduced_cost = dcost.head(n);
  return result;
}

}  // namespace gcg
