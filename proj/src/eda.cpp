#include "gcg/eda.hpp"

#include <algorithm>
#include <cmath>

#include "gcg/game.hpp"

namespace gcg {

namespace {

Sample pick_minibatch(const Sample& train, int size, Rng& rng) {
  const Eigen::Index n = train.rows();
  if (size <= 0 || size >= n) return train;
  // partial Fisher-Yates over indices
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  Sample out(size, train.cols());
  for (int i = 0; i < size; ++i) {
    Eigen::Index j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    out.row(i) = train.row(idx[static_cast<std::size_t>(i)]);
  }
  return out;
}

MlpNet::Gradients lagrangian_gradients(const MlpNet& net, const Sample& attack_obs,
                                       const Sample& benign_batch, double lambda) {
  const Eigen::Index ta = attack_obs.rows();
  const Eigen::Index tb = benign_batch.rows();
  Sample joint(ta + tb, attack_obs.cols());
  joint.topRows(ta) = attack_obs;
  joint.bottomRows(tb) = benign_batch;
  MlpNet::ForwardCache cache = net.forward_cache(joint);

  Eigen::VectorXd dlogit(ta + tb);
  for (Eigen::Index i = 0; i < ta; ++i) {
    // d/dz of -log sigmoid(z) = -(1 - sigmoid(z))
    dlogit[i] = -(1.0 - sigmoid(cache.logits[i])) / static_cast<double>(ta);
  }
  for (Eigen::Index i = 0; i < tb; ++i) {
    double s = sigmoid(cache.logits[ta + i]);
    dlogit[ta + i] = lambda * s * (1.0 - s) / static_cast<double>(tb);
  }
  return net.backward(cache, dlogit);
}

}  // namespace

LagrangianParts lagrangian_loss(const MlpNet& net, const Sample& attack_obs,
                                const Sample& benign_batch, double lambda, double phi) {
  if (attack_obs.rows() == 0 || benign_batch.rows() == 0) {
    throw InvalidInput("Lagrangian needs non-empty attack and benign batches");
  }
  if (lambda < 0.0) throw InvalidInput("Lagrangian multiplier must be non-negative");

  Eigen::VectorXd z_attack = net.logits_batch(attack_obs);
  double attack = 0.0;
  for (Eigen::Index i = 0; i < z_attack.size(); ++i) {
    attack += softplus(-z_attack[i]);  // == -log sigmoid(z), clamp-free
  }
  attack /= static_cast<double>(z_attack.size());

  double fp_hat = net.forward_batch(benign_batch).mean();
  LagrangianParts parts;
  parts.attack_term = attack;
  parts.constraint_term = lambda * (fp_hat - phi);
  parts.total = parts.attack_term + parts.constraint_term;
  return parts;
}

bool update_frontier(std::vector<ParetoPoint>& frontier, const ParetoPoint& candidate) {
  for (const auto& p : frontier) {
    if (p.exploitability <= candidate.exploitability && p.fp <= candidate.fp) {
      return false;  // weakly dominated, including exact duplicates
    }
  }
  std::size_t kept = 0;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    bool dominated = candidate.exploitability <= frontier[i].exploitability &&
                     candidate.fp <= frontier[i].fp;
    if (!dominated) frontier[kept++] = std::move(frontier[i]);
  }
  frontier.resize(kept);
  frontier.push_back(candidate);
  return true;
}

OutputSelection output_classifier(const std::vector<ParetoPoint>& frontier, double phi,
                                  double unconstrained_value) {
  if (frontier.empty()) throw InvalidInput("output selection needs a non-empty frontier");

  OutputSelection out;
  double best_bound = HUGE_VAL;
  int best_single = -1;
  int best_i = -1, best_j = -1;
  double best_lambda = 0.0;

  const int count = static_cast<int>(frontier.size());
  for (int i = 0; i < count; ++i) {
    if (frontier[static_cast<std::size_t>(i)].fp <= phi &&
        frontier[static_cast<std::size_t>(i)].exploitability < best_bound) {
      best_bound = frontier[static_cast<std::size_t>(i)].exploitability;
      best_single = i;
      best_i = best_j = -1;
    }
  }
  for (int i = 0; i < count; ++i) {
    const auto& lo = frontier[static_cast<std::size_t>(i)];
    if (lo.fp > phi) continue;
    for (int j = 0; j < count; ++j) {
      const auto& hi = frontier[static_cast<std::size_t>(j)];
      if (hi.fp < phi || hi.fp <= lo.fp) continue;
      double lambda = (hi.fp - phi) / (hi.fp - lo.fp);
      double bound = lambda * lo.exploitability + (1.0 - lambda) * hi.exploitability;
      if (bound < best_bound - 1e-15) {
        best_bound = bound;
        best_i = i;
        best_j = j;
        best_lambda = lambda;
        best_single = -1;
      }
    }
  }

  std::vector<std::pair<double, ClassifierPtr>> comps;
  if (best_single >= 0) {
    const auto& p = frontier[static_cast<std::size_t>(best_single)];
    comps.emplace_back(1.0, p.snapshot->clone());
    out.mix_fp = p.fp;
  } else if (best_i >= 0) {
    const auto& a = frontier[static_cast<std::size_t>(best_i)];
    const auto& b = frontier[static_cast<std::size_t>(best_j)];
    comps.emplace_back(best_lambda, a.snapshot->clone());
    comps.emplace_back(1.0 - best_lambda, b.snapshot->clone());
    out.mix_fp = phi;
  } else {
    // every frontier point exceeds the budget: dilute the least-FP point
    // with the inspect-nothing classifier
    int least = 0;
    for (int i = 1; i < count; ++i) {
      if (frontier[static_cast<std::size_t>(i)].fp <
          frontier[static_cast<std::size_t>(least)].fp) {
        least = i;
      }
    }
    const auto& p = frontier[static_cast<std::size_t>(least)];
    double keep = p.fp > 0.0 ? std::min(1.0, phi / p.fp) : 1.0;
    best_bound = (1.0 - keep) * unconstrained_value + keep * p.exploitability;
    comps.emplace_back(1.0 - keep,
                       std::make_unique<ConstantClassifier>(p.snapshot->dim(), 0.0));
    comps.emplace_back(keep, p.snapshot->clone());
    out.mix_fp = keep * p.fp;
    out.fallback = true;
  }

  out.classifier = std::make_unique<MixtureClassifier>(std::move(comps));
  out.bound = best_bound;
  return out;
}

void eda_step(TrainState& state, const GameConfig& cfg, const Sample& train,
              const EdaConfig& eda) {
  const int n = cfg.space.dim();
  Rng iter_rng(Rng::derive_seed(state.seed, 0xA11CE000ULL + static_cast<std::uint64_t>(state.iter)));

  int mb_size = eda.minibatch <= 0 ? static_cast<int>(train.rows())
                                   : std::min<int>(eda.minibatch, static_cast<int>(train.rows()));
  Sample minibatch = pick_minibatch(train, mb_size, iter_rng);

  BrConfig br = eda.train_br;
  if (br.num_samples <= 0) br.num_samples = 256 * n;
  br.seed = Rng::derive_seed(state.seed, 0xB0B0000ULL + static_cast<std::uint64_t>(state.iter));

  MlpClassifier current(state.net);
  BestResponse best = sample_best_response(current, cfg, minibatch, br);

  double fp_hat = state.net.forward_batch(minibatch).mean();

  Sample attack_obs;
  if (cfg.transform == TransformKind::Identity) {
    attack_obs.resize(1, n);
    attack_obs.row(0) = best.action.transpose();
  } else {
    attack_obs = minibatch;
    attack_obs.rowwise() += best.action.transpose();
  }

  double denom = 1.0 + static_cast<double>(state.iters_since_restart) / eda.rate_scale_iters;
  double alpha = state.alpha0 / denom;
  double beta = state.beta0 / std::pow(denom, eda.beta_exponent);

  MlpNet::Gradients grads = lagrangian_gradients(state.net, attack_obs, minibatch,
                                                 state.lambda);
  state.net.apply_update(grads, alpha);
  state.lambda = std::max(0.0, state.lambda + beta * (fp_hat - cfg.fp_budget));

  if (fp_hat <= eda.stall_band || fp_hat >= 1.0 - eda.stall_band) {
    ++state.stall_counter;
  } else {
    state.stall_counter = 0;
  }

  state.last_fp_hat = fp_hat;
  state.last_u_hat = best.utility;
  state.last_best_response = best.action;
  state.last_alpha = alpha;
  state.last_beta = beta;
  ++state.iter;
  ++state.iters_since_restart;
}

EdaResult eda_train(const GameConfig& cfg, const DataSplit& data, const EdaConfig& eda) {
  cfg.validate();
  if (data.train.rows() == 0) throw InvalidInput("EDA needs training data");
  const int n = cfg.space.dim();

  TrainState state;
  state.net = MlpNet::make(MlpNet::default_sizes(n), cfg.space);
  state.seed = cfg.seed;
  state.lambda = eda.init_lambda;
  state.alpha0 = eda.alpha0;
  state.beta0 = eda.beta0;
  Rng init_rng(Rng::derive_seed(cfg.seed, 0x1237EDA0ULL));
  state.net.init_random(init_rng);

  EdaResult result;
  result.trace.reserve(static_cast<std::size_t>(eda.max_iters));
  int unchanged_streak = 0;

  while (state.iter < eda.max_iters) {
    double fp_full = state.net.forward_batch(data.train).mean();
    MlpNet pre_update = state.net;  // the frontier point describes c^i

    eda_step(state, cfg, data.train, eda);

    bool would_insert = true;
    for (const auto& p : result.frontier) {
      if (p.exploitability <= state.last_u_hat && p.fp <= fp_full) {
        would_insert = false;
        break;
      }
    }
    bool changed = false;
    if (would_insert) {
      ParetoPoint candidate{state.last_u_hat, fp_full, state.iter - 1,
                            std::make_shared<const MlpClassifier>(std::move(pre_update))};
      changed = update_frontier(result.frontier, candidate);
    }
    unchanged_streak = changed ? 0 : unchanged_streak + 1;

    result.trace.push_back({state.iter - 1, state.lambda, state.last_fp_hat,
                            state.last_u_hat, state.last_alpha, state.last_beta,
                            state.restart_count});

    if (unchanged_streak >= eda.frontier_patience) {
      result.converged = true;
      break;
    }

    if (state.stall_counter >= eda.stall_limit) {
      ++state.restart_count;
      state.alpha0 *= eda.restart_shrink;
      state.beta0 *= eda.restart_shrink;
      state.lambda = eda.init_lambda;
      state.iters_since_restart = 0;
      state.stall_counter = 0;
      Rng restart_rng(Rng::derive_seed(cfg.seed, 0x8E58A870ULL +
                                                  static_cast<std::uint64_t>(state.restart_count)));
      state.net.init_random(restart_rng);
    }
  }

  OutputSelection selection =
      output_classifier(result.frontier, cfg.fp_budget, cfg.reward.max_over(cfg.space));
  result.classifier = std::move(selection.classifier);
  result.fallback_mix = selection.fallback;
  result.final_bound = selection.bound;
  result.restarts = state.restart_count;
  return result;
}

}  // namespace gcg
