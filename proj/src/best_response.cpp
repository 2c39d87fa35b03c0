#include "gcg/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gcg/common.hpp"
#include "gcg/game.hpp"
#include "gcg/rng.hpp"

namespace gcg {

namespace {

// Candidate i draws from its own stream so results are independent of batch
// layout and thread count.
Sample draw_candidates(const GameConfig& cfg, int m, std::uint64_t seed) {
  const int n = cfg.space.dim();
  Sample out(m, n);
  for (int i = 0; i < m; ++i) {
    Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
    for (int k = 0; k < n; ++k) {
      out(i, k) = rng.uniform(cfg.space.lower[k], cfg.space.upper[k]);
    }
  }
  return out;
}

}  // namespace

BestResponse sample_best_response(const Classifier& c, const GameConfig& cfg,
                                  const Sample& benign, const BrConfig& br) {
  const int n = cfg.space.dim();
  const int m = br.samples_for(n);
  if (m < 1) throw InvalidInput("best response needs at least one sample");

  Sample candidates = draw_candidates(cfg, m, br.seed);
  Eigen::VectorXd utilities = attacker_utilities(c, cfg, candidates, benign);

  if (br.refine && br.hc_iters > 0) {
    std::vector<int> refine_idx(static_cast<std::size_t>(m));
    std::iota(refine_idx.begin(), refine_idx.end(), 0);
    if (br.refine_top > 0 && br.refine_top < m) {
      std::partial_sort(refine_idx.begin(), refine_idx.begin() + br.refine_top,
                        refine_idx.end(), [&](int a, int b) {
                          if (utilities[a] != utilities[b]) return utilities[a] > utilities[b];
                          return a < b;
                        });
      refine_idx.resize(static_cast<std::size_t>(br.refine_top));
    }
    const int k = static_cast<int>(refine_idx.size());

    Sample current(k, n), proposal(k, n);
    Eigen::VectorXd best_u(k);
    std::vector<Rng> streams;
    streams.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      current.row(i) = candidates.row(refine_idx[static_cast<std::size_t>(i)]);
      best_u[i] = utilities[refine_idx[static_cast<std::size_t>(i)]];
      streams.emplace_back(Rng::derive_seed(
          br.seed, static_cast<std::uint64_t>(m) +
                       static_cast<std::uint64_t>(refine_idx[static_cast<std::size_t>(i)])));
    }

    double sigma = br.hc_sigma0_frac * cfg.space.diagonal();
    for (int it = 0; it < br.hc_iters; ++it) {
      for (int i = 0; i < k; ++i) {
        for (int d = 0; d < n; ++d) {
          double v = current(i, d) + sigma * streams[static_cast<std::size_t>(i)].normal();
          proposal(i, d) = std::min(cfg.space.upper[d], std::max(cfg.space.lower[d], v));
        }
      }
      Eigen::VectorXd u_prop = attacker_utilities(c, cfg, proposal, benign);
      for (int i = 0; i < k; ++i) {
        if (u_prop[i] > best_u[i]) {
          best_u[i] = u_prop[i];
          current.row(i) = proposal.row(i);
        }
      }
      sigma *= br.hc_decay;  // shrinks whether or not the move was accepted
    }

    for (int i = 0; i < k; ++i) {
      utilities[refine_idx[static_cast<std::size_t>(i)]] = best_u[i];
      candidates.row(refine_idx[static_cast<std::size_t>(i)]) = current.row(i);
    }
  }

  int best = 0;
  for (int i = 1; i < m; ++i) {
    if (utilities[i] > utilities[best]) best = i;
  }
  return {candidates.row(best).transpose(), utilities[best]};
}

BrVarianceSummary br_variance_study(const Classifier& c, const GameConfig& cfg,
                                    const Sample& benign, int num_samples, int reps,
                                    int histogram_bins) {
  if (reps < 2) throw InvalidInput("variance study needs at least two repetitions");
  BrVarianceSummary out;
  out.values.assign(static_cast<std::size_t>(reps), 0.0);
  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t rep) {
    BrConfig br;
    br.num_samples = num_samples;
    br.refine = false;
    br.seed = Rng::derive_seed(cfg.seed, 0x5A5A0000ULL + rep);
    out.values[rep] = sample_best_response(c, cfg, benign, br).utility;
  });

  out.min = *std::min_element(out.values.begin(), out.values.end());
  out.max = *std::max_element(out.values.begin(), out.values.end());
  out.mean = std::accumulate(out.values.begin(), out.values.end(), 0.0) /
             static_cast<double>(reps);

  out.bin_lo = out.min;
  out.bin_width = (out.max - out.min) / histogram_bins;
  if (out.bin_width <= 0.0) out.bin_width = 1e-300;
  out.histogram.assign(static_cast<std::size_t>(histogram_bins), 0);
  for (double v : out.values) {
    auto bin = static_cast<std::int64_t>((v - out.bin_lo) / out.bin_width);
    bin = std::min<std::int64_t>(histogram_bins - 1, std::max<std::int64_t>(0, bin));
    ++out.histogram[static_cast<std::size_t>(bin)];
  }
  return out;
}

}  // namespace gcg
