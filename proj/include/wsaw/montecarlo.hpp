#pragma once

// Monte Carlo: direct-weight estimation of c_n / (2d)^n and c_n^T / (2d)^n over
// uniform step sequences, the paired ratio c_n^T / c_n, and a variable-length
// Metropolis chain (Berretti-Sokal) for P_z^T(w) ~ z^{|w|} (1 - beta)^{m^T(w)}.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wsaw/lattice.hpp"
#include "wsaw/series.hpp"
#include "wsaw/walks.hpp"

namespace wsaw {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for (seed, stream index).
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)), static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(stream + 1))),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

struct MCEstimate {
  double mean = 0;
  double stderr_ = 0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct DirectWeightResult {
  MCEstimate est_Z, est_T, est_ratio;
};

namespace detail {

// Runs f(block) for blocks 0..blocks-1 over `workers` threads.
template <typename F>
void parallel_blocks(int blocks, unsigned workers, F&& f) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (int b = 0; b < blocks; ++b) f(b);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      try {
        for (int b = next++; b < blocks; b = next++) f(b);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

constexpr int kJackknifeBlocks = 100;

// Samples are split into 100 blocks, each with its own stream, so results do
// not depend on the worker count.
inline DirectWeightResult direct_weight_estimate(const LatticeConfig& cfg, int n, std::uint64_t n_samples,
                                                 std::uint64_t seed, unsigned workers = 1) {
  cfg.validate();
  if (!cfg.is_torus()) throw std::invalid_argument("direct-weight estimation needs a torus configuration");
  if (n < 0) throw std::invalid_argument("walk length must be nonnegative");
  if (n_samples < static_cast<std::uint64_t>(kJackknifeBlocks)) throw std::invalid_argument("need at least 100 samples");
  const int d = cfg.d, r = cfg.r;
  const double q = 1.0 - cfg.beta;
  struct Block {
    double sx = 0, sy = 0, sxx = 0, syy = 0;
    std::uint64_t count = 0;
  };
  std::vector<Block> blocks(kJackknifeBlocks);
  detail::parallel_blocks(kJackknifeBlocks, workers, [&](int b) {
    auto rng = make_stream(seed, static_cast<std::uint64_t>(b));
    std::uniform_int_distribution<int> step(0, 2 * d - 1);
    const std::uint64_t count = n_samples / kJackknifeBlocks + (static_cast<std::uint64_t>(b) < n_samples % kJackknifeBlocks ? 1 : 0);
    std::vector<Site> z(static_cast<std::size_t>(n) + 1, origin(d)), t(static_cast<std::size_t>(n) + 1, origin(d));
    Block acc;
    for (std::uint64_t s = 0; s < count; ++s) {
      int m_exact = 0, m_torus = 0;
      for (int i = 1; i <= n; ++i) {
        int dir = step(rng);
        auto& zi = z[static_cast<std::size_t>(i)];
        auto& ti = t[static_cast<std::size_t>(i)];
        zi = z[static_cast<std::size_t>(i - 1)];
        ti = t[static_cast<std::size_t>(i - 1)];
        const auto axis = static_cast<std::size_t>(dir / 2);
        const Coord delta = dir % 2 == 0 ? 1 : -1;
        zi[axis] += delta;
        ti[axis] = (ti[axis] + delta + r) % r;
        for (int j = 0; j < i; ++j) {
          if (ti == t[static_cast<std::size_t>(j)]) {
            ++m_torus;
            if (zi == z[static_cast<std::size_t>(j)]) ++m_exact;
          }
        }
      }
      const double x = std::pow(q, m_exact), y = std::pow(q, m_torus);
      acc.sx += x;
      acc.sy += y;
      acc.sxx += x * x;
      acc.syy += y * y;
    }
    acc.count = count;
    blocks[static_cast<std::size_t>(b)] = acc;
  });
  Block tot;
  for (const auto& b : blocks) {
    tot.sx += b.sx;
    tot.sy += b.sy;
    tot.sxx += b.sxx;
    tot.syy += b.syy;
    tot.count += b.count;
  }
  const double N = static_cast<double>(tot.count);
  auto estimate = [&](double s, double ss) {
    MCEstimate e;
    e.mean = s / N;
    const double var = std::max(0.0, (ss - s * s / N) / (N - 1));
    e.stderr_ = std::sqrt(var / N);
    e.n_samples = tot.count;
    e.seed = seed;
    return e;
  };
  DirectWeightResult out;
  out.est_Z = estimate(tot.sx, tot.sxx);
  out.est_T = estimate(tot.sy, tot.syy);
  out.est_ratio.mean = tot.sy / tot.sx;
  out.est_ratio.n_samples = tot.count;
  out.est_ratio.seed = seed;
  // Delete-one-block jackknife.
  double mean_jk = 0;
  std::vector<double> jk;
  for (const auto& b : blocks) {
    double v = (tot.sy - b.sy) / (tot.sx - b.sx);
    jk.push_back(v);
    mean_jk += v;
  }
  mean_jk /= kJackknifeBlocks;
  double ss = 0;
  for (double v : jk) ss += (v - mean_jk) * (v - mean_jk);
  out.est_ratio.stderr_ = std::sqrt(ss * (kJackknifeBlocks - 1) / kJackknifeBlocks);
  return out;
}

// ---------------------------------------------------------------------------

struct ChainOptions {
  double z = 0.1;
  std::uint64_t steps = 1000000;
  std::uint64_t burn_in = 10000;
  std::uint64_t seed = 1;
  int max_length = -1;        // hard restriction of the state space, -1 for none
  double safety_factor = 50;  // abort when the length exceeds safety_factor * sqrt(V)
  bool record_states = false;
  std::uint64_t check_every = 100000;  // recompute pair counts from scratch
};

class ChainAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChainResult {
  MCEstimate mean_length;
  double acceptance = 0;
  int max_seen = 0;
  std::vector<double> batch_means;
  // Visit counts per state (step sequence), per batch, when recorded.
  std::map<std::vector<Direction>, std::vector<std::uint64_t>> state_counts;
  std::uint64_t per_batch = 0;
};

// Metropolis chain with append/delete end moves.  Each proposal is an append
// (probability 1/2, uniform direction) or a delete of the last step.
inline ChainResult berretti_sokal(const LatticeConfig& cfg, const ChainOptions& opt) {
  cfg.validate();
  if (!cfg.is_torus()) throw std::invalid_argument("the chain runs on the torus");
  if (!(opt.z > 0)) throw std::invalid_argument("activity must be positive");
  if (!(cfg.beta > 0) || cfg.beta > 1) throw std::invalid_argument("chain needs beta in (0, 1]");
  if (opt.steps < static_cast<std::uint64_t>(kJackknifeBlocks)) throw std::invalid_argument("need at least 100 steps");
  const int d = cfg.d, r = cfg.r;
  const auto V = cfg.volume();
  const double q = 1.0 - cfg.beta;
  const double cap = opt.safety_factor * std::sqrt(static_cast<double>(V));
  auto rng = make_stream(opt.seed, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> step(0, 2 * d - 1);
  std::vector<int> local(static_cast<std::size_t>(V), 0);
  std::vector<std::int64_t> sites{0};
  std::vector<Direction> steps;
  if (V > 100000000) throw std::invalid_argument("torus too large for the local-time table");
  std::int64_t stride[16];
  for (std::int64_t j = 0, s = 1; j < d; ++j, s *= r) stride[j] = s;
  local[0] = 1;
  std::int64_t m = 0;
  auto neighbour = [&](std::int64_t x, int dir) {
    const int axis = dir / 2;
    const std::int64_t c = (x / stride[axis]) % r;
    const std::int64_t nc = dir % 2 == 0 ? (c + 1) % r : (c + r - 1) % r;
    return x + (nc - c) * stride[axis];
  };
  auto recount = [&] {
    std::int64_t cnt = 0;
    for (std::size_t i = 0; i < sites.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) cnt += sites[i] == sites[j];
    return cnt;
  };
  ChainResult out;
  const std::uint64_t per_batch = opt.steps / kJackknifeBlocks;
  out.per_batch = per_batch;
  out.batch_means.assign(kJackknifeBlocks, 0.0);
  std::uint64_t accepted = 0;
  const double two_dz = 2.0 * d * opt.z;
  auto weight = [&](std::int64_t dm) { return dm == 0 ? 1.0 : std::pow(q, static_cast<double>(dm)); };
  const std::uint64_t total = opt.burn_in + per_batch * kJackknifeBlocks;
  for (std::uint64_t it = 0; it < total; ++it) {
    if (unif(rng) < 0.5) {
      const int dir = step(rng);
      const double u = unif(rng);
      const int len = static_cast<int>(steps.size());
      if (opt.max_length < 0 || len < opt.max_length) {
        const std::int64_t y = neighbour(sites.back(), dir);
        const std::int64_t dm = local[static_cast<std::size_t>(y)];
        if (u < two_dz * weight(dm)) {
          sites.push_back(y);
          steps.push_back(static_cast<Direction>(dir));
          ++local[static_cast<std::size_t>(y)];
          m += dm;
          ++accepted;
        }
      }
    } else {
      const double u = unif(rng);
      if (!steps.empty()) {
        const std::int64_t y = sites.back();
        const std::int64_t dm = local[static_cast<std::size_t>(y)] - 1;
        const double a = 1.0 / (two_dz * weight(dm));
        if (u < a) {
          sites.pop_back();
          steps.pop_back();
          --local[static_cast<std::size_t>(y)];
          m -= dm;
          ++accepted;
        }
      }
    }
    const int len = static_cast<int>(steps.size());
    out.max_seen = std::max(out.max_seen, len);
    if (len > cap)
      throw ChainAborted("chain length " + std::to_string(len) + " exceeded the safety cap " + std::to_string(cap) +
                         "; the activity is too large for this torus");
    if (opt.check_every > 0 && it % opt.check_every == 0 && recount() != m)
      throw std::logic_error("cached pair count diverged from a fresh recount");
    if (it >= opt.burn_in) {
      const auto batch = static_cast<std::size_t>((it - opt.burn_in) / per_batch);
      out.batch_means[batch] += len;
      if (opt.record_states) {
        auto& v = out.state_counts[steps];
        if (v.empty()) v.assign(kJackknifeBlocks, 0);
        ++v[batch];
      }
    }
  }
  double mean = 0;
  for (auto& b : out.batch_means) {
    b /= static_cast<double>(per_batch);
    mean += b;
  }
  mean /= kJackknifeBlocks;
  double ss = 0;
  for (double b : out.batch_means) ss += (b - mean) * (b - mean);
  out.mean_length.mean = mean;
  out.mean_length.stderr_ = std::sqrt(ss / (kJackknifeBlocks - 1) / kJackknifeBlocks);
  out.mean_length.n_samples = per_batch * kJackknifeBlocks;
  out.mean_length.seed = opt.seed;
  out.acceptance = static_cast<double>(accepted) / static_cast<double>(total);
  return out;
}

// Exact length distribution of P_z^T restricted to lengths <= cap, from enumeration.
struct LengthDistribution {
  std::vector<double> p;
  double mean = 0;
};

inline LengthDistribution exact_length_distribution(const CoefficientTable& tt, double beta, double z) {
  LengthDistribution out;
  double s = 0, w = 0;
  for (int n = 0; n <= tt.n_max; ++n) {
    double t = tt.total(n).evaluate(beta) * std::pow(z, n);
    out.p.push_back(t);
    s += t;
    w += n * t;
  }
  for (auto& v : out.p) v /= s;
  out.mean = w / s;
  return out;
}

// Exact P_z^T of one torus walk given by its steps.
inline double torus_walk_weight(const LatticeConfig& cfg, const std::vector<Direction>& steps, double z) {
  WalkPath w{cfg.d, steps};
  const auto pc = pair_counts(w, cfg);
  const double q = 1.0 - cfg.beta;
  return std::pow(z, static_cast<double>(steps.size())) * (pc.m_torus() == 0 ? 1.0 : std::pow(q, static_cast<double>(pc.m_torus())));
}

// ---------------------------------------------------------------------------

struct DiluteRow {
  int n = 0;
  MCEstimate ratio;
  double one_minus_R = 0;
  double beta_n2_over_V = 0;
  bool exact_one = false;  // R_n == 1 bit for bit
  bool within = true;      // R_n <= 1 + 3 stderr
};

struct DiluteReport {
  int d = 0, r = 0;
  double beta = 0;
  std::vector<DiluteRow> rows;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

inline DiluteReport dilute_probe(const LatticeConfig& cfg, const std::vector<int>& n_list, std::uint64_t n_samples,
                                 std::uint64_t seed, unsigned workers = 1) {
  if (!cfg.is_torus()) throw std::invalid_argument("dilute probe needs a torus configuration");
  DiluteReport rep;
  rep.d = cfg.d;
  rep.r = cfg.r;
  rep.beta = cfg.beta;
  const double V = static_cast<double>(cfg.volume());
  for (int n : n_list) {
    auto res = direct_weight_estimate(cfg, n, n_samples, splitmix64(seed + static_cast<std::uint64_t>(n)), workers);
    DiluteRow row;
    row.n = n;
    row.ratio = res.est_ratio;
    row.one_minus_R = 1.0 - res.est_ratio.mean;
    row.beta_n2_over_V = cfg.beta * n * n / V;
    row.exact_one = res.est_ratio.mean == 1.0;
    row.within = res.est_ratio.mean <= 1.0 + 3 * res.est_ratio.stderr_;
    if (n < cfg.r && !row.exact_one) rep.failures.push_back("R_n != 1 for n < r at n=" + std::to_string(n));
    if (!row.within) rep.failures.push_back("R_n exceeds 1 + 3 stderr at n=" + std::to_string(n));
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace wsaw
