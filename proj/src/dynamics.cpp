#include "gdl/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace gdl {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Xoshiro256ss::Xoshiro256ss(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& w : s_) w = splitmix64(sm);
}

std::uint64_t Xoshiro256ss::next() {
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256ss::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Params Xoshiro256ss::normal_pair() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return Params(r * std::cos(phi), r * std::sin(phi));
}

void RunConfig::validate() const {
  hp.validate();
  if (tail_window < 1) throw std::invalid_argument("tail_window must be >= 1");
  if (iters < tail_window) throw std::invalid_argument("iters must be >= tail_window");
  if (!(bound_radius > 0)) throw std::invalid_argument("bound_radius must be > 0");
  if (!(step_tol > 0) || !(crit_tol > 0)) throw std::invalid_argument("tolerances must be > 0");
  if (const auto* box = std::get_if<InitUniformBox>(&init); box && !(box->lo < box->hi)) {
    throw std::invalid_argument("uniform box needs lo < hi");
  }
}

const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Diverged: return "diverged";
    case OutcomeKind::ConvergedCritical: return "converged_critical";
    case OutcomeKind::ConvergedNonCritical: return "converged_noncritical";
    case OutcomeKind::Cycle: return "cycle";
  }
  return "?";
}

Params sample_init(const RunConfig& cfg, std::uint64_t run_index) {
  if (const auto* fixed = std::get_if<InitFixed>(&cfg.init)) return fixed->point;
  Xoshiro256ss rng(cfg.seed ^ run_index);
  if (const auto* box = std::get_if<InitUniformBox>(&cfg.init)) {
    const double x = box->lo + (box->hi - box->lo) * rng.uniform();
    const double y = box->lo + (box->hi - box->lo) * rng.uniform();
    return Params(x, y);
  }
  return rng.normal_pair();
}

Trajectory run(const Game& game, AlgoId algo, const RunConfig& cfg, const Params& start) {
  Trajectory traj;
  const auto n = static_cast<std::size_t>(cfg.iters) + 1;
  traj.points.reserve(n);
  traj.losses.reserve(n);
  traj.xi_norms.reserve(n);

  auto record = [&](const Params& p) {
    traj.points.push_back(p);
    traj.losses.push_back(eval_losses(game, p));
    traj.xi_norms.push_back(eval_grad(game, p).norm());
  };

  Params p = start;
  AlgoState<double> state;
  record(p);
  for (int k = 0; k < cfg.iters; ++k) {
    if (algo == AlgoId::SGA) traj.sga_lambda.push_back(sga_lambda(game, p));
    auto [next, next_state] = step(game, algo, p, state, cfg.hp);
    if (!next.allFinite()) {
      traj.non_finite = true;
      break;
    }
    p = next;
    state = std::move(next_state);
    record(p);
  }
  return traj;
}

Trajectory run(const Game& game, AlgoId algo, const RunConfig& cfg) {
  return run(game, algo, cfg, sample_init(cfg, 0));
}

Outcome classify_outcome(const Trajectory& traj, const Game& game, const RunConfig& cfg) {
  Outcome out{OutcomeKind::Cycle, 0.0, traj.points.back(), traj.iters_used()};
  bool finite = !traj.non_finite;
  for (const Params& p : traj.points) {
    if (!p.allFinite()) {
      finite = false;
      continue;
    }
    out.max_norm = std::max(out.max_norm, p.norm());
  }
  if (!finite) out.max_norm = std::numeric_limits<double>::infinity();
  if (!finite || out.max_norm > cfg.bound_radius) {
    out.kind = OutcomeKind::Diverged;
    return out;
  }

  const std::size_t n = traj.points.size();
  const std::size_t window = std::min<std::size_t>(cfg.tail_window, n - 1);
  double max_step = 0.0;
  for (std::size_t k = n - 1 - window; k + 1 < n; ++k) {
    max_step = std::max(max_step, (traj.points[k + 1] - traj.points[k]).norm());
  }
  if (window > 0 && max_step < cfg.step_tol) {
    out.kind = eval_grad(game, out.final).norm() < cfg.crit_tol
                   ? OutcomeKind::ConvergedCritical
                   : OutcomeKind::ConvergedNonCritical;
  }
  return out;
}

unsigned default_workers() {
  if (const char* env = std::getenv("GDL_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult sweep(const Game& game, AlgoId algo, const RunConfig& cfg, int n_runs,
                  unsigned workers) {
  if (n_runs < 1) throw std::invalid_argument("sweep: n_runs must be >= 1");
  cfg.validate();

  SweepResult result;
  result.per_run.resize(static_cast<std::size_t>(n_runs));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (int i = next++; i < n_runs; i = next++) {
      try {
        const auto idx = static_cast<std::uint64_t>(i);
        const Trajectory traj = run(game, algo, cfg, sample_init(cfg, idx));
        result.per_run[static_cast<std::size_t>(i)] =
            RunRecord{i, cfg.seed ^ idx, classify_outcome(traj, game, cfg)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n_runs;
      }
    }
  };

  workers = std::clamp(workers, 1u, static_cast<unsigned>(n_runs));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  for (OutcomeKind k : kAllOutcomes) result.counts[k] = 0;
  for (const RunRecord& r : result.per_run) ++result.counts[r.outcome.kind];
  return result;
}

}  // namespace gdl
