// Trajectory simulation, outcome classification and seeded batch sweeps.

#ifndef GDL_DYNAMICS_HPP
#define GDL_DYNAMICS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "gdl/algorithms.hpp"
#include "gdl/game.hpp"

namespace gdl {

// ---------------------------------------------------------------------------
// Random numbers
//
// Per-run streams are xoshiro256** generators whose four state words are
// the first four outputs of splitmix64 started at (seed ^ run_index).
// Uniforms take the top 53 bits of a draw: u = (next() >> 11) * 2^-53.
// A standard-normal pair is produced by Box-Muller from two uniforms
// u1, u2 as r = sqrt(-2 ln(1 - u1)), (r cos(2 pi u2), r sin(2 pi u2)).
// ---------------------------------------------------------------------------

/// Advances state and returns the next splitmix64 output.
std::uint64_t splitmix64(std::uint64_t& state);

class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  /// Two independent standard normals.
  Params normal_pair();

 private:
  std::array<std::uint64_t, 4> s_;
};

// ---------------------------------------------------------------------------
// Configuration and results
// ---------------------------------------------------------------------------

struct InitStdNormal {};
struct InitUniformBox {
  double lo;
  double hi;
};
struct InitFixed {
  Params point;
};
using InitSpec = std::variant<InitStdNormal, InitUniformBox, InitFixed>;

struct RunConfig {
  int iters = 3000;
  HyperParams hp;
  InitSpec init = InitStdNormal{};
  std::uint64_t seed = 0;
  double bound_radius = 1e3;
  double step_tol = 1e-9;
  double crit_tol = 1e-6;
  int tail_window = 200;

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct Trajectory {
  std::vector<Params> points;
  std::vector<Params> losses;  // (L^1, L^2) per point
  std::vector<double> xi_norms;
  std::vector<double> sga_lambda;  // per step, SGA runs only
  bool non_finite = false;         // stopped early on a non-finite iterate

  int iters_used() const { return static_cast<int>(points.size()) - 1; }
};

enum class OutcomeKind { Diverged, ConvergedCritical, ConvergedNonCritical, Cycle };

inline constexpr std::array<OutcomeKind, 4> kAllOutcomes = {
    OutcomeKind::Diverged, OutcomeKind::ConvergedCritical, OutcomeKind::ConvergedNonCritical,
    OutcomeKind::Cycle};

const char* to_string(OutcomeKind k);

struct Outcome {
  OutcomeKind kind;
  double max_norm;  // +inf when a non-finite iterate was hit
  Params final;
  int iters_used;
};

struct RunRecord {
  int run;
  std::uint64_t seed;  // stream seed, seed ^ run
  Outcome outcome;
};

struct SweepResult {
  std::map<OutcomeKind, int> counts;
  std::vector<RunRecord> per_run;  // sorted by run

  int count(OutcomeKind k) const {
    auto it = counts.find(k);
    return it == counts.end() ? 0 : it->second;
  }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Initial point of run `run_index`, a pure function of (cfg, run_index).
Params sample_init(const RunConfig& cfg, std::uint64_t run_index);

/// Iterates the update cfg.iters times from `start`, or until an iterate is
/// non-finite. Propagates SingularMatrixError.
Trajectory run(const Game& game, AlgoId algo, const RunConfig& cfg, const Params& start);

/// As above, starting from sample_init(cfg, 0).
Trajectory run(const Game& game, AlgoId algo, const RunConfig& cfg);

Outcome classify_outcome(const Trajectory& traj, const Game& game, const RunConfig& cfg);

/// Worker count from GDL_THREADS, else hardware concurrency.
unsigned default_workers();

/// n_runs independent runs classified and tallied. The result does not
/// depend on `workers`.
SweepResult sweep(const Game& game, AlgoId algo, const RunConfig& cfg, int n_runs,
                  unsigned workers = default_workers());

}  // namespace gdl

#endif  // GDL_DYNAMICS_HPP
