#include "gdl/io.hpp"

#include <cmath>

#include <fmt/format.h>

namespace gdl {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void write_trajectory_header(std::ostream& os, bool with_algo) {
  if (with_algo) os << "algo,";
  os << "step,x,y,l1,l2,xi_norm\n";
}

void write_trajectory_rows(std::ostream& os, const Trajectory& traj, const char* algo) {
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    if (algo) os << algo << ',';
    os << k << ',' << format_real(traj.points[k](0)) << ',' << format_real(traj.points[k](1))
       << ',' << format_real(traj.losses[k](0)) << ',' << format_real(traj.losses[k](1)) << ','
       << format_real(traj.xi_norms[k]) << '\n';
  }
}

void write_sweep_header(std::ostream& os) {
  os << "algo,run,seed,outcome,iters_used,max_norm,final_x,final_y\n";
}

void write_sweep_rows(std::ostream& os, AlgoId algo, const SweepResult& result) {
  for (const RunRecord& r : result.per_run) {
    os << to_string(algo) << ',' << r.run << ',' << r.seed << ',' << to_string(r.outcome.kind)
       << ',' << r.outcome.iters_used << ',' << format_real(r.outcome.max_norm) << ','
       << format_real(r.outcome.final(0)) << ',' << format_real(r.outcome.final(1)) << '\n';
  }
}

nlohmann::json to_json(const Outcome& outcome) {
  // JSON has no infinity; a non-finite max_norm is written as null.
  nlohmann::json max_norm = nullptr;
  if (std::isfinite(outcome.max_norm)) max_norm = outcome.max_norm;
  return {{"outcome", to_string(outcome.kind)},
          {"max_norm", max_norm},
          {"final", {outcome.final(0), outcome.final(1)}},
          {"iters_used", outcome.iters_used}};
}

nlohmann::json sweep_summary(const Game& game, const RunConfig& cfg, int n_runs,
                             const std::vector<std::pair<AlgoId, SweepResult>>& results) {
  nlohmann::json per_algo = nlohmann::json::object();
  for (const auto& [algo, res] : results) {
    nlohmann::json hist = nlohmann::json::object();
    for (OutcomeKind k : kAllOutcomes) hist[to_string(k)] = res.count(k);
    per_algo[to_string(algo)] = hist;
  }
  nlohmann::json j = {{"game", game.name()},
                      {"alpha", cfg.hp.alpha},
                      {"gamma", cfg.hp.gamma},
                      {"iters", cfg.iters},
                      {"runs", n_runs},
                      {"seed", cfg.seed},
                      {"outcomes", per_algo}};
  if (game.kind() == GameKind::MarketMSigma) j["sigma"] = game.sigma();
  return j;
}

}  // namespace gdl
