// CSV and JSON output formats.
//
// Trajectory CSV:  step,x,y,l1,l2,xi_norm
//   (prefixed by an `algo` column when several algorithms share a file)
// Sweep CSV:       algo,run,seed,outcome,iters_used,max_norm,final_x,final_y
//
// Reals are printed with 17 significant digits; lines end in LF.

#ifndef GDL_IO_HPP
#define GDL_IO_HPP

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gdl/algorithms.hpp"
#include "gdl/dynamics.hpp"

namespace gdl {

std::string format_real(double v);

void write_trajectory_header(std::ostream& os, bool with_algo);
void write_trajectory_rows(std::ostream& os, const Trajectory& traj, const char* algo = nullptr);

void write_sweep_header(std::ostream& os);
void write_sweep_rows(std::ostream& os, AlgoId algo, const SweepResult& result);

nlohmann::json to_json(const Outcome& outcome);

/// Outcome histogram per algorithm plus the settings that produced it.
nlohmann::json sweep_summary(const Game& game, const RunConfig& cfg, int n_runs,
                             const std::vector<std::pair<AlgoId, SweepResult>>& results);

}  // namespace gdl

#endif  // GDL_IO_HPP
