#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdl/algorithms.hpp"
#include "gdl/certify.hpp"
#include "gdl/dynamics.hpp"
#include "gdl/game.hpp"
#include "gdl/io.hpp"

namespace gdl::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string game = "m";
  double sigma = 0.01;
  std::string algo = "gd";
  double alpha = 0.01;
  double gamma = 0.01;
  int iters = 3000;
  int runs = 1000;
  std::uint64_t seed = 0;
  std::string init = "normal";
  std::string point;
  double tol = 1e-9;
  std::string out;
  std::string summary;
  std::string format = "csv";
};

Game parse_game(const Options& o) {
  if (o.game == "m") return Game::market();
  if (o.game == "n") return Game::zero_sum();
  if (o.game == "convex") return Game::convex_quad();
  if (o.game == "msigma") {
    try {
      return Game::market_sigma(o.sigma);
    } catch (const std::invalid_argument&) {
      throw UsageError("--sigma must lie in (0, 0.1)");
    }
  }
  throw UsageError("--game: unknown game '" + o.game + "'");
}

std::vector<AlgoId> parse_algos(const std::string& name) {
  if (name == "all") return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
  if (auto a = parse_algo(name)) return {*a};
  throw UsageError("--algo: unknown algorithm '" + name + "'");
}

Params parse_point(const std::string& text, const char* flag) {
  std::istringstream is(text);
  double x = 0;
  double y = 0;
  char comma = 0;
  if (!(is >> x >> comma >> y) || comma != ',' || !(is >> std::ws).eof() || !std::isfinite(x) ||
      !std::isfinite(y)) {
    throw UsageError(std::string(flag) + ": expected x,y but got '" + text + "'");
  }
  return Params(x, y);
}

RunConfig make_config(const Options& o) {
  RunConfig cfg;
  cfg.iters = o.iters;
  cfg.hp.alpha = o.alpha;
  cfg.hp.gamma = o.gamma;
  cfg.seed = o.seed;
  if (o.init == "normal") {
    cfg.init = InitStdNormal{};
  } else {
    cfg.init = InitFixed{parse_point(o.init, "--init")};
  }
  if (cfg.iters < 1) throw UsageError("--iters must be >= 1");
  cfg.tail_window = std::min(cfg.tail_window, cfg.iters);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

// Writes to --out when given, else to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("--out: cannot open '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (o.format == f) return;
  }
  throw UsageError("--format: '" + o.format + "' is not supported by this command");
}

int cmd_run(const Options& o, std::ostream& out) {
  require_format(o, {"csv", "json"});
  const Game game = parse_game(o);
  const auto algos = parse_algos(o.algo);
  const RunConfig cfg = make_config(o);
  const Params start = sample_init(cfg, 0);

  Sink sink(o.out, out);
  const bool multi = algos.size() > 1;
  nlohmann::json results = nlohmann::json::array();
  if (o.format == "csv") write_trajectory_header(sink.get(), multi);
  for (AlgoId algo : algos) {
    const Trajectory traj = run(game, algo, cfg, start);
    if (o.format == "csv") {
      write_trajectory_rows(sink.get(), traj, multi ? to_string(algo) : nullptr);
    } else {
      nlohmann::json j = to_json(classify_outcome(traj, game, cfg));
      j["algo"] = to_string(algo);
      j["game"] = game.name();
      j["start"] = {start(0), start(1)};
      results.push_back(j);
    }
  }
  if (o.format == "json") sink.get() << (multi ? results : results[0]).dump(2) << '\n';
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  require_format(o, {"csv", "json"});
  const Game game = parse_game(o);
  const auto algos = parse_algos(o.algo);
  const RunConfig cfg = make_config(o);
  if (o.runs < 1) throw UsageError("--runs must be >= 1");

  std::vector<std::pair<AlgoId, SweepResult>> results;
  for (AlgoId algo : algos) results.emplace_back(algo, sweep(game, algo, cfg, o.runs));
  const nlohmann::json summary = sweep_summary(game, cfg, o.runs, results);

  Sink sink(o.out, out);
  if (o.format == "json") {
    sink.get() << summary.dump(2) << '\n';
    return kExitOk;
  }
  write_sweep_header(sink.get());
  for (const auto& [algo, res] : results) write_sweep_rows(sink.get(), algo, res);

  std::string summary_path = o.summary;
  if (summary_path.empty() && !o.out.empty()) summary_path = o.out + ".summary.json";
  if (summary_path.empty()) {
    err << summary.dump(2) << '\n';
  } else {
    std::ofstream f(summary_path, std::ios::binary);
    if (!f) throw UsageError("--summary: cannot open '" + summary_path + "'");
    f << summary.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_certify(const Options& o, std::ostream& out) {
  require_format(o, {"json"});
  const Game game = parse_game(o);
  nlohmann::json report;
  try {
    report = to_json(certify_unique_critical(game));
  } catch (const UnsupportedGame& e) {
    throw UsageError(e.what());
  }
  Sink sink(o.out, out);
  sink.get() << report.dump(2) << '\n';
  return kExitOk;
}

nlohmann::json matrix_json(const Matrix2& m) {
  return {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}};
}

int cmd_classify(const Options& o, std::ostream& out) {
  require_format(o, {"json"});
  const Game game = parse_game(o);
  if (o.point.empty()) throw UsageError("--point is required");
  if (!(o.tol > 0)) throw UsageError("--tol must be > 0");
  const Params p = parse_point(o.point, "--point");
  const GameEval<double> ev = evaluate(game, p);
  const DefinitenessReport d = classify_definiteness(ev.hess);
  const nlohmann::json j = {
      {"game", game.name()},
      {"point", {p(0), p(1)}},
      {"losses", {ev.l1, ev.l2}},
      {"xi", {ev.xi(0), ev.xi(1)}},
      {"hessian", matrix_json(ev.hess)},
      {"class", to_string(classify_critical_point(game, p, o.tol))},
      {"definiteness",
       {{"neg_definite", d.neg_definite},
        {"max_re_spec_H_neg", d.max_re_spec_H_neg},
        {"min_re_spec_H_neg", d.min_re_spec_H_neg},
        {"max_re_spec_Hd_neg", d.max_re_spec_Hd_neg},
        {"min_re_spec_Hd_neg", d.min_re_spec_Hd_neg},
        {"min_spec_S_neg", d.min_spec_S_neg}}}};
  Sink sink(o.out, out);
  sink.get() << j.dump(2) << '\n';
  return kExitOk;
}

// A quick smoke pass over each module; the full acceptance suite lives in
// the test tree.
int cmd_selftest(std::ostream& out) {
  int failures = 0;
  auto check = [&](const char* name, const std::function<bool()>& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception&) {
      ok = false;
    }
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  };

  check("gradient oracle", [] {
    Xoshiro256ss rng(1);
    for (const Game& g : {Game::market(), Game::zero_sum(), Game::convex_quad()}) {
      for (int i = 0; i < 200; ++i) {
        const Params p(4 * rng.uniform() - 2, 4 * rng.uniform() - 2);
        const Params a = eval_grad(g, p);
        const Params f = fd_grad(g, p, 1e-5);
        if (((a - f).array().abs() > 1e-6 * (1 + a.array().abs())).any()) return false;
      }
    }
    return true;
  });
  check("origin is a strict maximum of n", [] {
    return classify_critical_point(Game::zero_sum(), Params(0, 0), 1e-9) ==
           CriticalClass::StrictMax;
  });
  check("gd cycles in n", [] {
    RunConfig cfg;
    cfg.seed = 7;
    const Game g = Game::zero_sum();
    return classify_outcome(run(g, AlgoId::GD, cfg), g, cfg).kind == OutcomeKind::Cycle;
  });
  check("unique critical point of n", [] {
    const CertReport r = certify_unique_critical(Game::zero_sum());
    return r.conclusion && r.isolating_intervals.at(0).contains(0);
  });
  return failures == 0 ? kExitOk : kExitCompute;
}

void add_common(CLI::App* cmd, Options& o, bool dynamics) {
  cmd->add_option("--game", o.game, "Game: m | msigma | n | convex")->capture_default_str();
  cmd->add_option("--sigma", o.sigma, "Disc radius for msigma, in (0, 0.1)")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Output path (default: standard output)");
  if (!dynamics) return;
  cmd->add_option("--algo", o.algo, "gd|agd|eg|omd|sga|co|cgd|la|lola|sos|all")
      ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Learning rate")->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "Consensus optimization coefficient")
      ->capture_default_str();
  cmd->add_option("--iters", o.iters, "Iterations per run")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Base seed for initial points")->capture_default_str();
  cmd->add_option("--init", o.init, "Initial point: normal | x,y")->capture_default_str();
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Gradient dynamics laboratory for two-player differentiable games", "gdl"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Simulate one trajectory per algorithm");
  add_common(run_cmd, o, true);
  run_cmd->add_option("--format", o.format, "csv | json")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "Classify many seeded runs per algorithm");
  add_common(sweep_cmd, o, true);
  sweep_cmd->add_option("--runs", o.runs, "Runs per algorithm")->capture_default_str();
  sweep_cmd->add_option("--format", o.format, "csv | json")->capture_default_str();
  sweep_cmd->add_option("--summary", o.summary,
                        "Summary JSON path (default: <out>.summary.json, or stderr)");

  auto* cert_cmd = app.add_subcommand("certify", "Certify a unique real critical point");
  add_common(cert_cmd, o, false);
  cert_cmd->add_option("--format", o.format, "json");

  auto* class_cmd = app.add_subcommand("classify", "Classify a point of a game");
  add_common(class_cmd, o, false);
  class_cmd->add_option("--point", o.point, "Point x,y")->required();
  class_cmd->add_option("--tol", o.tol, "Gradient-norm tolerance")->capture_default_str();
  class_cmd->add_option("--format", o.format, "json");

  auto* self_cmd = app.add_subcommand("selftest", "Run a quick built-in check suite");

  // certify and classify only speak JSON.
  for (auto* c : {cert_cmd, class_cmd}) {
    c->preparse_callback([&o](std::size_t) { o.format = "json"; });
  }
  sweep_cmd->preparse_callback([&o](std::size_t) { o.algo = "all"; });
  sweep_cmd->get_option("--algo")->default_str("all");

  std::vector<std::string> argv_store{"gdl"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(o, out);
    if (*sweep_cmd) return cmd_sweep(o, out, err);
    if (*cert_cmd) return cmd_certify(o, out);
    if (*class_cmd) return cmd_classify(o, out);
    if (*self_cmd) return cmd_selftest(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "computation error: " << e.what() << '\n';
    return kExitCompute;
  }
  return kExitUsage;
}

}  // namespace gdl::cli
