#include <doctest.h>

#include <cmath>
#include <cstring>

#include "gdl/dynamics.hpp"

using gdl::AlgoId;
using gdl::Game;
using gdl::OutcomeKind;
using gdl::Params;
using gdl::RunConfig;

namespace {

RunConfig fixed_at(double x, double y, int iters = 3000) {
  RunConfig cfg;
  cfg.init = gdl::InitFixed{Params(x, y)};
  cfg.iters = iters;
  return cfg;
}

bool same_outcome(const gdl::Outcome& a, const gdl::Outcome& b) {
  auto same_bits = [](double u, double v) { return std::memcmp(&u, &v, sizeof u) == 0; };
  return a.kind == b.kind && same_bits(a.max_norm, b.max_norm) &&
         same_bits(a.final(0), b.final(0)) && same_bits(a.final(1), b.final(1)) &&
         a.iters_used == b.iters_used;
}

}  // namespace

TEST_CASE("generator reference stream") {
  // splitmix64 from state 0 and xoshiro256** are published algorithms; the
  // first splitmix64 output from 0 is a widely quoted constant.
  std::uint64_t s = 0;
  CHECK(gdl::splitmix64(s) == 0xE220A8397B1DCDAFull);
  gdl::Xoshiro256ss a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    CHECK(va == b.next());
    (void)c.next();
  }
  gdl::Xoshiro256ss d(42), e(43);
  bool differs = false;
  for (int i = 0; i < 4; ++i) differs |= d.next() != e.next();
  CHECK(differs);
  gdl::Xoshiro256ss u(5);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("sample_init") {
  RunConfig cfg = fixed_at(1, 2);
  CHECK(gdl::sample_init(cfg, 0) == Params(1, 2));
  CHECK(gdl::sample_init(cfg, 77) == Params(1, 2));

  RunConfig normal;
  normal.seed = 42;
  CHECK(gdl::sample_init(normal, 0) == gdl::sample_init(normal, 0));
  CHECK(gdl::sample_init(normal, 0) != gdl::sample_init(normal, 1));

  RunConfig box;
  box.init = gdl::InitUniformBox{-2.0, 3.0};
  for (int r = 0; r < 1000; ++r) {
    const Params p = gdl::sample_init(box, r);
    REQUIRE(p.minCoeff() >= -2.0);
    REQUIRE(p.maxCoeff() < 3.0);
  }
}

TEST_CASE("standard normal statistics") {
  RunConfig cfg;
  cfg.seed = 42;
  const int n = 10000;
  Params sum = Params::Zero(), sq = Params::Zero();
  for (int r = 0; r < n; ++r) {
    const Params p = gdl::sample_init(cfg, r);
    sum += p;
    sq += p.cwiseProduct(p);
  }
  const Params mean = sum / n;
  const Params var = sq / n - mean.cwiseProduct(mean);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(mean(i)) < 0.05);
    CHECK(std::abs(var(i) - 1.0) < 0.1);
  }
}

TEST_CASE("config validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tail_window = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.iters = 100;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.bound_radius = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.step_tol = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("run records a consistent trajectory") {
  const RunConfig cfg = fixed_at(0.3, -0.8, 250);
  const auto traj = gdl::run(Game::market(), AlgoId::EG, cfg);
  REQUIRE(traj.points.size() == 251);
  CHECK(traj.losses.size() == 251);
  CHECK(traj.xi_norms.size() == 251);
  CHECK(traj.iters_used() == 250);
  CHECK(traj.points[0] == Params(0.3, -0.8));
  for (std::size_t k = 0; k + 1 < traj.points.size(); ++k) {
    const auto nxt = gdl::step(Game::market(), AlgoId::EG, traj.points[k],
                               gdl::AlgoState<double>{}, cfg.hp).first;
    REQUIRE(nxt == traj.points[k + 1]);
    REQUIRE(traj.losses[k] == gdl::eval_losses(Game::market(), traj.points[k]));
  }
}

TEST_CASE("omd trajectory threads its history") {
  const RunConfig cfg = fixed_at(0.5, 0.5, 300);
  const auto traj = gdl::run(Game::zero_sum(), AlgoId::OMD, cfg);
  gdl::AlgoState<double> st;
  Params p = traj.points[0];
  for (std::size_t k = 0; k + 1 < traj.points.size(); ++k) {
    auto [nxt, st2] = gdl::step(Game::zero_sum(), AlgoId::OMD, p, st, cfg.hp);
    REQUIRE(nxt == traj.points[k + 1]);
    p = nxt;
    st = st2;
  }
}

TEST_CASE("origin is a fixed point") {
  const RunConfig cfg = fixed_at(0, 0, 10);
  const auto traj = gdl::run(Game::zero_sum(), AlgoId::GD, cfg);
  REQUIRE(traj.points.size() == 11);
  for (const Params& p : traj.points) CHECK(p == Params(0, 0));
}

TEST_CASE("convex game converges") {
  const RunConfig cfg = fixed_at(1, 1);
  const auto traj = gdl::run(Game::convex_quad(), AlgoId::GD, cfg);
  CHECK(traj.points.back().norm() < 1e-4);
  // |theta_k| = |theta_0| (1 - 2 alpha + 2 alpha^2)^(k/2)
  const double rate = std::sqrt(1 - 2 * 0.01 + 2 * 0.01 * 0.01);
  CHECK(traj.points.back().norm() == doctest::Approx(std::sqrt(2.0) * std::pow(rate, 3000)).epsilon(1e-9));
  CHECK(gdl::classify_outcome(traj, Game::convex_quad(), cfg).kind == OutcomeKind::ConvergedCritical);
}

TEST_CASE("market game overshoots with a large step") {
  RunConfig cfg = fixed_at(3, 3);
  cfg.hp.alpha = 0.5;
  const auto traj = gdl::run(Game::market(), AlgoId::GD, cfg);
  CHECK(traj.non_finite);
  CHECK(traj.iters_used() < 3000);
  const auto out = gdl::classify_outcome(traj, Game::market(), cfg);
  CHECK(out.kind == OutcomeKind::Diverged);
  CHECK(std::isinf(out.max_norm));
}

TEST_CASE("gd cycles in N") {
  RunConfig cfg;
  cfg.seed = 7;
  const auto traj = gdl::run(Game::zero_sum(), AlgoId::GD, cfg);
  const auto out = gdl::classify_outcome(traj, Game::zero_sum(), cfg);
  CHECK(out.kind == OutcomeKind::Cycle);
  // Two tail points further apart than 10 * step_tol.
  double diam = 0;
  const std::size_t n = traj.points.size();
  for (std::size_t i = n - cfg.tail_window - 1; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) diam = std::max(diam, (traj.points[i] - traj.points[j]).norm());
  CHECK(diam > 10 * cfg.step_tol);
}

TEST_CASE("classifier covers every outcome") {
  RunConfig cfg;
  gdl::Trajectory t;
  const Params c(0.5, 0.5);
  for (int k = 0; k <= cfg.tail_window + 5; ++k) {
    t.points.push_back(c);
    t.losses.push_back(Params::Zero());
    t.xi_norms.push_back(0);
  }
  CHECK(gdl::classify_outcome(t, Game::zero_sum(), cfg).kind == OutcomeKind::ConvergedNonCritical);
  t.points.back() = Params(2000, 0);
  CHECK(gdl::classify_outcome(t, Game::zero_sum(), cfg).kind == OutcomeKind::Diverged);
  t.points.back() = Params(0.5, 0.6);
  CHECK(gdl::classify_outcome(t, Game::zero_sum(), cfg).kind == OutcomeKind::Cycle);
  t.points.back() = Params(NAN, 0);
  const auto out = gdl::classify_outcome(t, Game::zero_sum(), cfg);
  CHECK(out.kind == OutcomeKind::Diverged);
  CHECK(std::isinf(out.max_norm));
}

TEST_CASE("sweep from a fixed critical point") {
  const RunConfig cfg = fixed_at(0, 0);
  const auto res = gdl::sweep(Game::zero_sum(), AlgoId::GD, cfg, 5, 2);
  CHECK(res.count(OutcomeKind::ConvergedCritical) == 5);
  REQUIRE(res.per_run.size() == 5);
  for (int r = 0; r < 5; ++r) {
    CHECK(res.per_run[r].run == r);
    CHECK(res.per_run[r].seed == (cfg.seed ^ static_cast<std::uint64_t>(r)));
  }
}

TEST_CASE("sweep is deterministic across worker counts") {
  RunConfig cfg;
  cfg.seed = 123;
  cfg.iters = 400;
  for (AlgoId algo : {AlgoId::GD, AlgoId::SOS, AlgoId::OMD}) {
    const auto a = gdl::sweep(Game::market(), algo, cfg, 40, 1);
    const auto b = gdl::sweep(Game::market(), algo, cfg, 40, 3);
    const auto c = gdl::sweep(Game::market(), algo, cfg, 40, 8);
    REQUIRE(a.per_run.size() == 40);
    int total = 0;
    for (OutcomeKind k : gdl::kAllOutcomes) {
      CHECK(a.count(k) == b.count(k));
      CHECK(a.count(k) == c.count(k));
      total += a.count(k);
    }
    CHECK(total == 40);
    for (int r = 0; r < 40; ++r) {
      CHECK(same_outcome(a.per_run[r].outcome, b.per_run[r].outcome));
      CHECK(same_outcome(a.per_run[r].outcome, c.per_run[r].outcome));
    }
  }
}

TEST_CASE("sweep records match single runs") {
  RunConfig cfg;
  cfg.seed = 9;
  cfg.iters = 300;
  const auto res = gdl::sweep(Game::zero_sum(), AlgoId::CO, cfg, 6, 2);
  for (int r = 0; r < 6; ++r) {
    const auto traj = gdl::run(Game::zero_sum(), AlgoId::CO, cfg, gdl::sample_init(cfg, r));
    CHECK(same_outcome(res.per_run[r].outcome, gdl::classify_outcome(traj, Game::zero_sum(), cfg)));
  }
}
