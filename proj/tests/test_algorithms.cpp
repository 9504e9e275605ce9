#include <doctest.h>

#include <cmath>
#include <random>

#include "gdl/algorithms.hpp"

using gdl::AlgoId;
using gdl::Game;
using gdl::HyperParams;
using gdl::Matrix2;
using gdl::Params;

namespace {

using State = gdl::AlgoState<double>;

Matrix2 mat(double a11, double a12, double a21, double a22) {
  Matrix2 m;
  m << a11, a12, a21, a22;
  return m;
}

HyperParams hp_with(double alpha, double gamma) {
  HyperParams hp;
  hp.alpha = alpha;
  hp.gamma = gamma;
  return hp;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
  for (AlgoId a : gdl::kAllAlgorithms) {
    auto parsed = gdl::parse_algo(gdl::to_string(a));
    REQUIRE(parsed);
    CHECK(*parsed == a);
  }
  CHECK_FALSE(gdl::parse_algo("adam"));
  CHECK(gdl::kAllAlgorithms.size() == 10);
}

TEST_CASE("hyperparameter validation") {
  HyperParams hp;
  CHECK_NOTHROW(hp.validate());
  hp.alpha = 0;
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
  hp = HyperParams{};
  hp.sos_a = 1.0;
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
}

TEST_CASE("gd step") {
  const HyperParams hp;
  auto [next, st] = gdl::step(Game::zero_sum(), AlgoId::GD, Params(1, 0), State{}, hp);
  CHECK(next(0) == 1.0);
  CHECK(next(1) == doctest::Approx(0.01).epsilon(1e-15));
  auto [origin, st0] = gdl::step(Game::zero_sum(), AlgoId::GD, Params(0, 0), State{}, hp);
  CHECK(origin == Params(0, 0));
}

TEST_CASE("every algorithm fixes the origin") {
  const HyperParams hp;
  for (const Game& g : {Game::market(), Game::market_sigma(0.05), Game::zero_sum(),
                        Game::convex_quad()}) {
    for (AlgoId a : gdl::kAllAlgorithms) {
      CAPTURE(gdl::to_string(a));
      State st;
      st.prev = Params(0, 0);
      CHECK(gdl::step(g, a, Params(0, 0), st, hp).first == Params(0, 0));
    }
  }
}

TEST_CASE("sga_lambda") {
  CHECK(gdl::sga_lambda(Game::zero_sum(), Params(1, 0)) == -1.0);
  // By hand at (0, 1): xi = (1, 0), H = [[-1,1],[-1,2]], H^T xi = (-1, 1),
  // A^T xi = (0, 1). Signs -1 and +1.
  CHECK(gdl::sga_lambda(Game::zero_sum(), Params(0, 1)) == -1.0);
  // At (1, 1): xi = (1, -1), H^T xi = (3, -1), A^T xi = (1, 1). Signs +1, +1.
  CHECK(gdl::sga_lambda(Game::zero_sum(), Params(1, 1)) == 1.0);
  CHECK(gdl::sga_lambda(Game::zero_sum(), Params(0, 0)) == 0.0);
  // Near the origin xi^T H^T xi ~ -|xi|^2 and xi^T A H^T xi ~ +|xi|^2.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int t = 0; t < 1000; ++t) {
    const Params p(u(rng), u(rng));
    REQUIRE(gdl::sga_lambda(Game::zero_sum(), p) == -1.0);
  }
}

TEST_CASE("sos_p") {
  const HyperParams hp;
  CHECK(gdl::sos_p(Game::zero_sum(), Params(0, 0), hp) == 0.0);
  CHECK(gdl::sos_p(Game::market(), Params(0, 0), hp) == 0.0);
  // Near the origin the gradient-norm branch is the smaller one.
  const Params p(0.05, 0);
  const double xi2 = gdl::eval_grad(Game::zero_sum(), p).squaredNorm();
  CHECK(gdl::sos_p(Game::zero_sum(), p, hp) == doctest::Approx(xi2).epsilon(1e-12));
  for (const Params& q : {Params(0.3, 0.4), Params(-1.5, 2.0), Params(2, 2)}) {
    const double v = gdl::sos_p(Game::zero_sum(), q, hp);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("lola identity in N") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const HyperParams hp;
  const double alpha = hp.alpha;
  for (int t = 0; t < 10000; ++t) {
    const Params p(u(rng), u(rng));
    const Matrix2 h_o = gdl::decompose_blocks(gdl::eval_hessian(Game::zero_sum(), p)).off;
    const Params xi = gdl::eval_grad(Game::zero_sum(), p);
    const Params expect = (Matrix2::Identity() - 2 * alpha * h_o) * xi;
    const Params got = gdl::g_vector(Game::zero_sum(), AlgoId::LOLA, p, State{}, hp);
    REQUIRE(((got - expect).array().abs() <= 1e-12 * (1 + expect.array().abs())).all());
  }
}

TEST_CASE("eg is gd at the look-ahead point") {
  const HyperParams hp;
  const Params p(0.7, -1.1);
  const Params look = p - hp.alpha * gdl::eval_grad(Game::market(), p);
  const Params g = gdl::g_vector(Game::market(), AlgoId::EG, p, State{}, hp);
  CHECK(g == gdl::eval_grad(Game::market(), look));
}

TEST_CASE("omd uses the previous gradient") {
  const HyperParams hp;
  const Params p(0.4, 0.2);
  State st;
  st.prev = p;
  CHECK(gdl::g_vector(Game::zero_sum(), AlgoId::OMD, p, st, hp) ==
        gdl::eval_grad(Game::zero_sum(), p));
  // Bootstrap without history equals GD.
  CHECK(gdl::g_vector(Game::zero_sum(), AlgoId::OMD, p, State{}, hp) ==
        gdl::eval_grad(Game::zero_sum(), p));
  const Params q(-0.3, 0.9);
  st.prev = q;
  const Params expect = 2 * gdl::eval_grad(Game::zero_sum(), p) - gdl::eval_grad(Game::zero_sum(), q);
  CHECK(gdl::g_vector(Game::zero_sum(), AlgoId::OMD, p, st, hp) == expect);
  auto [next, st2] = gdl::step(Game::zero_sum(), AlgoId::OMD, p, st, hp);
  REQUIRE(st2.prev);
  CHECK(*st2.prev == p);
}

TEST_CASE("cgd system stays invertible on every game") {
  // H_21 = -H_12 in all four games, so det(I + alpha H_o) = 1 + alpha^2 H_12^2.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const Game& g : {Game::market(), Game::market_sigma(0.05), Game::zero_sum(),
                        Game::convex_quad()}) {
    for (int t = 0; t < 1000; ++t) {
      const Params p(u(rng), u(rng));
      const Matrix2 h_o = gdl::decompose_blocks(gdl::eval_hessian(g, p)).off;
      const Matrix2 m = Matrix2::Identity() + 10.0 * h_o;
      REQUIRE(m.determinant() >= 1.0);
    }
  }
  const HyperParams big = hp_with(100.0, 0.01);
  CHECK_NOTHROW(gdl::g_vector(Game::market(), AlgoId::CGD, Params(1.3, -0.2), State{}, big));
}

TEST_CASE("fixed-point jacobians at the origin of N") {
  const double a = 0.1;
  const HyperParams hp = hp_with(a, a);
  const Game n = Game::zero_sum();
  auto jac = [&](AlgoId id) { return gdl::update_jacobian_fd(n, id, Params(0, 0), hp, 1e-5); };
  auto near = [](const Matrix2& x, const Matrix2& y) { return (x - y).cwiseAbs().maxCoeff() <= 1e-6; };

  const Matrix2 h = mat(-1, 1, -1, -1);
  CHECK(near(jac(AlgoId::GD), h));
  CHECK(near(jac(AlgoId::OMD), h));
  CHECK(near(jac(AlgoId::AGD), mat(-1, 1, -1 - a, -1 + a)));
  CHECK(near(jac(AlgoId::EG), mat(-1, 1 + 2 * a, -1 - 2 * a, -1)));
  CHECK(near(jac(AlgoId::CO), mat(-1 + 2 * a, 1, -1, -1 + 2 * a)));
  CHECK(near(jac(AlgoId::CGD), mat(-1 + a, 1 + a, -1 - a, -1 + a) / (1 + a * a)));
  CHECK(near(jac(AlgoId::LA), mat(-1 + a, 1 + a, -1 - a, -1 + a)));
  CHECK(near(jac(AlgoId::SOS), mat(-1 + a, 1 + a, -1 - a, -1 + a)));
  CHECK(near(jac(AlgoId::LOLA), mat(-1 + 2 * a, 1 + 2 * a, -1 - 2 * a, -1 + 2 * a)));
  CHECK(near(jac(AlgoId::SGA), mat(-2, 0, 0, -2)));
}

TEST_CASE("fixed-point jacobians are negative definite for small alpha") {
  const HyperParams hp = hp_with(0.01, 0.01);
  for (AlgoId id : gdl::kAllAlgorithms) {
    CAPTURE(gdl::to_string(id));
    const Matrix2 j = gdl::update_jacobian_fd(Game::zero_sum(), id, Params(0, 0), hp, 1e-5);
    CHECK(gdl::is_negative_definite(j));
  }
}

TEST_CASE("grad norm decreases monotonically on the convex game") {
  const HyperParams hp;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (int r = 0; r < 20; ++r) {
    Params p(nd(rng), nd(rng));
    double prev = gdl::eval_grad(Game::convex_quad(), p).norm();
    for (int k = 0; k < 1000; ++k) {
      p = gdl::step(Game::convex_quad(), AlgoId::GD, p, State{}, hp).first;
      const double cur = gdl::eval_grad(Game::convex_quad(), p).norm();
      REQUIRE(cur < prev);
      prev = cur;
    }
  }
}
