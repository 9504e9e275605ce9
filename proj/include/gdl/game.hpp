// Two-player, one-parameter-per-player differentiable games.
//
// Every game here is described by its two losses L^1, L^2 over the joint
// parameter theta = (x, y). Player 1 owns x and player 2 owns y. The
// simultaneous gradient is xi = (dL^1/dx, dL^2/dy) and the game Hessian is
// its Jacobian, which is in general not symmetric.
//
// All functions are templated on the scalar type and are pure.

#ifndef GDL_GAME_HPP
#define GDL_GAME_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gdl {

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

using Params = Point<double>;
using Matrix2 = Mat2<double>;

enum class GameKind { MarketM, MarketMSigma, ZeroSumN, ConvexQuad };

/// Identifies one of the built-in games. Only MarketMSigma carries a
/// parameter, the radius sigma of the deformed disc around the origin.
class Game {
 public:
  static Game market() { return Game(GameKind::MarketM, 0.0); }
  static Game zero_sum() { return Game(GameKind::ZeroSumN, 0.0); }
  static Game convex_quad() { return Game(GameKind::ConvexQuad, 0.0); }
  static Game market_sigma(double sigma) {
    if (!(sigma > 0.0 && sigma < 0.1)) {
      throw std::invalid_argument("market_sigma: sigma must lie in (0, 0.1)");
    }
    return Game(GameKind::MarketMSigma, sigma);
  }

  GameKind kind() const { return kind_; }
  double sigma() const { return sigma_; }

  std::string name() const {
    switch (kind_) {
      case GameKind::MarketM: return "m";
      case GameKind::MarketMSigma: return "msigma";
      case GameKind::ZeroSumN: return "n";
      case GameKind::ConvexQuad: return "convex";
    }
    return "?";
  }

  friend bool operator==(const Game&, const Game&) = default;

 private:
  Game(GameKind kind, double sigma) : kind_(kind), sigma_(sigma) {}

  GameKind kind_;
  double sigma_;
};

/// Losses, simultaneous gradient and game Hessian at a point.
template <typename Scalar>
struct GameEval {
  Scalar l1;
  Scalar l2;
  Point<Scalar> xi;
  Mat2<Scalar> hess;
};

namespace detail {

// Shared interaction term (1/4)(y^4/(1+x^2) - x^4/(1+y^2)) of both markets,
// added to L^1 and subtracted from L^2.
template <typename Scalar>
Scalar quartic_coupling(Scalar x, Scalar y) {
  return (y * y * y * y / (1 + x * x) - x * x * x * x / (1 + y * y)) / 4;
}

// Gradient of quartic_coupling.
template <typename Scalar>
Point<Scalar> quartic_coupling_grad(Scalar x, Scalar y) {
  const Scalar ax = 1 + x * x;
  const Scalar ay = 1 + y * y;
  Point<Scalar> g;
  g(0) = -x * y * y * y * y / (2 * ax * ax) - x * x * x / ay;
  g(1) = y * y * y / ax + x * x * x * x * y / (2 * ay * ay);
  return g;
}

// Hessian of quartic_coupling.
template <typename Scalar>
Mat2<Scalar> quartic_coupling_hess(Scalar x, Scalar y) {
  const Scalar ax = 1 + x * x;
  const Scalar ay = 1 + y * y;
  const Scalar y4 = y * y * y * y;
  const Scalar x4 = x * x * x * x;
  Mat2<Scalar> h;
  h(0, 0) = -y4 * (1 - 3 * x * x) / (2 * ax * ax * ax) - 3 * x * x / ay;
  h(1, 1) = 3 * y * y / ax + x4 * (1 - 3 * y * y) / (2 * ay * ay * ay);
  h(0, 1) = -2 * x * y * y * y / (ax * ax) + 2 * x * x * x * y / (ay * ay);
  h(1, 0) = h(0, 1);
  return h;
}

template <typename Scalar>
bool inside_disc(const Game& game, Scalar x, Scalar y) {
  const Scalar s = static_cast<Scalar>(game.sigma());
  return x * x + y * y < s * s;
}

// The deformation f_sigma, continuous across the circle of radius sigma.
template <typename Scalar>
Scalar deformation(const Game& game, Scalar x, Scalar y) {
  const Scalar s2 = static_cast<Scalar>(game.sigma()) * static_cast<Scalar>(game.sigma());
  const Scalar r2m = x * x + y * y - s2;
  if (!inside_disc(game, x, y)) return r2m / 2;
  return (y * y - 3 * x * x) * r2m / (2 * s2);
}

template <typename Scalar>
Point<Scalar> deformation_grad(const Game& game, Scalar x, Scalar y) {
  if (!inside_disc(game, x, y)) return Point<Scalar>(x, y);
  const Scalar s2 = static_cast<Scalar>(game.sigma()) * static_cast<Scalar>(game.sigma());
  return Point<Scalar>(3 * x - 2 * x * (3 * x * x + y * y) / s2,
                       2 * y * (y * y - x * x) / s2 - y);
}

template <typename Scalar>
Mat2<Scalar> deformation_hess(const Game& game, Scalar x, Scalar y) {
  if (!inside_disc(game, x, y)) return Mat2<Scalar>::Identity();
  const Scalar s2 = static_cast<Scalar>(game.sigma()) * static_cast<Scalar>(game.sigma());
  Mat2<Scalar> h;
  h(0, 0) = 3 - (18 * x * x + 2 * y * y) / s2;
  h(1, 1) = (6 * y * y - 2 * x * x) / s2 - 1;
  h(0, 1) = -4 * x * y / s2;
  h(1, 0) = h(0, 1);
  return h;
}

}  // namespace detail

/// (L^1, L^2) at p.
template <typename Scalar>
Point<Scalar> eval_losses(const Game& game, const Point<Scalar>& p) {
  const Scalar x = p(0);
  const Scalar y = p(1);
  switch (game.kind()) {
    case GameKind::MarketM: {
      const Scalar q = detail::quartic_coupling(x, y);
      return Point<Scalar>(std::pow(x, 6) / 6 - x * x / 2 + x * y + q,
                           std::pow(y, 6) / 6 - y * y / 2 - x * y - q);
    }
    case GameKind::MarketMSigma: {
      const Scalar q = detail::quartic_coupling(x, y);
      const Scalar f = detail::deformation(game, x, y);
      return Point<Scalar>(std::pow(x, 6) / 6 - x * x + f + x * y + q,
                           std::pow(y, 6) / 6 - f - x * y - q);
    }
    case GameKind::ZeroSumN: {
      const Scalar l1 =
          x * y - x * x / 2 + y * y / 2 + x * x * x * x / 4 - y * y * y * y / 4;
      return Point<Scalar>(l1, -l1);
    }
    case GameKind::ConvexQuad:
      return Point<Scalar>(x * x / 2 + x * y, y * y / 2 - x * y);
  }
  return Point<Scalar>::Zero();
}

/// Full loss gradient matrix: entry (i, j) is the derivative of L^j with
/// respect to player i's parameter. Column j is grad L^j.
template <typename Scalar>
Mat2<Scalar> loss_gradients(const Game& game, const Point<Scalar>& p) {
  const Scalar x = p(0);
  const Scalar y = p(1);
  Mat2<Scalar> g;
  switch (game.kind()) {
    case GameKind::MarketM:
    case GameKind::MarketMSigma: {
      const Point<Scalar> q = detail::quartic_coupling_grad(x, y);
      Point<Scalar> self;  // gradient of the own-parameter terms
      Point<Scalar> f = Point<Scalar>::Zero();
      if (game.kind() == GameKind::MarketM) {
        self << std::pow(x, 5) - x, std::pow(y, 5) - y;
      } else {
        self << std::pow(x, 5) - 2 * x, std::pow(y, 5);
        f = detail::deformation_grad(game, x, y);
      }
      // L^1 = self_1(x) + f + xy + q, L^2 = self_2(y) - f - xy - q
      g(0, 0) = self(0) + f(0) + y + q(0);
      g(1, 0) = f(1) + x + q(1);
      g(0, 1) = -f(0) - y - q(0);
      g(1, 1) = self(1) - f(1) - x - q(1);
      return g;
    }
    case GameKind::ZeroSumN: {
      const Scalar dx = y - x + x * x * x;
      const Scalar dy = x + y - y * y * y;
      g << dx, -dx, dy, -dy;
      return g;
    }
    case GameKind::ConvexQuad:
      g << x + y, -y, x, y - x;
      return g;
  }
  return Mat2<Scalar>::Zero();
}

/// Simultaneous gradient xi = (dL^1/dx, dL^2/dy).
template <typename Scalar>
Point<Scalar> eval_grad(const Game& game, const Point<Scalar>& p) {
  const Mat2<Scalar> g = loss_gradients(game, p);
  return g.diagonal();
}

/// Game Hessian, the Jacobian of eval_grad. On the sigma circle of
/// MarketMSigma the outer branch is used.
template <typename Scalar>
Mat2<Scalar> eval_hessian(const Game& game, const Point<Scalar>& p) {
  const Scalar x = p(0);
  const Scalar y = p(1);
  Mat2<Scalar> h;
  switch (game.kind()) {
    case GameKind::MarketM:
    case GameKind::MarketMSigma: {
      const Mat2<Scalar> q = detail::quartic_coupling_hess(x, y);
      Mat2<Scalar> f = Mat2<Scalar>::Zero();
      Scalar self_x = 5 * std::pow(x, 4) - 1;
      Scalar self_y = 5 * std::pow(y, 4) - 1;
      if (game.kind() == GameKind::MarketMSigma) {
        self_x = 5 * std::pow(x, 4) - 2;
        self_y = 5 * std::pow(y, 4);
        f = detail::deformation_hess(game, x, y);
      }
      // row 1 differentiates dL^1/dx, row 2 differentiates dL^2/dy
      h(0, 0) = self_x + f(0, 0) + q(0, 0);
      h(0, 1) = f(0, 1) + 1 + q(0, 1);
      h(1, 0) = -f(1, 0) - 1 - q(1, 0);
      h(1, 1) = self_y - f(1, 1) - q(1, 1);
      return h;
    }
    case GameKind::ZeroSumN:
      h << -1 + 3 * x * x, 1, -1, -1 + 3 * y * y;
      return h;
    case GameKind::ConvexQuad:
      h << 1, 1, -1, 1;
      return h;
  }
  return Mat2<Scalar>::Zero();
}

template <typename Scalar>
GameEval<Scalar> evaluate(const Game& game, const Point<Scalar>& p) {
  const Point<Scalar> l = eval_losses(game, p);
  return {l(0), l(1), eval_grad(game, p), eval_hessian(game, p)};
}

/// Central-difference oracle for eval_grad: player i's own loss
/// differenced along its own coordinate.
template <typename Scalar>
Point<Scalar> fd_grad(const Game& game, const Point<Scalar>& p, Scalar h) {
  Point<Scalar> g;
  for (int i = 0; i < 2; ++i) {
    Point<Scalar> e = Point<Scalar>::Zero();
    e(i) = h;
    g(i) = (eval_losses(game, Point<Scalar>(p + e))(i) -
            eval_losses(game, Point<Scalar>(p - e))(i)) /
           (2 * h);
  }
  return g;
}

/// Central-difference oracle for loss_gradients (all four partials).
template <typename Scalar>
Mat2<Scalar> fd_loss_gradients(const Game& game, const Point<Scalar>& p, Scalar h) {
  Mat2<Scalar> g;
  for (int i = 0; i < 2; ++i) {
    Point<Scalar> e = Point<Scalar>::Zero();
    e(i) = h;
    g.row(i) = ((eval_losses(game, Point<Scalar>(p + e)) -
                 eval_losses(game, Point<Scalar>(p - e))) /
                (2 * h))
                   .transpose();
  }
  return g;
}

/// Central-difference Jacobian of eval_grad.
template <typename Scalar>
Mat2<Scalar> fd_hessian(const Game& game, const Point<Scalar>& p, Scalar h) {
  Mat2<Scalar> m;
  for (int j = 0; j < 2; ++j) {
    Point<Scalar> e = Point<Scalar>::Zero();
    e(j) = h;
    m.col(j) = (eval_grad(game, Point<Scalar>(p + e)) -
                eval_grad(game, Point<Scalar>(p - e))) /
               (2 * h);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Decompositions and spectral predicates
// ---------------------------------------------------------------------------

template <typename Scalar>
struct SymAntisym {
  Mat2<Scalar> sym;
  Mat2<Scalar> antisym;
};

template <typename Scalar>
struct BlockSplit {
  Mat2<Scalar> diag;  // H_d, the per-player diagonal blocks
  Mat2<Scalar> off;   // H_o, the interaction blocks
};

/// m = S + A with S symmetric and A antisymmetric.
template <typename Derived>
SymAntisym<typename Derived::Scalar> decompose_sym_antisym(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Mat2<Scalar> s = (m + m.transpose()) / Scalar(2);
  Mat2<Scalar> a = (m - m.transpose()) / Scalar(2);
  return {s, a};
}

/// m = H_d + H_o. With one parameter per player the blocks are scalars.
template <typename Derived>
BlockSplit<typename Derived::Scalar> decompose_blocks(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Mat2<Scalar> d = Mat2<Scalar>::Zero();
  d.diagonal() = m.diagonal();
  Mat2<Scalar> o = m;
  o.diagonal().setZero();
  return {d, o};
}

template <typename Scalar>
struct RealSpectrum {
  Scalar min;
  Scalar max;
};

/// Smallest and largest real part of the eigenvalues of a 2x2 matrix,
/// from the trace/determinant closed form.
template <typename Derived>
RealSpectrum<typename Derived::Scalar> real_spectrum(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  const Scalar tr = m.trace();
  const Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Scalar disc = tr * tr - 4 * det;
  if (disc < 0) return {tr / 2, tr / 2};
  const Scalar r = sqrt(disc);
  return {(tr - r) / 2, (tr + r) / 2};
}

// Sign tests equivalent to max Re(spec) < 0 and min Re(spec) < 0 for 2x2
// matrices: both roots of t^2 - tr t + det have negative real part iff
// tr < 0 and det > 0; some root does iff tr < 0 or det < 0.
template <typename Derived>
bool max_real_part_negative(const Eigen::MatrixBase<Derived>& m) {
  const auto det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m.trace() < 0 && det > 0;
}

template <typename Derived>
bool min_real_part_negative(const Eigen::MatrixBase<Derived>& m) {
  const auto det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m.trace() < 0 || det < 0;
}

/// u^T m u < 0 for all u != 0, decided on the symmetric part.
template <typename Derived>
bool is_negative_definite(const Eigen::MatrixBase<Derived>& m) {
  return max_real_part_negative(decompose_sym_antisym(m).sym);
}

/// u^T m u > 0 for all u != 0, decided on the symmetric part.
template <typename Derived>
bool is_positive_definite(const Eigen::MatrixBase<Derived>& m) {
  return max_real_part_negative(-decompose_sym_antisym(m).sym);
}

struct DefinitenessReport {
  bool neg_definite;        // H < 0
  bool max_re_spec_H_neg;   // max Re spec(H) < 0
  bool min_re_spec_H_neg;   // min Re spec(H) < 0
  bool max_re_spec_Hd_neg;  // max Re spec(H_d) < 0
  bool min_re_spec_Hd_neg;  // min Re spec(H_d) < 0
  bool min_spec_S_neg;      // min spec(S) < 0

  friend bool operator==(const DefinitenessReport&, const DefinitenessReport&) = default;
};

template <typename Derived>
DefinitenessReport classify_definiteness(const Eigen::MatrixBase<Derived>& m) {
  const auto s = decompose_sym_antisym(m).sym;
  const auto d = decompose_blocks(m).diag;
  return {max_real_part_negative(s), max_real_part_negative(m), min_real_part_negative(m),
          max_real_part_negative(d), min_real_part_negative(d), min_real_part_negative(s)};
}

/// True when every edge of the implication diagram between the six
/// predicates holds for r.
inline bool implications_hold(const DefinitenessReport& r) {
  auto implies = [](bool a, bool b) { return !a || b; };
  return implies(r.neg_definite, r.max_re_spec_H_neg) &&
         implies(r.neg_definite, r.max_re_spec_Hd_neg) &&
         implies(r.max_re_spec_H_neg, r.min_re_spec_H_neg) &&
         implies(r.max_re_spec_H_neg, r.min_re_spec_Hd_neg) &&
         implies(r.max_re_spec_Hd_neg, r.min_re_spec_Hd_neg) &&
         implies(r.max_re_spec_Hd_neg, r.min_re_spec_H_neg) &&
         implies(r.min_re_spec_H_neg, r.min_spec_S_neg) &&
         implies(r.min_re_spec_Hd_neg, r.min_spec_S_neg);
}

enum class CriticalClass { NotCritical, StrictMin, StrictMax, Other };

inline const char* to_string(CriticalClass c) {
  switch (c) {
    case CriticalClass::NotCritical: return "not_critical";
    case CriticalClass::StrictMin: return "strict_min";
    case CriticalClass::StrictMax: return "strict_max";
    case CriticalClass::Other: return "other";
  }
  return "?";
}

template <typename Scalar>
CriticalClass classify_critical_point(const Game& game, const Point<Scalar>& p, Scalar tol) {
  if (!(eval_grad(game, p).norm() < tol)) return CriticalClass::NotCritical;
  const Mat2<Scalar> h = eval_hessian(game, p);
  if (is_negative_definite(h)) return CriticalClass::StrictMax;
  if (is_positive_definite(h)) return CriticalClass::StrictMin;
  return CriticalClass::Other;
}

}  // namespace gdl

#endif  // GDL_GAME_HPP
