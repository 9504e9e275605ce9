// Gradient-based update rules for two-player games.
//
// Each algorithm is written as theta <- theta - alpha * G(theta), with G
// returned by g_vector(). The learning rate is shared by both players.

#ifndef GDL_ALGORITHMS_HPP
#define GDL_ALGORITHMS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "gdl/game.hpp"

namespace gdl {

enum class AlgoId { GD, AGD, EG, OMD, SGA, CO, CGD, LA, LOLA, SOS };

inline constexpr std::array<AlgoId, 10> kAllAlgorithms = {
    AlgoId::GD,  AlgoId::AGD, AlgoId::EG, AlgoId::OMD,  AlgoId::SGA,
    AlgoId::CO,  AlgoId::CGD, AlgoId::LA, AlgoId::LOLA, AlgoId::SOS};

inline const char* to_string(AlgoId a) {
  switch (a) {
    case AlgoId::GD: return "gd";
    case AlgoId::AGD: return "agd";
    case AlgoId::EG: return "eg";
    case AlgoId::OMD: return "omd";
    case AlgoId::SGA: return "sga";
    case AlgoId::CO: return "co";
    case AlgoId::CGD: return "cgd";
    case AlgoId::LA: return "la";
    case AlgoId::LOLA: return "lola";
    case AlgoId::SOS: return "sos";
  }
  return "?";
}

inline std::optional<AlgoId> parse_algo(std::string_view name) {
  for (AlgoId a : kAllAlgorithms) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

/// Raised when CGD's (I + alpha H_o) is numerically singular.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HyperParams {
  double alpha = 0.01;  // learning rate
  double gamma = 0.01;  // consensus-optimization coefficient
  double sos_a = 0.5;   // SOS alignment constant, in (0, 1)
  double sos_b = 0.1;   // SOS gradient-norm threshold

  void validate() const {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be > 0");
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
    if (!(sos_a > 0 && sos_a < 1)) throw std::invalid_argument("sos_a must lie in (0, 1)");
    if (!(sos_b > 0)) throw std::invalid_argument("sos_b must be > 0");
  }
};

/// Carried state. Only OMD reads it: prev is the previous iterate.
template <typename Scalar>
struct AlgoState {
  std::optional<Point<Scalar>> prev;
};

inline constexpr double kSingularDetTol = 1e-14;

namespace detail {

template <typename Scalar>
Scalar sign(Scalar v) {
  return static_cast<Scalar>((Scalar(0) < v) - (v < Scalar(0)));
}

// diag(H_o^T grad L): the per-player opponent-shaping term of LOLA and SOS.
template <typename Scalar>
Point<Scalar> shaping_term(const Game& game, const Point<Scalar>& p, const Mat2<Scalar>& h_o) {
  const Mat2<Scalar> grad_l = loss_gradients(game, p);
  return (h_o.transpose() * grad_l).diagonal();
}

}  // namespace detail

/// SGA alignment sign: sign(<xi, H^T xi> <A^T xi, H^T xi>), with sign(0) = 0.
template <typename Scalar>
Scalar sga_lambda(const Game& game, const Point<Scalar>& p) {
  const Point<Scalar> xi = eval_grad(game, p);
  const Mat2<Scalar> h = eval_hessian(game, p);
  const Mat2<Scalar> a = decompose_sym_antisym(h).antisym;
  const Point<Scalar> ht_xi = h.transpose() * xi;
  const Scalar first = xi.dot(ht_xi);
  const Scalar second = (a.transpose() * xi).dot(ht_xi);
  return detail::sign(first * second);
}

/// SOS interpolation weight p in [0, 1]; zero at critical points.
template <typename Scalar>
Scalar sos_p(const Game& game, const Point<Scalar>& p, const HyperParams& hp) {
  const Scalar alpha = static_cast<Scalar>(hp.alpha);
  const Point<Scalar> xi = eval_grad(game, p);
  const Mat2<Scalar> h_o = decompose_blocks(eval_hessian(game, p)).off;
  const Point<Scalar> xi0 = xi - alpha * (h_o * xi);
  const Point<Scalar> chi = -detail::shaping_term(game, p, h_o);

  const Scalar dot = xi0.dot(chi);
  Scalar p1 = 1;
  if (dot < 0) {
    using std::abs;
    p1 = std::min<Scalar>(1, static_cast<Scalar>(hp.sos_a) * xi0.squaredNorm() / abs(dot));
  }
  const Scalar n = xi.norm();
  const Scalar p2 = n < static_cast<Scalar>(hp.sos_b) ? n * n : Scalar(1);
  return std::min(p1, p2);
}

/// The update direction G, so that one step is p - alpha * G.
template <typename Scalar>
Point<Scalar> g_vector(const Game& game, AlgoId algo, const Point<Scalar>& p,
                       const AlgoState<Scalar>& state, const HyperParams& hp) {
  const Scalar alpha = static_cast<Scalar>(hp.alpha);
  const Mat2<Scalar> id = Mat2<Scalar>::Identity();
  switch (algo) {
    case AlgoId::GD:
      return eval_grad(game, p);
    case AlgoId::AGD: {
      const Scalar xi1 = eval_grad(game, p)(0);
      const Point<Scalar> moved(p(0) - alpha * xi1, p(1));
      return Point<Scalar>(xi1, eval_grad(game, moved)(1));
    }
    case AlgoId::EG: {
      const Point<Scalar> look = p - alpha * eval_grad(game, p);
      return eval_grad(game, look);
    }
    case AlgoId::OMD: {
      // First step: prev defaults to p, which makes it a GD step.
      const Point<Scalar> xi = eval_grad(game, p);
      if (!state.prev) return xi;
      return 2 * xi - eval_grad(game, *state.prev);
    }
    case AlgoId::SGA: {
      const Scalar lambda = sga_lambda(game, p);
      const Mat2<Scalar> a = decompose_sym_antisym(eval_hessian(game, p)).antisym;
      return (id + lambda * a.transpose()) * eval_grad(game, p);
    }
    case AlgoId::CO: {
      const Scalar gamma = static_cast<Scalar>(hp.gamma);
      return (id + gamma * eval_hessian(game, p).transpose()) * eval_grad(game, p);
    }
    case AlgoId::CGD: {
      const Mat2<Scalar> m = id + alpha * decompose_blocks(eval_hessian(game, p)).off;
      const Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
      using std::abs;
      if (abs(det) < static_cast<Scalar>(kSingularDetTol)) {
        throw SingularMatrixError("cgd: I + alpha*H_o is singular");
      }
      Mat2<Scalar> inv;
      inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
      return inv * eval_grad(game, p) / det;
    }
    case AlgoId::LA: {
      const Mat2<Scalar> h_o = decompose_blocks(eval_hessian(game, p)).off;
      return (id - alpha * h_o) * eval_grad(game, p);
    }
    case AlgoId::LOLA: {
      const Mat2<Scalar> h_o = decompose_blocks(eval_hessian(game, p)).off;
      return (id - alpha * h_o) * eval_grad(game, p) -
             alpha * detail::shaping_term(game, p, h_o);
    }
    case AlgoId::SOS: {
      const Mat2<Scalar> h_o = decompose_blocks(eval_hessian(game, p)).off;
      const Scalar weight = sos_p(game, p, hp);
      return (id - alpha * h_o) * eval_grad(game, p) -
             weight * alpha * detail::shaping_term(game, p, h_o);
    }
  }
  return Point<Scalar>::Zero();
}

/// One update p -> p - alpha * G. OMD's returned state remembers p.
template <typename Scalar>
std::pair<Point<Scalar>, AlgoState<Scalar>> step(const Game& game, AlgoId algo,
                                                 const Point<Scalar>& p,
                                                 const AlgoState<Scalar>& state,
                                                 const HyperParams& hp) {
  const Point<Scalar> next =
      p - static_cast<Scalar>(hp.alpha) * g_vector(game, algo, p, state, hp);
  AlgoState<Scalar> out = state;
  if (algo == AlgoId::OMD) out.prev = p;
  return {next, out};
}

/// Central-difference Jacobian of G at p. OMD is probed with prev equal to
/// the evaluation point.
template <typename Scalar>
Mat2<Scalar> update_jacobian_fd(const Game& game, AlgoId algo, const Point<Scalar>& p,
                                const HyperParams& hp, Scalar h) {
  auto g_at = [&](const Point<Scalar>& q) {
    AlgoState<Scalar> st;
    st.prev = q;
    return g_vector(game, algo, q, st, hp);
  };
  Mat2<Scalar> jac;
  for (int j = 0; j < 2; ++j) {
    Point<Scalar> e = Point<Scalar>::Zero();
    e(j) = h;
    jac.col(j) = (g_at(p + e) - g_at(p - e)) / (2 * h);
  }
  return jac;
}

}  // namespace gdl

#endif  // GDL_ALGORITHMS_HPP
