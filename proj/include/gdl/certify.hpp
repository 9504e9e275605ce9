// Exact polynomial algebra for certifying that a game has a unique real
// critical point: Euclidean division, square-free parts, Sturm sequences,
// real-root counting and isolation, and Sylvester resultants over Q[x].
//
// Coefficients are GMP rationals. Nothing on these paths touches floating
// point.

#ifndef GDL_CERTIFY_HPP
#define GDL_CERTIFY_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <json.hpp>

#include "gdl/game.hpp"

namespace gdl {

class DivisionByZeroPoly : public std::domain_error {
 public:
  DivisionByZeroPoly() : std::domain_error("polynomial division by zero") {}
};

class UnsupportedGame : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Univariate polynomial with rational coefficients, stored in ascending
/// degree order with no trailing zeros. The zero polynomial is empty.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<mpq_class> coeffs);
  RationalPoly(std::initializer_list<long> coeffs);

  static RationalPoly constant(const mpq_class& c);
  static RationalPoly monomial(const mpq_class& c, int degree);
  static RationalPoly x() { return monomial(1, 1); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }
  /// Coefficient of x^i, zero beyond the degree.
  mpq_class coeff(int i) const;
  const mpq_class& lead() const { return coeffs_.back(); }

  RationalPoly derivative() const;
  RationalPoly monic() const;
  mpq_class eval(const mpq_class& t) const;
  int sign_at(const mpq_class& t) const;
  double eval_double(double t) const;

  RationalPoly operator-() const;
  RationalPoly& operator+=(const RationalPoly& o);
  RationalPoly& operator-=(const RationalPoly& o);
  RationalPoly& operator*=(const mpq_class& c);
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(RationalPoly a, const mpq_class& c) { return a *= c; }
  friend RationalPoly operator*(const mpq_class& c, RationalPoly a) { return a *= c; }
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const;

 private:
  void trim();
  std::vector<mpq_class> coeffs_;
};

/// Polynomial in y whose coefficients are polynomials in x:
/// sum_k y_coeffs[k](x) * y^k.
class BiPoly {
 public:
  BiPoly() = default;
  explicit BiPoly(std::vector<RationalPoly> y_coeffs);

  static BiPoly x();
  static BiPoly y();
  static BiPoly constant(const mpq_class& c);

  int degree_y() const { return static_cast<int>(y_coeffs_.size()) - 1; }
  bool is_zero() const { return y_coeffs_.empty(); }
  const std::vector<RationalPoly>& y_coeffs() const { return y_coeffs_; }

  BiPoly& operator+=(const BiPoly& o);
  BiPoly& operator-=(const BiPoly& o);
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(const mpq_class& c, const BiPoly& a);

 private:
  void trim();
  std::vector<RationalPoly> y_coeffs_;
};

BiPoly pow(const BiPoly& base, int exponent);

struct RationalInterval {
  mpq_class lo;
  mpq_class hi;

  bool contains(const mpq_class& t) const { return lo < t && t < hi; }
};

/// p = q * quot + rem with deg rem < deg q. Throws DivisionByZeroPoly.
std::pair<RationalPoly, RationalPoly> poly_divrem(const RationalPoly& p, const RationalPoly& q);

/// Monic greatest common divisor; gcd(0, 0) = 0.
RationalPoly poly_gcd(RationalPoly a, RationalPoly b);

/// p / gcd(p, p'), monic.
RationalPoly squarefree(const RationalPoly& p);

/// p, p', then negated remainders until the remainder vanishes.
std::vector<RationalPoly> sturm_sequence(const RationalPoly& p);

/// Number of distinct real roots of p, over the whole line or inside the
/// open interval (lo, hi). Endpoints may themselves be roots.
int count_real_roots(const RationalPoly& p,
                     const std::optional<RationalInterval>& interval = std::nullopt);

/// Disjoint open intervals with non-root endpoints, each holding exactly one
/// real root of p, in increasing order.
std::vector<RationalInterval> isolate_roots(const RationalPoly& p);

/// Resultant of p and q with respect to y: the determinant of their
/// Sylvester matrix, computed by fraction-free elimination over Q[x].
RationalPoly sylvester_resultant_y(const BiPoly& p, const BiPoly& q);

/// The cleared polynomial form of xi = 0 for MarketM or ZeroSumN.
std::pair<BiPoly, BiPoly> critical_point_system(const Game& game);

struct CertReport {
  Game game;
  int resultant_degree;
  int squarefree_degree;
  int real_root_count;
  std::vector<RationalInterval> isolating_intervals;
  bool conclusion;
};

/// Eliminates y, counts the distinct real roots in x and isolates them.
/// Throws UnsupportedGame for games without a polynomial system.
CertReport certify_unique_critical(const Game& game);

nlohmann::json to_json(const CertReport& report);

}  // namespace gdl

#endif  // GDL_CERTIFY_HPP
