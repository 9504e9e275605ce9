#include "gdl/certify.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace gdl {

// ---------------------------------------------------------------------------
// RationalPoly
// ---------------------------------------------------------------------------

RationalPoly::RationalPoly(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

RationalPoly::RationalPoly(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

RationalPoly RationalPoly::constant(const mpq_class& c) { return RationalPoly(std::vector{c}); }

RationalPoly RationalPoly::monomial(const mpq_class& c, int degree) {
  std::vector<mpq_class> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return RationalPoly(std::move(v));
}

void RationalPoly::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

mpq_class RationalPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

RationalPoly RationalPoly::derivative() const {
  if (degree() < 1) return {};
  std::vector<mpq_class> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long>(i);
  return RationalPoly(std::move(d));
}

RationalPoly RationalPoly::monic() const {
  if (is_zero()) return {};
  RationalPoly out = *this;
  const mpq_class inv = 1 / lead();
  out *= inv;
  return out;
}

mpq_class RationalPoly::eval(const mpq_class& t) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

int RationalPoly::sign_at(const mpq_class& t) const { return sgn(eval(t)); }

double RationalPoly::eval_double(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + it->get_d();
  return acc;
}

RationalPoly RationalPoly::operator-() const {
  RationalPoly out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator*=(const mpq_class& c) {
  if (sgn(c) == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& v : coeffs_) v *= c;
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpq_class> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  mpq_class term;
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (sgn(a.coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      term = a.coeffs_[i] * b.coeffs_[j];
      out[i + j] += term;
    }
  }
  return RationalPoly(std::move(out));
}

std::string RationalPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const mpq_class& c = coeffs_[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    if (!first) os << (sgn(c) > 0 ? " + " : " - ");
    else if (sgn(c) < 0) os << "-";
    const mpq_class a = abs(c);
    if (a != 1 || i == 0) os << a.get_str();
    if (i > 0) os << (a != 1 ? "*x" : "x");
    if (i > 1) os << "^" << i;
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// BiPoly
// ---------------------------------------------------------------------------

BiPoly::BiPoly(std::vector<RationalPoly> y_coeffs) : y_coeffs_(std::move(y_coeffs)) { trim(); }

BiPoly BiPoly::x() { return BiPoly({RationalPoly::x()}); }
BiPoly BiPoly::y() { return BiPoly({RationalPoly{}, RationalPoly::constant(1)}); }
BiPoly BiPoly::constant(const mpq_class& c) { return BiPoly({RationalPoly::constant(c)}); }

void BiPoly::trim() {
  while (!y_coeffs_.empty() && y_coeffs_.back().is_zero()) y_coeffs_.pop_back();
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
  if (o.y_coeffs_.size() > y_coeffs_.size()) y_coeffs_.resize(o.y_coeffs_.size());
  for (std::size_t i = 0; i < o.y_coeffs_.size(); ++i) y_coeffs_[i] += o.y_coeffs_[i];
  trim();
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) {
  if (o.y_coeffs_.size() > y_coeffs_.size()) y_coeffs_.resize(o.y_coeffs_.size());
  for (std::size_t i = 0; i < o.y_coeffs_.size(); ++i) y_coeffs_[i] -= o.y_coeffs_[i];
  trim();
  return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<RationalPoly> out(a.y_coeffs_.size() + b.y_coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.y_coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.y_coeffs_.size(); ++j) {
      out[i + j] += a.y_coeffs_[i] * b.y_coeffs_[j];
    }
  }
  return BiPoly(std::move(out));
}

BiPoly operator*(const mpq_class& c, const BiPoly& a) { return BiPoly::constant(c) * a; }

BiPoly pow(const BiPoly& base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("pow: negative exponent");
  BiPoly out = BiPoly::constant(1);
  for (int i = 0; i < exponent; ++i) out = out * base;
  return out;
}

// ---------------------------------------------------------------------------
// Euclidean algorithms
// ---------------------------------------------------------------------------

std::pair<RationalPoly, RationalPoly> poly_divrem(const RationalPoly& p, const RationalPoly& q) {
  if (q.is_zero()) throw DivisionByZeroPoly();
  if (p.degree() < q.degree()) return {RationalPoly{}, p};

  std::vector<mpq_class> rem = p.coeffs();
  const int dq = q.degree();
  std::vector<mpq_class> quot(static_cast<std::size_t>(p.degree() - dq) + 1);
  const mpq_class inv_lead = 1 / q.lead();
  mpq_class term;
  for (int k = p.degree() - dq; k >= 0; --k) {
    const mpq_class c = rem[static_cast<std::size_t>(k + dq)] * inv_lead;
    quot[static_cast<std::size_t>(k)] = c;
    if (sgn(c) == 0) continue;
    for (int j = 0; j <= dq; ++j) {
      term = c * q.coeffs()[static_cast<std::size_t>(j)];
      rem[static_cast<std::size_t>(k + j)] -= term;
    }
  }
  rem.resize(static_cast<std::size_t>(dq));
  return {RationalPoly(std::move(quot)), RationalPoly(std::move(rem))};
}

RationalPoly poly_gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    RationalPoly r = poly_divrem(a, b).second.monic();
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

RationalPoly squarefree(const RationalPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("squarefree: zero polynomial");
  if (p.degree() == 0) return RationalPoly::constant(1);
  const RationalPoly g = poly_gcd(p, p.derivative());
  return poly_divrem(p, g).first.monic();
}

std::vector<RationalPoly> sturm_sequence(const RationalPoly& p) {
  std::vector<RationalPoly> seq{p};
  RationalPoly d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(std::move(d));
  for (;;) {
    RationalPoly r = poly_divrem(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return seq;
}

namespace {

// Sturm chain of the square-free part with every member scaled by a
// positive constant (its absolute leading coefficient is made 1), which
// leaves all sign patterns unchanged.
class SturmChain {
 public:
  explicit SturmChain(const RationalPoly& p) {
    const RationalPoly sf = squarefree(p);
    chain_.push_back(sf);
    RationalPoly d = sf.derivative();
    if (d.is_zero()) return;
    chain_.push_back(scaled(d));
    for (;;) {
      RationalPoly r = poly_divrem(chain_[chain_.size() - 2], chain_.back()).second;
      if (r.is_zero()) break;
      chain_.push_back(scaled(-r));
    }
  }

  const RationalPoly& base() const { return chain_.front(); }

  int variations_at(const mpq_class& t) const {
    return count_variations([&](const RationalPoly& q) { return q.sign_at(t); });
  }

  // Signs at -inf / +inf from leading terms.
  int variations_at_infinity(bool positive) const {
    return count_variations([&](const RationalPoly& q) {
      const int s = sgn(q.lead());
      return (positive || q.degree() % 2 == 0) ? s : -s;
    });
  }

  // Distinct roots in the open interval (lo, hi). V(lo) - V(hi) counts the
  // half-open (lo, hi], so a root at hi is removed.
  int count_open(const mpq_class& lo, const mpq_class& hi) const {
    if (!(lo < hi)) return 0;
    int n = variations_at(lo) - variations_at(hi);
    if (base().sign_at(hi) == 0) --n;
    return n;
  }

  int count_all() const { return variations_at_infinity(false) - variations_at_infinity(true); }

 private:
  static RationalPoly scaled(const RationalPoly& q) {
    const mpq_class s = 1 / abs(q.lead());
    return q * s;
  }

  int count_variations(const std::function<int(const RationalPoly&)>& sign_of) const {
    int last = 0;
    int changes = 0;
    for (const RationalPoly& q : chain_) {
      const int s = sign_of(q);
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  std::vector<RationalPoly> chain_;
};

// Every real root has absolute value below 1 + max |a_i / a_n|.
mpq_class cauchy_bound(const RationalPoly& p) {
  mpq_class m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max<mpq_class>(m, abs(p.coeff(i) / p.lead()));
  return m + 1;
}

void bisect(const SturmChain& chain, const mpq_class& lo, const mpq_class& hi,
            std::vector<RationalInterval>& out) {
  const int n = chain.count_open(lo, hi);
  if (n == 0) return;
  if (n == 1) {
    out.push_back({lo, hi});
    return;
  }
  // Split at the midpoint, nudged off any root so every endpoint stays a
  // non-root.
  const mpq_class width = hi - lo;
  mpq_class mid = (lo + hi) / 2;
  mpq_class nudge = width / 8;
  while (chain.base().sign_at(mid) == 0) {
    mid = (lo + hi) / 2 + nudge;
    nudge /= 2;
  }
  bisect(chain, lo, mid, out);
  bisect(chain, mid, hi, out);
}

}  // namespace

int count_real_roots(const RationalPoly& p, const std::optional<RationalInterval>& interval) {
  if (p.is_zero()) throw std::invalid_argument("count_real_roots: zero polynomial");
  if (p.degree() == 0) return 0;
  const SturmChain chain(p);
  if (interval) return chain.count_open(interval->lo, interval->hi);
  return chain.count_all();
}

std::vector<RationalInterval> isolate_roots(const RationalPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("isolate_roots: zero polynomial");
  std::vector<RationalInterval> out;
  if (p.degree() == 0) return out;
  const SturmChain chain(p);
  const mpq_class b = cauchy_bound(chain.base());
  bisect(chain, -b, b, out);
  return out;
}

// ---------------------------------------------------------------------------
// Resultants
// ---------------------------------------------------------------------------

RationalPoly sylvester_resultant_y(const BiPoly& p, const BiPoly& q) {
  if (p.is_zero() || q.is_zero()) {
    throw std::invalid_argument("sylvester_resultant_y: zero polynomial");
  }
  const int m = p.degree_y();
  const int n = q.degree_y();
  const int size = m + n;
  if (size == 0) return RationalPoly::constant(1);

  // Rows 0..n-1 carry shifted coefficients of p, rows n..n+m-1 those of q,
  // both from the highest power of y down.
  using Row = std::vector<RationalPoly>;
  std::vector<Row> a(static_cast<std::size_t>(size), Row(static_cast<std::size_t>(size)));
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k <= m; ++k) {
      a[r][static_cast<std::size_t>(r + k)] = p.y_coeffs()[static_cast<std::size_t>(m - k)];
    }
  }
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k <= n; ++k) {
      a[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + k)] =
          q.y_coeffs()[static_cast<std::size_t>(n - k)];
    }
  }

  // Bareiss: after step k every entry below/right of the pivot is a minor,
  // so the division by the previous pivot is exact.
  RationalPoly prev = RationalPoly::constant(1);
  bool negate = false;
  for (int k = 0; k + 1 < size; ++k) {
    if (a[k][k].is_zero()) {
      int swap_with = -1;
      for (int i = k + 1; i < size; ++i) {
        if (!a[i][k].is_zero()) {
          swap_with = i;
          break;
        }
      }
      if (swap_with < 0) return {};
      std::swap(a[k], a[static_cast<std::size_t>(swap_with)]);
      negate = !negate;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j) {
        RationalPoly num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        auto [quot, rem] = poly_divrem(num, prev);
        if (!rem.is_zero()) throw std::logic_error("bareiss: inexact division");
        a[i][j] = std::move(quot);
      }
      a[i][k] = RationalPoly{};
    }
    prev = a[k][k];
  }
  RationalPoly det = a[size - 1][size - 1];
  return negate ? -det : det;
}

std::pair<BiPoly, BiPoly> critical_point_system(const Game& game) {
  const BiPoly x = BiPoly::x();
  const BiPoly y = BiPoly::y();
  const BiPoly one = BiPoly::constant(1);
  auto c = [](long v) { return BiPoly::constant(v); };

  switch (game.kind()) {
    case GameKind::MarketM: {
      // Each component of xi multiplied through by its denominators.
      BiPoly p1 = c(2) * pow(one + pow(x, 2), 2) * (one + pow(y, 2)) * (pow(x, 5) - x + y) -
                  pow(y, 4) * x * (one + pow(y, 2)) - c(2) * pow(x, 3) * pow(one + pow(x, 2), 2);
      BiPoly p2 = c(2) * pow(one + pow(y, 2), 2) * (one + pow(x, 2)) * (pow(y, 5) - y - x) -
                  pow(x, 4) * y * (one + pow(x, 2)) - c(2) * pow(y, 3) * pow(one + pow(y, 2), 2);
      return {p1, p2};
    }
    case GameKind::ZeroSumN:
      return {y - x + pow(x, 3), c(0) - x - y + pow(y, 3)};
    default:
      throw UnsupportedGame("no polynomial critical-point system for game '" + game.name() + "'");
  }
}

CertReport certify_unique_critical(const Game& game) {
  const auto [p1, p2] = critical_point_system(game);
  const RationalPoly res = sylvester_resultant_y(p1, p2);
  if (res.is_zero()) throw std::logic_error("certify: resultant vanishes identically");
  const RationalPoly sf = squarefree(res);
  const int count = count_real_roots(sf);
  std::vector<RationalInterval> intervals = isolate_roots(sf);
  if (static_cast<int>(intervals.size()) != count) {
    throw std::logic_error("certify: root isolation disagrees with the Sturm count");
  }
  return CertReport{game, res.degree(), sf.degree(), count, std::move(intervals), count == 1};
}

nlohmann::json to_json(const CertReport& report) {
  nlohmann::json intervals = nlohmann::json::array();
  auto pair = [](const mpq_class& q) {
    return nlohmann::json::array({q.get_num().get_str(), q.get_den().get_str()});
  };
  for (const auto& iv : report.isolating_intervals) {
    intervals.push_back({{"lo", pair(iv.lo)}, {"hi", pair(iv.hi)}});
  }
  return {{"game", report.game.name()},
          {"resultant_degree", report.resultant_degree},
          {"squarefree_degree", report.squarefree_degree},
          {"real_root_count", report.real_root_count},
          {"isolating_intervals", intervals},
          {"conclusion", report.conclusion}};
}

}  // namespace gdl
