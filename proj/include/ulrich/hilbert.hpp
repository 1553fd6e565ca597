#pragma once

#include <algorithm>
#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ulrich/ring.hpp"

namespace ulrich {

using Rational = boost::rational<std::int64_t>;

/// Polynomial in one variable t with rational coefficients; c[i] is the
/// coefficient of t^i and the leading coefficient is nonzero.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
  static QPoly constant(Rational v) { return QPoly({v}); }
  static QPoly t() { return QPoly({Rational(0), Rational(1)}); }
  /// (t + a)
  static QPoly linear(Rational a) { return QPoly({a, Rational(1)}); }

  const std::vector<Rational>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
  Rational coefficient(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Rational(0);
  }

  Rational operator()(Rational x) const {
    Rational r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  QPoly operator+(const QPoly& o) const {
    std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return QPoly(std::move(r));
  }
  QPoly operator-(const QPoly& o) const { return *this + o * Rational(-1); }
  QPoly operator*(const QPoly& o) const {
    if (is_zero() || o.is_zero()) return QPoly();
    std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return QPoly(std::move(r));
  }
  QPoly operator*(Rational s) const {
    std::vector<Rational> r = c_;
    for (auto& v : r) v *= s;
    return QPoly(std::move(r));
  }
  QPoly operator/(Rational s) const { return *this * (Rational(1) / s); }

  /// p(t + a)
  QPoly shifted(Rational a) const {
    QPoly r;
    QPoly lin = linear(a);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * lin + constant(*it);
    return r;
  }

  /// Human-readable form, e.g. "3/4*t^4 + 9/2*t^3 - t + 6".
  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      Rational v = c_[i];
      if (v == Rational(0)) continue;
      bool neg = v < Rational(0);
      Rational a = neg ? -v : v;
      if (s.empty()) {
        if (neg) s += "-";
      } else {
        s += neg ? " - " : " + ";
      }
      std::string num = std::to_string(a.numerator());
      if (a.denominator() != 1) num += "/" + std::to_string(a.denominator());
      if (i == 0) {
        s += num;
      } else {
        if (a != Rational(1)) s += num + "*";
        s += "t";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }
  friend std::ostream& operator<<(std::ostream& os, const QPoly& p) { return os << p.to_string(); }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Rational(0)) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Binomial coefficient C(m, k) for m possibly negative, 0 when m < k.
inline std::int64_t binomial(std::int64_t m, int k) {
  if (k < 0 || m < k) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

/// Hilbert series N(s) / (1 - s)^n of a graded module over a standard
/// graded polynomial ring in n variables; N is a Laurent polynomial with
/// integer coefficients.
class HilbertSeries {
 public:
  HilbertSeries() = default;
  HilbertSeries(int nvars, std::map<int, std::int64_t> numerator) : n_(nvars), num_(std::move(numerator)) {
    normalize();
  }

  int nvars() const { return n_; }
  const std::map<int, std::int64_t>& numerator() const { return num_; }
  bool is_zero() const { return num_.empty(); }

  /// Dimension of the degree-d part.
  std::int64_t operator()(int d) const {
    std::int64_t s = 0;
    for (auto [k, v] : num_) s += v * binomial(static_cast<std::int64_t>(d) - k + n_ - 1, n_ - 1);
    return s;
  }

  HilbertSeries operator+(const HilbertSeries& o) const {
    check(o);
    auto r = num_;
    for (auto [k, v] : o.num_) r[k] += v;
    return HilbertSeries(std::max(n_, o.n_), std::move(r));
  }
  HilbertSeries operator-(const HilbertSeries& o) const {
    check(o);
    auto r = num_;
    for (auto [k, v] : o.num_) r[k] -= v;
    return HilbertSeries(std::max(n_, o.n_), std::move(r));
  }
  /// Multiplication by s^k (the module with generators moved up by k).
  HilbertSeries shifted(int k) const {
    std::map<int, std::int64_t> r;
    for (auto [e, v] : num_) r[e + k] = v;
    return HilbertSeries(n_, std::move(r));
  }

  /// Number of factors (1 - s) dividing the numerator, and the quotient.
  std::pair<int, std::map<int, std::int64_t>> reduced() const {
    std::map<int, std::int64_t> q = num_;
    int c = 0;
    while (!q.empty() && c < n_) {
      std::int64_t at1 = 0;
      for (auto [k, v] : q) at1 += v;
      if (at1 != 0) break;
      // synthetic division by (1 - s)
      std::map<int, std::int64_t> out;
      std::int64_t run = 0;
      int lo = q.begin()->first, hi = q.rbegin()->first;
      for (int k = lo; k < hi; ++k) {
        auto it = q.find(k);
        run += it == q.end() ? 0 : it->second;
        if (run) out[k] = run;
      }
      q.swap(out);
      ++c;
    }
    return {c, q};
  }

  /// Krull dimension of the module (0 for the zero module).
  int krull_dimension() const {
    if (num_.empty()) return 0;
    return n_ - reduced().first;
  }
  /// Multiplicity: the reduced numerator at s = 1.
  std::int64_t multiplicity() const {
    std::int64_t s = 0;
    for (auto [k, v] : reduced().second) s += v;
    return s;
  }

  /// Hilbert polynomial: sum_k N_k * C(t - k + n - 1, n - 1).
  QPoly polynomial() const {
    QPoly r;
    Rational fact(1);
    for (int i = 2; i <= n_ - 1; ++i) fact *= i;
    for (auto [k, v] : num_) {
      QPoly b = QPoly::constant(Rational(1));
      for (int i = 1; i <= n_ - 1; ++i) b = b * QPoly::linear(Rational(i - k));
      r = r + b * (Rational(v) / fact);
    }
    return r;
  }

  std::string to_string() const {
    std::string s;
    for (auto [k, v] : num_) {
      if (!s.empty()) s += " ";
      s += std::to_string(v) + "*s^" + std::to_string(k);
    }
    return "(" + (s.empty() ? std::string("0") : s) + ")/(1-s)^" + std::to_string(n_);
  }

  friend bool operator==(const HilbertSeries& a, const HilbertSeries& b) {
    return a.n_ == b.n_ && a.num_ == b.num_;
  }

 private:
  void check(const HilbertSeries& o) const {
    if (n_ != o.n_ && !num_.empty() && !o.num_.empty()) throw RingMismatch("Hilbert series arity mismatch");
  }
  void normalize() {
    for (auto it = num_.begin(); it != num_.end();) {
      if (it->second == 0) it = num_.erase(it);
      else ++it;
    }
  }
  int n_ = 0;
  std::map<int, std::int64_t> num_;
};

namespace detail {

using IntPoly = std::vector<std::int64_t>;

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  IntPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}
inline void poly_add_shifted(IntPoly& a, const IntPoly& b, int shift) {
  if (a.size() < b.size() + shift) a.resize(b.size() + shift, 0);
  for (std::size_t j = 0; j < b.size(); ++j) a[j + shift] += b[j];
}

inline void minimalize(std::vector<Monomial>& g) {
  std::sort(g.begin(), g.end(), [](Monomial a, Monomial b) {
    int da = a.total_degree(), db = b.total_degree();
    return da != db ? da < db : a.bits < b.bits;
  });
  g.erase(std::unique(g.begin(), g.end()), g.end());
  std::vector<Monomial> out;
  for (Monomial m : g) {
    bool red = false;
    for (Monomial k : out) {
      if (k.divides(m)) {
        red = true;
        break;
      }
    }
    if (!red) out.push_back(m);
  }
  g.swap(out);
}

/// Numerator of the Hilbert series of k[x]/J for a monomial ideal J,
/// by pivot recursion.
inline IntPoly monomial_numerator(std::vector<Monomial> gens, const Ring& R) {
  minimalize(gens);
  auto wdeg = [&](Monomial m) { return R.degree(m); };
  if (gens.empty()) return {1};
  bool coprime = true;
  for (std::size_t i = 0; i < gens.size() && coprime; ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!gens[i].coprime(gens[j])) {
        coprime = false;
        break;
      }
    }
  }
  if (coprime) {
    IntPoly r{1};
    for (Monomial m : gens) {
      IntPoly f(wdeg(m) + 1, 0);
      f[0] = 1;
      f[wdeg(m)] -= 1;
      r = poly_mul(r, f);
    }
    return r;
  }
  int n = R.nvars();
  std::vector<int> count(n, 0);
  for (Monomial m : gens) {
    int support = 0;
    for (int v = 0; v < n; ++v) support += m.exponent(v) > 0;
    if (support < 2) continue;
    for (int v = 0; v < n; ++v) count[v] += m.exponent(v) > 0;
  }
  int x = static_cast<int>(std::max_element(count.begin(), count.end()) - count.begin());
  std::vector<int> exps;
  for (Monomial m : gens) {
    int support = 0;
    for (int v = 0; v < n; ++v) support += m.exponent(v) > 0;
    if (support >= 2 && m.exponent(x) > 0) exps.push_back(m.exponent(x));
  }
  std::sort(exps.begin(), exps.end());
  int e = exps[exps.size() / 2];
  Monomial p = Monomial::variable(x, e);
  std::vector<Monomial> sum, quot;
  for (Monomial m : gens) {
    if (!p.divides(m)) sum.push_back(m);
    quot.push_back(p.gcd(m).quotient_of(m));
  }
  sum.push_back(p);
  IntPoly r = monomial_numerator(std::move(sum), R);
  IntPoly q = monomial_numerator(std::move(quot), R);
  poly_add_shifted(r, q, wdeg(p));
  return r;
}

}  // namespace detail

/// Hilbert series of F / U where F has generator degrees `shifts` and U
/// has the given leading terms (monomial, component).
inline HilbertSeries hilbert_series_from_leading_terms(const Ring& R, const std::vector<int>& shifts,
                                                       const std::vector<std::pair<Monomial, int>>& leads) {
  if (!R.is_standard_graded()) throw InvalidArgument("Hilbert series needs a standard graded ring");
  std::vector<std::vector<Monomial>> per(shifts.size());
  for (auto& [m, c] : leads) per[c].push_back(m);
  std::map<int, std::int64_t> num;
  for (std::size_t c = 0; c < shifts.size(); ++c) {
    detail::IntPoly p = detail::monomial_numerator(per[c], R);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k]) num[static_cast<int>(k) + shifts[c]] += p[k];
    }
  }
  return HilbertSeries(R.nvars(), std::move(num));
}

}  // namespace ulrich
