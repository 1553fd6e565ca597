#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ulrich/ring.hpp"

namespace ulrich {

/// Sparse polynomial: terms strictly decreasing in the ring's monomial
/// order, no zero coefficients.
class Polynomial {
 public:
  struct Term {
    Monomial mono;
    Coeff coef;
  };

  Polynomial() = default;
  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

  static Polynomial constant(RingPtr ring, std::int64_t c) {
    Polynomial p(ring);
    Coeff v = p.ring_->field().from_int(c);
    if (v) p.terms_.push_back({Monomial{}, v});
    return p;
  }
  static Polynomial variable(RingPtr ring, int i) {
    if (i < 0 || i >= ring->nvars()) throw InvalidArgument("variable index out of range");
    Polynomial p(ring);
    p.terms_.push_back({Monomial::variable(i), 1});
    return p;
  }
  static Polynomial monomial(RingPtr ring, Monomial m, Coeff c = 1) {
    Polynomial p(ring);
    c %= p.ring_->field().modulus();
    if (c) p.terms_.push_back({m, c});
    return p;
  }
  /// Builds from unsorted terms, combining duplicates.
  static Polynomial from_terms(RingPtr ring, std::vector<Term> terms) {
    Polynomial p(ring);
    const Ring& R = *p.ring_;
    std::sort(terms.begin(), terms.end(),
              [&](const Term& a, const Term& b) { return R.compare(a.mono, b.mono) > 0; });
    for (const Term& t : terms) {
      Coeff c = t.coef % R.field().modulus();
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coef = R.field().add(p.terms_.back().coef, c);
        if (p.terms_.back().coef == 0) p.terms_.pop_back();
      } else if (c) {
        p.terms_.push_back({t.mono, c});
      }
    }
    return p;
  }
  /// Trusts that `terms` is already sorted and normalized.
  static Polynomial from_sorted_terms(RingPtr ring, std::vector<Term> terms) {
    Polynomial p(std::move(ring));
    p.terms_ = std::move(terms);
    return p;
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Term& leading_term() const { return terms_.front(); }
  Monomial leading_monomial() const { return terms_.front().mono; }
  Coeff leading_coefficient() const { return terms_.front().coef; }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Coeff constant_term() const {
    return (!terms_.empty() && terms_.back().mono.is_one()) ? terms_.back().coef : 0;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = ring_->degree(terms_[0].mono);
    for (const Term& t : terms_) {
      if (ring_->degree(t.mono) != d) return false;
    }
    return true;
  }
  /// Degree if homogeneous and nonzero, nullopt otherwise.
  std::optional<int> homogeneous_degree() const {
    if (terms_.empty() || !is_homogeneous()) return std::nullopt;
    return ring_->degree(terms_[0].mono);
  }
  /// Largest degree of a term; -1 for zero.
  int degree() const {
    int d = -1;
    for (const Term& t : terms_) d = std::max(d, ring_->degree(t.mono));
    return d;
  }

  Polynomial operator+(const Polynomial& o) const { return combine(o, false); }
  Polynomial operator-(const Polynomial& o) const { return combine(o, true); }
  Polynomial operator-() const { return scale(ring_->field().neg(1)); }
  Polynomial operator*(const Polynomial& o) const {
    require_same_ring(ring_, o.ring_);
    if (is_zero() || o.is_zero()) return Polynomial(ring_);
    const PrimeField& F = ring_->field();
    std::vector<Term> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const Term& a : terms_) {
      for (const Term& b : o.terms_) prod.push_back({a.mono * b.mono, F.mul(a.coef, b.coef)});
    }
    return from_terms(ring_, std::move(prod));
  }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scale(Coeff c) const {
    const PrimeField& F = ring_->field();
    c %= F.modulus();
    Polynomial r(ring_);
    if (c == 0) return r;
    r.terms_ = terms_;
    for (Term& t : r.terms_) t.coef = F.mul(t.coef, c);
    return r;
  }
  /// Multiplication by a monomial preserves the term order.
  Polynomial mul_monomial(Monomial m, Coeff c = 1) const {
    const PrimeField& F = ring_->field();
    Polynomial r(ring_);
    if (c % F.modulus() == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) r.terms_.push_back({t.mono * m, F.mul(t.coef, c)});
    return r;
  }
  Polynomial pow(unsigned e) const {
    Polynomial r = constant(ring_, 1), b = *this;
    while (e) {
      if (e & 1) r = r * b;
      e >>= 1;
      if (e) b = b * b;
    }
    return r;
  }

  Coeff evaluate(std::span<const Coeff> point) const {
    if (static_cast<int>(point.size()) != ring_->nvars()) {
      throw InvalidArgument("evaluation point has wrong length");
    }
    const PrimeField& F = ring_->field();
    Coeff s = 0;
    for (const Term& t : terms_) {
      Coeff v = t.coef;
      for (int i = 0; i < ring_->nvars(); ++i) {
        int e = t.mono.exponent(i);
        if (e) v = F.mul(v, F.pow(point[i] % F.modulus(), e));
      }
      s = F.add(s, v);
    }
    return s;
  }

  Polynomial derivative(int i) const {
    const PrimeField& F = ring_->field();
    std::vector<Term> out;
    for (const Term& t : terms_) {
      int e = t.mono.exponent(i);
      if (e == 0) continue;
      Coeff c = F.mul(t.coef, F.from_int(e));
      if (c) out.push_back({Monomial{t.mono.bits - Monomial::variable(i).bits}, c});
    }
    return from_terms(ring_, std::move(out));
  }

  /// Ring map x_i -> images[i] into the ring of the images.
  Polynomial substitute(const std::vector<Polynomial>& images, RingPtr target) const {
    if (static_cast<int>(images.size()) != ring_->nvars()) {
      throw InvalidArgument("substitution needs one image per variable");
    }
    Polynomial r(target);
    for (const Term& t : terms_) {
      Polynomial m = constant(target, t.coef);
      for (int i = 0; i < ring_->nvars(); ++i) {
        int e = t.mono.exponent(i);
        if (e) m = m * images[i].pow(e);
      }
      r += m;
    }
    return r;
  }

  /// Re-sorts the same terms in another ring of the same arity and field.
  Polynomial in_ring(RingPtr target) const {
    if (target->nvars() < ring_->nvars() || !(target->field() == ring_->field())) {
      throw RingMismatch("cannot move polynomial to target ring");
    }
    return from_terms(target, terms_);
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      if (k) s += " + ";
      const Term& t = terms_[k];
      std::string mono;
      for (int i = 0; i < ring_->nvars(); ++i) {
        int e = t.mono.exponent(i);
        if (!e) continue;
        if (!mono.empty()) mono += "*";
        mono += ring_->variable_name(i);
        if (e > 1) mono += "^" + std::to_string(e);
      }
      if (mono.empty()) {
        s += std::to_string(t.coef);
      } else if (t.coef == 1) {
        s += mono;
      } else {
        s += std::to_string(t.coef) + "*" + mono;
      }
    }
    return s;
  }

  static Polynomial parse(RingPtr ring, std::string_view text);

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coef != b.terms_[i].coef) return false;
    }
    return true;
  }

 private:
  Polynomial combine(const Polynomial& o, bool subtract) const {
    require_same_ring(ring_, o.ring_);
    const Ring& R = *ring_;
    const PrimeField& F = R.field();
    Polynomial r(ring_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      int c;
      if (i == terms_.size()) c = -1;
      else if (j == o.terms_.size()) c = 1;
      else c = R.compare(terms_[i].mono, o.terms_[j].mono);
      if (c > 0) {
        r.terms_.push_back(terms_[i++]);
      } else if (c < 0) {
        Coeff v = subtract ? F.neg(o.terms_[j].coef) : o.terms_[j].coef;
        r.terms_.push_back({o.terms_[j++].mono, v});
      } else {
        Coeff v = subtract ? F.sub(terms_[i].coef, o.terms_[j].coef)
                           : F.add(terms_[i].coef, o.terms_[j].coef);
        if (v) r.terms_.push_back({terms_[i].mono, v});
        ++i;
        ++j;
      }
    }
    return r;
  }

  RingPtr ring_;
  std::vector<Term> terms_;
};

namespace detail {

class PolyParser {
 public:
  PolyParser(const RingPtr& ring, std::string_view s) : ring_(ring), s_(s) {}

  Polynomial run() {
    std::vector<Polynomial::Term> terms;
    const PrimeField& F = ring_->field();
    skip();
    bool first = true;
    while (true) {
      skip();
      bool neg = false;
      if (peek() == '+' || peek() == '-') {
        neg = get() == '-';
      } else if (!first) {
        break;
      }
      first = false;
      auto [m, c] = term();
      terms.push_back({m, neg ? F.neg(c) : c});
      skip();
      if (pos_ >= s_.size()) break;
      if (peek() != '+' && peek() != '-') fail("expected '+' or '-'");
    }
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return Polynomial::from_terms(ring_, std::move(terms));
  }

 private:
  std::pair<Monomial, Coeff> term() {
    const PrimeField& F = ring_->field();
    Coeff c = 1;
    std::vector<int> exps(ring_->nvars(), 0);
    bool any = false;
    while (true) {
      skip();
      char ch = peek();
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        c = F.mul(c, F.from_int(static_cast<std::int64_t>(number() % F.modulus())));
      } else if (ch == 'x') {
        ++pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected variable index");
        std::uint64_t v = number();
        if (v >= static_cast<std::uint64_t>(ring_->nvars())) fail("variable index out of range");
        int e = 1;
        skip();
        if (peek() == '^') {
          ++pos_;
          skip();
          if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected exponent");
          std::uint64_t ev = number();
          if (ev > static_cast<std::uint64_t>(kMaxExponent)) fail("exponent too large");
          e = static_cast<int>(ev);
        }
        exps[v] += e;
        if (exps[v] > kMaxExponent) fail("exponent too large");
      } else {
        fail("expected coefficient or variable");
      }
      any = true;
      skip();
      if (peek() == '*') {
        ++pos_;
        continue;
      }
      char nx = peek();
      if (nx == 'x' || std::isdigit(static_cast<unsigned char>(nx))) continue;
      break;
    }
    if (!any) fail("empty term");
    return {Monomial::from_exponents(exps), c};
  }

  std::uint64_t number() {
    std::uint64_t v = 0;
    bool any = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(s_[pos_++] - '0');
      if (v > (1ULL << 62)) fail("number too large");
      any = true;
    }
    if (!any) fail("expected number");
    return v;
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return s_[pos_++]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  const RingPtr& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial Polynomial::parse(RingPtr ring, std::string_view text) {
  return detail::PolyParser(ring, text).run();
}

}  // namespace ulrich
