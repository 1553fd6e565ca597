#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ulrich/error.hpp"
#include "ulrich/field.hpp"

namespace ulrich {

inline constexpr int kMaxVars = 8;
inline constexpr int kMaxExponent = 127;

/// A monomial with up to eight variables packed one byte per exponent,
/// variable i in byte i. Exponents must stay below 128 so that
/// divisibility can be tested with guard bits.
struct Monomial {
  std::uint64_t bits = 0;

  static constexpr std::uint64_t kGuard = 0x8080808080808080ULL;

  static Monomial from_exponents(std::span<const int> e) {
    if (static_cast<int>(e.size()) > kMaxVars) throw InvalidArgument("too many variables");
    Monomial m;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 0 || e[i] > kMaxExponent) throw InvalidArgument("exponent out of range");
      m.bits |= static_cast<std::uint64_t>(e[i]) << (8 * i);
    }
    return m;
  }
  static Monomial variable(int i, int power = 1) {
    Monomial m;
    m.bits = static_cast<std::uint64_t>(power) << (8 * i);
    return m;
  }

  int exponent(int i) const { return static_cast<int>((bits >> (8 * i)) & 0xff); }
  int total_degree() const {
    std::uint64_t b = bits;
    int s = 0;
    while (b) {
      s += static_cast<int>(b & 0xff);
      b >>= 8;
    }
    return s;
  }
  bool is_one() const { return bits == 0; }

  /// Product; caller guarantees exponents stay below 128.
  Monomial operator*(Monomial o) const { return Monomial{bits + o.bits}; }
  bool divides(Monomial o) const { return (((o.bits | kGuard) - bits) & kGuard) == kGuard; }
  /// Quotient o / *this; requires divides(o).
  Monomial quotient_of(Monomial o) const { return Monomial{o.bits - bits}; }

  Monomial lcm(Monomial o) const {
    std::uint64_t r = 0;
    for (int i = 0; i < kMaxVars; ++i) {
      std::uint64_t a = (bits >> (8 * i)) & 0xff, b = (o.bits >> (8 * i)) & 0xff;
      r |= (a > b ? a : b) << (8 * i);
    }
    return Monomial{r};
  }
  Monomial gcd(Monomial o) const {
    std::uint64_t r = 0;
    for (int i = 0; i < kMaxVars; ++i) {
      std::uint64_t a = (bits >> (8 * i)) & 0xff, b = (o.bits >> (8 * i)) & 0xff;
      r |= (a < b ? a : b) << (8 * i);
    }
    return Monomial{r};
  }
  bool coprime(Monomial o) const { return gcd(o).bits == 0; }

  friend bool operator==(Monomial a, Monomial b) { return a.bits == b.bits; }
  friend bool operator!=(Monomial a, Monomial b) { return a.bits != b.bits; }
};

/// Polynomial ring k[x0..x_{n-1}] over a prime field with a graded
/// monomial order: weighted grevlex, or a product of two weighted grevlex
/// blocks when `elimination_block` > 0 (the first block variables are
/// the ones to eliminate).
class Ring {
 public:
  Ring(PrimeField field, int nvars, std::vector<int> weights = {}, int elimination_block = 0)
      : field_(field), nvars_(nvars), weights_(std::move(weights)), block_(elimination_block) {
    if (nvars < 1 || nvars > kMaxVars) throw InvalidArgument("ring arity must be in [1, 8]");
    if (weights_.empty()) weights_.assign(nvars, 1);
    if (static_cast<int>(weights_.size()) != nvars) throw InvalidArgument("weight vector size");
    for (int w : weights_) {
      if (w < 1) throw InvalidArgument("weights must be positive");
    }
    if (block_ < 0 || block_ >= nvars) {
      if (block_ != 0) throw InvalidArgument("elimination block out of range");
    }
    standard_ = block_ == 0;
    for (int w : weights_) standard_ = standard_ && w == 1;
    block_mask_ = block_ == 0 ? 0 : ((block_ >= 8) ? ~0ULL : ((1ULL << (8 * block_)) - 1));
  }

  static std::shared_ptr<const Ring> make(std::uint32_t p, int nvars) {
    return std::make_shared<const Ring>(PrimeField(p), nvars);
  }

  const PrimeField& field() const { return field_; }
  int nvars() const { return nvars_; }
  const std::vector<int>& weights() const { return weights_; }
  int elimination_block() const { return block_; }
  bool is_standard_graded() const { return standard_; }

  int degree(Monomial m) const {
    if (standard_) return m.total_degree();
    int s = 0;
    for (int i = 0; i < nvars_; ++i) s += weights_[i] * m.exponent(i);
    return s;
  }

  /// Three-way comparison in the ring's monomial order: 1 if a > b.
  int compare(Monomial a, Monomial b) const {
    if (a.bits == b.bits) return 0;
    if (block_ == 0) {
      int da = degree(a), db = degree(b);
      if (da != db) return da > db ? 1 : -1;
      return a.bits < b.bits ? 1 : -1;
    }
    Monomial a1{a.bits & block_mask_}, b1{b.bits & block_mask_};
    if (a1.bits != b1.bits) {
      int da = partial_degree(a1), db = partial_degree(b1);
      if (da != db) return da > db ? 1 : -1;
      return a1.bits < b1.bits ? 1 : -1;
    }
    Monomial a2{a.bits & ~block_mask_}, b2{b.bits & ~block_mask_};
    int da = partial_degree(a2), db = partial_degree(b2);
    if (da != db) return da > db ? 1 : -1;
    return a2.bits < b2.bits ? 1 : -1;
  }

  std::string variable_name(int i) const { return "x" + std::to_string(i); }

  friend bool operator==(const Ring& a, const Ring& b) {
    return a.field_ == b.field_ && a.nvars_ == b.nvars_ && a.weights_ == b.weights_ &&
           a.block_ == b.block_;
  }

 private:
  int partial_degree(Monomial m) const {
    int s = 0;
    for (int i = 0; i < nvars_; ++i) s += weights_[i] * m.exponent(i);
    return s;
  }

  PrimeField field_;
  int nvars_;
  std::vector<int> weights_;
  int block_;
  bool standard_ = true;
  std::uint64_t block_mask_ = 0;
};

using RingPtr = std::shared_ptr<const Ring>;

inline void require_same_ring(const RingPtr& a, const RingPtr& b) {
  if (a == b) return;
  if (!a || !b || !(*a == *b)) throw RingMismatch("operands belong to different rings");
}

enum class Ordering { Less = -1, Equal = 0, Greater = 1 };

/// Graded reverse lexicographic comparison of explicit exponent vectors.
inline Ordering monomial_cmp_grevlex(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw RingMismatch("monomial arity mismatch");
  int da = 0, db = 0;
  for (int v : a) da += v;
  for (int v : b) db += v;
  if (da != db) return da > db ? Ordering::Greater : Ordering::Less;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? Ordering::Greater : Ordering::Less;
  }
  return Ordering::Equal;
}

}  // namespace ulrich
