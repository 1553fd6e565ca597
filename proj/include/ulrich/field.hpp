#pragma once

#include <cstdint>
#include <string>

#include "ulrich/error.hpp"

namespace ulrich {

using Coeff = std::uint32_t;

/// Arithmetic in Z/p for an odd prime p < 2^31. Elements are canonical
/// representatives in [0, p).
class PrimeField {
 public:
  static constexpr std::uint32_t kDefaultPrime = 32003;

  explicit PrimeField(std::uint32_t p = kDefaultPrime) : p_(p) {
    if (p <= 2 || p >= (1u << 31) || !is_prime(p)) {
      throw InvalidArgument("field modulus must be an odd prime below 2^31, got " +
                            std::to_string(p));
    }
  }

  std::uint32_t modulus() const { return p_; }

  Coeff add(Coeff a, Coeff b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Coeff sub(Coeff a, Coeff b) const { return a >= b ? a - b : a + p_ - b; }
  Coeff neg(Coeff a) const { return a == 0 ? 0 : p_ - a; }
  Coeff mul(Coeff a, Coeff b) const {
    return static_cast<Coeff>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Coeff pow(Coeff a, std::uint64_t e) const {
    std::uint64_t r = 1, b = a % p_;
    while (e) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return static_cast<Coeff>(r);
  }
  Coeff inv(Coeff a) const {
    if (a == 0) throw InvalidArgument("inverse of zero");
    // extended Euclid on signed 64-bit values
    std::int64_t t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::int64_t tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<Coeff>(t);
  }
  Coeff div(Coeff a, Coeff b) const { return mul(a, inv(b)); }

  Coeff from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Coeff>(r);
  }

  /// Symmetric representative in (-p/2, p/2].
  std::int64_t to_signed(Coeff a) const {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : static_cast<std::int64_t>(a);
  }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

  static bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

 private:
  std::uint32_t p_;
};

}  // namespace ulrich
