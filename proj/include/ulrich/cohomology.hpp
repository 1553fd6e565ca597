#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ulrich/ext.hpp"
#include "ulrich/modules.hpp"

namespace ulrich {

/// Hilbert polynomial of a sheaf on a variety of dimension `dim` and
/// degree `deg`, with rank and reduced polynomial when the support is full.
struct HilbertPoly {
  QPoly poly;
  std::optional<Rational> rank;
  QPoly reduced;

  static HilbertPoly from(QPoly p, int dim, int deg) {
    HilbertPoly h{std::move(p), std::nullopt, {}};
    if (!h.poly.is_zero() && h.poly.degree() == dim) {
      Rational fact(1);
      for (int i = 2; i <= dim; ++i) fact *= i;
      Rational r = h.poly.leading() * fact / Rational(deg);
      h.rank = r;
      h.reduced = h.poly / r;
    }
    return h;
  }
  /// Rank as an exact integer; throws when not integral or undefined.
  std::int64_t integral_rank() const {
    if (!rank) throw InvalidArgument("rank undefined: support is not the whole variety");
    if (rank->denominator() != 1) throw InternalError("rank is not an integer: " + std::to_string(rank->numerator()));
    return rank->numerator();
  }
};

inline HilbertPoly hilbert_polynomial(const Presentation& M, int dim = 4, int deg = 3) {
  return HilbertPoly::from(M.hilbert_polynomial(), dim, deg);
}

/// Ulrich reduced polynomial d/n! * prod_{i=1}^n (t + i).
inline QPoly ulrich_target(int n, int d) {
  if (n < 1 || d < 1) throw InvalidArgument("ulrich_target needs n >= 1 and d >= 1");
  QPoly r = QPoly::constant(Rational(d));
  Rational fact(1);
  for (int i = 1; i <= n; ++i) {
    r = r * QPoly::linear(Rational(i));
    fact *= i;
  }
  return r / fact;
}

/// Hilbert series of the free module with the given generator degrees over
/// the ring of the resolution (polynomial ring or hypersurface ring).
inline HilbertSeries free_series(const std::vector<int>& twists, int nvars, const std::optional<Polynomial>& f) {
  int df = f ? f->homogeneous_degree().value() : 0;
  std::map<int, std::int64_t> num;
  for (int a : twists) {
    num[a] += 1;
    if (f) num[a + df] -= 1;
  }
  return HilbertSeries(nvars, num);
}

/// Hilbert series of Ext^j(M, R) from a resolution F of M over R:
/// HS(coker d_j^T) + HS(coker d_{j+1}^T) - HS(F_{j+1}^*), with d_0 = 0 and
/// everything past the end of the resolution zero.
inline HilbertSeries ext_series(const FreeResolution& res, int j) {
  const int n = res.ring->nvars();
  const Polynomial* f = res.f ? &*res.f : nullptr;
  const int L = res.length();
  auto dual = [&](int k) {
    std::vector<int> t = res.twists(k);
    for (int& a : t) a = -a;
    return free_series(t, n, res.f);
  };
  auto coker = [&](int k) -> HilbertSeries {  // coker of d_k^T : F_{k-1}^* -> F_k^*
    if (k == 0) return dual(0);
    if (k > L) return HilbertSeries(n, {});
    return cokernel_hilbert_series(res.d[k - 1].transpose(), f);
  };
  if (j >= L && !res.complete) throw InvalidArgument("Ext beyond the computed resolution length");
  if (j > L) return HilbertSeries(n, {});
  HilbertSeries r = coker(j);
  if (j + 1 <= L) r = r + coker(j + 1) - dual(j + 1);
  return r;
}

/// Grid h^i(F(t)) over a window of twists.
struct CohomologyTable {
  int tmin = 0, tmax = -1;
  std::vector<std::vector<std::int64_t>> h;  // h[i][t - tmin]

  std::int64_t at(int i, int t) const {
    if (i < 0 || i >= static_cast<int>(h.size()) || t < tmin || t > tmax) {
      throw InvalidArgument("cohomology table index out of range");
    }
    return h[i][t - tmin];
  }
  /// Tab-separated grid: header row of twists, one row per i.
  std::string to_tsv() const {
    std::ostringstream os;
    os << "i";
    for (int t = tmin; t <= tmax; ++t) os << "\t" << t;
    os << "\n";
    for (std::size_t i = 0; i < h.size(); ++i) {
      os << i;
      for (auto v : h[i]) os << "\t" << v;
      os << "\n";
    }
    return os.str();
  }
};

/// Sheaf cohomology of the sheaf associated to a graded module, via
/// local duality against the ambient polynomial ring:
///   h^i(F(t)) = dim Ext^{n-1-i}_S(M, S)_{-t-n}  for i >= 1,
///   h^0(F(t)) = dim M_t - dim Ext^n_{-t-n} + dim Ext^{n-1}_{-t-n}.
class SheafCohomology {
 public:
  explicit SheafCohomology(const Presentation& M) {
    Presentation amb = M.as_ambient();
    n_ = M.ring()->nvars();
    module_ = amb.hilbert_series();
    res_ = free_resolution(amb, n_ + 1);
    for (int j = 0; j <= n_; ++j) ext_.push_back(::ulrich::ext_series(res_, j));
  }

  int ambient_vars() const { return n_; }
  const FreeResolution& ambient_resolution() const { return res_; }
  int projective_dimension() const { return res_.length(); }
  const HilbertSeries& ext_series(int j) const { return ext_.at(j); }
  const HilbertSeries& module_series() const { return module_; }
  QPoly hilbert_polynomial() const { return module_.polynomial(); }

  std::int64_t h(int i, int t) const {
    if (i < 0 || i >= n_) return 0;
    int e = -t - n_;
    if (i == 0) return module_(t) - ext_[n_](e) + ext_[n_ - 1](e);
    return ext_[n_ - 1 - i](e);
  }

  /// Table on [tmin, tmax]; throws InternalError if the Euler
  /// characteristic disagrees with the Hilbert polynomial anywhere.
  CohomologyTable table(int tmin, int tmax) const {
    CohomologyTable T;
    T.tmin = tmin;
    T.tmax = tmax;
    T.h.assign(n_, std::vector<std::int64_t>(tmax - tmin + 1, 0));
    QPoly P = hilbert_polynomial();
    for (int t = tmin; t <= tmax; ++t) {
      std::int64_t chi = 0;
      for (int i = 0; i < n_; ++i) {
        std::int64_t v = h(i, t);
        if (v < 0) throw InternalError("negative cohomology dimension");
        T.h[i][t - tmin] = v;
        chi += (i % 2 ? -v : v);
      }
      if (Rational(chi) != P(Rational(t))) {
        throw InternalError("Euler characteristic mismatch at twist " + std::to_string(t));
      }
    }
    return T;
  }

  /// Dimension of the support of the sheaf (projective), -1 if empty.
  int support_dimension() const {
    if (module_.is_zero()) return -1;
    QPoly P = hilbert_polynomial();
    return P.is_zero() ? -1 : P.degree();
  }

  /// Smallest t0 with h^i(F(t)) = 0 for every t >= t0 (i >= 1), read off
  /// the initial degree of Ext^{n-1-i}; INT_MIN when that module is zero.
  int vanishing_threshold(int i) const {
    if (i < 1 || i >= n_) return std::numeric_limits<int>::min();
    const auto& num = ext_[n_ - 1 - i].numerator();
    if (num.empty()) return std::numeric_limits<int>::min();
    return -n_ - num.begin()->first + 1;
  }

  /// h^i(F(t)) = 0 for all i >= 1 and all t >= a, decided exactly.
  bool higher_cohomology_vanishes_from(int a) const {
    for (int i = 1; i < n_; ++i) {
      for (int t = a; t < vanishing_threshold(i); ++t) {
        if (h(i, t) != 0) return false;
      }
    }
    return true;
  }

  /// Smallest r with H^k_m(M)_t = 0 for every k and every t >= r: from
  /// there on M agrees with the sections of its sheaf and every higher
  /// cohomology group of the sheaf vanishes.
  int cohomological_truncation() const {
    int r = std::numeric_limits<int>::min();
    for (int j = 0; j <= n_; ++j) {
      const auto& num = ext_[j].numerator();
      if (!num.empty()) r = std::max(r, -n_ - num.begin()->first + 1);
    }
    return r;
  }

  /// Growth polynomial of h^i(F(-t)) for t >> 0: P_{Ext^{n-1-i}}(t - n).
  QPoly negative_growth(int i) const {
    if (i < 1 || i >= n_) return QPoly();
    return ext_[n_ - 1 - i].polynomial().shifted(Rational(-n_));
  }

 private:
  int n_ = 0;
  HilbertSeries module_;
  FreeResolution res_;
  std::vector<HilbertSeries> ext_;
};

struct ExtResult {
  std::optional<std::int64_t> value;
  int truncation = 0;  // certified truncation degree r
  std::vector<std::pair<int, std::int64_t>> trials;  // (truncation degree, dimension)
  std::string status;  // "stable", "unstable", "timeout" or "uncertified"
};

/// dim Ext^i between the sheaves of M and N, computed as
/// Ext^i_R(M_{>=r}, N)_0. The degree r is chosen so that N is saturated and
/// the sheaf of N has no higher cohomology in twists >= r; then every term
/// of the hypercohomology spectral sequence off the bottom row vanishes and
/// the value is exact. The next degree is tried as a consistency check
/// under a time budget.
inline ExtResult sheaf_ext(int i, const Presentation& M, const Presentation& N,
                           std::chrono::milliseconds check_budget = std::chrono::milliseconds(60000)) {
  require_compatible(M, N);
  ExtResult out;
  int r = SheafCohomology(N).cohomological_truncation();
  int lo = std::numeric_limits<int>::max();
  Presentation mm = minimize(M);
  for (int a : mm.generators()) lo = std::min(lo, a);
  if (lo == std::numeric_limits<int>::max()) lo = 0;
  out.truncation = r = std::max(r, lo);
  try {
    out.value = graded_ext_degree_zero(i, truncate(M, r), N);
    out.trials.emplace_back(r, *out.value);
  } catch (const Timeout&) {
    out.status = "uncertified";
    return out;
  }
  try {
    DeadlineScope scope(check_budget);
    std::int64_t e = graded_ext_degree_zero(i, truncate(M, r + 1), N);
    out.trials.emplace_back(r + 1, e);
    out.status = e == *out.value ? "stable" : "unstable";
  } catch (const Timeout&) {
    out.status = "timeout";
  }
  return out;
}

inline CohomologyTable sheaf_cohomology_table(const Presentation& M, int tmin = -6, int tmax = 4) {
  return SheafCohomology(M).table(tmin, tmax);
}

struct Certified {
  bool value = false;
  std::string certificate;
};

/// ACM test: intermediate cohomology of the sheaf vanishes in all twists,
/// decided on the Ext modules; saturated ACM modules have ambient
/// projective dimension equal to the codimension.
inline Certified is_acm(const Presentation& M) {
  SheafCohomology C(M);
  int n = C.ambient_vars();
  int dim = C.support_dimension();
  if (dim < 0) throw InvalidArgument("is_acm needs a nonzero sheaf");
  int codim = n - 1 - dim;
  std::ostringstream os;
  os << "ambient projective dimension " << C.projective_dimension() << ", codimension " << codim;
  if (C.projective_dimension() == codim) {
    os << "; maximal Cohen-Macaulay";
    return {true, os.str()};
  }
  bool saturated = C.ext_series(n).is_zero() && C.ext_series(n - 1).is_zero();
  if (!saturated) os << "; auto-saturated";
  bool ok = true;
  for (int j = codim + 1; j <= n - 2; ++j) {
    if (!C.ext_series(j).is_zero()) {
      ok = false;
      os << "; Ext^" << j << " nonzero";
    }
  }
  return {ok, os.str()};
}

/// Ulrich test on a sheaf of dimension n: h^i(F(-j)) = 0 for 1 <= j <= n;
/// when it holds, the ambient resolution must be a linear matrix factorization.
inline Certified is_ulrich(const Presentation& M, int n) {
  SheafCohomology C(M);
  std::ostringstream os;
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i < C.ambient_vars(); ++i) {
      if (C.h(i, -j) != 0) {
        os << "h^" << i << "(F(" << -j << ")) = " << C.h(i, -j);
        return {false, os.str()};
      }
    }
  }
  const FreeResolution& r = C.ambient_resolution();
  int codim = C.ambient_vars() - 1 - C.support_dimension();
  bool linear = r.length() == codim;
  for (const auto& d : r.d) linear = linear && d.entries_of_degree(1);
  if (!linear) {
    return {false, "cohomology vanishes but the ambient resolution is not linear"};
  }
  os << "vanishing verified; ambient resolution linear of length " << r.length();
  return {true, os.str()};
}

/// (c1, c2 / H^2, c3, c4) for an Ulrich bundle of rank r normalized by E(-1).
inline std::array<Rational, 4> ulrich_chern_constraints(int r) {
  if (r < 6 || r % 3 != 0) throw InvalidArgument("rank must be divisible by 3 and at least 6");
  return {Rational(0), Rational(r, 3), Rational(0), Rational(static_cast<std::int64_t>(r) * (r - 9), 6)};
}

enum class Reflexivity { LocallyFree, ReflexiveNotFree, TorsionFreeNotReflexive, Other };

inline std::string to_string(Reflexivity r) {
  switch (r) {
    case Reflexivity::LocallyFree: return "locally-free";
    case Reflexivity::ReflexiveNotFree: return "reflexive-not-free";
    case Reflexivity::TorsionFreeNotReflexive: return "torsion-free-not-reflexive";
    default: return "other";
  }
}

struct ReflexivityProbe {
  Reflexivity kind = Reflexivity::Other;
  std::vector<QPoly> fitted;  // h^1, h^2, h^3 of F(-t) interpolated on the samples
  std::vector<QPoly> exact;   // the same from Ext Hilbert polynomials
  std::vector<int> samples;
  bool consistent = false;
};

namespace detail {

inline QPoly interpolate(const std::vector<int>& xs, const std::vector<std::int64_t>& ys) {
  QPoly r;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    QPoly term = QPoly::constant(Rational(ys[i]));
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      term = term * QPoly::linear(Rational(-xs[j])) / Rational(xs[i] - xs[j]);
    }
    r = r + term;
  }
  return r;
}

}  // namespace detail

/// Classifies a torsion-free sheaf on a 4-fold by the growth of
/// h^1, h^2, h^3 of F(-t): degrees at most (0,1,2) for torsion-free,
/// (-,0,1) with h^1 = 0 for reflexive, all zero for locally free.
inline ReflexivityProbe reflexivity_probe(const SheafCohomology& C, int tfirst = 4, int tlast = 6) {
  if (tlast - tfirst + 1 < 3) throw InvalidArgument("reflexivity probe needs at least three sample twists");
  ReflexivityProbe p;
  for (int t = tfirst; t <= tlast; ++t) p.samples.push_back(t);
  p.consistent = true;
  for (int i = 1; i <= 3; ++i) {
    std::vector<std::int64_t> ys;
    for (int t : p.samples) ys.push_back(C.h(i, -t));
    p.fitted.push_back(detail::interpolate(p.samples, ys));
    p.exact.push_back(C.negative_growth(i));
    if (!(p.fitted.back() == p.exact.back())) p.consistent = false;
  }
  auto deg = [](const QPoly& q) { return q.is_zero() ? -1 : q.degree(); };
  int d1 = deg(p.exact[0]), d2 = deg(p.exact[1]), d3 = deg(p.exact[2]);
  if (d1 < 0 && d2 < 0 && d3 < 0) p.kind = Reflexivity::LocallyFree;
  else if (d1 < 0 && d2 <= 0 && d3 <= 1) p.kind = Reflexivity::ReflexiveNotFree;
  else if (d1 <= 0 && d2 <= 1 && d3 <= 2) p.kind = Reflexivity::TorsionFreeNotReflexive;
  else p.kind = Reflexivity::Other;
  return p;
}

inline ReflexivityProbe reflexivity_probe(const Presentation& M, int tfirst = 4, int tlast = 6) {
  return reflexivity_probe(SheafCohomology(M), tfirst, tlast);
}

}  // namespace ulrich
