#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ulrich/hilbert.hpp"
#include "ulrich/ideal.hpp"
#include "ulrich/matrix.hpp"

namespace ulrich {

/// Finitely presented graded module coker(rel) over S, or over S/(f)
/// when a hypersurface equation is attached.
class Presentation {
 public:
  Presentation() = default;
  explicit Presentation(GradedMatrix rel, std::optional<Polynomial> f = std::nullopt, bool saturated = false)
      : rel_(std::move(rel)), f_(std::move(f)), saturated_(saturated) {
    if (f_ && f_->is_zero()) f_.reset();
    if (f_ && !f_->homogeneous_degree()) throw InvalidArgument("hypersurface equation must be homogeneous");
  }
  /// The free module with the given generator degrees.
  static Presentation free(RingPtr ring, std::vector<int> twists, std::optional<Polynomial> f = std::nullopt) {
    return Presentation(GradedMatrix(std::move(ring), std::move(twists), {}), std::move(f), true);
  }

  const RingPtr& ring() const { return rel_.ring(); }
  const GradedMatrix& relations() const { return rel_; }
  const std::vector<int>& generators() const { return rel_.target(); }
  int num_generators() const { return rel_.rows(); }
  const Polynomial* hypersurface() const { return f_ ? &*f_ : nullptr; }
  const std::optional<Polynomial>& hypersurface_opt() const { return f_; }
  bool saturated() const { return saturated_; }
  void set_saturated(bool s) { saturated_ = s; }

  HilbertSeries hilbert_series() const { return cokernel_hilbert_series(rel_, hypersurface()); }
  QPoly hilbert_polynomial() const { return hilbert_series().polynomial(); }

  /// Same module viewed over the ambient ring: relations plus f times the identity.
  Presentation as_ambient() const {
    if (!f_) return *this;
    return Presentation(rel_.concat(GradedMatrix::scalar(ring(), rel_.target(), *f_)), std::nullopt, saturated_);
  }

 private:
  GradedMatrix rel_;
  std::optional<Polynomial> f_;
  bool saturated_ = false;
};

inline void require_compatible(const Presentation& a, const Presentation& b) {
  require_same_ring(a.ring(), b.ring());
  bool fa = a.hypersurface() != nullptr, fb = b.hypersurface() != nullptr;
  if (fa != fb || (fa && !(*a.hypersurface() == *b.hypersurface()))) {
    throw RingMismatch("modules live over different hypersurface rings");
  }
}

inline Presentation cokernel_presentation(const GradedMatrix& phi, std::optional<Polynomial> f = std::nullopt) {
  return Presentation(phi, std::move(f));
}

/// M(d): all degree labels shift by -d.
inline Presentation twist(const Presentation& M, int d) {
  return Presentation(M.relations().twisted(d), M.hypersurface_opt(), M.saturated());
}

inline Presentation direct_sum(const Presentation& a, const Presentation& b) {
  require_compatible(a, b);
  return Presentation(GradedMatrix::block_diagonal(a.relations(), b.relations()), a.hypersurface_opt(),
                      a.saturated() && b.saturated());
}

namespace detail {

inline bool is_unit_entry(const Polynomial& p) { return !p.is_zero() && p.is_constant(); }

}  // namespace detail

/// Removes generators killed by unit relations and keeps a minimal set of
/// relations; the module is unchanged.
inline Presentation minimize(const Presentation& M) {
  const RingPtr& R = M.ring();
  const Polynomial* f = M.hypersurface();
  const PrimeField& F = R->field();
  GradedMatrix A = reduce_entries(M.relations(), f);
  while (true) {
    int pi = -1, pj = -1;
    for (int j = 0; j < A.cols() && pi < 0; ++j) {
      for (int i = 0; i < A.rows(); ++i) {
        if (detail::is_unit_entry(A.at(i, j))) {
          pi = i;
          pj = j;
          break;
        }
      }
    }
    if (pi < 0) break;
    Coeff cinv = F.inv(A.at(pi, pj).leading_coefficient());
    std::vector<int> keep_rows, keep_cols;
    for (int i = 0; i < A.rows(); ++i) {
      if (i != pi) keep_rows.push_back(i);
    }
    for (int j = 0; j < A.cols(); ++j) {
      if (j != pj) keep_cols.push_back(j);
    }
    GradedMatrix B(R, A.select_rows(keep_rows).target(), A.select_columns(keep_cols).source());
    for (std::size_t jj = 0; jj < keep_cols.size(); ++jj) {
      int l = keep_cols[jj];
      Polynomial factor = A.at(pi, l).scale(cinv);
      for (std::size_t ii = 0; ii < keep_rows.size(); ++ii) {
        int i = keep_rows[ii];
        Polynomial v = A.at(i, l);
        if (!factor.is_zero() && !A.at(i, pj).is_zero()) v -= factor * A.at(i, pj);
        B.set(static_cast<int>(ii), static_cast<int>(jj), reduce_mod(v, f));
      }
    }
    A = std::move(B);
  }
  std::vector<MVec> cols;
  for (int j = 0; j < A.cols(); ++j) cols.push_back(A.column(j));
  std::vector<int> keep = minimal_subset(R, A.target(), cols, f);
  return Presentation(A.select_columns(keep), M.hypersurface_opt(), M.saturated());
}

/// Minimal graded free resolution F_0 <- F_1 <- ... with d[k] : F_{k+1} -> F_k.
struct FreeResolution {
  RingPtr ring;
  std::optional<Polynomial> f;
  std::vector<int> f0;
  std::vector<GradedMatrix> d;
  bool minimal = true;
  int period = 0;
  int period_start = 0;
  bool complete = false;  // the last syzygy module is zero

  int length() const { return static_cast<int>(d.size()); }
  /// Generator degrees of F_k.
  std::vector<int> twists(int k) const {
    if (k == 0) return f0;
    if (k <= length()) return d[k - 1].source();
    return {};
  }
  /// d_k d_{k+1} vanishes (modulo f) for every k.
  bool is_complex() const {
    const Polynomial* fp = f ? &*f : nullptr;
    for (int k = 0; k + 1 < length(); ++k) {
      if (!is_zero_mod(d[k] * d[k + 1], fp)) return false;
    }
    return true;
  }
  /// No nonzero constant entries.
  bool check_minimal() const {
    for (const auto& m : d) {
      for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
          if (detail::is_unit_entry(m.at(i, j))) return false;
        }
      }
    }
    return true;
  }
};

namespace detail {

inline std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

/// F_{j+2} = F_j(-deg f) for two consecutive j >= 3; returns the first such j or 0.
inline int detect_period_two(const FreeResolution& res) {
  if (!res.f) return 0;
  int df = res.f->homogeneous_degree().value();
  auto same = [&](int j) {
    auto a = detail::sorted(res.twists(j));
    auto b = detail::sorted(res.twists(j + 2));
    if (a.empty() || a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (b[k] != a[k] + df) return false;
    }
    return true;
  };
  for (int j = 3; j + 3 <= res.length(); ++j) {
    if (same(j) && same(j + 1)) return j;
  }
  return 0;
}

inline FreeResolution free_resolution(const Presentation& M, int length = 6) {
  const Polynomial* f = M.hypersurface();
  for (int i = 0; i < M.relations().rows(); ++i) {
    for (int j = 0; j < M.relations().cols(); ++j) {
      if (!M.relations().at(i, j).is_homogeneous()) throw InvalidArgument("non-homogeneous presentation");
    }
  }
  FreeResolution res;
  res.ring = M.ring();
  res.f = M.hypersurface_opt();
  Presentation mm = minimize(M);
  res.f0 = mm.generators();
  if (mm.relations().cols() == 0) {
    res.complete = true;
    return res;
  }
  if (length <= 0) return res;
  res.d.push_back(mm.relations());
  while (res.length() < length) {
    GradedMatrix next = syzygies(res.d.back(), f, true);
    if (next.cols() == 0) {
      res.complete = true;
      break;
    }
    res.d.push_back(std::move(next));
  }
  res.minimal = res.check_minimal();
  int j = detect_period_two(res);
  if (j) {
    res.period = 2;
    res.period_start = j;
  }
  return res;
}

/// Pair (phi, psi) with phi psi = f id and psi phi = f id.
struct MatrixFactorization {
  GradedMatrix phi;
  GradedMatrix psi;
  Polynomial f;
};

struct MFVerification {
  bool ok = false;
  std::string witness;
};

inline MFVerification verify_matrix_factorization(const MatrixFactorization& mf) {
  const GradedMatrix &phi = mf.phi, &psi = mf.psi;
  if (phi.cols() != psi.rows() || psi.cols() != phi.rows()) {
    throw InvalidArgument("matrix factorization shapes are not composable");
  }
  auto check = [&](const GradedMatrix& prod, const char* name) -> std::optional<std::string> {
    for (int i = 0; i < prod.rows(); ++i) {
      for (int j = 0; j < prod.cols(); ++j) {
        const Polynomial expect = i == j ? mf.f : Polynomial(mf.f.ring());
        if (!(prod.at(i, j) == expect)) {
          return std::string(name) + "(" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                 prod.at(i, j).to_string();
        }
      }
    }
    return std::nullopt;
  };
  if (auto w = check(phi * psi, "phi*psi")) return {false, *w};
  if (auto w = check(psi * phi, "psi*phi")) return {false, *w};
  return {true, ""};
}

namespace detail {

/// Exact quotient p / f; nullopt if f does not divide p.
inline std::optional<Polynomial> divide_exact(const Polynomial& p, const Polynomial& f) {
  const PrimeField& F = p.ring()->field();
  Polynomial r = p, q(p.ring());
  Coeff linv = F.inv(f.leading_coefficient());
  while (!r.is_zero()) {
    if (!f.leading_monomial().divides(r.leading_monomial())) return std::nullopt;
    Monomial m = f.leading_monomial().quotient_of(r.leading_monomial());
    Coeff c = F.mul(r.leading_coefficient(), linv);
    q += Polynomial::monomial(p.ring(), m, c);
    r -= f.mul_monomial(m, c);
  }
  return q;
}

/// Inverse of a graded automorphism of a free module (degree-0 map),
/// via its constant part and a terminating Neumann series.
inline std::optional<GradedMatrix> invert_graded_automorphism(const GradedMatrix& B) {
  const RingPtr& R = B.ring();
  const PrimeField& F = R->field();
  int n = B.rows();
  if (B.cols() != n) return std::nullopt;
  // constant part, inverted by Gauss-Jordan
  std::vector<std::vector<Coeff>> a(n, std::vector<Coeff>(2 * n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Polynomial& e = B.at(i, j);
      a[i][j] = (!e.is_zero() && e.is_constant()) ? e.leading_coefficient() : 0;
    }
    a[i][n + i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i) {
      if (a[i][c]) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return std::nullopt;
    std::swap(a[c], a[piv]);
    Coeff inv = F.inv(a[c][c]);
    for (auto& v : a[c]) v = F.mul(v, inv);
    for (int i = 0; i < n; ++i) {
      if (i == c || !a[i][c]) continue;
      Coeff m = a[i][c];
      for (int k = 0; k < 2 * n; ++k) a[i][k] = F.sub(a[i][k], F.mul(m, a[c][k]));
    }
  }
  GradedMatrix B0inv(R, B.source(), B.target());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a[i][n + j]) B0inv.set(i, j, Polynomial::constant(R, a[i][n + j]));
    }
  }
  // B = B0 (I + X) with X = B0^{-1} (B - B0) raising degrees; X is nilpotent.
  GradedMatrix X = B0inv * B - GradedMatrix::identity(R, B.source());
  GradedMatrix sum = GradedMatrix::identity(R, B.source());
  GradedMatrix term = sum;
  for (int k = 1; k <= n + 1; ++k) {
    term = term * X;
    for (int i = 0; i < term.rows(); ++i) {
      for (int j = 0; j < term.cols(); ++j) term.set(i, j, -term.at(i, j));
    }
    if (term.is_zero()) break;
    sum = sum + term;
  }
  GradedMatrix inv = sum * B0inv;
  if (!(B * inv == GradedMatrix::identity(R, B.target()))) return std::nullopt;
  return inv;
}

}  // namespace detail

/// Matrix factorization from the periodic tail at step j (default: the
/// detected period start): phi = d_j, psi = d_{j+1} corrected so that
/// phi psi = f id exactly.
inline MatrixFactorization extract_matrix_factorization(const FreeResolution& res, const Polynomial& f,
                                                        std::optional<int> step = std::nullopt) {
  if (!step && res.period != 2) throw InvalidArgument("no periodic tail detected in the resolution");
  int first = step.value_or(res.period_start);
  int df = f.homogeneous_degree().value();
  for (int j = first; j <= first + 1; ++j) {
    if (j < 1 || j + 1 > res.length()) break;
    const GradedMatrix& phi = res.d[j - 1];
    const GradedMatrix& psi0 = res.d[j];
    if (phi.rows() != phi.cols() || psi0.rows() != psi0.cols()) continue;
    GradedMatrix prod = phi * psi0;
    std::vector<int> src = prod.source();
    for (int& a : src) a -= df;
    GradedMatrix B(f.ring(), prod.target(), src);
    bool ok = true;
    for (int a = 0; a < B.rows() && ok; ++a) {
      for (int b = 0; b < B.cols(); ++b) {
        auto q = detail::divide_exact(prod.at(a, b), f);
        if (!q) {
          ok = false;
          break;
        }
        B.set(a, b, *q);
      }
    }
    if (!ok) continue;
    auto Binv = detail::invert_graded_automorphism(B);
    if (!Binv) continue;
    MatrixFactorization mf{phi, psi0 * Binv->twisted(-df), f};
    if (verify_matrix_factorization(mf).ok) return mf;
  }
  throw InternalError("lifted periodic tail does not give a matrix factorization");
}

/// Kernel of the map coker(A) -> coker(B) induced by Z on generators.
inline Presentation kernel_of_map(const GradedMatrix& Z, const Presentation& src, const Presentation& tgt) {
  require_compatible(src, tgt);
  const Polynomial* f = src.hypersurface();
  if (Z.source() != src.generators() || Z.target() != tgt.generators()) {
    throw InvalidArgument("map labels do not match the presented modules");
  }
  {
    ModuleGB img = image_gb(tgt.relations(), f);
    GradedMatrix ZA = Z * src.relations();
    for (int j = 0; j < ZA.cols(); ++j) {
      if (!img.normal_form(ZA.column(j)).empty()) {
        throw InvalidArgument("map is not well defined: relation " + std::to_string(j) +
                              " does not map into the target relations");
      }
    }
  }
  int m = Z.cols();
  GradedMatrix combined = Z.concat(tgt.relations());
  GradedMatrix syz = syzygies(combined, f, true);
  std::vector<int> first_rows;
  for (int i = 0; i < m; ++i) first_rows.push_back(i);
  GradedMatrix K = syz.select_rows(first_rows);
  std::vector<int> nonzero;
  for (int j = 0; j < K.cols(); ++j) {
    bool z = true;
    for (int i = 0; i < K.rows() && z; ++i) z = K.at(i, j).is_zero();
    if (!z) nonzero.push_back(j);
  }
  K = K.select_columns(nonzero);
  {
    ModuleGB img = image_gb(tgt.relations(), f);
    GradedMatrix ZK = Z * K;
    for (int j = 0; j < ZK.cols(); ++j) {
      if (!img.normal_form(ZK.column(j)).empty()) throw InternalError("kernel generators do not map to zero");
    }
  }
  GradedMatrix KA = K.concat(src.relations());
  GradedMatrix rel = syzygies(KA, f, true);
  std::vector<int> krows;
  for (int i = 0; i < K.cols(); ++i) krows.push_back(i);
  Presentation ker(reduce_entries(rel.select_rows(krows), f), src.hypersurface_opt());
  return minimize(ker);
}

/// Image of the generators of a free module in coker(B): the submodule of
/// F generated by the columns of C, presented via syzygies.
inline Presentation image_of_columns(const GradedMatrix& C, const std::optional<Polynomial>& f) {
  const Polynomial* fp = f ? &*f : nullptr;
  GradedMatrix rel = syzygies(C, fp, true);
  return minimize(Presentation(rel, f));
}

}  // namespace ulrich
