#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ulrich/hilbert.hpp"
#include "ulrich/module_gb.hpp"
#include "ulrich/polynomial.hpp"

namespace ulrich {

/// Graded free module with generators of degrees `twists`, i.e. the
/// direct sum of R(-a) over a in twists.
struct GradedFreeModule {
  std::vector<int> twists;
  int rank() const { return static_cast<int>(twists.size()); }
  friend bool operator==(const GradedFreeModule&, const GradedFreeModule&) = default;
};

/// Homogeneous map between graded free modules; entry (i, j) has degree
/// source[j] - target[i] or is zero.
class GradedMatrix {
 public:
  GradedMatrix() = default;
  GradedMatrix(RingPtr ring, std::vector<int> target, std::vector<int> source)
      : ring_(std::move(ring)), tgt_(std::move(target)), src_(std::move(source)) {
    e_.assign(tgt_.size() * src_.size(), Polynomial(ring_));
  }
  GradedMatrix(RingPtr ring, std::vector<int> target, std::vector<int> source, std::vector<Polynomial> entries)
      : ring_(std::move(ring)), tgt_(std::move(target)), src_(std::move(source)), e_(std::move(entries)) {
    if (e_.size() != tgt_.size() * src_.size()) throw InvalidArgument("matrix entry count mismatch");
    for (int i = 0; i < rows(); ++i) {
      for (int j = 0; j < cols(); ++j) check_entry(i, j, e_[i * cols() + j]);
    }
  }

  static GradedMatrix identity(RingPtr ring, const std::vector<int>& twists) {
    GradedMatrix m(ring, twists, twists);
    for (int i = 0; i < m.rows(); ++i) m.e_[i * m.cols() + i] = Polynomial::constant(ring, 1);
    return m;
  }
  static GradedMatrix scalar(RingPtr ring, const std::vector<int>& target, const Polynomial& f) {
    int d = f.homogeneous_degree().value_or(0);
    std::vector<int> src;
    for (int a : target) src.push_back(a + d);
    GradedMatrix m(ring, target, src);
    for (int i = 0; i < m.rows(); ++i) m.e_[i * m.cols() + i] = f;
    return m;
  }
  /// Matrix whose columns are the given module elements.
  static GradedMatrix from_columns(RingPtr ring, const std::vector<int>& target, const std::vector<MVec>& columns,
                                   const std::vector<int>& source) {
    GradedMatrix m(ring, target, source);
    std::vector<std::vector<Polynomial::Term>> buf(m.rows() * m.cols());
    for (int j = 0; j < m.cols(); ++j) {
      for (const MTerm& t : columns[j]) buf[t.comp * m.cols() + j].push_back({t.mono, t.coef});
    }
    for (std::size_t k = 0; k < buf.size(); ++k) m.e_[k] = Polynomial::from_terms(ring, std::move(buf[k]));
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) m.check_entry(i, j, m.at(i, j));
    }
    return m;
  }

  const RingPtr& ring() const { return ring_; }
  int rows() const { return static_cast<int>(tgt_.size()); }
  int cols() const { return static_cast<int>(src_.size()); }
  const std::vector<int>& target() const { return tgt_; }
  const std::vector<int>& source() const { return src_; }
  const Polynomial& at(int i, int j) const { return e_[i * cols() + j]; }
  void set(int i, int j, Polynomial p) {
    check_entry(i, j, p);
    e_[i * cols() + j] = std::move(p);
  }

  bool is_zero() const {
    for (const auto& p : e_) {
      if (!p.is_zero()) return false;
    }
    return true;
  }

  /// Column j as a module element over the target.
  MVec column(int j) const {
    MVec v;
    for (int i = 0; i < rows(); ++i) {
      for (const auto& t : at(i, j).terms()) v.push_back({t.mono, i, t.coef});
    }
    return v;
  }

  GradedMatrix operator*(const GradedMatrix& o) const {
    require_same_ring(ring_, o.ring_);
    if (cols() != o.rows()) throw InvalidArgument("matrix shapes not composable");
    GradedMatrix r(ring_, tgt_, o.src_);
    for (int i = 0; i < rows(); ++i) {
      for (int j = 0; j < o.cols(); ++j) {
        Polynomial s(ring_);
        for (int k = 0; k < cols(); ++k) {
          if (at(i, k).is_zero() || o.at(k, j).is_zero()) continue;
          s += at(i, k) * o.at(k, j);
        }
        r.e_[i * r.cols() + j] = std::move(s);
      }
    }
    return r;
  }
  GradedMatrix operator+(const GradedMatrix& o) const { return combine(o, false); }
  GradedMatrix operator-(const GradedMatrix& o) const { return combine(o, true); }

  /// Dual map: target and source twists negate and swap.
  GradedMatrix transpose() const {
    std::vector<int> t, s;
    for (int a : src_) t.push_back(-a);
    for (int a : tgt_) s.push_back(-a);
    GradedMatrix r(ring_, t, s);
    for (int i = 0; i < rows(); ++i) {
      for (int j = 0; j < cols(); ++j) r.e_[j * r.cols() + i] = at(i, j);
    }
    return r;
  }

  /// Twist both modules by d (labels shift by -d).
  GradedMatrix twisted(int d) const {
    GradedMatrix r = *this;
    for (int& a : r.tgt_) a -= d;
    for (int& a : r.src_) a -= d;
    return r;
  }

  /// Columns of this followed by the columns of o (same target).
  GradedMatrix concat(const GradedMatrix& o) const {
    if (tgt_ != o.tgt_) throw InvalidArgument("column concatenation needs equal targets");
    std::vector<int> s = src_;
    s.insert(s.end(), o.src_.begin(), o.src_.end());
    GradedMatrix r(ring_, tgt_, s);
    for (int i = 0; i < rows(); ++i) {
      for (int j = 0; j < cols(); ++j) r.e_[i * r.cols() + j] = at(i, j);
      for (int j = 0; j < o.cols(); ++j) r.e_[i * r.cols() + cols() + j] = o.at(i, j);
    }
    return r;
  }

  static GradedMatrix block_diagonal(const GradedMatrix& a, const GradedMatrix& b) {
    std::vector<int> t = a.tgt_, s = a.src_;
    t.insert(t.end(), b.tgt_.begin(), b.tgt_.end());
    s.insert(s.end(), b.src_.begin(), b.src_.end());
    GradedMatrix r(a.ring_, t, s);
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) r.e_[i * r.cols() + j] = a.at(i, j);
    }
    for (int i = 0; i < b.rows(); ++i) {
      for (int j = 0; j < b.cols(); ++j) r.e_[(a.rows() + i) * r.cols() + a.cols() + j] = b.at(i, j);
    }
    return r;
  }

  GradedMatrix select_columns(const std::vector<int>& js) const {
    std::vector<int> s;
    for (int j : js) s.push_back(src_[j]);
    GradedMatrix r(ring_, tgt_, s);
    for (int i = 0; i < rows(); ++i) {
      for (std::size_t k = 0; k < js.size(); ++k) r.e_[i * r.cols() + k] = at(i, js[k]);
    }
    return r;
  }
  GradedMatrix select_rows(const std::vector<int>& is) const {
    std::vector<int> t;
    for (int i : is) t.push_back(tgt_[i]);
    GradedMatrix r(ring_, t, src_);
    for (std::size_t k = 0; k < is.size(); ++k) {
      for (int j = 0; j < cols(); ++j) r.e_[k * r.cols() + j] = at(is[k], j);
    }
    return r;
  }

  /// Applies a function to every entry (the result must keep degrees).
  template <class Fn>
  GradedMatrix map_entries(Fn&& fn) const {
    GradedMatrix r = *this;
    for (int i = 0; i < rows(); ++i) {
      for (int j = 0; j < cols(); ++j) r.set(i, j, fn(at(i, j)));
    }
    return r;
  }

  /// True when every nonzero entry is homogeneous of degree k.
  bool entries_of_degree(int k) const {
    for (const auto& p : e_) {
      if (p.is_zero()) continue;
      auto d = p.homogeneous_degree();
      if (!d || *d != k) return false;
    }
    return true;
  }

  /// Exchange format: "rows cols", target twists, source twists, then
  /// one entry per line in row-major order.
  std::string to_string() const {
    std::ostringstream os;
    os << rows() << " " << cols() << "\n";
    auto line = [&](const std::vector<int>& v) {
      for (std::size_t k = 0; k < v.size(); ++k) os << (k ? " " : "") << v[k];
      os << "\n";
    };
    line(tgt_);
    line(src_);
    for (const auto& p : e_) os << p.to_string() << "\n";
    return os.str();
  }
  static GradedMatrix parse(RingPtr ring, const std::string& text) {
    std::istringstream is(text);
    std::string l;
    auto next = [&]() {
      if (!std::getline(is, l)) throw ParseError("matrix text truncated");
      return l;
    };
    int r = 0, c = 0;
    {
      std::istringstream h(next());
      if (!(h >> r >> c) || r < 0 || c < 0) throw ParseError("bad matrix header");
    }
    auto ints = [&](int n) {
      std::istringstream h(next());
      std::vector<int> v(n);
      for (int k = 0; k < n; ++k) {
        if (!(h >> v[k])) throw ParseError("bad twist line");
      }
      return v;
    };
    std::vector<int> t = ints(r), s = ints(c);
    std::vector<Polynomial> e;
    for (int k = 0; k < r * c; ++k) e.push_back(Polynomial::parse(ring, next()));
    return GradedMatrix(ring, t, s, std::move(e));
  }

  friend bool operator==(const GradedMatrix& a, const GradedMatrix& b) {
    return a.tgt_ == b.tgt_ && a.src_ == b.src_ && a.e_ == b.e_;
  }

 private:
  void check_entry(int i, int j, const Polynomial& p) const {
    if (p.is_zero()) return;
    require_same_ring(ring_, p.ring());
    auto d = p.homogeneous_degree();
    if (!d || *d != src_[j] - tgt_[i]) {
      throw InvalidArgument("matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                            ") has degree incompatible with its labels");
    }
  }
  GradedMatrix combine(const GradedMatrix& o, bool sub) const {
    if (tgt_ != o.tgt_ || src_ != o.src_) throw InvalidArgument("matrix labels differ");
    GradedMatrix r = *this;
    for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = sub ? e_[k] - o.e_[k] : e_[k] + o.e_[k];
    return r;
  }

  RingPtr ring_;
  std::vector<int> tgt_, src_;
  std::vector<Polynomial> e_;
};

inline MVec to_mvec(const Polynomial& p, int comp = 0) {
  MVec v;
  for (const auto& t : p.terms()) v.push_back({t.mono, comp, t.coef});
  return v;
}
inline Polynomial from_mvec(const RingPtr& ring, const MVec& v) {
  std::vector<Polynomial::Term> t;
  for (const auto& x : v) t.push_back({x.mono, x.coef});
  return Polynomial::from_terms(ring, std::move(t));
}

/// Remainder of p modulo a single homogeneous polynomial f (zero f is a no-op).
inline Polynomial reduce_mod(const Polynomial& p, const Polynomial* f) {
  if (!f || f->is_zero() || p.is_zero()) return p;
  const Ring& R = *p.ring();
  const PrimeField& F = R.field();
  Monomial lt = f->leading_monomial();
  Coeff linv = F.inv(f->leading_coefficient());
  Polynomial r = p;
  // terms are processed from the largest down; reductions only create smaller terms
  std::size_t pos = 0;
  while (pos < r.size()) {
    const auto& t = r.terms()[pos];
    if (!lt.divides(t.mono)) {
      ++pos;
      continue;
    }
    Monomial q = lt.quotient_of(t.mono);
    Coeff c = F.neg(F.mul(t.coef, linv));
    r = r + f->mul_monomial(q, c);
  }
  return r;
}

/// Submodule of a graded free module generated by the columns of A,
/// plus f times the free module when working over S/(f).
inline ModuleGB image_gb(const GradedMatrix& A, const Polynomial* f) {
  ModuleGB gb(A.ring(), A.target());
  if (f && !f->is_zero()) {
    for (int i = 0; i < A.rows(); ++i) gb.add_seed(to_mvec(*f, i));
  }
  for (int j = 0; j < A.cols(); ++j) gb.add_seed(A.column(j));
  return gb;
}

/// Hilbert series of coker(A) (over S/(f) when f is given).
inline HilbertSeries cokernel_hilbert_series(const GradedMatrix& A, const Polynomial* f) {
  ModuleGB gb = image_gb(A, f);
  gb.compute();
  return hilbert_series_from_leading_terms(*A.ring(), A.target(), gb.leading_terms());
}

/// Gröbner basis of the graph {(A x; x)} used for syzygies and lifting.
class AugmentedGB {
 public:
  AugmentedGB(const GradedMatrix& A, const Polynomial* f) : A_(A), f_(f ? std::optional<Polynomial>(*f) : std::nullopt) {
    std::vector<int> shifts = A.target();
    shifts.insert(shifts.end(), A.source().begin(), A.source().end());
    gb_ = std::make_unique<ModuleGB>(A.ring(), shifts, A.rows());
    if (f_ && !f_->is_zero()) {
      for (int i = 0; i < A.rows(); ++i) gb_->add_seed(to_mvec(*f_, i));
    }
    for (int j = 0; j < A.cols(); ++j) {
      MVec v = A.column(j);
      v.push_back({Monomial{}, A.rows() + j, 1});
      gb_->add_seed(std::move(v));
    }
  }

  /// Lifts of generators of the syzygy module (a Gröbner basis of it).
  std::vector<MVec> syzygy_lifts() {
    gb_->compute();
    std::vector<MVec> out;
    int r = A_.rows();
    for (std::size_t k = 0; k < gb_->size(); ++k) {
      const MVec& g = gb_->element(k);
      if (g[0].comp < r) continue;
      MVec s;
      for (const MTerm& t : g) s.push_back({t.mono, t.comp - r, t.coef});
      out.push_back(std::move(s));
    }
    return out;
  }

  /// Solves A x = b (mod f); nullopt when b is not in the image.
  std::optional<MVec> lift(const MVec& b) {
    if (b.empty()) return MVec{};
    MVec nf = gb_->normal_form(b);
    MVec x;
    const PrimeField& F = A_.ring()->field();
    int r = A_.rows();
    for (const MTerm& t : nf) {
      if (t.comp < r) return std::nullopt;
      x.push_back({t.mono, t.comp - r, F.neg(t.coef)});
    }
    return x;
  }

 private:
  GradedMatrix A_;
  std::optional<Polynomial> f_;
  std::unique_ptr<ModuleGB> gb_;
};

/// Entries reduced modulo f.
inline GradedMatrix reduce_entries(const GradedMatrix& A, const Polynomial* f) {
  if (!f || f->is_zero()) return A;
  return A.map_entries([&](const Polynomial& p) { return reduce_mod(p, f); });
}

/// Selects a minimal generating subset of the given elements of the
/// free module with degrees `shifts`, modulo f times the free module.
inline std::vector<int> minimal_subset(const RingPtr& ring, const std::vector<int>& shifts, const std::vector<MVec>& elems,
                                       const Polynomial* f) {
  ModuleGB gb(ring, shifts);
  if (f && !f->is_zero()) {
    for (std::size_t i = 0; i < shifts.size(); ++i) gb.add_seed(to_mvec(*f, static_cast<int>(i)));
  }
  std::vector<int> ids;
  int maxd = std::numeric_limits<int>::min();
  for (const MVec& v : elems) {
    ids.push_back(gb.add_candidate(v));
    if (!v.empty()) maxd = std::max(maxd, gb.input_degree(ids.back()));
  }
  if (maxd != std::numeric_limits<int>::min()) gb.compute(maxd);
  std::vector<int> out;
  for (int id : gb.minimal_inputs()) {
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (ids[k] == id) out.push_back(static_cast<int>(k));
    }
  }
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    int da = gb.input_degree(ids[a]), db = gb.input_degree(ids[b]);
    return da != db ? da < db : a < b;
  });
  return out;
}

/// Syzygies of the columns of A over S, or over S/(f) when f is given.
/// With `minimal`, the columns of the result minimally generate the
/// syzygy module; entries are reduced modulo f.
inline GradedMatrix syzygies(const GradedMatrix& A, const Polynomial* f = nullptr, bool minimal = true) {
  AugmentedGB aug(A, f);
  std::vector<MVec> lifts = aug.syzygy_lifts();
  const ModuleOrder ord(A.ring(), A.source());
  for (MVec& v : lifts) mvec::sort_normalize(v, ord);
  std::vector<int> keep;
  if (minimal) {
    keep = minimal_subset(A.ring(), A.source(), lifts, f);
  } else {
    for (std::size_t k = 0; k < lifts.size(); ++k) keep.push_back(static_cast<int>(k));
  }
  std::vector<MVec> cols;
  std::vector<int> src;
  for (int k : keep) {
    cols.push_back(lifts[k]);
    src.push_back(ord.degree(lifts[k][0].mono, lifts[k][0].comp));
  }
  return reduce_entries(GradedMatrix::from_columns(A.ring(), A.source(), cols, src), f);
}

/// True when every entry of A lies in f (or is zero when f is absent).
inline bool is_zero_mod(const GradedMatrix& A, const Polynomial* f) {
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      if (!reduce_mod(A.at(i, j), f).is_zero()) return false;
    }
  }
  return true;
}

}  // namespace ulrich
