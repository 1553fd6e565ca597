#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ulrich/modules.hpp"

namespace ulrich {

/// Sparse vector over F_p: (index, nonzero coefficient), sorted by index.
using SparseVec = std::vector<std::pair<int, Coeff>>;

/// Incremental row echelon form over F_p.
class SparseEchelon {
 public:
  explicit SparseEchelon(const PrimeField& F) : F_(F) {}

  /// Adds a vector; returns true if it increased the rank.
  bool add(SparseVec v) {
    while (!v.empty()) {
      auto it = pivots_.find(v[0].first);
      if (it == pivots_.end()) {
        Coeff inv = F_.inv(v[0].second);
        for (auto& [i, c] : v) c = F_.mul(c, inv);
        pivots_.emplace(v[0].first, static_cast<int>(rows_.size()));
        rows_.push_back(std::move(v));
        return true;
      }
      v = axpy(v, F_.neg(v[0].second), rows_[it->second]);
    }
    return false;
  }
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  SparseVec axpy(const SparseVec& a, Coeff c, const SparseVec& b) const {
    SparseVec r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        r.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        Coeff v = F_.mul(c, b[j].second);
        if (v) r.emplace_back(b[j].first, v);
        ++j;
      } else {
        Coeff v = F_.add(a[i].second, F_.mul(c, b[j].second));
        if (v) r.emplace_back(a[i].first, v);
        ++i;
        ++j;
      }
    }
    return r;
  }

  const PrimeField& F_;
  std::unordered_map<int, int> pivots_;
  std::vector<SparseVec> rows_;
};

inline int sparse_rank(const std::vector<SparseVec>& vs, const PrimeField& F) {
  SparseEchelon e(F);
  for (const auto& v : vs) {
    check_deadline();
    e.add(v);
  }
  return e.rank();
}

/// Basis of the null space of the map sending basis vector j to cols[j]
/// (columns given sparsely), as dense vectors of length cols.size().
inline std::vector<std::vector<Coeff>> nullspace(const std::vector<SparseVec>& cols, int nrows, const PrimeField& F) {
  int n = static_cast<int>(cols.size());
  // dense row-reduction of the nrows x n matrix
  std::vector<std::vector<Coeff>> m(nrows, std::vector<Coeff>(n, 0));
  for (int j = 0; j < n; ++j) {
    for (auto [i, c] : cols[j]) m[i][j] = c;
  }
  std::vector<int> pivcol;
  int r = 0;
  for (int c = 0; c < n && r < nrows; ++c) {
    int piv = -1;
    for (int i = r; i < nrows; ++i) {
      if (m[i][c]) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    Coeff inv = F.inv(m[r][c]);
    for (auto& v : m[r]) v = F.mul(v, inv);
    for (int i = 0; i < nrows; ++i) {
      if (i == r || !m[i][c]) continue;
      Coeff f = m[i][c];
      for (int k = c; k < n; ++k) m[i][k] = F.sub(m[i][k], F.mul(f, m[r][k]));
    }
    pivcol.push_back(c);
    ++r;
  }
  std::vector<char> is_piv(n, 0);
  for (int c : pivcol) is_piv[c] = 1;
  std::vector<std::vector<Coeff>> out;
  for (int free = 0; free < n; ++free) {
    if (is_piv[free]) continue;
    std::vector<Coeff> v(n, 0);
    v[free] = 1;
    for (int k = 0; k < r; ++k) v[pivcol[k]] = F.neg(m[k][free]);
    out.push_back(std::move(v));
  }
  return out;
}

/// Degree-wise monomial bases of a presented module N = coker(B) (over
/// S/(f) if given) and coordinates of elements in them.
class GradedPieces {
 public:
  explicit GradedPieces(const Presentation& N)
      : ring_(N.ring()), shifts_(N.generators()), gb_(image_gb(N.relations(), N.hypersurface())) {
    gb_.compute();
  }

  const std::vector<int>& generator_degrees() const { return shifts_; }

  const std::vector<std::pair<Monomial, int>>& basis(int d) {
    auto it = pieces_.find(d);
    if (it != pieces_.end()) return it->second.basis;
    Piece p;
    p.basis = gb_.standard_monomials(d);
    for (std::size_t k = 0; k < p.basis.size(); ++k) {
      p.index[key(p.basis[k].first, p.basis[k].second)] = static_cast<int>(k);
    }
    return pieces_.emplace(d, std::move(p)).first->second.basis;
  }
  int dimension(int d) { return static_cast<int>(basis(d).size()); }

  /// Coordinates of a homogeneous element of degree d.
  SparseVec coordinates(const MVec& v, int d) {
    basis(d);
    SparseVec out;
    if (v.empty()) return out;
    MVec nf = gb_.normal_form(v);
    const auto& idx = pieces_.at(d).index;
    for (const MTerm& t : nf) out.emplace_back(idx.at(key(t.mono, t.comp)), t.coef);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// The basis element k of degree d as a module element.
  MVec element(int d, int k) {
    const auto& b = basis(d)[k];
    return MVec{{b.first, b.second, 1}};
  }

  ModuleGB& engine() { return gb_; }

 private:
  static std::uint64_t key(Monomial m, int c) { return m.bits * 1000003ULL + static_cast<std::uint64_t>(c); }
  struct Piece {
    std::vector<std::pair<Monomial, int>> basis;
    std::unordered_map<std::uint64_t, int> index;
  };
  RingPtr ring_;
  std::vector<int> shifts_;
  ModuleGB gb_;
  std::map<int, Piece> pieces_;
};

namespace detail {

/// Offsets of the blocks N_{a_k} inside Hom(F, N)_0 = sum_k N_{a_k}.
inline std::vector<int> hom_offsets(const std::vector<int>& twists, GradedPieces& N) {
  std::vector<int> off{0};
  for (int a : twists) off.push_back(off.back() + N.dimension(a));
  return off;
}

/// Columns of Hom(d, N)_0 : Hom(F_j, N)_0 -> Hom(F_{j+1}, N)_0, phi -> phi o d.
inline std::vector<SparseVec> hom_differential(const GradedMatrix& d, GradedPieces& N) {
  const auto& src = d.target();  // F_j
  const auto& tgt = d.source();  // F_{j+1}
  auto off_src = hom_offsets(src, N);
  auto off_tgt = hom_offsets(tgt, N);
  std::vector<SparseVec> cols;
  for (int k = 0; k < d.rows(); ++k) {
    int dk = N.dimension(src[k]);
    for (int b = 0; b < dk; ++b) {
      check_deadline();
      MVec e = N.element(src[k], b);
      SparseVec col;
      for (int l = 0; l < d.cols(); ++l) {
        const Polynomial& p = d.at(k, l);
        if (p.is_zero()) continue;
        MVec prod;
        for (const auto& t : p.terms()) prod.push_back({t.mono * e[0].mono, e[0].comp, t.coef});
        mvec::sort_normalize(prod, N.engine().order());
        for (auto [i, c] : N.coordinates(prod, tgt[l])) col.emplace_back(off_tgt[l] + i, c);
      }
      std::sort(col.begin(), col.end());
      cols.push_back(std::move(col));
    }
  }
  return cols;
}

}  // namespace detail

/// Basis of Hom_R(M, N)_0 as matrices on generators (entries are the
/// images of the generators of M written in N's generators).
inline std::vector<GradedMatrix> hom_degree_zero(const Presentation& M, const Presentation& N) {
  require_compatible(M, N);
  GradedPieces P(N);
  const PrimeField& F = M.ring()->field();
  auto off = detail::hom_offsets(M.generators(), P);
  std::vector<SparseVec> cols = detail::hom_differential(M.relations(), P);
  int nrows = detail::hom_offsets(M.relations().source(), P).back();
  auto kernel = nullspace(cols, nrows, F);
  std::vector<GradedMatrix> out;
  for (const auto& v : kernel) {
    std::vector<MVec> images(M.num_generators());
    for (int k = 0; k < M.num_generators(); ++k) {
      for (int b = off[k]; b < off[k + 1]; ++b) {
        if (!v[b]) continue;
        const auto& bm = P.basis(M.generators()[k])[b - off[k]];
        images[k].push_back({bm.first, bm.second, v[b]});
      }
    }
    for (auto& im : images) mvec::sort_normalize(im, P.engine().order());
    out.push_back(GradedMatrix::from_columns(M.ring(), N.generators(), images, M.generators()));
  }
  return out;
}

/// dim Ext^i_R(M, N)_0 via the minimal resolution of M and the graded
/// pieces of N.
inline std::int64_t graded_ext_degree_zero(int i, const Presentation& M, const Presentation& N) {
  require_compatible(M, N);
  FreeResolution res = free_resolution(M, i + 1);
  GradedPieces P(N);
  const PrimeField& F = M.ring()->field();
  auto dim_c = [&](int j) { return detail::hom_offsets(res.twists(j), P).back(); };
  auto rank_delta = [&](int j) -> int {  // Hom(F_j) -> Hom(F_{j+1})
    if (j < 0 || j >= res.length()) return 0;
    return sparse_rank(detail::hom_differential(res.d[j], P), F);
  };
  return static_cast<std::int64_t>(dim_c(i)) - rank_delta(i) - rank_delta(i - 1);
}

/// Presentation of the truncation M_{>=r}.
inline Presentation truncate(const Presentation& M, int r) {
  Presentation mm = minimize(M);
  GradedPieces P(mm);
  std::vector<MVec> gens;
  std::vector<int> degs;
  for (const auto& [m, c] : P.basis(r)) {
    gens.push_back({{m, c, 1}});
    degs.push_back(r);
  }
  for (int k = 0; k < mm.num_generators(); ++k) {
    if (mm.generators()[k] > r) {
      gens.push_back({{Monomial{}, k, 1}});
      degs.push_back(mm.generators()[k]);
    }
  }
  bool all_above = true;
  for (int a : mm.generators()) all_above = all_above && a >= r;
  if (all_above) return mm;
  GradedMatrix K = GradedMatrix::from_columns(mm.ring(), mm.generators(), gens, degs);
  GradedMatrix rel = syzygies(K.concat(mm.relations()), mm.hypersurface(), true);
  std::vector<int> rows;
  for (int k = 0; k < K.cols(); ++k) rows.push_back(k);
  return minimize(Presentation(reduce_entries(rel.select_rows(rows), mm.hypersurface()), mm.hypersurface_opt()));
}

}  // namespace ulrich
