#pragma once

#include <algorithm>
#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ulrich/hilbert.hpp"
#include "ulrich/matrix.hpp"
#include "ulrich/module_gb.hpp"

namespace ulrich {

/// Homogeneous ideal given by generators, with a lazily computed and
/// cached Gröbner basis.
class Ideal {
 public:
  Ideal() = default;
  Ideal(RingPtr ring, std::vector<Polynomial> gens) : ring_(std::move(ring)) {
    for (auto& g : gens) {
      require_same_ring(ring_, g.ring());
      if (!g.is_homogeneous()) throw InvalidArgument("ideal generators must be homogeneous");
      if (!g.is_zero()) gens_.push_back(std::move(g));
    }
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<Polynomial>& generators() const { return gens_; }

  ModuleGB& engine() const {
    if (!cache_) {
      cache_ = std::make_shared<ModuleGB>(ring_, std::vector<int>{0});
      for (const auto& g : gens_) cache_->add_seed(to_mvec(g));
      cache_->compute();
    }
    return *cache_;
  }

  /// Reduced Gröbner basis, sorted by increasing leading monomial.
  std::vector<Polynomial> groebner_basis() const {
    std::vector<Polynomial> out;
    for (const MVec& v : engine().reduced_basis()) out.push_back(from_mvec(ring_, v));
    std::sort(out.begin(), out.end(), [&](const Polynomial& a, const Polynomial& b) {
      return ring_->compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    return out;
  }

  Polynomial normal_form(const Polynomial& f) const {
    require_same_ring(ring_, f.ring());
    // split into homogeneous parts; the normal form is additive
    std::map<int, std::vector<Polynomial::Term>> parts;
    for (const auto& t : f.terms()) parts[ring_->degree(t.mono)].push_back(t);
    Polynomial r(ring_);
    for (auto& [d, terms] : parts) {
      Polynomial h = Polynomial::from_terms(ring_, std::move(terms));
      r += from_mvec(ring_, engine().normal_form(to_mvec(h)));
    }
    return r;
  }
  bool contains(const Polynomial& f) const { return normal_form(f).is_zero(); }
  bool contains(const Ideal& J) const {
    for (const auto& g : J.generators()) {
      if (!contains(g)) return false;
    }
    return true;
  }
  bool is_unit_ideal() const {
    for (const auto& g : gens_) {
      if (g.is_constant() && !g.is_zero()) return true;
    }
    return false;
  }

  /// Hilbert series of S / I.
  HilbertSeries hilbert_series() const {
    return hilbert_series_from_leading_terms(*ring_, {0}, engine().leading_terms());
  }

  /// Equality as ideals (same reduced Gröbner basis).
  friend bool operator==(const Ideal& a, const Ideal& b) { return a.groebner_basis() == b.groebner_basis(); }

  /// One polynomial per line; '#' starts a comment.
  std::string to_string() const {
    std::string s;
    for (const auto& g : gens_) s += g.to_string() + "\n";
    return s;
  }
  static Ideal parse(RingPtr ring, const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<Polynomial> gens;
    while (std::getline(is, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      gens.push_back(Polynomial::parse(ring, line));
    }
    return Ideal(ring, std::move(gens));
  }

 private:
  RingPtr ring_;
  std::vector<Polynomial> gens_;
  mutable std::shared_ptr<ModuleGB> cache_;
};

inline Ideal groebner_basis(const Ideal& I) { return Ideal(I.ring(), I.groebner_basis()); }
inline Polynomial normal_form(const Polynomial& f, const Ideal& I) { return I.normal_form(f); }

inline Ideal operator+(const Ideal& a, const Ideal& b) {
  require_same_ring(a.ring(), b.ring());
  auto g = a.generators();
  g.insert(g.end(), b.generators().begin(), b.generators().end());
  return Ideal(a.ring(), std::move(g));
}
inline Ideal operator*(const Ideal& a, const Ideal& b) {
  std::vector<Polynomial> g;
  for (const auto& x : a.generators()) {
    for (const auto& y : b.generators()) g.push_back(x * y);
  }
  return Ideal(a.ring(), std::move(g));
}

/// Irrelevant ideal (x0, ..., x_{n-1}).
inline Ideal irrelevant_ideal(const RingPtr& ring) {
  std::vector<Polynomial> g;
  for (int i = 0; i < ring->nvars(); ++i) g.push_back(Polynomial::variable(ring, i));
  return Ideal(ring, std::move(g));
}

namespace detail {

inline Monomial permute_monomial(Monomial m, const std::vector<int>& perm, int n) {
  std::vector<int> e(n, 0);
  for (int i = 0; i < n; ++i) e[perm[i]] = m.exponent(i);
  return Monomial::from_exponents(e);
}
inline Polynomial permute(const Polynomial& p, const std::vector<int>& perm, const RingPtr& target) {
  std::vector<Polynomial::Term> t;
  for (const auto& x : p.terms()) t.push_back({permute_monomial(x.mono, perm, target->nvars()), x.coef});
  return Polynomial::from_terms(target, std::move(t));
}

}  // namespace detail

/// I intersected with the subring generated by the variables in `keep`,
/// via a block order eliminating the others first.
inline Ideal eliminate(const Ideal& I, const std::vector<int>& keep) {
  const Ring& R = *I.ring();
  int n = R.nvars();
  std::vector<char> kept(n, 0);
  for (int v : keep) {
    if (v < 0 || v >= n) throw InvalidArgument("eliminate: variable out of range");
    kept[v] = 1;
  }
  std::vector<int> order;  // new position -> old variable
  for (int v = 0; v < n; ++v) {
    if (!kept[v]) order.push_back(v);
  }
  int block = static_cast<int>(order.size());
  for (int v = 0; v < n; ++v) {
    if (kept[v]) order.push_back(v);
  }
  if (block == 0) return I;
  if (block == n) {
    return I.is_unit_ideal() || I.contains(Polynomial::constant(I.ring(), 1))
               ? Ideal(I.ring(), {Polynomial::constant(I.ring(), 1)})
               : Ideal(I.ring(), {});
  }
  std::vector<int> to_new(n), to_old(n), w(n);
  for (int k = 0; k < n; ++k) {
    to_new[order[k]] = k;
    to_old[k] = order[k];
    w[k] = R.weights()[order[k]];
  }
  auto E = std::make_shared<const Ring>(R.field(), n, w, block);
  std::vector<Polynomial> g;
  for (const auto& p : I.generators()) g.push_back(detail::permute(p, to_new, E));
  Ideal J(E, std::move(g));
  std::vector<Polynomial> out;
  for (const auto& p : J.groebner_basis()) {
    bool only_kept = true;
    for (int k = 0; k < block; ++k) only_kept = only_kept && p.leading_monomial().exponent(k) == 0;
    if (only_kept) out.push_back(detail::permute(p, to_old, I.ring()));
  }
  return Ideal(I.ring(), std::move(out));
}

/// Kernel of the ring map k[y_0..y_{m-1}] -> k[x]/(relations), y_i -> images[i].
/// The images must be homogeneous of one common degree.
inline Ideal ring_map_kernel(const std::vector<Polynomial>& images, const std::vector<Polynomial>& relations,
                             const RingPtr& target) {
  if (images.empty()) throw InvalidArgument("ring map needs images");
  const RingPtr& src = images[0].ring();
  int nx = src->nvars(), ny = target->nvars();
  if (static_cast<int>(images.size()) != ny) throw InvalidArgument("one image per target variable");
  if (nx + ny > kMaxVars) throw InvalidArgument("too many variables for the graph ring");
  int delta = -1;
  for (const auto& p : images) {
    auto d = p.homogeneous_degree();
    if (!d || (delta >= 0 && *d != delta)) throw InvalidArgument("images must share one degree");
    delta = *d;
  }
  std::vector<int> w(nx + ny, 1);
  for (int i = 0; i < ny; ++i) w[nx + i] = delta;
  auto G = std::make_shared<const Ring>(src->field(), nx + ny, w, nx);
  std::vector<int> xmap(nx);
  for (int i = 0; i < nx; ++i) xmap[i] = i;
  auto lift = [&](const Polynomial& p) {
    std::vector<Polynomial::Term> t;
    for (const auto& x : p.terms()) {
      std::vector<int> e(nx + ny, 0);
      for (int i = 0; i < nx; ++i) e[i] = x.mono.exponent(i);
      t.push_back({Monomial::from_exponents(e), x.coef});
    }
    return Polynomial::from_terms(G, std::move(t));
  };
  std::vector<Polynomial> gens;
  for (int i = 0; i < ny; ++i) gens.push_back(Polynomial::variable(G, nx + i) - lift(images[i]));
  for (const auto& r : relations) gens.push_back(lift(r));
  Ideal J(G, std::move(gens));
  std::vector<Polynomial> out;
  for (const auto& p : J.groebner_basis()) {
    bool only_y = true;
    for (int k = 0; k < nx; ++k) only_y = only_y && p.leading_monomial().exponent(k) == 0;
    if (!only_y) continue;
    std::vector<Polynomial::Term> t;
    for (const auto& x : p.terms()) {
      std::vector<int> e(ny, 0);
      for (int i = 0; i < ny; ++i) e[i] = x.mono.exponent(nx + i);
      t.push_back({Monomial::from_exponents(e), x.coef});
    }
    out.push_back(Polynomial::from_terms(target, std::move(t)));
  }
  return Ideal(target, std::move(out));
}

/// (I : J) = { f : f J in I }, as the first coordinate of the kernel of
/// [ g | diag(I, ..., I) ] where g lists the generators of J.
inline Ideal ideal_quotient(const Ideal& I, const Ideal& J) {
  require_same_ring(I.ring(), J.ring());
  const RingPtr& R = I.ring();
  const auto& gi = I.generators();
  const auto& gj = J.generators();
  if (gj.empty()) return Ideal(R, {Polynomial::constant(R, 1)});
  for (const auto& g : gj) {
    if (g.is_constant()) return I;
  }
  int m = static_cast<int>(gj.size()), k = static_cast<int>(gi.size());
  std::vector<int> tgt, src{0};
  for (const auto& g : gj) tgt.push_back(-g.homogeneous_degree().value());
  for (int r = 0; r < m; ++r) {
    for (const auto& h : gi) src.push_back(tgt[r] + h.homogeneous_degree().value());
  }
  GradedMatrix A(R, tgt, src);
  for (int r = 0; r < m; ++r) {
    A.set(r, 0, gj[r]);
    for (int c = 0; c < k; ++c) A.set(r, 1 + r * k + c, gi[c]);
  }
  GradedMatrix K = syzygies(A, nullptr, false);
  std::vector<Polynomial> out;
  for (int j = 0; j < K.cols(); ++j) {
    if (!K.at(0, j).is_zero()) out.push_back(K.at(0, j));
  }
  return groebner_basis(Ideal(R, std::move(out)));
}

/// Stable value of I : J^k, detected by equal Gröbner bases.
inline Ideal saturation(const Ideal& I, const Ideal& J) {
  Ideal cur = groebner_basis(I);
  for (int iter = 0; iter < 64; ++iter) {
    Ideal next = ideal_quotient(cur, J);
    if (next.generators() == cur.generators()) return cur;
    cur = std::move(next);
  }
  throw InternalError("saturation did not stabilize");
}

/// Projective dimension and degree of V(I); the empty scheme is (-1, 0).
inline std::pair<int, std::int64_t> dim_degree(const Ideal& I) {
  HilbertSeries h = I.hilbert_series();
  if (h.is_zero()) return {-1, 0};
  int krull = h.krull_dimension();
  if (krull == 0) return {-1, 0};
  return {krull - 1, h.multiplicity()};
}

namespace detail {

inline Polynomial determinant(std::vector<std::vector<Polynomial>> m, const RingPtr& ring) {
  int n = static_cast<int>(m.size());
  if (n == 0) return Polynomial::constant(ring, 1);
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Polynomial r(ring);
  for (int j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Polynomial>> sub;
    for (int i = 1; i < n; ++i) {
      std::vector<Polynomial> row;
      for (int k = 0; k < n; ++k) {
        if (k != j) row.push_back(m[i][k]);
      }
      sub.push_back(std::move(row));
    }
    Polynomial t = m[0][j] * determinant(std::move(sub), ring);
    r = (j % 2) ? r - t : r + t;
  }
  return r;
}

inline void combinations(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// All k x k minors of a rectangular polynomial matrix.
inline std::vector<Polynomial> minors(const std::vector<std::vector<Polynomial>>& m, int k, const RingPtr& ring) {
  int r = static_cast<int>(m.size()), c = r ? static_cast<int>(m[0].size()) : 0;
  std::vector<std::vector<int>> rs, cs;
  std::vector<int> cur;
  detail::combinations(r, k, 0, cur, rs);
  detail::combinations(c, k, 0, cur, cs);
  std::vector<Polynomial> out;
  for (const auto& ri : rs) {
    for (const auto& ci : cs) {
      std::vector<std::vector<Polynomial>> sub;
      for (int i : ri) {
        std::vector<Polynomial> row;
        for (int j : ci) row.push_back(m[i][j]);
        sub.push_back(std::move(row));
      }
      Polynomial d = detail::determinant(std::move(sub), ring);
      if (!d.is_zero()) out.push_back(std::move(d));
    }
  }
  return out;
}

/// Projective dimension of the singular locus of V(I) for I of the given
/// codimension: I plus the codim-size minors of its Jacobian; -1 = smooth.
inline int singular_locus_dim(const Ideal& I, int expected_codim) {
  const RingPtr& R = I.ring();
  std::vector<std::vector<Polynomial>> jac;
  for (const auto& g : I.generators()) {
    std::vector<Polynomial> row;
    for (int v = 0; v < R->nvars(); ++v) row.push_back(g.derivative(v));
    jac.push_back(std::move(row));
  }
  std::vector<Polynomial> gens = I.generators();
  for (auto& m : minors(jac, expected_codim, R)) gens.push_back(std::move(m));
  return dim_degree(Ideal(R, std::move(gens))).first;
}

}  // namespace ulrich
