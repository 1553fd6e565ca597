#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <unordered_map>
#include <vector>

#include "ulrich/polynomial.hpp"

namespace ulrich {

/// A term m * e_comp of a free module.
struct MTerm {
  Monomial mono;
  int comp;
  Coeff coef;
};

/// Module element: terms strictly decreasing in a ModuleOrder.
using MVec = std::vector<MTerm>;

/// Order on the terms of a graded free module with generator degrees
/// `shifts`. Components below `split` form a block that dominates the
/// rest; inside a block terms compare by degree, then by the ring order,
/// then by position (lower index larger).
class ModuleOrder {
 public:
  ModuleOrder() = default;
  ModuleOrder(RingPtr ring, std::vector<int> shifts, int split = 0)
      : ring_(std::move(ring)), shifts_(std::move(shifts)), split_(split) {}

  const RingPtr& ring() const { return ring_; }
  const std::vector<int>& shifts() const { return shifts_; }
  int rank() const { return static_cast<int>(shifts_.size()); }
  int split() const { return split_; }

  int degree(Monomial m, int comp) const { return ring_->degree(m) + shifts_[comp]; }

  int compare(Monomial a, int ca, Monomial b, int cb) const {
    if (split_ > 0) {
      bool ba = ca < split_, bb = cb < split_;
      if (ba != bb) return ba ? 1 : -1;
    }
    int da = degree(a, ca), db = degree(b, cb);
    if (da != db) return da > db ? 1 : -1;
    int c = ring_->compare(a, b);
    if (c) return c;
    if (ca == cb) return 0;
    return ca < cb ? 1 : -1;
  }
  bool greater(const MTerm& a, const MTerm& b) const {
    return compare(a.mono, a.comp, b.mono, b.comp) > 0;
  }

 private:
  RingPtr ring_;
  std::vector<int> shifts_;
  int split_ = 0;
};

namespace mvec {

inline void sort_normalize(MVec& v, const ModuleOrder& ord) {
  const PrimeField& F = ord.ring()->field();
  std::sort(v.begin(), v.end(), [&](const MTerm& a, const MTerm& b) { return ord.greater(a, b); });
  MVec out;
  out.reserve(v.size());
  for (const MTerm& t : v) {
    if (!out.empty() && out.back().mono == t.mono && out.back().comp == t.comp) {
      out.back().coef = F.add(out.back().coef, t.coef);
      if (!out.back().coef) out.pop_back();
    } else if (t.coef) {
      out.push_back(t);
    }
  }
  v.swap(out);
}

/// a + c * m * b, both sorted.
inline MVec axpy(const MVec& a, Coeff c, Monomial m, const MVec& b, const ModuleOrder& ord) {
  const PrimeField& F = ord.ring()->field();
  MVec r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int cmp;
    if (i == a.size()) cmp = -1;
    else if (j == b.size()) cmp = 1;
    else cmp = ord.compare(a[i].mono, a[i].comp, b[j].mono * m, b[j].comp);
    if (cmp > 0) {
      r.push_back(a[i++]);
    } else if (cmp < 0) {
      Coeff v = F.mul(c, b[j].coef);
      if (v) r.push_back({b[j].mono * m, b[j].comp, v});
      ++j;
    } else {
      Coeff v = F.add(a[i].coef, F.mul(c, b[j].coef));
      if (v) r.push_back({a[i].mono, a[i].comp, v});
      ++i;
      ++j;
    }
  }
  return r;
}

inline MVec scaled(const MVec& a, Coeff c, const PrimeField& F) {
  MVec r;
  if (c == 0) return r;
  r.reserve(a.size());
  for (const MTerm& t : a) r.push_back({t.mono, t.comp, F.mul(t.coef, c)});
  return r;
}

inline bool is_homogeneous(const MVec& v, const ModuleOrder& ord) {
  if (v.empty()) return true;
  int d = ord.degree(v[0].mono, v[0].comp);
  for (const MTerm& t : v) {
    if (ord.degree(t.mono, t.comp) != d) return false;
  }
  return true;
}

}  // namespace mvec

/// All module monomials of one degree, sorted decreasingly, with an index.
class DegreeSpace {
 public:
  DegreeSpace(const ModuleOrder& ord, int degree) : degree_(degree) {
    const Ring& R = *ord.ring();
    index_.resize(ord.rank());
    for (int c = 0; c < ord.rank(); ++c) {
      int d = degree - ord.shifts()[c];
      if (d < 0) continue;
      std::vector<int> e(R.nvars(), 0);
      enumerate(R, 0, d, e, c);
    }
    std::sort(terms_.begin(), terms_.end(), [&](const Entry& a, const Entry& b) {
      return ord.compare(a.mono, a.comp, b.mono, b.comp) > 0;
    });
    for (int c = 0; c < ord.rank(); ++c) index_[c].reserve(16);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      index_[terms_[i].comp].emplace(terms_[i].mono.bits, static_cast<int>(i));
    }
  }

  struct Entry {
    Monomial mono;
    int comp;
  };

  int degree() const { return degree_; }
  std::size_t size() const { return terms_.size(); }
  const Entry& at(int i) const { return terms_[i]; }
  int find(Monomial m, int comp) const {
    auto it = index_[comp].find(m.bits);
    if (it == index_[comp].end()) throw InternalError("monomial outside degree space");
    return it->second;
  }

 private:
  void enumerate(const Ring& R, int var, int remaining, std::vector<int>& e, int comp) {
    if (var == R.nvars() - 1) {
      int w = R.weights()[var];
      if (remaining % w) return;
      if (remaining / w > kMaxExponent) return;
      e[var] = remaining / w;
      terms_.push_back({Monomial::from_exponents(e), comp});
      e[var] = 0;
      return;
    }
    int w = R.weights()[var];
    for (int k = 0; k * w <= remaining && k <= kMaxExponent; ++k) {
      e[var] = k;
      enumerate(R, var + 1, remaining - k * w, e, comp);
    }
    e[var] = 0;
  }

  int degree_;
  std::vector<Entry> terms_;
  std::vector<std::unordered_map<std::uint64_t, int>> index_;
};

/// Homogeneous Buchberger algorithm for submodules of a graded free
/// module, processed degree by degree. Inputs are either seeds (always
/// part of the module, e.g. f * e_i over a hypersurface ring) or
/// candidates; a candidate that is not in the module generated by
/// everything of lower degree, the seeds and earlier candidates is
/// recorded as a minimal generator.
class ModuleGB {
 public:
  ModuleGB(RingPtr ring, std::vector<int> shifts, int split = 0)
      : ord_(std::move(ring), std::move(shifts), split) {}
  explicit ModuleGB(ModuleOrder ord) : ord_(std::move(ord)) {}

  const ModuleOrder& order() const { return ord_; }
  const PrimeField& field() const { return ord_.ring()->field(); }

  /// Returns the input id.
  int add_seed(MVec v) { return add_input(std::move(v), false); }
  int add_candidate(MVec v) { return add_input(std::move(v), true); }

  /// Runs until every pair and input of degree <= max_degree is processed.
  void compute(int max_degree = std::numeric_limits<int>::max()) {
    while (true) {
      int d = next_degree();
      if (d == kNone || d > max_degree) break;
      process_degree(d);
    }
    if (next_degree() == kNone) {
      complete_ = true;
      done_through_ = std::numeric_limits<int>::max();
    } else {
      done_through_ = std::max(done_through_, max_degree);
    }
  }
  bool complete() const { return complete_; }
  int done_through() const { return done_through_; }

  std::size_t size() const { return basis_.size(); }
  const MVec& element(std::size_t i) const { return basis_[i].vec; }
  int element_degree(std::size_t i) const { return basis_[i].degree; }
  std::vector<MVec> basis() const {
    std::vector<MVec> out;
    for (const auto& g : basis_) out.push_back(g.vec);
    return out;
  }

  /// Ids of candidate inputs found to be minimal generators, in order.
  const std::vector<int>& minimal_inputs() const { return minimal_inputs_; }
  const MVec& input(int id) const { return inputs_[id].vec; }
  int input_degree(int id) const { return inputs_[id].degree; }

  /// Reduced Gröbner basis: minimal, monic, tails in normal form.
  std::vector<MVec> reduced_basis() {
    if (!complete_) compute();
    std::vector<MVec> out;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const MTerm& lt = basis_[i].vec[0];
      bool redundant = false;
      for (int j : by_comp_[lt.comp]) {
        Monomial lj = basis_[j].vec[0].mono;
        if (j != static_cast<int>(i) && lj.divides(lt.mono) && (lj != lt.mono || j < static_cast<int>(i))) {
          redundant = true;
          break;
        }
      }
      if (redundant) continue;
      MVec tail(basis_[i].vec.begin() + 1, basis_[i].vec.end());
      MVec v{lt};
      MVec nf = normal_form(tail);
      v.insert(v.end(), nf.begin(), nf.end());
      out.push_back(std::move(v));
    }
    return out;
  }

  /// Leading terms of the basis, as (monomial, component).
  std::vector<std::pair<Monomial, int>> leading_terms() const {
    std::vector<std::pair<Monomial, int>> out;
    for (const auto& g : basis_) out.emplace_back(g.vec[0].mono, g.vec[0].comp);
    return out;
  }

  /// Full normal form of a homogeneous element. Requires the basis to be
  /// complete through the element's degree (computed on demand).
  MVec normal_form(const MVec& v) {
    if (v.empty()) return v;
    if (!mvec::is_homogeneous(v, ord_)) throw InvalidArgument("normal form of an inhomogeneous element");
    int d = ord_.degree(v[0].mono, v[0].comp);
    if (!complete_ && done_through_ < d) compute(d);
    Workspace& ws = workspace(d);
    return reduce(ws, v);
  }

  /// Normal forms of every monomial of degree d: the standard monomials
  /// are those not divisible by a leading term.
  std::vector<std::pair<Monomial, int>> standard_monomials(int d) {
    if (!complete_ && done_through_ < d) compute(d);
    Workspace& ws = workspace(d);
    std::vector<std::pair<Monomial, int>> out;
    for (std::size_t i = 0; i < ws.space.size(); ++i) {
      if (reducer_for(ws, static_cast<int>(i)) < 0) out.emplace_back(ws.space.at(i).mono, ws.space.at(i).comp);
    }
    return out;
  }

  void release_workspaces() { spaces_.clear(); }

 private:
  static constexpr int kNone = std::numeric_limits<int>::min();

  struct Input {
    MVec vec;
    int degree;
    bool candidate;
  };
  struct Element {
    MVec vec;
    int degree;
    bool single_comp;
  };
  struct Pair {
    int i, j;
    Monomial lcm;
    int comp;
  };
  struct Workspace {
    explicit Workspace(const ModuleOrder& o, int d) : space(o, d), reducer(space.size(), -1) {}
    DegreeSpace space;
    std::vector<int> reducer;  // -1 unknown, -2 irreducible, else row id
    std::vector<std::vector<std::pair<int, Coeff>>> rows;
    std::vector<Coeff> acc;
    std::vector<char> queued;
  };

  int add_input(MVec v, bool candidate) {
    mvec::sort_normalize(v, ord_);
    if (!mvec::is_homogeneous(v, ord_)) throw InvalidArgument("module GB input is not homogeneous");
    int id = static_cast<int>(inputs_.size());
    int d = v.empty() ? kNone : ord_.degree(v[0].mono, v[0].comp);
    inputs_.push_back({std::move(v), d, candidate});
    if (d != kNone) {
      pending_inputs_[d].push_back(id);
      if (complete_ || d <= done_through_) {
        complete_ = false;
        done_through_ = std::min(done_through_, d - 1);
      }
    }
    return id;
  }

  int next_degree() const {
    int d = kNone;
    if (!pairs_.empty()) d = pairs_.begin()->first;
    if (!pending_inputs_.empty()) {
      int e = pending_inputs_.begin()->first;
      d = (d == kNone) ? e : std::min(d, e);
    }
    return d;
  }

  Workspace& workspace(int d) {
    auto it = spaces_.find(d);
    if (it != spaces_.end()) return *it->second;
    if (spaces_.size() > 4) spaces_.erase(spaces_.begin());
    auto ws = std::make_unique<Workspace>(ord_, d);
    ws->acc.assign(ws->space.size(), 0);
    ws->queued.assign(ws->space.size(), 0);
    Workspace& ref = *ws;
    spaces_[d] = std::move(ws);
    return ref;
  }

  int reducer_for(Workspace& ws, int idx) {
    int r = ws.reducer[idx];
    if (r != -1) return r;
    const auto& e = ws.space.at(idx);
    int found = -1;
    auto it = by_comp_.find(e.comp);
    if (it != by_comp_.end()) {
      for (int g : it->second) {
        if (basis_[g].vec[0].mono.divides(e.mono)) {
          found = g;
          break;
        }
      }
    }
    if (found < 0) {
      ws.reducer[idx] = -2;
      return -2;
    }
    Monomial m = basis_[found].vec[0].mono.quotient_of(e.mono);
    std::vector<std::pair<int, Coeff>> row;
    row.reserve(basis_[found].vec.size());
    for (const MTerm& t : basis_[found].vec) row.emplace_back(ws.space.find(t.mono * m, t.comp), t.coef);
    ws.rows.push_back(std::move(row));
    ws.reducer[idx] = static_cast<int>(ws.rows.size() - 1);
    return ws.reducer[idx];
  }

  MVec reduce(Workspace& ws, const MVec& v) {
    const PrimeField& F = field();
    const std::uint32_t p = F.modulus();
    std::priority_queue<int, std::vector<int>, std::greater<int>> heap;
    for (const MTerm& t : v) {
      int idx = ws.space.find(t.mono, t.comp);
      ws.acc[idx] = F.add(ws.acc[idx], t.coef);
      if (!ws.queued[idx]) {
        ws.queued[idx] = 1;
        heap.push(idx);
      }
    }
    MVec out;
    while (!heap.empty()) {
      int idx = heap.top();
      heap.pop();
      ws.queued[idx] = 0;
      Coeff c = ws.acc[idx];
      if (c == 0) continue;
      int r = reducer_for(ws, idx);
      if (r < 0) {
        const auto& e = ws.space.at(idx);
        out.push_back({e.mono, e.comp, c});
        ws.acc[idx] = 0;
        continue;
      }
      std::uint64_t nc = p - c;
      for (const auto& [j, gc] : ws.rows[r]) {
        ws.acc[j] = static_cast<Coeff>((ws.acc[j] + nc * gc) % p);
        if (!ws.queued[j] && j != idx) {
          ws.queued[j] = 1;
          heap.push(j);
        }
      }
      ws.acc[idx] = 0;
    }
    return out;
  }

  void insert(MVec v, int d) {
    const PrimeField& F = field();
    Coeff inv = F.inv(v[0].coef);
    if (inv != 1) {
      for (MTerm& t : v) t.coef = F.mul(t.coef, inv);
    }
    bool single = true;
    for (const MTerm& t : v) single = single && t.comp == v[0].comp;
    int t = static_cast<int>(basis_.size());
    Monomial lt = v[0].mono;
    int comp = v[0].comp;
    basis_.push_back({std::move(v), d, single});
    update_pairs(t, lt, comp);
    by_comp_[comp].push_back(t);
    auto it = spaces_.find(d);
    if (it != spaces_.end()) {
      int idx = it->second->space.find(lt, comp);
      it->second->reducer[idx] = -1;
    }
    // Leading terms of other cached degrees may have become reducible.
    for (auto& [e, ws] : spaces_) {
      if (e > d) {
        for (int& r : ws->reducer) {
          if (r == -2) r = -1;
        }
      }
    }
  }

  void update_pairs(int t, Monomial lt, int comp) {
    // Gebauer-Möller: drop old pairs whose lcm is divisible by lt
    // without being the lcm with either end.
    for (auto dit = pairs_.begin(); dit != pairs_.end();) {
      auto& vec = dit->second;
      vec.erase(std::remove_if(vec.begin(), vec.end(),
                               [&](const Pair& p) {
                                 if (p.comp != comp || !lt.divides(p.lcm)) return false;
                                 Monomial li = basis_[p.i].vec[0].mono.lcm(lt);
                                 Monomial lj = basis_[p.j].vec[0].mono.lcm(lt);
                                 return li != p.lcm && lj != p.lcm;
                               }),
                vec.end());
      if (vec.empty()) dit = pairs_.erase(dit);
      else ++dit;
    }
    auto it = by_comp_.find(comp);
    if (it == by_comp_.end()) return;
    struct Cand {
      int i;
      Monomial lcm;
      bool coprime;
    };
    std::vector<Cand> cands;
    for (int i : it->second) {
      Monomial li = basis_[i].vec[0].mono;
      bool cop = li.coprime(lt) && basis_[i].single_comp && basis_[t].single_comp;
      cands.push_back({i, li.lcm(lt), cop});
    }
    // M criterion: drop if another candidate lcm properly divides.
    std::vector<char> keep(cands.size(), 1);
    for (std::size_t a = 0; a < cands.size(); ++a) {
      for (std::size_t b = 0; b < cands.size(); ++b) {
        if (a == b) continue;
        if (cands[b].lcm != cands[a].lcm && cands[b].lcm.divides(cands[a].lcm)) {
          keep[a] = 0;
          break;
        }
      }
    }
    // F criterion and product criterion: one pair per lcm, none if any is coprime.
    std::unordered_map<std::uint64_t, int> seen;
    std::unordered_map<std::uint64_t, bool> has_coprime;
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (!keep[a]) continue;
      if (cands[a].coprime) has_coprime[cands[a].lcm.bits] = true;
    }
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (!keep[a]) continue;
      std::uint64_t key = cands[a].lcm.bits;
      if (has_coprime.count(key)) continue;
      if (seen.count(key)) continue;
      seen[key] = 1;
      int d = ord_.degree(cands[a].lcm, comp);
      pairs_[d].push_back({cands[a].i, t, cands[a].lcm, comp});
    }
  }

  void process_degree(int d) {
    Workspace& ws = workspace(d);
    auto pit = pairs_.find(d);
    if (pit != pairs_.end()) {
      std::vector<Pair> batch = std::move(pit->second);
      pairs_.erase(pit);
      const PrimeField& F = field();
      for (const Pair& p : batch) {
        check_deadline();
        const MVec& gi = basis_[p.i].vec;
        const MVec& gj = basis_[p.j].vec;
        MVec s = mvec::axpy({}, 1, gi[0].mono.quotient_of(p.lcm), gi, ord_);
        s = mvec::axpy(s, F.neg(1), gj[0].mono.quotient_of(p.lcm), gj, ord_);
        MVec r = reduce(ws, s);
        if (!r.empty()) insert(std::move(r), d);
      }
    }
    auto iit = pending_inputs_.find(d);
    if (iit != pending_inputs_.end()) {
      std::vector<int> ids = std::move(iit->second);
      pending_inputs_.erase(iit);
      std::stable_partition(ids.begin(), ids.end(), [&](int id) { return !inputs_[id].candidate; });
      for (int id : ids) {
        check_deadline();
        MVec r = reduce(ws, inputs_[id].vec);
        if (r.empty()) continue;
        insert(std::move(r), d);
        if (inputs_[id].candidate) minimal_inputs_.push_back(id);
      }
    }
    done_through_ = std::max(done_through_, d);
  }

  ModuleOrder ord_;
  std::vector<Input> inputs_;
  std::map<int, std::vector<int>> pending_inputs_;
  std::map<int, std::vector<Pair>> pairs_;
  std::vector<Element> basis_;
  std::unordered_map<int, std::vector<int>> by_comp_;
  std::vector<int> minimal_inputs_;
  std::map<int, std::unique_ptr<Workspace>> spaces_;
  bool complete_ = true;
  int done_through_ = std::numeric_limits<int>::min();
};

}  // namespace ulrich
