#pragma once

#include <algorithm>
#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "ulrich/cohomology.hpp"

namespace ulrich {

/// Divisor class a L + sum b_i E_i on the blow-up of P^2 at six points.
struct PicClass {
  int a = 0;
  std::array<int, 6> b{};

  static PicClass line_class() { return {1, {}}; }
  static PicClass exceptional(int i) {
    if (i < 1 || i > 6) throw InvalidArgument("exceptional index must be in 1..6");
    PicClass c;
    c.b[i - 1] = 1;
    return c;
  }
  /// H_Y = 3L - sum E_i
  static PicClass hyperplane() { return {3, {-1, -1, -1, -1, -1, -1}}; }
  /// K = -3L + sum E_i
  static PicClass canonical() { return {-3, {1, 1, 1, 1, 1, 1}}; }

  PicClass operator+(const PicClass& o) const {
    PicClass r{a + o.a, {}};
    for (int i = 0; i < 6; ++i) r.b[i] = b[i] + o.b[i];
    return r;
  }
  PicClass operator-(const PicClass& o) const { return *this + o * -1; }
  PicClass operator*(int k) const {
    PicClass r{a * k, {}};
    for (int i = 0; i < 6; ++i) r.b[i] = b[i] * k;
    return r;
  }
  bool operator==(const PicClass&) const = default;
  auto operator<=>(const PicClass&) const = default;

  /// Text form "a;b1,b2,b3,b4,b5,b6".
  std::string to_string() const {
    std::ostringstream os;
    os << a << ";";
    for (int i = 0; i < 6; ++i) os << (i ? "," : "") << b[i];
    return os.str();
  }
  static PicClass parse(const std::string& s) {
    auto semi = s.find(';');
    if (semi == std::string::npos) throw ParseError("class needs 'a;b1,...,b6': " + s);
    PicClass c;
    try {
      std::size_t used = 0;
      c.a = std::stoi(s.substr(0, semi), &used);
      if (s.find_first_not_of(" ", used) < semi) throw ParseError("bad coefficient in " + s);
      std::size_t pos = semi + 1;
      for (int i = 0; i < 6; ++i) {
        std::size_t end = s.find(',', pos);
        if ((i < 5) != (end != std::string::npos)) throw ParseError("class needs exactly six exceptional coefficients: " + s);
        std::string tok = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        c.b[i] = std::stoi(tok, &used);
        if (tok.find_first_not_of(" ", used) != std::string::npos) throw ParseError("bad coefficient in " + s);
        pos = end + 1;
      }
    } catch (const std::logic_error&) {
      throw ParseError("malformed class: " + s);
    }
    return c;
  }
};

inline int pic_intersect(const PicClass& x, const PicClass& y) {
  int r = x.a * y.a;
  for (int i = 0; i < 6; ++i) r -= x.b[i] * y.b[i];
  return r;
}

inline std::int64_t riemann_roch_chi(const PicClass& A) {
  return 1 + (pic_intersect(A, A) - pic_intersect(A, PicClass::canonical())) / 2;
}

/// A -> 2 H_Y - A, exchanging C with its transpose class.
inline PicClass involution(const PicClass& A) { return PicClass::hyperplane() * 2 - A; }

/// All classes with A.H_Y = degree and A^2 = self_int. The search box
/// comes from Cauchy-Schwarz on the negative definite complement of H_Y:
/// (a - d)^2 <= 2(d^2/3 - s) and (3 A.E_i - d)^2 <= 4(d^2 - 3s).
inline std::vector<PicClass> enumerate_curve_classes(int degree, int self_int) {
  if (degree < 1 || degree > 3) throw InvalidArgument("curve classes are enumerated for degree 1, 2 or 3 only");
  const int d = degree, s = self_int;
  const int disc = d * d - 3 * s;
  std::vector<PicClass> out;
  if (disc < 0) return out;
  std::vector<int> as, es;
  for (int a = d - 8; a <= d + 8; ++a) {
    if (3 * (a - d) * (a - d) <= 2 * disc) as.push_back(a);
  }
  for (int e = -8; e <= 8; ++e) {
    if ((3 * e - d) * (3 * e - d) <= 4 * disc) es.push_back(e);
  }
  PicClass c;
  std::array<std::size_t, 6> idx{};
  for (int a : as) {
    c.a = a;
    idx.fill(0);
    while (true) {
      int hb = 0;
      for (int i = 0; i < 6; ++i) {
        c.b[i] = -es[idx[i]];  // A.E_i = -b_i
        hb += c.b[i];
      }
      if (3 * a + hb == d && pic_intersect(c, c) == s) out.push_back(c);
      int k = 0;
      while (k < 6 && ++idx[k] == es.size()) idx[k++] = 0;
      if (k == 6) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Signature (positive, negative) of a symmetric integer matrix by exact
/// symmetric Gaussian elimination over Q.
inline std::pair<int, int> signature(std::vector<std::vector<Rational>> g) {
  const int n = static_cast<int>(g.size());
  int pos = 0, neg = 0;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i) {
      if (g[i][i] != Rational(0)) {
        piv = i;
        break;
      }
    }
    if (piv < 0) {
      // make a nonzero diagonal entry from an off-diagonal one
      for (int i = k; i < n && piv < 0; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (g[i][j] != Rational(0)) {
            for (int c = 0; c < n; ++c) g[i][c] += g[j][c];
            for (int r = 0; r < n; ++r) g[r][i] += g[r][j];
            piv = i;
            break;
          }
        }
      }
      if (piv < 0) break;
    }
    std::swap(g[k], g[piv]);
    for (auto& row : g) std::swap(row[k], row[piv]);
    Rational p = g[k][k];
    (p > Rational(0) ? pos : neg) += 1;
    // Schur complement of the pivot
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) g[i][j] -= g[i][k] * g[k][j] / p;
    }
    for (int i = k + 1; i < n; ++i) g[i][k] = g[k][i] = Rational(0);
  }
  return {pos, neg};
}

inline std::pair<int, int> picard_signature() {
  std::vector<PicClass> basis{PicClass::line_class()};
  for (int i = 1; i <= 6; ++i) basis.push_back(PicClass::exceptional(i));
  std::vector<std::vector<Rational>> g(7, std::vector<Rational>(7));
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) g[i][j] = Rational(pic_intersect(basis[i], basis[j]));
  }
  return signature(g);
}

struct SplittingType {
  int a1 = 0, a2 = 0, b = 0;
  bool operator==(const SplittingType&) const = default;
  std::string to_string() const {
    return "(" + std::to_string(a1) + "," + std::to_string(a2) + "," + std::to_string(b) + ")";
  }
};

/// Splitting type O(a1) + O(a2) + B of the cokernel of N : 3 O(-1) -> 5 O on
/// a line, where the argument is the 3 x 5 transpose with linear entries in
/// a two-variable ring. Read off from the cohomology of the cokernel sheaf.
inline SplittingType pencil_splitting_type(const GradedMatrix& Nt) {
  const RingPtr& R = Nt.ring();
  if (R->nvars() != 2) throw InvalidArgument("pencil matrix must live over a two-variable ring");
  if (Nt.rows() != 3 || Nt.cols() != 5) throw InvalidArgument("pencil matrix must be 3 x 5");
  GradedMatrix N(R, std::vector<int>(5, 0), std::vector<int>(3, 1));
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Polynomial& e = Nt.at(j, i);
      if (!e.is_zero() && e.homogeneous_degree() != 1) throw InvalidArgument("pencil entries must be linear forms");
      N.set(i, j, e);
    }
  }
  SheafCohomology H(Presentation(N, std::nullopt));
  QPoly P = H.hilbert_polynomial();
  if (P.degree() != 1 || P.leading() != Rational(2)) {
    throw InvalidArgument("degenerate pencil: the map is not injective on the line");
  }
  const int tmin = -8, tmax = 2;
  auto h0 = [](int m) { return m >= 0 ? m + 1 : 0; };
  auto h1 = [](int m) { return m <= -2 ? -m - 1 : 0; };
  int total = static_cast<int>(P(Rational(0)).numerator()) - 2;
  for (int a1 = 0; a1 <= total; ++a1) {
    for (int a2 = a1; a1 + a2 <= total; ++a2) {
      int b = total - a1 - a2;
      bool ok = true;
      for (int t = tmin; t <= tmax && ok; ++t) {
        ok = H.h(0, t) == h0(t + a1) + h0(t + a2) + b && H.h(1, t) == h1(t + a1) + h1(t + a2);
      }
      if (ok) return {a1, a2, b};
    }
  }
  throw InternalError("cokernel on the line does not split as expected");
}

}  // namespace ulrich
