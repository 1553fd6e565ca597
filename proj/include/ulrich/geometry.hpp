#pragma once

#include <array>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ulrich/ext.hpp"
#include "ulrich/ideal.hpp"

namespace ulrich {

inline constexpr int kMaxGenericityAttempts = 32;

/// Uniform field elements from a seeded stream.
class FieldRng {
 public:
  FieldRng(const PrimeField& F, std::uint64_t seed) : F_(F), gen_(seed), dist_(0, F.modulus() - 1) {}
  Coeff next() { return dist_(gen_); }
  Coeff nonzero() {
    Coeff c;
    do c = next();
    while (!c);
    return c;
  }
  Polynomial form(const RingPtr& R, int deg) {
    std::vector<Polynomial::Term> t;
    for (Monomial m : monomials_of_degree(R->nvars(), deg)) t.push_back({m, next()});
    return Polynomial::from_terms(R, std::move(t));
  }

  static std::vector<Monomial> monomials_of_degree(int n, int d) {
    std::vector<Monomial> out;
    std::vector<int> e(n, 0);
    auto rec = [&](auto&& self, int i, int left) -> void {
      if (i == n - 1) {
        e[i] = left;
        out.push_back(Monomial::from_exponents(e));
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[i] = k;
        self(self, i + 1, left - k);
      }
    };
    if (n > 0) rec(rec, 0, d);
    return out;
  }

 private:
  const PrimeField& F_;
  std::mt19937_64 gen_;
  std::uniform_int_distribution<Coeff> dist_;
};

using Point = std::array<Coeff, 3>;

struct PointConfig {
  std::uint32_t prime = PrimeField::kDefaultPrime;
  std::uint64_t seed = 0;  // seed actually used after reseeding
  std::array<Point, 6> points{};
};

namespace detail {

inline std::vector<Coeff> evaluate_monomials(const std::vector<Monomial>& ms, const Point& p, const PrimeField& F) {
  std::vector<Coeff> row;
  for (Monomial m : ms) {
    Coeff v = 1;
    for (int i = 0; i < 3; ++i) v = F.mul(v, F.pow(p[i], m.exponent(i)));
    row.push_back(v);
  }
  return row;
}

inline int dense_rank(const std::vector<std::vector<Coeff>>& rows, const PrimeField& F) {
  std::vector<SparseVec> vs;
  for (const auto& r : rows) {
    SparseVec v;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i]) v.emplace_back(static_cast<int>(i), r[i]);
    }
    vs.push_back(std::move(v));
  }
  return sparse_rank(vs, F);
}

/// Null space of the matrix whose rows are given densely.
inline std::vector<std::vector<Coeff>> dense_nullspace(const std::vector<std::vector<Coeff>>& rows, int ncols,
                                                      const PrimeField& F) {
  std::vector<SparseVec> cols(ncols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < ncols; ++j) {
      if (rows[i][j]) cols[j].emplace_back(static_cast<int>(i), rows[i][j]);
    }
  }
  return nullspace(cols, static_cast<int>(rows.size()), F);
}

inline Polynomial combine(const RingPtr& R, const std::vector<Monomial>& ms, const std::vector<Coeff>& c) {
  std::vector<Polynomial::Term> t;
  for (std::size_t i = 0; i < ms.size(); ++i) t.push_back({ms[i], c[i]});
  return Polynomial::from_terms(R, std::move(t));
}

inline Coeff evaluate_at(const Polynomial& p, const Point& q) {
  return p.evaluate(std::vector<Coeff>(q.begin(), q.end()));
}

}  // namespace detail

/// Pairwise distinct, no three collinear, not all six on a conic.
inline bool in_general_position(const std::array<Point, 6>& pts, const PrimeField& F) {
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      if (detail::dense_rank({{pts[i].begin(), pts[i].end()}, {pts[j].begin(), pts[j].end()}}, F) < 2) return false;
      for (int k = j + 1; k < 6; ++k) {
        std::vector<std::vector<Coeff>> m{{pts[i].begin(), pts[i].end()},
                                          {pts[j].begin(), pts[j].end()},
                                          {pts[k].begin(), pts[k].end()}};
        if (detail::dense_rank(m, F) < 3) return false;
      }
    }
  }
  auto conics = FieldRng::monomials_of_degree(3, 2);
  std::vector<std::vector<Coeff>> rows;
  for (const Point& p : pts) rows.push_back(detail::evaluate_monomials(conics, p, F));
  return detail::dense_rank(rows, F) == 6;
}

/// Standard frame plus two random points; reseeds with seed + 1 until the
/// configuration is general.
inline PointConfig random_general_points(std::uint64_t seed, std::uint32_t prime = PrimeField::kDefaultPrime) {
  PrimeField F(prime);
  for (int attempt = 0; attempt < kMaxGenericityAttempts; ++attempt) {
    PointConfig cfg;
    cfg.prime = prime;
    cfg.seed = seed + attempt;
    FieldRng rng(F, cfg.seed);
    cfg.points[0] = {1, 0, 0};
    cfg.points[1] = {0, 1, 0};
    cfg.points[2] = {0, 0, 1};
    cfg.points[3] = {1, 1, 1};
    for (int i = 4; i < 6; ++i) cfg.points[i] = {rng.next(), rng.next(), rng.next()};
    if (in_general_position(cfg.points, F)) return cfg;
  }
  throw GenericityFailure("no general point configuration within the retry bound");
}

/// Basis of the cubics in x0, x1, x2 through the six points.
inline std::vector<Polynomial> cubics_through(const PointConfig& cfg, const RingPtr& P2) {
  auto ms = FieldRng::monomials_of_degree(3, 3);
  std::vector<std::vector<Coeff>> rows;
  for (const Point& p : cfg.points) rows.push_back(detail::evaluate_monomials(ms, p, P2->field()));
  std::vector<Polynomial> out;
  for (const auto& v : detail::dense_nullspace(rows, static_cast<int>(ms.size()), P2->field())) {
    out.push_back(detail::combine(P2, ms, v));
  }
  if (out.size() != 4) throw GenericityFailure("cubics through the points do not form a net of dimension 4");
  return out;
}

/// Closure of the image in P^3 of a plane curve under the cubic map. The
/// image degree must equal 3 deg(curve) minus the number of base points on
/// the curve; a mismatch (singular at a base point, non-birational image)
/// raises GenericityFailure.
inline Ideal curve_image(const PointConfig& cfg, const std::vector<Polynomial>& cubics, const Polynomial& curve,
                         const RingPtr& P3) {
  auto d = curve.homogeneous_degree();
  if (!d || *d < 1) throw InvalidArgument("plane curve must be a nonconstant form");
  int expected = 3 * *d;
  for (const Point& p : cfg.points) {
    if (detail::evaluate_at(curve, p) == 0) --expected;
  }
  Ideal I = ring_map_kernel(cubics, {curve}, P3);
  auto [dim, deg] = dim_degree(I);
  if (dim != 1 || deg != expected) {
    throw GenericityFailure("image curve has dimension " + std::to_string(dim) + " and degree " +
                            std::to_string(deg) + ", expected a curve of degree " + std::to_string(expected));
  }
  return I;
}

namespace detail {

inline Polynomial det3(const GradedMatrix& M) {
  std::vector<std::vector<Polynomial>> m(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i].push_back(M.at(i, j));
  }
  return determinant(std::move(m), M.ring());
}

/// c with a = c b, or 0 when a is not a scalar multiple of b.
inline Coeff scalar_ratio(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero() || a.terms().size() != b.terms().size()) return 0;
  const PrimeField& F = a.ring()->field();
  Coeff c = F.div(a.leading_coefficient(), b.leading_coefficient());
  return a == b.scale(c) ? c : 0;
}

}  // namespace detail

/// 3 x 3 linear matrix M with 0 -> 3 O_Y(-3) -> 3 O_Y(-2) -> I_{C/Y} -> 0,
/// normalized to target twists 0 and source twists 1.
inline GradedMatrix hilbert_burch_on_surface(const Ideal& IC, const Polynomial& g) {
  const RingPtr& R = g.ring();
  std::vector<Polynomial> quadrics;
  for (const auto& p : IC.groebner_basis()) {
    if (p.homogeneous_degree() == 2) quadrics.push_back(p);
  }
  if (quadrics.size() != 3 || !(Ideal(R, quadrics) == IC)) {
    throw GenericityFailure("curve ideal is not generated by three quadrics");
  }
  GradedMatrix row(R, {0}, {2, 2, 2});
  for (int j = 0; j < 3; ++j) row.set(0, j, quadrics[j]);
  GradedMatrix syz = syzygies(row, &g, true);
  if (syz.rows() != 3 || syz.cols() != 3 || !syz.entries_of_degree(1)) {
    throw InternalError("syzygies of the curve on the surface are not a 3 x 3 linear matrix");
  }
  GradedMatrix M = syz.twisted(2);
  if (!detail::scalar_ratio(detail::det3(M), g)) throw InternalError("determinant of M is not the surface equation");
  return M;
}

struct SurfaceModel {
  PointConfig cfg;
  RingPtr P2, P3;
  std::vector<Polynomial> cubics;  // the map P^2 -> P^3
  Polynomial g;                    // equation of Y
  Polynomial line, conic;          // plane curves whose images are C and D
  Ideal IC, ID;
  GradedMatrix M, MD;              // Hilbert-Burch matrices of C and D on Y
};

/// Y as the image of P^2 under the cubics through the points; C the image
/// of a random line, D the image of a random conic through p1, p2, p3.
inline SurfaceModel blowup_cubic_surface(const PointConfig& cfg, std::uint64_t curve_seed) {
  SurfaceModel s;
  s.cfg = cfg;
  s.P2 = Ring::make(cfg.prime, 3);
  s.P3 = Ring::make(cfg.prime, 4);
  const PrimeField& F = s.P2->field();
  s.cubics = cubics_through(cfg, s.P2);
  Ideal IY = ring_map_kernel(s.cubics, {}, s.P3);
  if (IY.generators().size() != 1 || IY.generators()[0].homogeneous_degree() != 3) {
    throw GenericityFailure("image of the plane is not a cubic surface");
  }
  s.g = IY.generators()[0];
  if (singular_locus_dim(IY, 1) != -1) throw GenericityFailure("cubic surface is singular");

  FieldRng rng(F, curve_seed);
  auto on_none = [&](const Polynomial& c, int from) {
    for (int i = from; i < 6; ++i) {
      if (detail::evaluate_at(c, cfg.points[i]) == 0) return false;
    }
    return true;
  };
  do s.line = rng.form(s.P2, 1);
  while (!on_none(s.line, 0));
  auto conics = FieldRng::monomials_of_degree(3, 2);
  std::vector<std::vector<Coeff>> rows;
  for (int i = 0; i < 3; ++i) rows.push_back(detail::evaluate_monomials(conics, cfg.points[i], F));
  auto pencil = detail::dense_nullspace(rows, 6, F);
  do {
    std::vector<Coeff> c(6, 0);
    for (const auto& v : pencil) {
      Coeff a = rng.next();
      for (int k = 0; k < 6; ++k) c[k] = F.add(c[k], F.mul(a, v[k]));
    }
    s.conic = detail::combine(s.P2, conics, c);
  } while (s.conic.is_zero() || !on_none(s.conic, 3));

  s.IC = curve_image(cfg, s.cubics, s.line, s.P3);
  s.ID = curve_image(cfg, s.cubics, s.conic, s.P3);
  s.M = hilbert_burch_on_surface(s.IC, s.g);
  s.MD = hilbert_burch_on_surface(s.ID, s.g);
  return s;
}

/// General points and the surface model, reseeding on any genericity failure.
inline SurfaceModel random_surface_model(std::uint64_t seed, std::uint32_t prime = PrimeField::kDefaultPrime) {
  std::string last;
  for (int attempt = 0; attempt < kMaxGenericityAttempts; ++attempt) {
    try {
      PointConfig cfg = random_general_points(seed + attempt, prime);
      return blowup_cubic_surface(cfg, cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    } catch (const GenericityFailure& e) {
      last = e.what();
    }
  }
  throw GenericityFailure("surface construction failed within the retry bound: " + last);
}

/// Copy of a polynomial in x0..x3 into the six-variable ring.
inline Polynomial to_p5(const Polynomial& p, const RingPtr& P5) {
  std::vector<Polynomial> imgs;
  for (int i = 0; i < p.ring()->nvars(); ++i) imgs.push_back(Polynomial::variable(P5, i));
  return p.substitute(imgs, P5);
}

struct FourfoldModel {
  RingPtr P5;
  Polynomial f;
  Polynomial q1, q2;  // f = g + x4 q1 + x5 q2
  Ideal IY, IC, ID;   // transported to P^5 through V = {x4 = x5 = 0}
  bool smooth = false;
};

inline Ideal transport(const Ideal& I, const RingPtr& P5) {
  std::vector<Polynomial> gens{Polynomial::variable(P5, 4), Polynomial::variable(P5, 5)};
  for (const auto& p : I.generators()) gens.push_back(to_p5(p, P5));
  return Ideal(P5, std::move(gens));
}

/// The fourfold g + x4 q1 + x5 q2 with its smoothness decided.
inline FourfoldModel cubic_fourfold(const SurfaceModel& s, const Polynomial& q1, const Polynomial& q2) {
  FourfoldModel X;
  X.P5 = q1.ring();
  if (X.P5->nvars() != 6) throw InvalidArgument("fourfold lives in six variables");
  X.q1 = q1;
  X.q2 = q2;
  X.f = to_p5(s.g, X.P5) + Polynomial::variable(X.P5, 4) * q1 + Polynomial::variable(X.P5, 5) * q2;
  if (X.f.homogeneous_degree() != 3) throw InvalidArgument("fourfold equation must be a cubic");
  X.IY = transport(Ideal(s.P3, {s.g}), X.P5);
  X.IC = transport(s.IC, X.P5);
  X.ID = transport(s.ID, X.P5);
  X.smooth = singular_locus_dim(Ideal(X.P5, {X.f}), 1) == -1;
  return X;
}

/// True when the cubic f on P^5 contains the surface of the model.
inline bool contains_surface(const Polynomial& f, const SurfaceModel& s) {
  return transport(Ideal(s.P3, {s.g}), f.ring()).contains(f);
}

inline FourfoldModel random_smooth_cubic_fourfold_containing(const SurfaceModel& s, std::uint64_t seed) {
  auto P5 = Ring::make(s.cfg.prime, 6);
  for (int attempt = 0; attempt < kMaxGenericityAttempts; ++attempt) {
    FieldRng rng(P5->field(), seed + attempt);
    Polynomial q1 = rng.form(P5, 2);
    Polynomial q2 = rng.form(P5, 2);
    FourfoldModel X = cubic_fourfold(s, q1, q2);
    if (X.smooth) return X;
  }
  throw GenericityFailure("no smooth cubic fourfold through the surface within the retry bound");
}

/// Dimension of the rank <= 1 locus of a 3 x 3 linear matrix and, when
/// it is finite, its length (0 for the empty scheme).
inline std::pair<int, std::optional<std::int64_t>> two_minor_scheme_length(const GradedMatrix& M) {
  if (M.rows() != 3 || M.cols() != 3) throw InvalidArgument("two-minor scheme needs a 3 x 3 matrix");
  std::vector<std::vector<Polynomial>> m(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i].push_back(M.at(i, j));
  }
  auto [dim, deg] = dim_degree(Ideal(M.ring(), minors(m, 2, M.ring())));
  if (dim <= 0) return {dim, std::optional<std::int64_t>(dim < 0 ? 0 : deg)};
  return {dim, std::optional<std::int64_t>()};
}

/// Sectioned text dump: POINTS / CUBICS / Y / C / D / M / F.
struct ModelDump {
  std::uint32_t prime = PrimeField::kDefaultPrime;
  std::uint64_t seed = 0;
  std::array<Point, 6> points{};
  std::vector<Polynomial> cubics;
  Polynomial g;
  std::vector<Polynomial> IC, ID;
  GradedMatrix M;
  Polynomial f;

  static ModelDump of(const SurfaceModel& s, const FourfoldModel& X) {
    return {s.cfg.prime, s.cfg.seed, s.cfg.points, s.cubics, s.g, s.IC.generators(), s.ID.generators(), s.M, X.f};
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "# prime " << prime << " seed " << seed << "\n";
    os << "POINTS\n";
    for (const Point& p : points) os << p[0] << " " << p[1] << " " << p[2] << "\n";
    os << "CUBICS\n";
    for (const auto& c : cubics) os << c.to_string() << "\n";
    os << "Y\n" << g.to_string() << "\n";
    os << "C\n";
    for (const auto& c : IC) os << c.to_string() << "\n";
    os << "D\n";
    for (const auto& c : ID) os << c.to_string() << "\n";
    os << "M\n" << M.to_string();
    if (!M.to_string().empty() && M.to_string().back() != '\n') os << "\n";
    os << "F\n" << f.to_string() << "\n";
    return os.str();
  }

  static ModelDump parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    ModelDump d;
    std::map<std::string, std::vector<std::string>> sec;
    std::string cur;
    bool header = false;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        std::istringstream h(line.substr(1));
        std::string a, b;
        if (h >> a >> d.prime >> b >> d.seed && a == "prime" && b == "seed") header = true;
        continue;
      }
      if (line == "POINTS" || line == "CUBICS" || line == "Y" || line == "C" || line == "D" || line == "M" ||
          line == "F") {
        cur = line;
        sec[cur];
        continue;
      }
      if (cur.empty()) throw ParseError("model dump: content before the first section");
      sec[cur].push_back(line);
    }
    if (!header) throw ParseError("model dump: missing '# prime P seed N' header");
    for (const char* name : {"POINTS", "CUBICS", "Y", "C", "D", "M", "F"}) {
      if (!sec.count(name)) throw ParseError(std::string("model dump: missing section ") + name);
    }
    auto P2 = Ring::make(d.prime, 3), P3 = Ring::make(d.prime, 4), P5 = Ring::make(d.prime, 6);
    if (sec["POINTS"].size() != 6) throw ParseError("model dump: POINTS needs six lines");
    for (int i = 0; i < 6; ++i) {
      std::istringstream ps(sec["POINTS"][i]);
      std::int64_t a, b, c;
      if (!(ps >> a >> b >> c)) throw ParseError("model dump: bad point " + sec["POINTS"][i]);
      d.points[i] = {static_cast<Coeff>(a), static_cast<Coeff>(b), static_cast<Coeff>(c)};
    }
    for (const auto& l : sec["CUBICS"]) d.cubics.push_back(Polynomial::parse(P2, l));
    if (sec["Y"].size() != 1 || sec["F"].size() != 1) throw ParseError("model dump: Y and F hold one polynomial");
    d.g = Polynomial::parse(P3, sec["Y"][0]);
    for (const auto& l : sec["C"]) d.IC.push_back(Polynomial::parse(P3, l));
    for (const auto& l : sec["D"]) d.ID.push_back(Polynomial::parse(P3, l));
    std::string mtext;
    for (const auto& l : sec["M"]) mtext += l + "\n";
    d.M = GradedMatrix::parse(P3, mtext);
    d.f = Polynomial::parse(P5, sec["F"][0]);
    return d;
  }
};

}  // namespace ulrich
