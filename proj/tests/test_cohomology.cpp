#include <gtest/gtest.h>

#include "support.hpp"
#include <limits>

#include "ulrich/cohomology.hpp"

using namespace ulrich;
using namespace testsupport;

namespace {

QPoly binom_poly(int shift, int k) {
  // C(t + shift, k) as a polynomial in t.
  QPoly r = QPoly::constant(Rational(1));
  for (int i = 0; i < k; ++i) r = r * QPoly::linear(Rational(shift - i)) / Rational(i + 1);
  return r;
}

std::int64_t binom(std::int64_t m, int k) {
  if (m < k || m < 0) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (m - i) / (i + 1);
  return r;
}

struct Fourfold {
  RingPtr R = ring(6);
  Polynomial f;
  explicit Fourfold(std::uint64_t seed) : f(R) {
    std::mt19937_64 rng(seed);
    Polynomial g = random_form(R, 3, rng);
    // keep g in x0..x3 so the plane x4 = x5 = 0 lies on X
    std::vector<Polynomial> imgs;
    for (int i = 0; i < 6; ++i) imgs.push_back(i < 4 ? Polynomial::variable(R, i) : Polynomial(R));
    g = g.substitute(imgs, R);
    f = g + Polynomial::variable(R, 4) * random_form(R, 2, rng) + Polynomial::variable(R, 5) * random_form(R, 2, rng);
  }
};

// Ulrich line bundle on a determinantal cubic surface: coker of a general
// 3x3 linear matrix.
Presentation determinantal_ulrich(const RingPtr& R, std::uint64_t seed, Polynomial* surface) {
  std::mt19937_64 rng(seed);
  GradedMatrix M = random_linear_matrix(R, 3, rng);
  std::vector<std::vector<Polynomial>> m(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i].push_back(M.at(i, j));
  }
  *surface = detail::determinant(m, R);
  return Presentation(M, *surface);
}

}  // namespace

TEST(HilbertPolynomial, ProjectiveSpace) {
  auto R = ring(6);
  auto h = hilbert_polynomial(Presentation::free(R, {0}), 5, 1);
  EXPECT_EQ(h.poly, binom_poly(5, 5));
  EXPECT_EQ(h.integral_rank(), 1);
}

TEST(HilbertPolynomial, StructureSheafOfCubicFourfold) {
  Fourfold X(1);
  auto h = hilbert_polynomial(Presentation::free(X.R, {0}, X.f));
  EXPECT_EQ(h.poly, binom_poly(5, 5) - binom_poly(2, 5));
  EXPECT_EQ(h.integral_rank(), 1);
  EXPECT_EQ(h.reduced, h.poly);
}

TEST(HilbertPolynomial, ZeroModuleHasNoRank) {
  auto R = ring(3);
  GradedMatrix A(R, {0}, {0});
  A.set(0, 0, Polynomial::constant(R, 1));
  auto h = hilbert_polynomial(Presentation(A), 2, 1);
  EXPECT_TRUE(h.poly.is_zero());
  EXPECT_FALSE(h.rank.has_value());
  EXPECT_THROW(h.integral_rank(), InvalidArgument);
}

TEST(UlrichTarget, Examples) {
  QPoly u = ulrich_target(4, 3);
  QPoly expect = QPoly::linear(Rational(4)) * QPoly::linear(Rational(3)) * QPoly::linear(Rational(2)) *
                 QPoly::linear(Rational(1)) / Rational(8);
  EXPECT_EQ(u, expect);
  EXPECT_EQ(ulrich_target(1, 1), QPoly::linear(Rational(1)));
  EXPECT_THROW(ulrich_target(0, 3), InvalidArgument);
}

TEST(UlrichTarget, DefectOfTheSyzygyBundle) {
  // 6 u(t-1) - 6 p_S(t) with p_S = (t+2)^2 (t+1)^2 / 8
  QPoly pS = QPoly::linear(Rational(2)) * QPoly::linear(Rational(2)) * QPoly::linear(Rational(1)) *
             QPoly::linear(Rational(1)) / Rational(8);
  QPoly d = ulrich_target(4, 3).shifted(Rational(-1)) * Rational(6) - pS * Rational(6);
  EXPECT_EQ(d, QPoly::linear(Rational(2)) * QPoly::linear(Rational(1)) * Rational(-3, 2));
}

TEST(ChernConstraints, AdmissibleRanks) {
  auto c6 = ulrich_chern_constraints(6);
  EXPECT_EQ(c6[0], Rational(0));
  EXPECT_EQ(c6[1], Rational(2));
  EXPECT_EQ(c6[2], Rational(0));
  EXPECT_EQ(c6[3], Rational(-3));
  auto c9 = ulrich_chern_constraints(9);
  EXPECT_EQ(c9[1], Rational(3));
  EXPECT_EQ(c9[3], Rational(0));
  EXPECT_THROW(ulrich_chern_constraints(4), InvalidArgument);
  EXPECT_THROW(ulrich_chern_constraints(3), InvalidArgument);
}

TEST(CohomologyTable, ProjectiveSpaceBott) {
  auto R = ring(4);
  auto T = sheaf_cohomology_table(Presentation::free(R, {0}), -6, 4);
  for (int t = -6; t <= 4; ++t) {
    EXPECT_EQ(T.at(0, t), binom(t + 3, 3));
    EXPECT_EQ(T.at(1, t), 0);
    EXPECT_EQ(T.at(2, t), 0);
    EXPECT_EQ(T.at(3, t), binom(-t - 1, 3));
  }
}

TEST(CohomologyTable, SerreDualityOnCubicFourfold) {
  Fourfold X(2);
  auto T = sheaf_cohomology_table(Presentation::free(X.R, {0}, X.f), -6, 4);
  ASSERT_EQ(T.h.size(), 6u);
  for (int t = -6; t <= 4; ++t) {
    int dual = -3 - t;
    if (dual < -6 || dual > 4) continue;
    for (int i = 0; i <= 4; ++i) EXPECT_EQ(T.at(i, t), T.at(4 - i, dual)) << i << " " << t;
    EXPECT_EQ(T.at(5, t), 0);
  }
  EXPECT_EQ(T.at(0, 0), 1);
  EXPECT_EQ(T.at(4, -6), 1 * 0 + T.at(0, 3));
}

TEST(CohomologyTable, TsvExport) {
  auto R = ring(2);
  auto T = sheaf_cohomology_table(Presentation::free(R, {0}), -2, 1);
  EXPECT_EQ(T.to_tsv(), "i\t-2\t-1\t0\t1\n0\t0\t0\t1\t2\n1\t1\t0\t0\t0\n");
}

TEST(CohomologyTable, PointModuleIsCountedOnce) {
  // The sheaf of a reduced point in P^3: h^0 = 1 in every twist.
  auto R = ring(4);
  GradedMatrix A(R, {0}, {1, 1, 1});
  for (int i = 0; i < 3; ++i) A.set(0, i, Polynomial::variable(R, i));
  auto T = sheaf_cohomology_table(Presentation(A), -3, 3);
  for (int t = -3; t <= 3; ++t) {
    EXPECT_EQ(T.at(0, t), 1);
    for (int i = 1; i < 4; ++i) EXPECT_EQ(T.at(i, t), 0);
  }
}

TEST(Ulrich, DeterminantalLineBundleOnCubicSurface) {
  auto R = ring(4);
  Polynomial g(R);
  Presentation L = determinantal_ulrich(R, 21, &g);
  auto T = sheaf_cohomology_table(L, -3, 1);
  EXPECT_EQ(T.at(0, 0), 3);
  EXPECT_EQ(T.at(1, 0), 0);
  EXPECT_EQ(T.at(2, 0), 0);
  EXPECT_TRUE(is_ulrich(L, 2).value);
  EXPECT_TRUE(is_acm(L).value);
  EXPECT_FALSE(is_ulrich(Presentation::free(R, {0}, g), 2).value);
  EXPECT_FALSE(is_ulrich(twist(L, 1), 2).value);
}

TEST(Acm, FreeAndStructureSheaves) {
  Fourfold X(3);
  EXPECT_TRUE(is_acm(Presentation::free(X.R, {0, 1}, X.f)).value);
}

TEST(Acm, IdealOfCubicSurfaceIsNotAcm) {
  Fourfold X(4);
  GradedMatrix C(X.R, {0}, {1, 1});
  C.set(0, 0, Polynomial::variable(X.R, 4));
  C.set(0, 1, Polynomial::variable(X.R, 5));
  Presentation I = image_of_columns(C, X.f);
  auto r = is_acm(I);
  EXPECT_FALSE(r.value);
  EXPECT_FALSE(r.certificate.empty());
}

TEST(Reflexivity, StructureSheafIsLocallyFree) {
  Fourfold X(5);
  auto p = reflexivity_probe(Presentation::free(X.R, {0}, X.f));
  EXPECT_EQ(p.kind, Reflexivity::LocallyFree);
  EXPECT_TRUE(p.consistent);
}

TEST(Reflexivity, IdealOfCubicSurfaceIsTorsionFreeNotReflexive) {
  // Y = X cap {x4 = x5 = 0} is a cubic surface with canonical class -H, so
  // h^3(I_Y(-t)) = h^2(O_Y(-t)) = h^0(O_Y(t-1)) = C(t+2,3) - C(t-1,3).
  Fourfold X(6);
  GradedMatrix C(X.R, {0}, {1, 1});
  C.set(0, 0, Polynomial::variable(X.R, 4));
  C.set(0, 1, Polynomial::variable(X.R, 5));
  Presentation I = image_of_columns(C, X.f);
  SheafCohomology H(I);
  auto p = reflexivity_probe(H);
  EXPECT_EQ(p.kind, Reflexivity::TorsionFreeNotReflexive);
  EXPECT_TRUE(p.consistent);
  EXPECT_TRUE(p.exact[0].is_zero());
  EXPECT_TRUE(p.exact[1].is_zero());
  EXPECT_EQ(p.exact[2], binom_poly(2, 3) - binom_poly(-1, 3));
  for (int t = 1; t <= 6; ++t) EXPECT_EQ(H.h(3, -t), binom(t + 2, 3) - binom(t - 1, 3)) << t;
}

TEST(Reflexivity, NeedsThreeSamples) {
  Fourfold X(7);
  EXPECT_THROW(reflexivity_probe(Presentation::free(X.R, {0}, X.f), 4, 5), InvalidArgument);
}

TEST(Properties, UlrichImpliesAcmAndEulerHolds) {
  auto R = ring(4);
  for (std::uint64_t seed = 30; seed < 33; ++seed) {
    Polynomial g(R);
    Presentation L = determinantal_ulrich(R, seed, &g);
    if (is_ulrich(L, 2).value) EXPECT_TRUE(is_acm(L).value);
    EXPECT_NO_THROW(sheaf_cohomology_table(direct_sum(L, Presentation::free(R, {1}, g)), -6, 4));
  }
}

TEST(VanishingThreshold, ProjectiveSpace) {
  auto R = ring(4);
  SheafCohomology C(Presentation::free(R, {0}));
  EXPECT_EQ(C.vanishing_threshold(1), std::numeric_limits<int>::min());
  EXPECT_EQ(C.vanishing_threshold(3), -3);
  EXPECT_TRUE(C.higher_cohomology_vanishes_from(-3));
  EXPECT_FALSE(C.higher_cohomology_vanishes_from(-4));
}

TEST(VanishingThreshold, AgreesWithTheTable) {
  Fourfold X(4);
  SheafCohomology C(Presentation::free(X.R, {0}, X.f));
  for (int i = 1; i <= 4; ++i) {
    int t0 = C.vanishing_threshold(i);
    if (t0 == std::numeric_limits<int>::min()) {
      for (int t = -8; t <= 4; ++t) EXPECT_EQ(C.h(i, t), 0);
      continue;
    }
    EXPECT_NE(C.h(i, t0 - 1), 0) << i;
    for (int t = t0; t <= t0 + 6; ++t) EXPECT_EQ(C.h(i, t), 0) << i;
  }
}

TEST(ExtSeries, KoszulOverHypersurface) {
  // x4, x5 is a regular sequence on R_X, so Ext^j(R_X/(x4,x5), R_X)
  // vanishes except Ext^2 = R_X/(x4,x5)(2).
  Fourfold X(5);
  auto R = X.R;
  GradedMatrix A(R, {0}, {1, 1});
  A.set(0, 0, Polynomial::variable(R, 4));
  A.set(0, 1, Polynomial::variable(R, 5));
  Presentation M(A, X.f);
  FreeResolution res = free_resolution(M, 5);
  EXPECT_EQ(res.length(), 2);
  for (int j : {0, 1, 3, 4}) EXPECT_TRUE(ext_series(res, j).is_zero()) << j;
  HilbertSeries e2 = ext_series(res, 2), m = M.hilbert_series().shifted(-2);
  for (int d = -4; d <= 6; ++d) EXPECT_EQ(e2(d), m(d)) << d;
}

TEST(SheafExt, HomOfStructureSheaf) {
  Fourfold X(6);
  Presentation O = Presentation::free(X.R, {0}, X.f);
  auto e = sheaf_ext(0, O, O);
  ASSERT_TRUE(e.value.has_value());
  EXPECT_EQ(*e.value, 1);
  EXPECT_EQ(e.status, "stable");
}

TEST(SheafExt, UnsaturatedTargetIsTruncated) {
  // The maximal ideal has sheaf O but misses the constant section.
  auto R = ring(4);
  GradedMatrix x(R, {0}, {1, 1, 1, 1});
  for (int i = 0; i < 4; ++i) x.set(0, i, Polynomial::variable(R, i));
  Presentation m(syzygies(x, nullptr, true).twisted(0));
  ASSERT_EQ(m.generators(), std::vector<int>({1, 1, 1, 1}));
  Presentation O = Presentation::free(R, {0});
  EXPECT_EQ(graded_ext_degree_zero(0, O, m), 0);
  auto e = sheaf_ext(0, O, m);
  EXPECT_EQ(e.truncation, 1);
  ASSERT_TRUE(e.value.has_value());
  EXPECT_EQ(*e.value, 1);
}

TEST(SheafExt, TopCohomologyOnProjectiveSpace) {
  // Ext^3(O, O(-4)) = H^3(O(-4)) = 1 on P^3.
  auto R = ring(4);
  auto e = sheaf_ext(3, Presentation::free(R, {0}), Presentation::free(R, {4}));
  EXPECT_EQ(e.truncation, 1);
  ASSERT_TRUE(e.value.has_value());
  EXPECT_EQ(*e.value, 1);
  EXPECT_EQ(e.status, "stable");
}
