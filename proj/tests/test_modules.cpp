#include <gtest/gtest.h>

#include "support.hpp"
#include "ulrich/ext.hpp"
#include "ulrich/modules.hpp"

using namespace ulrich;
using namespace testsupport;

namespace {

// Cofactor adjugate, independent of the resolution machinery.
GradedMatrix adjugate(const GradedMatrix& M) {
  int n = M.rows();
  std::vector<int> tgt(n), src(n);
  int total = 0;
  for (int k = 0; k < n; ++k) total += M.source()[k] - M.target()[k];
  for (int k = 0; k < n; ++k) {
    tgt[k] = M.source()[k];
    src[k] = M.target()[k] + total;
  }
  GradedMatrix A(M.ring(), tgt, src);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<std::vector<Polynomial>> sub;
      for (int r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Polynomial> row;
        for (int c = 0; c < n; ++c) {
          if (c != i) row.push_back(M.at(r, c));
        }
        sub.push_back(row);
      }
      Polynomial d = detail::determinant(sub, M.ring());
      A.set(i, j, (i + j) % 2 ? -d : d);
    }
  }
  return A;
}

Polynomial det3(const GradedMatrix& M) {
  std::vector<std::vector<Polynomial>> m(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i].push_back(M.at(i, j));
  }
  return detail::determinant(m, M.ring());
}

// Dimension of M_d by dense linear algebra over the ambient monomials.
std::int64_t naive_hf(const Presentation& M, int d) {
  const auto& R = M.ring();
  std::vector<std::vector<Coeff>> rows;
  std::int64_t total = 0;
  std::map<std::pair<std::uint64_t, int>, int> index;
  for (int k = 0; k < M.num_generators(); ++k) {
    int e = d - M.generators()[k];
    if (e < 0) continue;
    for (Monomial m : oracle::monomials_of_degree(R->nvars(), e)) index[{m.bits, k}] = static_cast<int>(total++);
  }
  Presentation A = M.as_ambient();
  const GradedMatrix& rel = A.relations();
  for (int j = 0; j < rel.cols(); ++j) {
    int e = d - rel.source()[j];
    if (e < 0) continue;
    for (Monomial m : oracle::monomials_of_degree(R->nvars(), e)) {
      std::vector<Coeff> row(total, 0);
      for (int i = 0; i < rel.rows(); ++i) {
        for (const auto& t : rel.at(i, j).terms()) {
          int c = index.at({(t.mono * m).bits, i});
          row[c] = R->field().add(row[c], t.coef);
        }
      }
      rows.push_back(row);
    }
  }
  return total - oracle::rank(rows, R->field());
}

}  // namespace

TEST(FreeResolution, FreeModuleHasLengthZero) {
  auto R = ring(3);
  auto res = free_resolution(Presentation::free(R, {0, 1, 1}), 6);
  EXPECT_EQ(res.length(), 0);
  EXPECT_EQ(res.twists(0), (std::vector<int>{0, 1, 1}));
}

TEST(FreeResolution, ResidueFieldOfDoubleLine) {
  // coker(x) over k[x,y]/(x^2): periodic with d_k = x, F_k = R(-k).
  auto R = ring(2);
  Polynomial f = P(R, "x0^2");
  GradedMatrix A(R, {0}, {1});
  A.set(0, 0, P(R, "x0"));
  auto res = free_resolution(Presentation(A, f), 7);
  ASSERT_EQ(res.length(), 7);
  for (int k = 0; k <= 7; ++k) EXPECT_EQ(res.twists(k), std::vector<int>{k});
  for (const auto& d : res.d) EXPECT_EQ(d.at(0, 0), P(R, "x0"));
  EXPECT_TRUE(res.is_complex());
  EXPECT_EQ(res.period, 2);
  EXPECT_EQ(res.period_start, 3);
}

TEST(FreeResolution, BettiNumbersOfTwistedCubic) {
  auto R = ring(4);
  GradedMatrix A(R, {0}, {2, 2, 2});
  A.set(0, 0, P(R, "x0*x2 - x1^2"));
  A.set(0, 1, P(R, "x0*x3 - x1*x2"));
  A.set(0, 2, P(R, "x1*x3 - x2^2"));
  auto res = free_resolution(Presentation(A), 6);
  ASSERT_EQ(res.length(), 2);
  EXPECT_EQ(detail::sorted(res.twists(2)), (std::vector<int>{3, 3}));
  EXPECT_TRUE(res.is_complex());
  EXPECT_TRUE(res.minimal);
}

TEST(FreeResolution, ComplexPropertyOnRandomModules) {
  std::mt19937_64 rng(7);
  auto R = ring(4);
  Polynomial f = random_form(R, 3, rng);
  for (int trial = 0; trial < 3; ++trial) {
    GradedMatrix A(R, {0, 0}, {1, 2, 2});
    A.set(0, 0, random_form(R, 1, rng));
    A.set(1, 0, random_form(R, 1, rng));
    for (int j = 1; j < 3; ++j) {
      A.set(0, j, random_form(R, 2, rng));
      A.set(1, j, random_form(R, 2, rng));
    }
    auto res = free_resolution(Presentation(A, f), 5);
    EXPECT_TRUE(res.is_complex());
    EXPECT_TRUE(res.minimal);
  }
}

TEST(MatrixFactorization, CubicSurfaceDeterminantal) {
  std::mt19937_64 rng(11);
  auto R = ring(4);
  GradedMatrix M = random_linear_matrix(R, 3, rng);
  Polynomial g = det3(M);
  ASSERT_EQ(g.homogeneous_degree(), 3);
  EXPECT_TRUE(verify_matrix_factorization({M, adjugate(M), g}).ok);
  auto bad = verify_matrix_factorization({M, adjugate(M), g + P(R, "x0^3")});
  EXPECT_FALSE(bad.ok);
  EXPECT_FALSE(bad.witness.empty());
}

TEST(MatrixFactorization, ShapeMismatchThrows) {
  auto R = ring(2);
  GradedMatrix a(R, {0, 0}, {1}), b(R, {0, 0}, {1});
  EXPECT_THROW(verify_matrix_factorization({a, b, P(R, "x0")}), InvalidArgument);
}

TEST(MatrixFactorization, ExtractedFromPeriodicTail) {
  std::mt19937_64 rng(5);
  auto R = ring(4);
  GradedMatrix M = random_linear_matrix(R, 3, rng);
  Polynomial g = det3(M);
  // A module over R/(g) with a nontrivial periodic resolution: the residue
  // of a point.
  GradedMatrix A(R, {0}, {1, 1, 1, 1});
  for (int i = 0; i < 4; ++i) A.set(0, i, Polynomial::variable(R, i));
  auto res = free_resolution(Presentation(A, g), 6);
  ASSERT_TRUE(res.is_complex());
  ASSERT_EQ(res.period, 2);
  auto mf = extract_matrix_factorization(res, g);
  EXPECT_TRUE(verify_matrix_factorization(mf).ok);
  EXPECT_EQ(mf.phi.rows(), 8);
}

TEST(Presentation, TwistIsInvertible) {
  auto R = ring(3);
  GradedMatrix A(R, {0, 1}, {2});
  A.set(0, 0, P(R, "x0^2"));
  A.set(1, 0, P(R, "x1"));
  Presentation M(A);
  Presentation back = twist(twist(M, 3), -3);
  EXPECT_EQ(back.relations(), M.relations());
  EXPECT_EQ(twist(M, 2).generators(), (std::vector<int>{-2, -1}));
  EXPECT_EQ(twist(M, 2).hilbert_series()(0), M.hilbert_series()(2));
}

TEST(Presentation, CokernelOfZeroMapIsFree) {
  auto R = ring(3);
  Presentation M = cokernel_presentation(GradedMatrix(R, {0, 2}, {}));
  Presentation F = Presentation::free(R, {0, 2});
  for (int d = 0; d < 6; ++d) EXPECT_EQ(M.hilbert_series()(d), F.hilbert_series()(d));
}

TEST(Presentation, HilbertFunctionMatchesNaiveCount) {
  std::mt19937_64 rng(3);
  auto R = ring(4);
  Polynomial f = random_form(R, 3, rng);
  GradedMatrix A(R, {0, 0, 1}, {1, 1, 2});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) A.set(i, j, random_form(R, A.source()[j] - A.target()[i], rng));
  }
  Presentation M(A, f);
  for (int d = 0; d <= 5; ++d) EXPECT_EQ(M.hilbert_series()(d), naive_hf(M, d)) << d;
}

TEST(Presentation, DirectSumIsAdditive) {
  std::mt19937_64 rng(4);
  auto R = ring(4);
  GradedMatrix A(R, {0}, {2}), B(R, {1, 1}, {2});
  A.set(0, 0, random_form(R, 2, rng));
  B.set(0, 0, random_form(R, 1, rng));
  B.set(1, 0, random_form(R, 1, rng));
  Presentation a(A), b(B), s = direct_sum(a, b);
  for (int d = -1; d < 7; ++d) EXPECT_EQ(s.hilbert_series()(d), a.hilbert_series()(d) + b.hilbert_series()(d));
}

TEST(Presentation, MinimizationPreservesHilbertFunction) {
  std::mt19937_64 rng(8);
  auto R = ring(4);
  // Unit entries and redundant columns on purpose.
  GradedMatrix A(R, {0, 1, 1}, {1, 1, 2, 2});
  A.set(0, 0, random_form(R, 1, rng));
  A.set(1, 0, Polynomial::constant(R, 1));
  A.set(2, 0, Polynomial::constant(R, 5));
  A.set(0, 1, random_form(R, 1, rng));
  A.set(1, 1, Polynomial::constant(R, 2));
  for (int j = 2; j < 4; ++j) {
    A.set(0, j, random_form(R, 2, rng));
    A.set(1, j, random_form(R, 1, rng));
    A.set(2, j, random_form(R, 1, rng));
  }
  A.set(0, 3, A.at(0, 2) * Polynomial::constant(R, 3));
  A.set(1, 3, A.at(1, 2) * Polynomial::constant(R, 3));
  A.set(2, 3, A.at(2, 2) * Polynomial::constant(R, 3));
  Presentation M(A), m = minimize(M);
  EXPECT_LT(m.num_generators(), M.num_generators());
  for (int d = 0; d < 7; ++d) EXPECT_EQ(m.hilbert_series()(d), M.hilbert_series()(d));
  for (int i = 0; i < m.relations().rows(); ++i) {
    for (int j = 0; j < m.relations().cols(); ++j) EXPECT_FALSE(detail::is_unit_entry(m.relations().at(i, j)));
  }
}

TEST(KernelOfMap, ZeroMapHasFullKernel) {
  auto R = ring(3);
  GradedMatrix A(R, {0}, {2});
  A.set(0, 0, P(R, "x0*x1"));
  Presentation src(A), tgt = Presentation::free(R, {0});
  Presentation K = kernel_of_map(GradedMatrix(R, {0}, {0}), src, tgt);
  for (int d = 0; d < 6; ++d) EXPECT_EQ(K.hilbert_series()(d), src.hilbert_series()(d));
}

TEST(KernelOfMap, ProjectionOntoHyperplaneSection) {
  auto R = ring(3);
  GradedMatrix B(R, {0}, {1});
  B.set(0, 0, P(R, "x0"));
  Presentation src = Presentation::free(R, {0}), tgt(B);
  GradedMatrix Z(R, {0}, {0});
  Z.set(0, 0, Polynomial::constant(R, 1));
  Presentation K = kernel_of_map(Z, src, tgt);
  EXPECT_EQ(K.generators(), std::vector<int>{1});
  EXPECT_EQ(K.relations().cols(), 0);
}

TEST(KernelOfMap, IllDefinedMapThrows) {
  auto R = ring(3);
  GradedMatrix A(R, {0}, {1});
  A.set(0, 0, P(R, "x0"));
  Presentation src(A), tgt = Presentation::free(R, {0});
  GradedMatrix Z(R, {0}, {0});
  Z.set(0, 0, Polynomial::constant(R, 1));
  EXPECT_THROW(kernel_of_map(Z, src, tgt), InvalidArgument);
}

TEST(MatrixText, RoundTrip) {
  std::mt19937_64 rng(9);
  auto R = ring(6);
  GradedMatrix A(R, {0, 1}, {1, 2, 3});
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) A.set(i, j, random_form(R, A.source()[j] - A.target()[i], rng));
  }
  std::string s = A.to_string();
  GradedMatrix B = GradedMatrix::parse(R, s);
  EXPECT_EQ(A, B);
  EXPECT_EQ(B.to_string(), s);
}

TEST(Ext, HomOfStructureSheaf) {
  std::mt19937_64 rng(2);
  auto R = ring(6);
  Polynomial f = random_form(R, 3, rng);
  Presentation O = Presentation::free(R, {0}, f);
  EXPECT_EQ(hom_degree_zero(O, O).size(), 1u);
}

TEST(Ext, GradedExtOfHyperplane) {
  // Ext^1(S/x0, S/x0)_0 = (S/x0)_1 has dimension n - 1.
  auto R = ring(4);
  GradedMatrix A(R, {0}, {1});
  A.set(0, 0, P(R, "x0"));
  Presentation M(A);
  EXPECT_EQ(graded_ext_degree_zero(0, M, M), 1);
  EXPECT_EQ(graded_ext_degree_zero(1, M, M), 3);
  EXPECT_EQ(graded_ext_degree_zero(2, M, M), 0);
}

TEST(Ext, TruncationKeepsHighDegrees) {
  auto R = ring(3);
  GradedMatrix A(R, {0}, {2});
  A.set(0, 0, P(R, "x0*x1"));
  Presentation M(A), T = truncate(M, 2);
  for (int d = 2; d < 7; ++d) EXPECT_EQ(T.hilbert_series()(d), M.hilbert_series()(d));
  EXPECT_EQ(T.hilbert_series()(1), 0);
}
