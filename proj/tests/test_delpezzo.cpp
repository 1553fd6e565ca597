#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "ulrich/delpezzo.hpp"

using namespace ulrich;
using namespace testsupport;

namespace {

PicClass cls(int a, std::array<int, 6> b) { return {a, b}; }

const PicClass H = PicClass::hyperplane();
const PicClass C = PicClass::line_class();
const PicClass D = cls(2, {-1, -1, -1, 0, 0, 0});

// Classical descriptions, built combinatorially from index subsets.
std::set<PicClass> classical_lines() {
  std::set<PicClass> s;
  for (int i = 0; i < 6; ++i) {
    PicClass e;
    e.b[i] = 1;
    s.insert(e);
    PicClass q{2, {-1, -1, -1, -1, -1, -1}};
    q.b[i] = 0;
    s.insert(q);
    for (int j = i + 1; j < 6; ++j) {
      PicClass l{1, {}};
      l.b[i] = l.b[j] = -1;
      s.insert(l);
    }
  }
  return s;
}

std::set<PicClass> classical_conics() {
  std::set<PicClass> s;
  for (int i = 0; i < 6; ++i) {
    PicClass l{1, {}};
    l.b[i] = -1;
    s.insert(l);
    PicClass c{3, {-1, -1, -1, -1, -1, -1}};
    c.b[i] = -2;
    s.insert(c);
    for (int j = i + 1; j < 6; ++j) {
      PicClass q{2, {-1, -1, -1, -1, -1, -1}};
      q.b[i] = q.b[j] = 0;
      s.insert(q);
    }
  }
  return s;
}

std::set<PicClass> classical_twisted_cubics() {
  std::set<PicClass> s{C, cls(5, {-2, -2, -2, -2, -2, -2})};
  for (int m = 0; m < 64; ++m) {
    if (__builtin_popcount(m) != 3) continue;
    PicClass c{2, {}}, q{4, {-1, -1, -1, -1, -1, -1}};
    for (int i = 0; i < 6; ++i) {
      if (m >> i & 1) {
        c.b[i] = -1;
        q.b[i] = -2;
      }
    }
    s.insert(c);
    s.insert(q);
  }
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (i == j) continue;
      PicClass c{3, {-1, -1, -1, -1, -1, -1}};
      c.b[i] = -2;
      c.b[j] = 0;
      s.insert(c);
    }
  }
  return s;
}

GradedMatrix pencil(const RingPtr& R, const std::vector<std::vector<const char*>>& rows) {
  GradedMatrix N(R, {0, 0, 0}, {1, 1, 1, 1, 1});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 5; ++j) N.set(i, j, P(R, rows[i][j]));
  }
  return N;
}

}  // namespace

TEST(PicIntersect, Examples) {
  EXPECT_EQ(pic_intersect(H, H), 3);
  EXPECT_EQ(pic_intersect(D, C), 2);
  EXPECT_EQ(pic_intersect(C, involution(C)), 5);
  EXPECT_EQ(pic_intersect(involution(C), D), 4);
  EXPECT_EQ(pic_intersect(C, involution(D)), 4);
  EXPECT_EQ(pic_intersect(PicClass::canonical(), PicClass::canonical()), 3);
  EXPECT_EQ(D, C * 2 - PicClass::exceptional(1) - PicClass::exceptional(2) - PicClass::exceptional(3));
}

TEST(PicIntersect, SymmetricBilinear) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> c(-4, 4);
  auto rnd = [&] {
    PicClass x{c(rng), {}};
    for (int& b : x.b) b = c(rng);
    return x;
  };
  for (int k = 0; k < 200; ++k) {
    PicClass x = rnd(), y = rnd(), z = rnd();
    int m = c(rng);
    EXPECT_EQ(pic_intersect(x, y), pic_intersect(y, x));
    EXPECT_EQ(pic_intersect(x * m + y, z), m * pic_intersect(x, z) + pic_intersect(y, z));
  }
}

TEST(PicIntersect, SignatureIsOneSix) { EXPECT_EQ(picard_signature(), std::make_pair(1, 6)); }

TEST(PicIntersect, SignatureOfIndefiniteForms) {
  using M = std::vector<std::vector<Rational>>;
  auto R = [](int v) { return Rational(v); };
  EXPECT_EQ(signature(M{{R(0), R(1)}, {R(1), R(0)}}), std::make_pair(1, 1));
  EXPECT_EQ(signature(M{{R(2), R(1)}, {R(1), R(2)}}), std::make_pair(2, 0));
  EXPECT_EQ(signature(M{{R(1), R(2)}, {R(2), R(4)}}), std::make_pair(1, 0));
}

TEST(RiemannRoch, Examples) {
  EXPECT_EQ(riemann_roch_chi(PicClass{}), 1);
  EXPECT_EQ(riemann_roch_chi(D), 3);
  for (int t = 2; t <= 4; ++t) EXPECT_EQ(riemann_roch_chi(D - H * t), 3 * (t - 1) * (t - 2) / 2) << t;
  // chi(O(tH)) on a cubic surface: C(t+3,3) - C(t,3)
  for (int t = 0; t <= 4; ++t) {
    EXPECT_EQ(riemann_roch_chi(H * t), (t + 3) * (t + 2) * (t + 1) / 6 - t * (t - 1) * (t - 2) / 6);
  }
}

TEST(CurveClasses, Lines) {
  auto v = enumerate_curve_classes(1, -1);
  EXPECT_EQ(v.size(), 27u);
  EXPECT_EQ(std::set<PicClass>(v.begin(), v.end()), classical_lines());
}

TEST(CurveClasses, Conics) {
  auto v = enumerate_curve_classes(2, 0);
  EXPECT_EQ(v.size(), 27u);
  EXPECT_EQ(std::set<PicClass>(v.begin(), v.end()), classical_conics());
}

TEST(CurveClasses, TwistedCubics) {
  auto v = enumerate_curve_classes(3, 1);
  EXPECT_EQ(v.size(), 72u);
  std::set<PicClass> s(v.begin(), v.end());
  EXPECT_EQ(s, classical_twisted_cubics());
  EXPECT_TRUE(s.count(C));
  EXPECT_TRUE(s.count(D));
  EXPECT_TRUE(s.count(involution(C)));
  EXPECT_TRUE(s.count(involution(D)));
}

TEST(CurveClasses, LargeBoxFindsNothingElse) {
  // Brute force over a much larger box than the Cauchy-Schwarz one.
  int found = 0;
  PicClass c;
  for (c.a = -2; c.a <= 8; ++c.a) {
    for (int m = 0; m < 15625; ++m) {  // 5^6: b_i in [-3, 1]
      int x = m;
      for (int i = 0; i < 6; ++i, x /= 5) c.b[i] = x % 5 - 3;
      if (pic_intersect(c, H) == 3 && pic_intersect(c, c) == 1) ++found;
    }
  }
  EXPECT_EQ(found, 72);
}

TEST(CurveClasses, OutOfScopeDegree) {
  EXPECT_THROW(enumerate_curve_classes(4, 2), InvalidArgument);
  EXPECT_THROW(enumerate_curve_classes(0, 0), InvalidArgument);
  EXPECT_TRUE(enumerate_curve_classes(1, 1).empty());
}

TEST(CurveClasses, TwistedCubicsAreLatticeUlrich) {
  for (const PicClass& A : enumerate_curve_classes(3, 1)) {
    EXPECT_EQ(riemann_roch_chi(A), 3);
    EXPECT_EQ(riemann_roch_chi(A - H), 0);
    EXPECT_EQ(riemann_roch_chi(A - H * 2), 0);
  }
}

TEST(CurveClasses, InvolutionPermutesTwistedCubicsWithoutFixedPoints) {
  auto v = enumerate_curve_classes(3, 1);
  std::set<PicClass> s(v.begin(), v.end()), image;
  for (const PicClass& A : v) {
    PicClass B = involution(A);
    EXPECT_NE(A, B);
    EXPECT_TRUE(s.count(B));
    EXPECT_EQ(involution(B), A);
    image.insert(B);
  }
  EXPECT_EQ(image, s);
}

TEST(PicText, RoundTrip) {
  EXPECT_EQ(D.to_string(), "2;-1,-1,-1,0,0,0");
  EXPECT_EQ(PicClass::parse("2;-1,-1,-1,0,0,0"), D);
  for (const PicClass& A : enumerate_curve_classes(2, 0)) EXPECT_EQ(PicClass::parse(A.to_string()), A);
  EXPECT_THROW(PicClass::parse("2,-1"), ParseError);
  EXPECT_THROW(PicClass::parse("2;1,2,3"), ParseError);
  EXPECT_THROW(PicClass::parse("2;1,2,3,4,5,6,7"), ParseError);
  EXPECT_THROW(PicClass::parse("x;1,2,3,4,5,6"), ParseError);
}

TEST(SplittingType, SixNormalForms) {
  auto R = ring(2);
  const char* z = "0";
  struct Case {
    std::vector<std::vector<const char*>> rows;
    SplittingType type;
  };
  std::vector<Case> cases{
      {{{"x0", "x1", z, z, z}, {z, z, "x0", "x1", z}, {z, z, z, "x0", "x1"}}, {1, 2, 0}},
      {{{"x0", "x1", z, z, z}, {z, "x0", "x1", z, z}, {z, z, "x0", "x1", z}}, {0, 3, 0}},
      {{{"x0", "x1", z, z, z}, {z, z, "x0", "x1", z}, {z, z, z, z, "x0"}}, {1, 1, 1}},
      {{{"x0", "x1", z, z, z}, {z, "x0", "x1", z, z}, {z, z, z, "x0", z}}, {0, 2, 1}},
      {{{"x0", "x1", z, z, z}, {z, z, "x0", z, z}, {z, z, z, "x1", z}}, {0, 1, 2}},
      {{{"x0", z, z, z, z}, {z, "x1", z, z, z}, {z, z, "x0 + x1", z, z}}, {0, 0, 3}},
  };
  for (const auto& c : cases) EXPECT_EQ(pencil_splitting_type(pencil(R, c.rows)), c.type) << c.type.to_string();
}

TEST(SplittingType, GenericPencilIsBalancedScroll) {
  std::mt19937_64 rng(12);
  auto R = ring(2);
  const std::vector<SplittingType> allowed{{1, 2, 0}, {0, 3, 0}, {1, 1, 1}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3}};
  for (int k = 0; k < 5; ++k) {
    GradedMatrix N(R, {0, 0, 0}, {1, 1, 1, 1, 1});
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 5; ++j) N.set(i, j, random_form(R, 1, rng));
    }
    SplittingType t = pencil_splitting_type(N);
    EXPECT_EQ(t.a1 + t.a2 + t.b, 3);
    EXPECT_NE(std::find(allowed.begin(), allowed.end(), t), allowed.end());
    EXPECT_EQ(t, (SplittingType{1, 2, 0}));
  }
}

TEST(SplittingType, DegeneratePencilIsReported) {
  auto R = ring(2);
  const char* z = "0";
  EXPECT_THROW(pencil_splitting_type(pencil(R, {{"x0", "x1", z, z, z}, {"x0", "x1", z, z, z}, {z, z, "x0", z, z}})),
               InvalidArgument);
  EXPECT_THROW(pencil_splitting_type(GradedMatrix(R, {0, 0}, {1, 1, 1, 1, 1})), InvalidArgument);
}
