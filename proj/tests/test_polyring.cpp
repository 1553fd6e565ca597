#include <gtest/gtest.h>

#include <random>

#include "ulrich/polynomial.hpp"

using namespace ulrich;

namespace {

Polynomial random_poly(const RingPtr& R, std::mt19937_64& rng, int maxdeg, int nterms) {
  std::vector<Polynomial::Term> t;
  std::uniform_int_distribution<int> ed(0, maxdeg);
  std::uniform_int_distribution<Coeff> cd(0, R->field().modulus() - 1);
  for (int k = 0; k < nterms; ++k) {
    std::vector<int> e(R->nvars());
    for (int& x : e) x = ed(rng) / R->nvars();
    t.push_back({Monomial::from_exponents(e), cd(rng)});
  }
  return Polynomial::from_terms(R, t);
}

Polynomial random_homogeneous(const RingPtr& R, std::mt19937_64& rng, int deg, int nterms) {
  std::vector<Polynomial::Term> t;
  std::uniform_int_distribution<int> vd(0, R->nvars() - 1);
  std::uniform_int_distribution<Coeff> cd(1, R->field().modulus() - 1);
  for (int k = 0; k < nterms; ++k) {
    std::vector<int> e(R->nvars(), 0);
    for (int d = 0; d < deg; ++d) ++e[vd(rng)];
    t.push_back({Monomial::from_exponents(e), cd(rng)});
  }
  return Polynomial::from_terms(R, t);
}

}  // namespace

TEST(Field, RejectsBadModuli) {
  EXPECT_THROW(PrimeField(2), InvalidArgument);
  EXPECT_THROW(PrimeField(9), InvalidArgument);
  EXPECT_THROW(PrimeField(1u << 31), InvalidArgument);
  EXPECT_NO_THROW(PrimeField(32003));
}

TEST(Field, InverseAndPow) {
  PrimeField F(32003);
  for (Coeff a : {1u, 2u, 17u, 32002u, 12345u}) EXPECT_EQ(F.mul(a, F.inv(a)), 1u);
  EXPECT_EQ(F.pow(5, 32002), 1u);
  EXPECT_EQ(F.from_int(-1), 32002u);
  EXPECT_EQ(F.to_signed(32002), -1);
}

TEST(Grevlex, SquareBeatsMixed) {
  std::vector<int> a{2, 0}, b{1, 1};
  EXPECT_EQ(monomial_cmp_grevlex(a, b), Ordering::Greater);
}

TEST(Grevlex, Reflexive) {
  std::vector<int> a{1, 4, 2};
  EXPECT_EQ(monomial_cmp_grevlex(a, a), Ordering::Equal);
}

TEST(Grevlex, DegreeDominates) {
  std::vector<int> a{1, 0, 0}, b{0, 0, 3};
  EXPECT_EQ(monomial_cmp_grevlex(a, b), Ordering::Less);
}

TEST(Grevlex, ArityMismatch) {
  std::vector<int> a{1, 0}, b{1, 0, 0};
  EXPECT_THROW(monomial_cmp_grevlex(a, b), RingMismatch);
}

TEST(Grevlex, PackedOrderAgreesWithDefinition) {
  auto R = Ring::make(32003, 4);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ed(0, 4);
  for (int k = 0; k < 2000; ++k) {
    std::vector<int> a(4), b(4);
    for (int& x : a) x = ed(rng);
    for (int& x : b) x = ed(rng);
    int c = R->compare(Monomial::from_exponents(a), Monomial::from_exponents(b));
    EXPECT_EQ(c, static_cast<int>(monomial_cmp_grevlex(a, b)));
  }
}

TEST(Grevlex, Multiplicative) {
  auto R = Ring::make(32003, 5);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> ed(0, 3);
  for (int k = 0; k < 2000; ++k) {
    std::vector<int> a(5), b(5), m(5);
    for (int& x : a) x = ed(rng);
    for (int& x : b) x = ed(rng);
    for (int& x : m) x = ed(rng);
    Monomial A = Monomial::from_exponents(a), B = Monomial::from_exponents(b), M = Monomial::from_exponents(m);
    EXPECT_EQ(R->compare(A, B), R->compare(A * M, B * M));
  }
}

TEST(Monomial, Divisibility) {
  std::vector<int> a{1, 2, 0}, b{2, 2, 1}, c{0, 3, 0};
  Monomial A = Monomial::from_exponents(a), B = Monomial::from_exponents(b), C = Monomial::from_exponents(c);
  EXPECT_TRUE(A.divides(B));
  EXPECT_FALSE(B.divides(A));
  EXPECT_FALSE(C.divides(B));
  EXPECT_EQ(A.quotient_of(B).exponent(0), 1);
  EXPECT_EQ(A.lcm(C).exponent(1), 3);
}

TEST(PolyArith, DifferenceOfSquares) {
  auto R = Ring::make(32003, 2);
  auto x = Polynomial::variable(R, 0), y = Polynomial::variable(R, 1);
  EXPECT_EQ((x + y) * (x - y), x * x - y * y);
}

TEST(PolyArith, AddZero) {
  auto R = Ring::make(32003, 3);
  auto f = Polynomial::parse(R, "3*x0^2*x1 + 5*x2 + 7");
  EXPECT_EQ(f + Polynomial(R), f);
}

TEST(PolyArith, FrobeniusCube) {
  auto R = Ring::make(3, 2);
  auto x = Polynomial::variable(R, 0), y = Polynomial::variable(R, 1);
  EXPECT_EQ((x + y).pow(3), x.pow(3) + y.pow(3));
}

TEST(PolyArith, FieldMismatchThrows) {
  auto R = Ring::make(32003, 2), S = Ring::make(101, 2), T = Ring::make(32003, 3);
  EXPECT_THROW(Polynomial::variable(R, 0) + Polynomial::variable(S, 0), RingMismatch);
  EXPECT_THROW(Polynomial::variable(R, 0) * Polynomial::variable(T, 0), RingMismatch);
}

TEST(PolyArith, RingAxiomsOnRandomTriples) {
  auto R = Ring::make(32003, 4);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    auto a = random_poly(R, rng, 12, 6), b = random_poly(R, rng, 12, 6), c = random_poly(R, rng, 12, 6);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a + b, b + a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(PolyArith, TermsStrictlyDecreasing) {
  auto R = Ring::make(32003, 4);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    auto a = random_poly(R, rng, 12, 8) * random_poly(R, rng, 12, 8);
    for (std::size_t i = 1; i < a.size(); ++i) {
      EXPECT_GT(R->compare(a.terms()[i - 1].mono, a.terms()[i].mono), 0);
      EXPECT_NE(a.terms()[i].coef, 0u);
    }
  }
}

TEST(PolyArith, HomogeneousProduct) {
  auto R = Ring::make(32003, 6);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 30; ++k) {
    auto a = random_homogeneous(R, rng, 2, 5), b = random_homogeneous(R, rng, 3, 5);
    auto p = a * b;
    ASSERT_TRUE(p.homogeneous_degree().has_value());
    EXPECT_EQ(*p.homogeneous_degree(), 5);
  }
  auto mixed = Polynomial::parse(R, "x0^2 + x1");
  EXPECT_FALSE(mixed.homogeneous_degree().has_value());
}

TEST(PolyEval, Substitution) {
  auto R = Ring::make(101, 2);
  auto f = Polynomial::parse(R, "x0^2 + x1");
  std::vector<Coeff> pt{2, 1};
  EXPECT_EQ(f.evaluate(pt), 5u);
}

TEST(PolyEval, ZeroVectorGivesConstant) {
  auto R = Ring::make(101, 3);
  auto f = Polynomial::parse(R, "x0*x1 + 4*x2^3 + 17");
  std::vector<Coeff> z{0, 0, 0};
  EXPECT_EQ(f.evaluate(z), 17u);
}

TEST(PolyEval, IdentityAndLengthCheck) {
  auto R = Ring::make(101, 1);
  auto x = Polynomial::variable(R, 0);
  std::vector<Coeff> a{42};
  EXPECT_EQ(x.evaluate(a), 42u);
  std::vector<Coeff> bad{1, 2};
  EXPECT_THROW(x.evaluate(bad), InvalidArgument);
}

TEST(PolyText, RoundTripsExactly) {
  auto R = Ring::make(32003, 3);
  std::string s = "3*x0^2*x1 + 31999*x2^3";
  auto f = Polynomial::parse(R, s);
  EXPECT_EQ(f.to_string(), s);
  EXPECT_EQ(Polynomial::parse(R, f.to_string()), f);
  EXPECT_EQ(Polynomial(R).to_string(), "0");
  EXPECT_EQ(Polynomial::parse(R, "- x0 + x0").to_string(), "0");
  EXPECT_EQ(Polynomial::parse(R, "x0 x1 2").to_string(), "2*x0*x1");
}

TEST(PolyText, RandomRoundTrip) {
  auto R = Ring::make(32003, 6);
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    auto f = random_poly(R, rng, 18, 7);
    std::string s = f.to_string();
    auto g = Polynomial::parse(R, s);
    EXPECT_EQ(g, f);
    EXPECT_EQ(g.to_string(), s);
  }
}

TEST(PolyText, Errors) {
  auto R = Ring::make(32003, 2);
  EXPECT_THROW(Polynomial::parse(R, "x2"), ParseError);
  EXPECT_THROW(Polynomial::parse(R, "x0 +"), ParseError);
  EXPECT_THROW(Polynomial::parse(R, "y"), ParseError);
}

TEST(PolyCalculus, DerivativeAndSubstitute) {
  auto R = Ring::make(32003, 2);
  auto f = Polynomial::parse(R, "x0^3 + 2*x0*x1^2");
  EXPECT_EQ(f.derivative(0), Polynomial::parse(R, "3*x0^2 + 2*x1^2"));
  EXPECT_EQ(f.derivative(1), Polynomial::parse(R, "4*x0*x1"));
  auto S = Ring::make(32003, 1);
  auto t = Polynomial::variable(S, 0);
  EXPECT_EQ(f.substitute({t, t}, S), Polynomial::parse(S, "3*x0^3"));
}
