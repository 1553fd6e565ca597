#pragma once

#include <random>

#include "oracle.hpp"
#include "ulrich/matrix.hpp"

namespace testsupport {

using namespace ulrich;

inline RingPtr ring(int n, std::uint32_t p = 32003) { return Ring::make(p, n); }

inline Polynomial P(const RingPtr& R, const char* s) { return Polynomial::parse(R, s); }

inline Polynomial random_form(const RingPtr& R, int deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<Coeff> cd(0, R->field().modulus() - 1);
  std::vector<Polynomial::Term> t;
  for (Monomial m : oracle::monomials_of_degree(R->nvars(), deg)) t.push_back({m, cd(rng)});
  return Polynomial::from_terms(R, t);
}

inline GradedMatrix random_linear_matrix(const RingPtr& R, int n, std::mt19937_64& rng) {
  GradedMatrix M(R, std::vector<int>(n, 0), std::vector<int>(n, 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M.set(i, j, random_form(R, 1, rng));
  }
  return M;
}

}  // namespace testsupport
