#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "tgii/arith/poly.hpp"

namespace tgii::arith {

// Polynomials over a prime field F_p.  Every entry point checks that the ring
// modulus is prime and throws NotPrime otherwise.

// Roots in F_p with multiplicity, ascending.
std::vector<Elem> poly_roots_fp(const Poly& f, std::uint64_t seed = 0);

// Distinct roots only, ascending.
std::vector<Elem> distinct_roots_fp(const Poly& f, std::uint64_t seed = 0);

struct PolyFactor {
    Poly factor;  // monic irreducible
    unsigned multiplicity;
};

// Complete factorization of monic(f); sorted by degree, then by negated
// coefficients from the top down (linear factors come out in root order).  The pseudorandom splitting is driven by seed only.
std::vector<PolyFactor> factor_poly_fp(const Poly& f, std::uint64_t seed = 0);

// Irreducible factors of a squarefree f that are products of distinct
// degree-d irreducibles; the pairs are (d, product).
std::vector<std::pair<unsigned, Poly>> distinct_degree_factor(const Poly& f);

// Splits a squarefree product of degree-d irreducibles into its factors.
std::vector<Poly> equal_degree_factor(const Poly& f, unsigned d, std::mt19937_64& rng);

// Canonical order used by factor_poly_fp.
bool poly_less(const Poly& a, const Poly& b);

}  // namespace tgii::arith
