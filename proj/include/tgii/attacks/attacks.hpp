#pragma once

#include <string>
#include <vector>

#include "tgii/arith/poly.hpp"
#include "tgii/tgii/json.hpp"
#include "tgii/tgii/tgii.hpp"

namespace tgii::attacks {

using arith::Integer;
using core::ComposableEncoding;
using core::PublicParams;

// Reference pool of a script: index 0 is j0, then every j of the published
// encodings (encoding by encoding, list by list), then one entry per step.
struct GcdStep {
    unsigned l1 = 0, l2 = 0;
    std::size_t ref1 = 0, ref2 = 0;
    std::string label;
};

struct GcdScript {
    std::vector<GcdStep> steps;
};

std::size_t published_count(const std::vector<ComposableEncoding>& published);

// Outputs of the steps in order.  ScriptError on a dangling reference or a
// step with gcd(l1, l2) > 1; NotLinear and FactorFoundError pass through.
std::vector<Integer> run_gcd_script(const PublicParams& pp, const std::vector<ComposableEncoding>& published,
                                    const GcdScript& script);

core::Json to_json(const GcdScript& s);
GcdScript script_from_json(const core::Json& j);

struct ParallelogramResult {
    Integer j;  // canonical encoding of b^-1
    GcdScript script;
    std::size_t result_ref = 0;
};

// Given a o b = c, recovers b^-1 * j0 with gcd steps only.  NotApplicable
// when two of the three encodings share a prime.
ParallelogramResult parallelogram(const PublicParams& pp, const ComposableEncoding& a, const ComposableEncoding& b,
                                  const ComposableEncoding& c);

// Integer coefficients, lowest degree first.  TooLarge past |D| = 10^4.
std::vector<Integer> hilbert_over_Z(const Integer& d);
arith::Poly hilbert_mod(const std::vector<Integer>& h, const arith::Zmod& ring);

struct HilbertAttackResult {
    Integer j;
    std::string note;
};

// Root of gcd(Phi_l(j0, x), Phi_{l^2}(j1, x), H_D(x)).  AttackFailed when the
// gcd is not linear.
HilbertAttackResult hilbert_attack(const PublicParams& pp, const Integer& d, unsigned ell, const Integer& j0,
                                   const Integer& j1);

// NoCollision when no pair gives a proper divisor.
Integer factor_from_neighbors(const Integer& n, const std::vector<Integer>& js);

struct KroneckerConstraint {
    Integer prime;
    int value = 1;
};

// Negative discriminants D with |D| < bound (default ceil(sqrt N)) meeting
// every constraint, in decreasing order.
std::vector<Integer> discriminant_search(const Integer& n, const std::vector<KroneckerConstraint>& constraints,
                                         std::optional<Integer> bound = std::nullopt);

}  // namespace tgii::attacks
