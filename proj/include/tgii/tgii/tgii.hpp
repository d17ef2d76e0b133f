#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tgii/arith/integer.hpp"
#include "tgii/arith/poly.hpp"
#include "tgii/arith/zmod.hpp"
#include "tgii/classgroup/classgroup.hpp"
#include "tgii/curves/curves.hpp"

namespace tgii::core {

using arith::Elem;
using arith::Integer;
using arith::Zmod;
using classgroup::Discriminant;
using classgroup::GenerationSet;
using classgroup::IdealClass;

struct PublicParams {
    Integer N;
    Integer j0;
};

// Primes handed out as encoding degrees.  Pools are reserved by applications
// and never returned by fresh().
struct PrimeRegistry {
    std::set<unsigned> used;
    std::set<unsigned> excluded;
    std::map<std::string, std::vector<unsigned>> pools;
    // +1: the form (l, b, c) with b >= 0 minimal; -1: (l, -b, c).  The
    // oriented classes of handed-out primes are pairwise distinct.
    std::map<unsigned, int> orientation;
    std::string policy = "ascending split primes with a table, oriented to pairwise distinct nontrivial classes";

    bool available(unsigned ell) const;
};

// Class-group action on one prime field.  Every class of CL(D) is tabulated
// against its j-invariant, starting from the base curve.
class FieldAction {
public:
    FieldAction() = default;
    FieldAction(std::uint64_t p, const Discriminant& d, Elem base_j);

    std::uint64_t p() const noexcept { return p_; }
    Elem base_j() const noexcept { return base_; }
    // Signed trace of curve_from_j(base_j).
    const Integer& trace() const noexcept { return t_; }
    // t^2 - 4p = v^2 D.
    const Integer& v() const noexcept { return v_; }
    const std::map<unsigned, unsigned>& orientation() const noexcept { return orient_; }
    const std::vector<unsigned>& generators() const noexcept { return gens_; }

    bool on_surface(Elem j) const { return from_j_.count(j) != 0; }
    const IdealClass& class_of(Elem j) const;  // NotOnSurface
    Elem j_of(const IdealClass& c) const;
    Elem act(Elem j, const IdealClass& c) const;

    // One isogeny step for a class of prime norm, chosen by Frobenius
    // eigenvalue: mu = eps (t + v b) / 2 mod l, eps = +-1 for the twist.
    Elem step(Elem j, const IdealClass& c) const;

private:
    std::uint64_t p_ = 0;
    Integer d_;
    Elem base_ = 0;
    Integer t_, v_;
    std::map<unsigned, unsigned> orient_;
    std::vector<unsigned> gens_;
    std::map<IdealClass, Elem> to_j_;
    std::unordered_map<Elem, IdealClass> from_j_;
};

class Trapdoor {
public:
    Trapdoor(const Integer& p, const Integer& q, const Discriminant& d, Elem jp, Elem jq);

    const Integer& p() const noexcept { return p_; }
    const Integer& q() const noexcept { return q_; }
    Integer N() const { return p_ * q_; }
    const Discriminant& discriminant() const noexcept { return d_; }
    const FieldAction& field_p() const noexcept { return fp_; }
    const FieldAction& field_q() const noexcept { return fq_; }
    const classgroup::ClassGroup& group() const noexcept { return group_; }
    PublicParams public_params() const;

    // x * j over Z/NZ.
    Integer act(const Integer& j, const IdealClass& c) const;
    Integer canonical(const IdealClass& c) const { return act(public_params().j0, c); }
    bool on_surface(const Integer& j) const;
    // Class c with c * j0 = j.
    IdealClass class_of(const Integer& j) const;

    // Prime ell usable as an encoding degree: split, coprime to N and the
    // conductors, a table is shipped and its oriented class is nontrivial.
    bool usable_degree(unsigned ell) const;
    IdealClass degree_class(unsigned ell) const;  // prime_form(D, ell)

    PrimeRegistry registry;
    std::vector<std::string> warnings;

private:
    Integer p_, q_;
    Discriminant d_;
    classgroup::ClassGroup group_;
    FieldAction fp_, fq_;
};

struct GenConfig {
    Integer d0 = -251;
    std::vector<Integer> conductor;
    std::uint64_t p_bound = 20000;
    std::vector<unsigned> exclude;
    std::uint64_t seed = 0;
    // Pinned primes; j is the smallest element of each ell set.
    std::optional<Integer> p, q;
    std::uint64_t smooth_bound = 1000;
};

struct Generated {
    PublicParams pp;
    Trapdoor trapdoor;
};

// Throws ConfigRejected naming the violated condition.
Generated gen(const GenConfig& config);
GenConfig toy_config();
GenConfig app_config();

struct ComposableEncoding {
    std::vector<unsigned> L;
    std::vector<std::vector<Integer>> T;

    Integer degree() const;
    bool empty() const { return L.empty(); }
    bool operator==(const ComposableEncoding&) const = default;
};

struct Ladder {
    unsigned ell = 0;
    std::vector<Integer> js;
};

// Unreduced form (l, b, c) of discriminant d with b >= 0 minimal.  PrimeInert.
IdealClass prime_norm_form(const Integer& d, unsigned ell);

// Oriented form of a registry prime (orientation +1 when unrecorded).
IdealClass registry_form(const Trapdoor& td, const PrimeRegistry& registry, unsigned ell);

// Picks a fresh prime from the registry, orients it and marks it used.
// OutOfPrimes.
unsigned fresh_prime(const Trapdoor& td, PrimeRegistry& registry);
void reserve_pool(const Trapdoor& td, PrimeRegistry& registry, const std::string& name,
                  std::size_t count);

// Encoding of x over the generation set S (classes of distinct prime norm).
// Exponents are sampled when rng is given, else taken deterministically; every
// exponent is at least 1.  The identity encodes as the empty encoding.
ComposableEncoding trap_sam(const Trapdoor& td, const IdealClass& x, const GenerationSet& s,
                            PrimeRegistry& registry, std::mt19937_64* rng = nullptr);
// Same, with w fresh primes from the registry, adding more while x lies
// outside their span.
ComposableEncoding trap_sam(const Trapdoor& td, const IdealClass& x, PrimeRegistry& registry,
                            std::size_t w = 2, std::mt19937_64* rng = nullptr);

struct RandomSample {
    IdealClass x;
    ComposableEncoding enc;
};
RandomSample random_sam(const Trapdoor& td, const GenerationSet& s, PrimeRegistry& registry,
                        std::mt19937_64& rng);

// Structural checks: distinct primes, adjacency mod N along every list.
bool well_formed(const PublicParams& pp, const ComposableEncoding& e);

// nullopt on a shared prime.
std::optional<ComposableEncoding> comp(const PublicParams& pp, const ComposableEncoding& ex,
                                       const ComposableEncoding& ey);

// Monic gcd over Z/NZ.  When Euclid meets a zero-divisor leading coefficient
// the remainder sequence is rerandomised; FactorFoundError only if that keeps
// failing.
arith::Poly stable_gcd(const arith::Poly& f, const arith::Poly& g);

// nullopt is the bottom value (gcd(l1, l2) > 1).  NotLinear, FactorFoundError.
std::optional<Integer> gcd_op(const PublicParams& pp, unsigned l1, unsigned l2, const Integer& j1,
                              const Integer& j2);

// Failure with "⊥: shared degree" when two lists share a prime.
Integer convert(const PublicParams& pp, const ComposableEncoding& e);

Ladder sample_ladder(const Trapdoor& td, unsigned ell, std::size_t k, const IdealClass& x);

std::optional<ComposableEncoding> comp_with_ladders(const PublicParams& pp,
                                                    const std::vector<Ladder>& ladders,
                                                    const ComposableEncoding& ex,
                                                    const ComposableEncoding& ey);

struct PartialConversion {
    Integer jx;
    std::vector<curves::ExplicitIsogeny> chain;
    std::vector<Integer> path;  // jx, then the codomain j of each step
};
PartialConversion partial_convert(const PublicParams& pp, const ComposableEncoding& ex,
                                  const ComposableEncoding& ey);

}  // namespace tgii::core
