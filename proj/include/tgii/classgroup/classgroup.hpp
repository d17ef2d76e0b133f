#pragma once

#include <compare>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tgii/arith/integer.hpp"
#include "tgii/arith/lattice.hpp"

namespace tgii::classgroup {

using arith::Integer;
using arith::IntMatrix;
using arith::IntVector;

class Discriminant {
public:
    // D = (prod f_i)^2 * D0.  Throws InvalidArgument unless D0 is a negative
    // fundamental discriminant and every f_i is prime.
    Discriminant(Integer d0, std::vector<Integer> conductor_factors = {});

    // Splits an arbitrary negative discriminant into D0 and conductor primes.
    static Discriminant from_value(const Integer& d);

    const Integer& value() const noexcept { return d_; }
    const Integer& fundamental() const noexcept { return d0_; }
    const std::vector<Integer>& conductor_factors() const noexcept { return fs_; }
    Integer conductor() const;
    int units() const;  // w(D)

    bool operator==(const Discriminant& o) const noexcept { return d_ == o.d_; }

private:
    Integer d0_;
    std::vector<Integer> fs_;
    Integer d_;
};

bool is_fundamental(const Integer& d);

struct QuadForm {
    Integer a, b, c;

    Integer discriminant() const { return b * b - 4 * a * c; }
    bool is_reduced() const;
    std::string str() const;
    auto operator<=>(const QuadForm& o) const
    {
        if (auto r = cmp(a, o.a); r != 0)
            return r <=> 0;
        if (auto r = cmp(b, o.b); r != 0)
            return r <=> 0;
        return cmp(c, o.c) <=> 0;
    }
    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
};

// A class is held through its unique reduced form.
using IdealClass = QuadForm;

// Throws InvalidForm for indefinite, non-positive or imprimitive input.
IdealClass reduce(const QuadForm& form);

IdealClass identity(const Integer& d);
IdealClass compose(const IdealClass& x, const IdealClass& y);  // DiscriminantMismatch
IdealClass inverse(const IdealClass& x);
IdealClass pow(const IdealClass& x, const Integer& e);
IdealClass square(const IdealClass& x);

// All primitive reduced forms of discriminant d, sorted.  TooLarge past 10^9.
std::vector<IdealClass> reduced_forms(const Integer& d);
Integer class_number(const Integer& d);
// h(D) from h(D0) through the conductor formula.
Integer class_number_formula(const Discriminant& d);

// Reduced class of (l, b, (b^2 - D)/4l) with b >= 0 minimal.
IdealClass prime_form(const Integer& d, const Integer& l);  // PrimeInert, PrimeRamified

// Order of x, given a multiple of it (h(D) for instance).
Integer order_of(const IdealClass& x, const Integer& multiple);
Integer order_of(const IdealClass& x);

// Smallest k >= 0 with g^k = target, by Pohlig-Hellman with baby-step
// giant-step per prime power.  order must be the exact order of g.
std::optional<Integer> dlog_cyclic(const IdealClass& g, const IdealClass& target, const Integer& order);

using GenerationSet = std::vector<IdealClass>;

// Exhaustive description of the subgroup spanned by S: element i gets the
// smallest k_i > 0 such that S_i^{k_i} lies in the span of S_1..S_{i-1}.
class SpanIndex {
public:
    explicit SpanIndex(GenerationSet s);

    const GenerationSet& generators() const noexcept { return s_; }
    const Integer& order() const noexcept { return order_; }
    const std::vector<Integer>& steps() const noexcept { return k_; }
    // Exponents e with 0 <= e_i < k_i and prod S_i^{e_i} = target.
    std::optional<IntVector> log(const IdealClass& target) const;
    // Row i: the relation S_i^{k_i} * prod_{j<i} S_j^{-c_j} = 1.
    IntMatrix triangular_relations() const;

private:
    GenerationSet s_;
    std::vector<Integer> k_;
    Integer order_;
    std::map<IdealClass, IntVector> table_;
    std::vector<IntVector> rel_;
};

IdealClass recompose(const GenerationSet& s, const IntVector& e);

// Exponent vector e with prod S_i^{e_i} = target; throws NotInSpan.  When one
// generator spans the whole group the work is a cyclic discrete logarithm.
IntVector discrete_log(const IdealClass& target, const GenerationSet& s);

struct RelationLattice {
    GenerationSet generators;
    IntMatrix basis;
    IntMatrix reduced_basis;
    Integer order;  // |<S>| = |det basis|
};

RelationLattice relation_lattice(const GenerationSet& s);

// Fixed all-positive lattice vector, every entry at least floor_entry.
IntVector positive_shift(const RelationLattice& lat, const Integer& floor_entry);

// Sigma used by default for exponent sampling over lat.
double default_sigma(const RelationLattice& lat);

// Non-negative exponents with prod S_i^{e_i} = x: a Gaussian coset sample
// centred at 0, shifted by positive_shift.  With min_entry > 0 samples are
// redrawn until every entry is at least min_entry.
IntVector sample_short_exponents(const IdealClass& x, const RelationLattice& lat, double sigma,
                                 std::mt19937_64& rng, long min_entry = 0);

// Deterministic variant: nearest-plane rounding toward 0, shifted only when
// some entry falls below min_entry.
IntVector short_exponents(const IdealClass& x, const RelationLattice& lat, long min_entry = 0);

// Enumerated class group with its odd part.
class ClassGroup {
public:
    explicit ClassGroup(const Integer& d);

    const Integer& discriminant() const noexcept { return d_; }
    const std::vector<IdealClass>& elements() const noexcept { return all_; }
    Integer order() const { return Integer(static_cast<unsigned long>(all_.size())); }
    const Integer& odd_order() const noexcept { return odd_; }
    unsigned two_valuation() const noexcept { return two_; }
    // x^(2^v): a surjection onto CL(D)_odd.
    IdealClass project_odd(const IdealClass& x) const;
    bool in_odd_part(const IdealClass& x) const;
    IdealClass random_odd(std::mt19937_64& rng) const;
    std::vector<IdealClass> odd_elements() const;

private:
    Integer d_;
    std::vector<IdealClass> all_;
    Integer odd_;
    unsigned two_ = 0;
};

}  // namespace tgii::classgroup
