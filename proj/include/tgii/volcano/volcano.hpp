#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tgii/arith/integer.hpp"
#include "tgii/arith/poly.hpp"
#include "tgii/classgroup/classgroup.hpp"

namespace tgii::volcano {

using arith::Elem;
using arith::Integer;
using arith::Poly;
using classgroup::Discriminant;

// Directed multigraph on F_p: j1 -> j2 with the multiplicity of j2 as a root
// of Phi_ell(j1, Y).
class IsogenyGraph {
public:
    IsogenyGraph(std::uint64_t p, unsigned ell, std::vector<std::vector<Elem>> roots);

    std::uint64_t p() const noexcept { return p_; }
    unsigned ell() const noexcept { return ell_; }
    // Roots of Phi_ell(j, Y) in F_p with multiplicity, ascending.
    const std::vector<Elem>& neighbors(Elem j) const { return roots_.at(j); }
    std::size_t degree(Elem j) const { return roots_.at(j).size(); }
    unsigned multiplicity(Elem j1, Elem j2) const;

    struct Edge {
        Elem j1, j2;
        unsigned multiplicity;
    };
    std::vector<Edge> edges() const;  // sorted by (j1, j2)

private:
    std::uint64_t p_;
    unsigned ell_;
    std::vector<std::vector<Elem>> roots_;
};

IsogenyGraph build_graph(std::uint64_t p, unsigned ell, unsigned jobs = 1);

// `j1 j2 multiplicity` lines, sorted.
std::string dump(const IsogenyGraph& g);

// v_ell of v where t^2 - 4p = v^2 D0.
unsigned component_depth(std::uint64_t p, unsigned ell, const Integer& t, const Integer& d0);

// Trace of Frobenius of curve_from_j(j) over F_p.  Unsupported for j in {0, 1728}.
Integer trace_of_j(Elem j, std::uint64_t p);

// Distance from the crater, found by walking down to a floor vertex.
// Unsupported for supersingular or special j.
unsigned level(std::uint64_t p, unsigned ell, Elem j);

struct VolcanoComponent {
    std::uint64_t p = 0;
    unsigned ell = 0;
    Integer trace;  // |t|
    Integer d0;
    unsigned depth = 0;
    std::vector<std::vector<Elem>> levels;  // levels[i] sorted
    bool touches_special = false;           // contains 0 or 1728
    bool supersingular = false;
};

// Connected component of j (edges taken in both directions) with its levels.
VolcanoComponent component(const IsogenyGraph& g, Elem j);
// Every component, ordered by smallest member.
std::vector<VolcanoComponent> components(const IsogenyGraph& g);

// Crater cycle from j_start.  The first step takes the crater neighbor whose
// kernel has the smaller sign-normalised Frobenius eigenvalue.
std::vector<Elem> crater_cycle(std::uint64_t p, unsigned ell, Elem j_start);

// {j : End(E_j) has discriminant D}, ascending.
std::vector<Elem> ell_set(const Discriminant& d, std::uint64_t p);

Poly hilbert_mod_p(const Discriminant& d, std::uint64_t p);

Discriminant end_disc(Elem j, std::uint64_t p);

struct Fraction {
    std::uint64_t count = 0, total = 0;
    double value() const { return total ? double(count) / double(total) : 0.0; }
};

// Share of nonsingular (a, b) whose j has at least two roots of
// Phi_ell(j, .) in F_p, counted with multiplicity.
Fraction two_neighbor_fraction(std::uint64_t p, unsigned ell);

}  // namespace tgii::volcano
