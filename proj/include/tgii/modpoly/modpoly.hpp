#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tgii/arith/integer.hpp"
#include "tgii/arith/poly.hpp"

namespace tgii::modpoly {

using arith::Elem;
using arith::Integer;
using arith::Poly;
using arith::Zmod;

// Classical modular polynomial Phi_m(X, Y) in triangular storage (i >= j).
// When `modulus` is set the coefficients are only known modulo it.
struct ModularPolynomialTable {
    unsigned level = 0;
    std::optional<Integer> modulus;
    std::map<std::pair<unsigned, unsigned>, Integer> entries;

    unsigned degree() const;  // largest exponent of X
    Integer coefficient(unsigned i, unsigned j) const;
    // True when the coefficients determine Phi_m modulo n.
    bool usable_mod(const Integer& n) const;
};

ModularPolynomialTable parse(std::istream& in, unsigned level = 0);
// level 0 means: take it from the header comment, else from a phi_<m> filename.
ModularPolynomialTable load(const std::filesystem::path& path, unsigned level = 0);

std::filesystem::path data_dir();

// Cached lookup of the shipped table of the given level usable modulo n.
// Integer tables are preferred over reduced ones.  Throws MissingTable.
const ModularPolynomialTable& table_for(unsigned level, const Integer& n);
bool has_table(unsigned level, const Integer& n);

// Dense (d+1) x (d+1) coefficient matrix reduced into one ring.
class ReducedTable {
public:
    ReducedTable(const ModularPolynomialTable& t, const Zmod& ring);

    unsigned level() const noexcept { return level_; }
    unsigned degree() const noexcept { return d_; }
    const Zmod& ring() const noexcept { return ring_; }
    Elem coeff(unsigned i, unsigned j) const noexcept { return c_[i * (d_ + 1) + j]; }

    // Phi_m(x, Y) as a polynomial in Y.
    Poly eval_partial(Elem x) const;
    Elem eval(Elem x, Elem y) const;

    struct Derivatives {
        Elem phi, x, y, xx, xy, yy;
    };
    Derivatives derivatives(Elem x, Elem y) const;

private:
    unsigned level_;
    unsigned d_;
    Zmod ring_;
    std::vector<Elem> c_;
};

// Cached per (level, modulus); safe to call concurrently.
const ReducedTable& reduced(unsigned level, const Zmod& ring);

Poly eval_partial(const ModularPolynomialTable& t, Elem j, const Zmod& ring);

struct CrosscheckReport {
    std::uint64_t p = 0;
    unsigned ell = 0;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::vector<Elem> mismatches;
    bool ok() const { return mismatches.empty(); }
};

// Compares the root multiset of Phi_ell(j, .) with the multiset of Velu
// codomains over F_p for ordinary j not in {0, 1728}.  trials = 0 checks
// every admissible j.
CrosscheckReport velu_crosscheck(std::uint64_t p, unsigned ell, std::size_t trials = 0,
                                 std::uint64_t seed = 0);

}  // namespace tgii::modpoly
