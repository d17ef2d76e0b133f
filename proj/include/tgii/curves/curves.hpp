#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tgii/arith/integer.hpp"
#include "tgii/arith/poly.hpp"
#include "tgii/arith/zmod.hpp"

namespace tgii::curves {

using arith::Elem;
using arith::Integer;
using arith::Poly;
using arith::Zmod;

// y^2 = x^3 + a x + b over Z/mZ with gcd(m, 6) = 1 and 4a^3 + 27b^2 a unit.
class Curve {
public:
    Curve(const Zmod& ring, Elem a, Elem b);

    const Zmod& ring() const noexcept { return ring_; }
    Elem a() const noexcept { return a_; }
    Elem b() const noexcept { return b_; }
    Elem rhs(Elem x) const noexcept;  // x^3 + a x + b

    bool operator==(const Curve& o) const noexcept
    {
        return ring_ == o.ring_ && a_ == o.a_ && b_ == o.b_;
    }

private:
    Zmod ring_;
    Elem a_, b_;
};

// Projective point; Z = 0 is the point at infinity (0:1:0).
struct Point {
    Elem X = 0, Y = 1, Z = 0;

    static Point infinity() { return {}; }
    static Point affine(Elem x, Elem y) { return {x, y, 1}; }
    bool is_infinity() const noexcept { return Z == 0; }
};

bool on_curve(const Curve& E, const Point& P);
bool equal(const Curve& E, const Point& P, const Point& Q);
Point negate(const Curve& E, const Point& P);
Point add(const Curve& E, const Point& P, const Point& Q);
Point dbl(const Curve& E, const Point& P);
Point mul(const Curve& E, const Point& P, const Integer& k);
// Affine coordinates; throws FactorFoundError when Z is a zero divisor.
std::pair<Elem, Elem> to_affine(const Curve& E, const Point& P);

Curve curve_from_j(Elem j, const Zmod& ring);
Elem j_invariant(const Curve& E);
// Quadratic twist by a non-residue d: y^2 = x^3 + a d^2 x + b d^3.
Curve twist(const Curve& E, Elem d);

// Prime field only.
Integer count_points(const Curve& E);
Integer trace(const Curve& E);
std::optional<Point> random_point(const Curve& E, std::uint64_t& state);

// psi_n for odd n; psi_n / (2y) for even n (so f_2 = 1).  For n = 2 the
// 2-torsion polynomial x^3 + a x + b is returned instead.
Poly division_polynomial(const Curve& E, unsigned n);

struct KernelPoly {
    Poly h;  // monic, degree (ell - 1) / 2, or 1 when ell = 2
    unsigned ell;
};

// Every F_p-rational kernel polynomial of degree ell, sorted canonically.
std::vector<KernelPoly> kernel_polynomials(const Curve& E, unsigned ell, std::uint64_t seed = 0);

struct ExplicitIsogeny {
    Curve source, target;
    KernelPoly kernel;
    Poly f;   // x-map f / h^2
    Poly gy;  // y-map y * gy / h^3
    Poly h;

    // Image of an affine point; infinity when h(x) = 0.
    Point map_point(const Point& P) const;
};

// Normalized Velu isogeny.  Uses ring arithmetic only, so it works over Z/NZ.
ExplicitIsogeny velu(const Curve& E, const KernelPoly& kernel);

// Eigenvalue of Frobenius on the kernel, in [0, ell).  t is the trace of E;
// it is recomputed when absent.
unsigned frobenius_eigenvalue(const Curve& E, unsigned ell, const KernelPoly& kernel,
                              std::optional<Integer> t = std::nullopt);

struct ElkiesResult {
    Curve source, target;
    KernelPoly kernel;
};

// Kernel polynomial of the normalized ell-isogeny j1 -> j2 over Z/NZ from
// Phi_ell and its partial derivatives.  Throws NotIsogenous, FactorFoundError
// or Degenerate.
ElkiesResult kernel_poly_mod_n(const Integer& N, unsigned ell, const Integer& j1, const Integer& j2);

}  // namespace tgii::curves
