#pragma once

#include <variant>
#include <vector>

#include "tgii/arith/zmod.hpp"
#include "tgii/error.hpp"

namespace tgii::arith {

// Dense univariate polynomial over Z/mZ, lowest degree first, no trailing zeros.
class Poly {
public:
    static constexpr int zero_degree = -1;

    explicit Poly(const Zmod& ring) : ring_(ring) {}
    Poly(const Zmod& ring, std::vector<Elem> coeffs);

    static Poly constant(const Zmod& ring, Elem c);
    static Poly monomial(const Zmod& ring, Elem c, std::size_t degree);
    static Poly x(const Zmod& ring) { return monomial(ring, 1, 1); }
    // prod (x - r) over the given roots.
    static Poly from_roots(const Zmod& ring, const std::vector<Elem>& roots);

    const Zmod& ring() const noexcept { return ring_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<Elem>& coeffs() const noexcept { return c_; }
    Elem coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    Elem lead() const noexcept { return c_.empty() ? 0 : c_.back(); }

    Elem eval(Elem x) const noexcept;
    Poly derivative() const;
    Poly scaled(Elem s) const;
    Poly shifted(std::size_t k) const;  // times x^k

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator-() const;

    bool operator==(const Poly& o) const noexcept { return ring_ == o.ring_ && c_ == o.c_; }

private:
    void trim() noexcept;

    Zmod ring_;
    std::vector<Elem> c_;
};

// Division with remainder.  The leading coefficient of g must be a unit;
// otherwise FactorFoundError (proper divisor) or NotInvertible is thrown.
std::pair<Poly, Poly> divrem(const Poly& f, const Poly& g);
Poly rem(const Poly& f, const Poly& g);
Poly monic(const Poly& f);
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Poly& base, const Integer& e, const Poly& m);

// Monic gcd by the Euclidean algorithm over Z/mZ.  A non-invertible leading
// coefficient is reported as FactorFound instead of an exception.
std::variant<Poly, FactorFound> poly_gcd_mod_n(const Poly& f, const Poly& g);

// Same computation, throwing FactorFoundError instead.
Poly gcd(const Poly& f, const Poly& g);

// s*f + t*g = gcd (monic); field coefficients assumed.
struct XgcdResult {
    Poly g, s, t;
};
XgcdResult xgcd(const Poly& f, const Poly& g);

// Inverse of a modulo m when gcd(a, m) = 1; throws NotInvertible otherwise.
Poly invmod(const Poly& a, const Poly& m);

}  // namespace tgii::arith
