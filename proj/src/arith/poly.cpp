#include "tgii/arith/poly.hpp"

#include <algorithm>

namespace tgii::arith {

Poly::Poly(const Zmod& ring, std::vector<Elem> coeffs) : ring_(ring), c_(std::move(coeffs))
{
    for (auto& c : c_)
        c %= ring_.modulus();
    trim();
}

Poly Poly::constant(const Zmod& ring, Elem c) { return Poly(ring, {c}); }

Poly Poly::monomial(const Zmod& ring, Elem c, std::size_t degree)
{
    std::vector<Elem> v(degree + 1, 0);
    v[degree] = c;
    return Poly(ring, std::move(v));
}

Poly Poly::from_roots(const Zmod& ring, const std::vector<Elem>& roots)
{
    Poly out = constant(ring, 1);
    for (Elem r : roots)
        out = out * Poly(ring, {ring.neg(r % ring.modulus()), 1});
    return out;
}

void Poly::trim() noexcept
{
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

Elem Poly::eval(Elem x) const noexcept
{
    Elem acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;)
        acc = ring_.add(ring_.mul(acc, x), c_[i]);
    return acc;
}

Poly Poly::derivative() const
{
    if (c_.size() <= 1)
        return Poly(ring_);
    std::vector<Elem> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
        d[i - 1] = ring_.mul(c_[i], i % ring_.modulus());
    return Poly(ring_, std::move(d));
}

Poly Poly::scaled(Elem s) const
{
    std::vector<Elem> v(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i)
        v[i] = ring_.mul(c_[i], s);
    return Poly(ring_, std::move(v));
}

Poly Poly::shifted(std::size_t k) const
{
    if (c_.empty())
        return *this;
    std::vector<Elem> v(k, 0);
    v.insert(v.end(), c_.begin(), c_.end());
    return Poly(ring_, std::move(v));
}

Poly& Poly::operator+=(const Poly& o)
{
    if (c_.size() < o.c_.size())
        c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        c_[i] = ring_.add(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o)
{
    if (c_.size() < o.c_.size())
        c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        c_[i] = ring_.sub(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly Poly::operator-() const
{
    Poly out(*this);
    for (auto& c : out.c_)
        c = ring_.neg(c);
    return out;
}

Poly operator*(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero())
        return Poly(a.ring());
    const Zmod& R = a.ring();
    const std::uint64_t m = R.modulus();
    std::vector<unsigned __int128> acc(a.c_.size() + b.c_.size() - 1, 0);
    // Partial sums stay below 2^127 for at most 8 products of 62-bit values.
    std::size_t pending = 0;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            acc[i + j] += static_cast<unsigned __int128>(a.c_[i]) * b.c_[j];
        if (++pending == 8) {
            for (auto& x : acc)
                x %= m;
            pending = 0;
        }
    }
    std::vector<Elem> out(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k)
        out[k] = static_cast<Elem>(acc[k] % m);
    return Poly(R, std::move(out));
}

namespace {

// Reduces coefficient vector r modulo g in place, optionally recording the quotient.
void reduce_in_place(std::vector<Elem>& r, const Poly& g, std::vector<Elem>* quotient)
{
    const Zmod& R = g.ring();
    const auto& gc = g.coeffs();
    const std::size_t dg = gc.size() - 1;
    const Elem inv = R.inverse(gc.back());
    if (quotient)
        quotient->assign(r.size() >= gc.size() ? r.size() - dg : 0, 0);
    for (std::size_t i = r.size(); i-- > dg;) {
        Elem q = R.mul(r[i], inv);
        if (quotient)
            (*quotient)[i - dg] = q;
        if (q == 0)
            continue;
        const std::size_t base = i - dg;
        for (std::size_t k = 0; k < dg; ++k)
            r[base + k] = R.sub(r[base + k], R.mul(q, gc[k]));
        r[i] = 0;
    }
    if (r.size() > dg)
        r.resize(dg);
}

}  // namespace

std::pair<Poly, Poly> divrem(const Poly& f, const Poly& g)
{
    if (g.is_zero())
        throw Error(Errc::InvalidArgument, "polynomial division by zero");
    std::vector<Elem> r = f.coeffs();
    std::vector<Elem> q;
    reduce_in_place(r, g, &q);
    return {Poly(f.ring(), std::move(q)), Poly(f.ring(), std::move(r))};
}

Poly rem(const Poly& f, const Poly& g)
{
    if (g.is_zero())
        throw Error(Errc::InvalidArgument, "polynomial division by zero");
    if (f.degree() < g.degree())
        return f;
    std::vector<Elem> r = f.coeffs();
    reduce_in_place(r, g, nullptr);
    return Poly(f.ring(), std::move(r));
}

Poly monic(const Poly& f)
{
    if (f.is_zero())
        return f;
    return f.scaled(f.ring().inverse(f.lead()));
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return rem(a * b, m); }

Poly powmod(const Poly& base, const Integer& e, const Poly& m)
{
    if (sgn(e) < 0)
        throw Error(Errc::InvalidArgument, "negative exponent");
    Poly result = rem(Poly::constant(base.ring(), 1), m);
    Poly b = rem(base, m);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (sgn(e) == 0)
        return result;
    for (std::size_t i = bits; i-- > 0;) {
        result = mulmod(result, result, m);
        if (mpz_tstbit(e.get_mpz_t(), i))
            result = mulmod(result, b, m);
    }
    return result;
}

Poly gcd(const Poly& f, const Poly& g)
{
    Poly a = f, b = g;
    while (!b.is_zero()) {
        Poly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

std::variant<Poly, FactorFound> poly_gcd_mod_n(const Poly& f, const Poly& g)
{
    try {
        return gcd(f, g);
    } catch (const FactorFoundError& e) {
        return FactorFound{e.divisor()};
    }
}

XgcdResult xgcd(const Poly& f, const Poly& g)
{
    const Zmod& R = f.ring();
    Poly r0 = f, r1 = g;
    Poly s0 = Poly::constant(R, 1), s1(R);
    Poly t0(R), t1 = Poly::constant(R, 1);
    while (!r1.is_zero()) {
        auto [q, r] = divrem(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        Poly t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero())
        return {r0, s0, t0};
    Elem inv = R.inverse(r0.lead());
    return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

Poly invmod(const Poly& a, const Poly& m)
{
    XgcdResult x = xgcd(rem(a, m), m);
    if (x.g.degree() != 0)
        throw Error(Errc::NotInvertible, "polynomial is not a unit modulo m");
    return rem(x.s, m);
}

}  // namespace tgii::arith
