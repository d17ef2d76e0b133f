#include "tgii/arith/polyfp.hpp"

#include <algorithm>

namespace tgii::arith {

namespace {

void require_prime_field(const Poly& f)
{
    if (!is_prime(f.ring().modulus_integer()))
        throw Error(Errc::NotPrime, "polynomial ring modulus is not prime");
}

Poly exact_div(const Poly& f, const Poly& g) { return divrem(f, g).first; }

// f with f' = 0 in characteristic p is g(x^p); returns g (coefficients fixed by Frobenius).
Poly pth_root(const Poly& f)
{
    const std::uint64_t p = f.ring().modulus();
    std::vector<Elem> out;
    for (std::size_t i = 0; i < f.coeffs().size(); i += p)
        out.push_back(f.coeffs()[i]);
    return Poly(f.ring(), std::move(out));
}

void squarefree_parts(const Poly& f, unsigned scale, std::vector<std::pair<Poly, unsigned>>& out)
{
    if (f.degree() <= 0)
        return;
    Poly df = f.derivative();
    if (df.is_zero()) {
        squarefree_parts(pth_root(f), scale * static_cast<unsigned>(f.ring().modulus()), out);
        return;
    }
    Poly c = gcd(f, df);
    Poly w = exact_div(f, c);
    unsigned i = 1;
    while (w.degree() > 0) {
        Poly y = gcd(w, c);
        Poly fac = exact_div(w, y);
        if (fac.degree() > 0)
            out.emplace_back(monic(fac), i * scale);
        w = y;
        c = exact_div(c, y);
        ++i;
    }
    if (c.degree() > 0)
        squarefree_parts(pth_root(c), scale * static_cast<unsigned>(f.ring().modulus()), out);
}

Poly random_poly(const Zmod& R, int below_degree, std::mt19937_64& rng)
{
    std::uniform_int_distribution<Elem> dist(0, R.modulus() - 1);
    std::vector<Elem> c(static_cast<std::size_t>(std::max(below_degree, 1)));
    for (auto& v : c)
        v = dist(rng);
    return Poly(R, std::move(c));
}

}  // namespace

bool poly_less(const Poly& a, const Poly& b)
{
    if (a.degree() != b.degree())
        return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i) {
        auto k = static_cast<std::size_t>(i);
        Elem x = a.ring().neg(a.coeff(k)), y = b.ring().neg(b.coeff(k));
        if (x != y)
            return x < y;
    }
    return false;
}

std::vector<std::pair<unsigned, Poly>> distinct_degree_factor(const Poly& f)
{
    require_prime_field(f);
    const Zmod& R = f.ring();
    const Integer p = R.modulus_integer();
    std::vector<std::pair<unsigned, Poly>> out;
    Poly rest = monic(f);
    Poly x = Poly::x(R);
    Poly h = rem(x, rest);
    unsigned d = 0;
    while (rest.degree() >= 2 * static_cast<int>(d + 1)) {
        ++d;
        h = powmod(h, p, rest);
        Poly g = gcd(rest, h - x);
        if (g.degree() > 0) {
            out.emplace_back(d, g);
            rest = exact_div(rest, g);
            h = rem(h, rest);
        }
    }
    if (rest.degree() > 0)
        out.emplace_back(static_cast<unsigned>(rest.degree()), rest);
    return out;
}

std::vector<Poly> equal_degree_factor(const Poly& f, unsigned d, std::mt19937_64& rng)
{
    require_prime_field(f);
    const Zmod& R = f.ring();
    Poly g = monic(f);
    if (g.degree() <= static_cast<int>(d))
        return {g};
    const Integer p = R.modulus_integer();
    std::vector<Poly> todo{g}, done;
    while (!todo.empty()) {
        Poly cur = std::move(todo.back());
        todo.pop_back();
        if (cur.degree() == static_cast<int>(d)) {
            done.push_back(cur);
            continue;
        }
        for (;;) {
            Poly a = random_poly(R, cur.degree(), rng);
            if (a.degree() <= 0)
                continue;
            Poly b(R);
            if (R.modulus() == 2) {
                // Trace map a + a^2 + ... + a^(2^(d-1)).
                Poly t = rem(a, cur);
                b = t;
                for (unsigned i = 1; i < d; ++i) {
                    t = mulmod(t, t, cur);
                    b += t;
                }
            } else {
                Integer e;
                mpz_pow_ui(e.get_mpz_t(), p.get_mpz_t(), d);
                e = (e - 1) / 2;
                b = powmod(a, e, cur) - Poly::constant(R, 1);
            }
            Poly s = gcd(cur, b);
            if (s.degree() > 0 && s.degree() < cur.degree()) {
                todo.push_back(exact_div(cur, s));
                todo.push_back(s);
                break;
            }
        }
    }
    for (auto& q : done)
        q = monic(q);
    std::sort(done.begin(), done.end(), poly_less);
    return done;
}

std::vector<PolyFactor> factor_poly_fp(const Poly& f, std::uint64_t seed)
{
    require_prime_field(f);
    if (f.is_zero())
        throw Error(Errc::InvalidArgument, "cannot factor the zero polynomial");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Poly, unsigned>> sqf;
    squarefree_parts(monic(f), 1, sqf);
    std::vector<PolyFactor> out;
    for (auto& [part, mult] : sqf)
        for (auto& [deg, prod] : distinct_degree_factor(part))
            for (auto& irr : equal_degree_factor(prod, deg, rng))
                out.push_back({irr, mult});
    std::sort(out.begin(), out.end(), [](const PolyFactor& a, const PolyFactor& b) {
        if (poly_less(a.factor, b.factor))
            return true;
        if (poly_less(b.factor, a.factor))
            return false;
        return a.multiplicity < b.multiplicity;
    });
    return out;
}

std::vector<Elem> distinct_roots_fp(const Poly& f, std::uint64_t seed)
{
    require_prime_field(f);
    if (f.is_zero())
        throw Error(Errc::InvalidArgument, "zero polynomial has every root");
    const Zmod& R = f.ring();
    if (f.degree() <= 0)
        return {};
    Poly g = monic(f);
    std::vector<Elem> roots;
    if (g.coeff(0) == 0) {
        roots.push_back(0);
        while (g.coeff(0) == 0)
            g = exact_div(g, Poly::x(R));
    }
    if (g.degree() > 0) {
        Poly x = Poly::x(R);
        Poly xp = powmod(x, R.modulus_integer(), g);
        Poly lin = gcd(g, xp - x);
        if (lin.degree() > 0) {
            std::mt19937_64 rng(seed);
            for (auto& q : equal_degree_factor(lin, 1, rng))
                roots.push_back(R.neg(q.coeff(0)));
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<Elem> poly_roots_fp(const Poly& f, std::uint64_t seed)
{
    std::vector<Elem> distinct = distinct_roots_fp(f, seed);
    const Zmod& R = f.ring();
    std::vector<Elem> out;
    for (Elem r : distinct) {
        Poly g = f;
        Poly lin(R, {R.neg(r), 1});
        for (;;) {
            auto [q, rm] = divrem(g, lin);
            if (!rm.is_zero())
                break;
            out.push_back(r);
            g = std::move(q);
        }
    }
    return out;
}

}  // namespace tgii::arith
