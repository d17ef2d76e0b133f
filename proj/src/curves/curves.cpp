#include "tgii/curves/curves.hpp"

#include <algorithm>
#include <set>

#include "tgii/arith/polyfp.hpp"
#include "tgii/error.hpp"
#include "tgii/modpoly/modpoly.hpp"

namespace tgii::curves {

namespace {

void require_unit_or_factor(const Zmod& R, Elem v, Errc zero_code, const char* what)
{
    std::uint64_t g = R.gcd_with_modulus(v);
    if (g == R.modulus())
        throw Error(zero_code, what);
    if (g > 1)
        throw FactorFoundError(arith::from_u64(g));
}

std::uint64_t splitmix(std::uint64_t& s)
{
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::optional<Elem> sqrt_fp(const Zmod& F, Elem a)
{
    const std::uint64_t p = F.modulus();
    if (a == 0)
        return Elem(0);
    if (F.pow(a, (p - 1) / 2) != 1)
        return std::nullopt;
    std::uint64_t q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    Elem z = 2;
    while (F.pow(z, (p - 1) / 2) != p - 1)
        ++z;
    Elem c = F.pow(z, q), x = F.pow(a, (q + 1) / 2), t = F.pow(a, q);
    unsigned m = s;
    while (t != 1) {
        unsigned i = 0;
        Elem tt = t;
        while (tt != 1) {
            tt = F.mul(tt, tt);
            ++i;
        }
        Elem bb = c;
        for (unsigned k = 0; k + i + 1 < m; ++k)
            bb = F.mul(bb, bb);
        x = F.mul(x, bb);
        c = F.mul(bb, bb);
        t = F.mul(t, c);
        m = i;
    }
    return x;
}

}  // namespace

Curve::Curve(const Zmod& ring, Elem a, Elem b) : ring_(ring), a_(a % ring.modulus()), b_(b % ring.modulus())
{
    if (ring.modulus() % 2 == 0 || ring.modulus() % 3 == 0)
        throw Error(Errc::Unsupported, "short Weierstrass model needs characteristic > 3");
    const Zmod& R = ring_;
    Elem disc = R.add(R.mul(4, R.mul(a_, R.mul(a_, a_))), R.mul(27, R.mul(b_, b_)));
    require_unit_or_factor(R, disc, Errc::Degenerate, "singular curve");
}

Elem Curve::rhs(Elem x) const noexcept
{
    const Zmod& R = ring_;
    return R.add(R.mul(R.add(R.mul(x, x), a_), x), b_);
}

bool on_curve(const Curve& E, const Point& P)
{
    const Zmod& R = E.ring();
    if (P.is_infinity())
        return P.X == 0 && P.Y != 0;
    Elem lhs = R.mul(R.mul(P.Y, P.Y), P.Z);
    Elem z2 = R.mul(P.Z, P.Z);
    Elem rhs = R.add(R.add(R.mul(P.X, R.mul(P.X, P.X)), R.mul(E.a(), R.mul(P.X, z2))), R.mul(E.b(), R.mul(z2, P.Z)));
    return lhs == rhs;
}

bool equal(const Curve& E, const Point& P, const Point& Q)
{
    const Zmod& R = E.ring();
    if (P.is_infinity() || Q.is_infinity())
        return P.is_infinity() && Q.is_infinity();
    return R.mul(P.X, Q.Z) == R.mul(Q.X, P.Z) && R.mul(P.Y, Q.Z) == R.mul(Q.Y, P.Z);
}

Point negate(const Curve& E, const Point& P)
{
    if (P.is_infinity())
        return P;
    return {P.X, E.ring().neg(P.Y), P.Z};
}

Point dbl(const Curve& E, const Point& P)
{
    const Zmod& R = E.ring();
    if (P.is_infinity() || P.Y == 0)
        return Point::infinity();
    Elem w = R.add(R.mul(E.a(), R.mul(P.Z, P.Z)), R.mul(3, R.mul(P.X, P.X)));
    Elem s = R.mul(P.Y, P.Z);
    Elem B = R.mul(R.mul(P.X, P.Y), s);
    Elem h = R.sub(R.mul(w, w), R.mul(8, B));
    Elem s2 = R.mul(s, s);
    Point out;
    out.X = R.mul(2, R.mul(h, s));
    out.Y = R.sub(R.mul(w, R.sub(R.mul(4, B), h)), R.mul(8, R.mul(R.mul(P.Y, P.Y), s2)));
    out.Z = R.mul(8, R.mul(s2, s));
    return out;
}

Point add(const Curve& E, const Point& P, const Point& Q)
{
    const Zmod& R = E.ring();
    if (P.is_infinity())
        return Q;
    if (Q.is_infinity())
        return P;
    Elem u = R.sub(R.mul(Q.Y, P.Z), R.mul(P.Y, Q.Z));
    Elem v = R.sub(R.mul(Q.X, P.Z), R.mul(P.X, Q.Z));
    if (v == 0)
        return u == 0 ? dbl(E, P) : Point::infinity();
    Elem zz = R.mul(P.Z, Q.Z);
    Elem v2 = R.mul(v, v), v3 = R.mul(v2, v);
    Elem v2x = R.mul(v2, R.mul(P.X, Q.Z));
    Elem A = R.sub(R.sub(R.mul(R.mul(u, u), zz), v3), R.mul(2, v2x));
    Point out;
    out.X = R.mul(v, A);
    out.Y = R.sub(R.mul(u, R.sub(v2x, A)), R.mul(v3, R.mul(P.Y, Q.Z)));
    out.Z = R.mul(v3, zz);
    return out;
}

Point mul(const Curve& E, const Point& P, const Integer& k)
{
    Point base = sgn(k) < 0 ? negate(E, P) : P;
    Integer e = abs(k);
    Point acc = Point::infinity();
    for (std::size_t i = mpz_sizeinbase(e.get_mpz_t(), 2); i-- > 0;) {
        acc = dbl(E, acc);
        if (mpz_tstbit(e.get_mpz_t(), i))
            acc = add(E, acc, base);
    }
    return acc;
}

std::pair<Elem, Elem> to_affine(const Curve& E, const Point& P)
{
    if (P.is_infinity())
        throw Error(Errc::InvalidArgument, "point at infinity has no affine form");
    const Zmod& R = E.ring();
    Elem zi = R.inverse(P.Z);
    return {R.mul(P.X, zi), R.mul(P.Y, zi)};
}

Curve curve_from_j(Elem j, const Zmod& ring)
{
    const Zmod& R = ring;
    j %= R.modulus();
    require_unit_or_factor(R, j, Errc::ForbiddenJ, "j = 0 is excluded");
    Elem k = R.sub(R.from_int(1728), j);
    require_unit_or_factor(R, k, Errc::ForbiddenJ, "j = 1728 is excluded");
    Elem a = R.mul(3, R.mul(j, k));
    Elem b = R.mul(2, R.mul(j, R.mul(k, k)));
    return Curve(ring, a, b);
}

Elem j_invariant(const Curve& E)
{
    const Zmod& R = E.ring();
    Elem a3 = R.mul(4, R.mul(E.a(), R.mul(E.a(), E.a())));
    Elem d = R.add(a3, R.mul(27, R.mul(E.b(), E.b())));
    return R.mul(R.from_int(1728), R.mul(a3, R.inverse(d)));
}

Curve twist(const Curve& E, Elem d)
{
    const Zmod& R = E.ring();
    Elem d2 = R.mul(d, d);
    return Curve(R, R.mul(E.a(), d2), R.mul(E.b(), R.mul(d2, d)));
}

Integer count_points(const Curve& E)
{
    const Zmod& F = E.ring();
    const std::uint64_t p = F.modulus();
    if (!arith::is_prime(arith::from_u64(p)))
        throw Error(Errc::NotPrime, "point counting needs a prime field");
    if (p > (std::uint64_t(1) << 26))
        throw Error(Errc::TooLarge, "prime too large for exhaustive point counting");
    // chi[v] = 1 + legendre(v)
    std::vector<std::uint8_t> chi(p, 0);
    chi[0] = 1;
    for (std::uint64_t x = 1; x <= p / 2; ++x)
        chi[F.mul(x, x)] = 2;
    std::int64_t total = 1;
    for (std::uint64_t x = 0; x < p; ++x)
        total += chi[E.rhs(x)];
    Integer n = arith::from_i64(total);
    Integer t = Integer(arith::from_u64(p)) + 1 - n;
    if (t * t > 4 * arith::from_u64(p))
        throw Error(Errc::Degenerate, "Hasse bound violated");
    return n;
}

Integer trace(const Curve& E) { return arith::from_u64(E.ring().modulus()) + 1 - count_points(E); }

std::optional<Point> random_point(const Curve& E, std::uint64_t& state)
{
    const Zmod& F = E.ring();
    for (int attempt = 0; attempt < 200; ++attempt) {
        Elem x = splitmix(state) % F.modulus();
        auto y = sqrt_fp(F, E.rhs(x));
        if (!y)
            continue;
        Elem yy = (splitmix(state) & 1) ? F.neg(*y) : *y;
        return Point::affine(x, yy);
    }
    return std::nullopt;
}

Poly division_polynomial(const Curve& E, unsigned n)
{
    const Zmod& R = E.ring();
    Elem a = E.a(), b = E.b();
    Poly cubic(R, {b, a, 0, 1});
    if (n == 2)
        return cubic;
    std::vector<Poly> f;
    f.push_back(Poly(R));
    f.push_back(Poly::constant(R, 1));
    f.push_back(Poly::constant(R, 1));
    f.push_back(Poly(R, {R.neg(R.mul(a, a)), R.mul(12, b), R.mul(6, a), 0, 3}));
    {
        Elem a2 = R.mul(a, a);
        std::vector<Elem> c = {R.neg(R.add(R.mul(8, R.mul(b, b)), R.mul(a2, a))),
                               R.neg(R.mul(4, R.mul(a, b))),
                               R.neg(R.mul(5, a2)),
                               R.mul(20, b),
                               R.mul(5, a),
                               0,
                               1};
        f.push_back(Poly(R, c).scaled(2));
    }
    Poly F = cubic.scaled(4);
    Poly F2 = F * F;
    auto cube = [](const Poly& p) { return p * p * p; };
    for (unsigned m = 5; m <= n; ++m) {
        unsigned k = m / 2;
        if (m % 2 == 1) {
            if (k % 2 == 0)
                f.push_back(F2 * f[k + 2] * cube(f[k]) - f[k - 1] * cube(f[k + 1]));
            else
                f.push_back(f[k + 2] * cube(f[k]) - F2 * f[k - 1] * cube(f[k + 1]));
        } else {
            f.push_back(f[k] * (f[k + 2] * f[k - 1] * f[k - 1] - f[k - 2] * f[k + 1] * f[k + 1]));
        }
    }
    return f[n];
}

namespace {

// Arithmetic in F_p[t] / (g) for an irreducible g.
struct Ext {
    const Poly& g;
    Poly red(const Poly& a) const { return arith::rem(a, g); }
    Poly mul(const Poly& a, const Poly& b) const { return arith::mulmod(a, b, g); }
    Poly inv(const Poly& a) const { return arith::invmod(a, g); }
    Poly c(Elem v) const { return red(Poly::constant(g.ring(), v)); }
};

std::optional<Poly> rational_kernel(const Curve& E, const Poly& g, unsigned n)
{
    const Zmod& F = E.ring();
    Ext K{g};
    Poly A = K.c(E.a()), B = K.c(E.b());
    std::vector<Poly> xs;
    xs.push_back(K.red(Poly::x(F)));
    const Poly x1 = xs[0];
    if (n >= 2) {
        Poly x1sq = K.mul(x1, x1);
        Poly num = K.mul(x1sq - A, x1sq - A) - K.mul(B.scaled(8), x1);
        Poly den = (K.mul(x1sq, x1) + K.mul(A, x1) + B).scaled(4);
        xs.push_back(K.mul(num, K.inv(den)));
    }
    while (xs.size() < n) {
        const Poly& xk = xs.back();
        const Poly& xprev = xs[xs.size() - 2];
        Poly num = (K.mul(xk + x1, K.mul(xk, x1) + A) + B.scaled(2)).scaled(2);
        Poly diff = xk - x1;
        Poly den = K.mul(diff, diff);
        xs.push_back(K.mul(num, K.inv(den)) - xprev);
    }
    // coefficients of prod (X - x_k), each an element of K
    std::vector<Poly> h{K.c(1)};
    for (const auto& xk : xs) {
        std::vector<Poly> next(h.size() + 1, Poly(F));
        for (std::size_t i = 0; i < h.size(); ++i) {
            next[i + 1] += h[i];
            next[i] -= K.mul(h[i], xk);
        }
        h = std::move(next);
    }
    std::vector<Elem> coeffs;
    for (const auto& c : h) {
        if (c.degree() > 0)
            return std::nullopt;
        coeffs.push_back(c.coeff(0));
    }
    return Poly(F, coeffs);
}

}  // namespace

std::vector<KernelPoly> kernel_polynomials(const Curve& E, unsigned ell, std::uint64_t seed)
{
    const Zmod& F = E.ring();
    if (!arith::is_prime(arith::from_u64(ell)))
        throw Error(Errc::NotPrime, "isogeny degree must be prime");
    std::vector<Poly> found;
    if (ell == 2) {
        for (Elem r : arith::distinct_roots_fp(Poly(F, {E.b(), E.a(), 0, 1}), seed))
            found.push_back(Poly(F, {F.neg(r), 1}));
    } else {
        unsigned n = (ell - 1) / 2;
        Poly psi = division_polynomial(E, ell);
        std::set<std::vector<Elem>> seen;
        for (const auto& pf : arith::factor_poly_fp(psi, seed)) {
            unsigned d = static_cast<unsigned>(pf.factor.degree());
            if (d > n || n % d != 0)
                continue;
            auto h = rational_kernel(E, pf.factor, n);
            if (h && seen.insert(h->coeffs()).second)
                found.push_back(*h);
        }
    }
    std::sort(found.begin(), found.end(), arith::poly_less);
    std::vector<KernelPoly> out;
    for (auto& h : found)
        out.push_back({std::move(h), ell});
    return out;
}

ExplicitIsogeny velu(const Curve& E, const KernelPoly& kernel)
{
    const Zmod& R = E.ring();
    const Poly& h = kernel.h;
    if (h.is_zero() || h.lead() != 1)
        throw Error(Errc::InvalidArgument, "kernel polynomial must be monic");
    const int n = h.degree();
    Elem a = E.a(), b = E.b();
    Poly hp = h.derivative();
    Poly f(R);
    Elem A, B;
    if (kernel.ell == 2) {
        if (n != 1)
            throw Error(Errc::InvalidArgument, "2-isogeny kernel must be linear");
        Elem r = R.neg(h.coeff(0));
        Elem t = R.add(R.mul(3, R.mul(r, r)), a);
        Elem w = R.mul(r, t);
        A = R.sub(a, R.mul(5, t));
        B = R.sub(b, R.mul(7, w));
        Poly T = arith::rem(Poly(R, {a, 0, 3}) * hp, h);
        f = Poly::x(R) * h * h + T * h;
    } else {
        if (static_cast<unsigned>(n) * 2 + 1 != kernel.ell)
            throw Error(Errc::InvalidArgument, "kernel degree must be (ell - 1) / 2");
        auto sigma = [&](int k) {
            Elem c = n - k >= 0 ? h.coeff(n - k) : 0;
            return (k % 2) ? R.neg(c) : c;
        };
        Elem s1 = sigma(1), s2 = sigma(2), s3 = sigma(3);
        Elem S1 = s1;
        Elem S2 = R.sub(R.mul(s1, s1), R.mul(2, s2));
        Elem S3 = R.add(R.sub(R.mul(s1, R.mul(s1, s1)), R.mul(3, R.mul(s1, s2))), R.mul(3, s3));
        Elem nn = R.from_int(n);
        Elem t = R.add(R.mul(6, S2), R.mul(2, R.mul(a, nn)));
        Elem w = R.add(R.add(R.mul(10, S3), R.mul(6, R.mul(a, S1))), R.mul(4, R.mul(b, nn)));
        A = R.sub(a, R.mul(5, t));
        B = R.sub(b, R.mul(7, w));
        Poly T = arith::rem(Poly(R, {R.mul(2, a), 0, 6}) * hp, h);
        Poly U = arith::rem(Poly(R, {b, a, 0, 1}).scaled(4) * hp, h);
        f = Poly::x(R) * h * h + T * h + U * hp - U.derivative() * h;
    }
    Poly gy = f.derivative() * h - (f * hp).scaled(2);
    return ExplicitIsogeny{E, Curve(R, A, B), kernel, f, gy, h};
}

Point ExplicitIsogeny::map_point(const Point& P) const
{
    if (P.is_infinity())
        return P;
    const Zmod& R = source.ring();
    auto [x, y] = to_affine(source, P);
    Elem hx = h.eval(x);
    if (hx == 0)
        return Point::infinity();
    Elem hi = R.inverse(hx);
    Elem hi2 = R.mul(hi, hi);
    return Point::affine(R.mul(f.eval(x), hi2), R.mul(R.mul(y, gy.eval(x)), R.mul(hi2, hi)));
}

unsigned frobenius_eigenvalue(const Curve& E, unsigned ell, const KernelPoly& kernel, std::optional<Integer> t)
{
    const Zmod& F = E.ring();
    const std::uint64_t p = F.modulus();
    Integer tr = t ? *t : trace(E);
    std::vector<unsigned> roots;
    long tm = arith::to_i64(arith::mod(tr, ell)), pm = static_cast<long>(p % ell);
    for (unsigned mu = 0; mu < ell; ++mu)
        if (((long(mu) * mu - tm * mu + pm) % long(ell) + ell) % ell == 0)
            roots.push_back(mu);
    if (roots.empty())
        throw Error(Errc::NotSplit, "characteristic polynomial of Frobenius is irreducible mod ell");
    if (ell == 2)
        return roots.front();

    const Poly& h = kernel.h;
    const unsigned n = (ell - 1) / 2;
    Poly f = arith::rem(Poly(F, {E.b(), E.a(), 0, 1}), h);
    auto mm = [&](const Poly& a, const Poly& b) { return arith::mulmod(a, b, h); };
    Poly A = arith::rem(Poly::constant(F, E.a()), h);
    // points (X, y * Y) in F_p[x]/(h)
    struct Pt {
        Poly X, Y;
    };
    Pt P1{arith::rem(Poly::x(F), h), arith::rem(Poly::constant(F, 1), h)};
    auto dbl_pt = [&](const Pt& P) {
        Poly num = mm(P.X, P.X).scaled(3) + A;
        Poly L = mm(num, arith::invmod(mm(f, P.Y).scaled(2), h));
        Poly X3 = mm(f, mm(L, L)) - P.X.scaled(2);
        Poly Y3 = mm(L, P.X - X3) - P.Y;
        return Pt{X3, Y3};
    };
    auto add_pt = [&](const Pt& P, const Pt& Q) {
        Poly L = mm(Q.Y - P.Y, arith::invmod(Q.X - P.X, h));
        Poly X3 = mm(f, mm(L, L)) - P.X - Q.X;
        Poly Y3 = mm(L, P.X - X3) - P.Y;
        return Pt{X3, Y3};
    };
    Poly pix = arith::powmod(arith::rem(Poly::x(F), h), arith::from_u64(p), h);
    Poly piy = arith::powmod(f, arith::from_u64((p - 1) / 2), h);
    Pt Pk = P1;
    for (unsigned k = 1; k <= n; ++k) {
        if (k == 2)
            Pk = dbl_pt(P1);
        else if (k > 2)
            Pk = add_pt(Pk, P1);
        if (Pk.X != pix)
            continue;
        unsigned mu;
        if (Pk.Y == piy)
            mu = k;
        else if (Pk.Y == -piy)
            mu = ell - k;
        else
            break;
        if (std::find(roots.begin(), roots.end(), mu) == roots.end())
            break;
        return mu;
    }
    throw Error(Errc::InconsistentKernel, "Frobenius does not act on the kernel by an eigenvalue");
}

namespace {

Elem inv_nz(const Zmod& R, Elem v, const char* what)
{
    if (v == 0)
        throw Error(Errc::Degenerate, what);
    return R.inverse(v);
}

}  // namespace

ElkiesResult kernel_poly_mod_n(const Integer& N, unsigned ell, const Integer& j1_in, const Integer& j2_in)
{
    Zmod R(N);
    Elem j1 = R.reduce(j1_in), j2 = R.reduce(j2_in);
    const auto& phi = modpoly::reduced(ell, R);
    auto d = phi.derivatives(j1, j2);
    if (d.phi != 0)
        throw Error(Errc::NotIsogenous, "Phi_ell(j1, j2) is nonzero");
    Curve E1 = curve_from_j(j1, R);
    // j2 must also be admissible
    curve_from_j(j2, R);
    Elem L = R.from_int(ell);
    Elem a = E1.a(), b = E1.b();
    Elem E4 = R.neg(R.mul(a, inv_nz(R, 3, "3")));
    Elem E6 = R.neg(R.mul(b, inv_nz(R, 2, "2")));
    Elem iE4 = inv_nz(R, E4, "E4 vanishes");
    Elem iE6 = inv_nz(R, E6, "E6 vanishes");
    Elem jp = R.neg(R.mul(R.mul(E6, j1), iE4));
    Elem jtp = R.neg(R.mul(R.mul(jp, d.x), inv_nz(R, R.mul(L, d.y), "Phi_Y vanishes")));
    Elem jt = j2, jt1728 = R.sub(j2, R.from_int(1728));
    Elem tE4 = R.mul(R.mul(jtp, jtp), inv_nz(R, R.mul(jt, jt1728), "j2 (j2 - 1728) vanishes"));
    Elem tE6 = R.neg(R.mul(R.mul(jtp, R.mul(jtp, jtp)), inv_nz(R, R.mul(R.mul(jt, jt), jt1728), "j2 vanishes")));
    Elem L2 = R.mul(L, L), L4 = R.mul(L2, L2), L6 = R.mul(L4, L2);
    Elem At = R.neg(R.mul(R.mul(3, L4), tE4));
    Elem Bt = R.neg(R.mul(R.mul(2, L6), tE6));
    Elem num = R.add(R.add(R.mul(R.mul(jp, jp), d.xx), R.mul(R.mul(R.mul(2, L), R.mul(jp, jtp)), d.xy)),
                     R.mul(R.mul(L2, R.mul(jtp, jtp)), d.yy));
    Elem J = R.neg(R.mul(num, inv_nz(R, R.mul(jp, d.x), "j' Phi_X vanishes")));
    Elem itE4 = inv_nz(R, tE4, "isogenous E4 vanishes");
    Elem itE6 = inv_nz(R, tE6, "isogenous E6 vanishes");
    Elem T2 = R.sub(R.mul(R.mul(E4, E4), iE6), R.mul(L, R.mul(R.mul(tE4, tE4), itE6)));
    Elem T3 = R.sub(R.mul(E6, iE4), R.mul(L, R.mul(tE6, itE4)));
    Elem p1 = R.neg(R.mul(L, R.add(R.add(R.mul(6, J), R.mul(3, T2)), R.mul(4, T3))));

    Poly h(R);
    if (ell == 2) {
        h = Poly(R, {R.neg(p1), 1});
    } else {
        const unsigned n = (ell - 1) / 2;
        std::vector<Elem> S(n + 1, 0);
        S[0] = R.from_int(n);
        S[1] = R.mul(p1, inv_nz(R, 2, "2"));
        auto wp_coeffs = [&](Elem A, Elem B, unsigned count) {
            std::vector<Elem> c(count + 1, 0);
            if (count >= 1)
                c[1] = R.neg(R.mul(A, inv_nz(R, 5, "5")));
            if (count >= 2)
                c[2] = R.neg(R.mul(B, inv_nz(R, 7, "7")));
            for (unsigned k = 3; k <= count; ++k) {
                Elem s = 0;
                for (unsigned i = 1; i + 1 < k; ++i)
                    s = R.add(s, R.mul(c[i], c[k - 1 - i]));
                Elem den = R.from_int(static_cast<std::int64_t>(k - 2) * (2 * k + 3));
                c[k] = R.mul(R.mul(3, s), inv_nz(R, den, "small integer"));
            }
            return c;
        };
        auto c = wp_coeffs(a, b, n);
        auto ct = wp_coeffs(At, Bt, n);
        Poly F = Poly::x(R);
        Poly cub(R, {b, a, 0, 1});
        Poly cubd(R, {R.mul(2, a), 0, 6});
        Elem fact = 1;  // (2k)!
        for (unsigned k = 1; k < n; ++k) {
            F = F.derivative().derivative() * cub.scaled(4) + F.derivative() * cubd;
            fact = R.mul(fact, R.from_int(static_cast<std::int64_t>(2 * k - 1) * (2 * k)));
            Elem rhs = R.mul(R.mul(fact, inv_nz(R, 2, "2")), R.sub(ct[k], c[k]));
            for (unsigned i = 0; i <= k; ++i)
                rhs = R.sub(rhs, R.mul(F.coeff(i), S[i]));
            S[k + 1] = R.mul(rhs, inv_nz(R, F.coeff(k + 1), "factorial"));
        }
        std::vector<Elem> e(n + 1, 0);
        e[0] = 1;
        for (unsigned k = 1; k <= n; ++k) {
            Elem s = 0;
            for (unsigned i = 1; i <= k; ++i) {
                Elem term = R.mul(e[k - i], S[i]);
                s = (i % 2) ? R.add(s, term) : R.sub(s, term);
            }
            e[k] = R.mul(s, inv_nz(R, R.from_int(k), "small integer"));
        }
        std::vector<Elem> coeffs(n + 1);
        for (unsigned k = 0; k <= n; ++k)
            coeffs[n - k] = (k % 2) ? R.neg(e[k]) : e[k];
        h = Poly(R, coeffs);
    }
    KernelPoly kp{h, ell};
    Curve E2(R, At, Bt);
    auto iso = velu(E1, kp);
    if (!(iso.target == E2))
        throw Error(Errc::Degenerate, "power sums inconsistent with the codomain");
    return ElkiesResult{E1, E2, kp};
}

}  // namespace tgii::curves
