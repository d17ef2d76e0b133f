#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <tuple>

#include "tgii/arith/polyfp.hpp"
#include "tgii/curves/curves.hpp"
#include "tgii/error.hpp"
#include "tgii/modpoly/modpoly.hpp"

using namespace tgii;
using arith::Elem;
using arith::Integer;
using arith::Poly;
using arith::Zmod;
using curves::Curve;
using curves::Point;

namespace {

Errc error_code(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return Errc::InvalidArgument;
}

std::vector<std::pair<Elem, Elem>> all_affine_points(const Curve& E)
{
    const Zmod& F = E.ring();
    std::vector<std::pair<Elem, Elem>> pts;
    for (Elem x = 0; x < F.modulus(); ++x)
        for (Elem y = 0; y < F.modulus(); ++y)
            if (F.mul(y, y) == E.rhs(x))
                pts.emplace_back(x, y);
    return pts;
}

Elem nonresidue(const Zmod& F)
{
    for (Elem d = 2;; ++d)
        if (F.pow(d, (F.modulus() - 1) / 2) == F.modulus() - 1)
            return d;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = lo; p <= hi; ++p)
        if (arith::is_prime(arith::from_u64(p)))
            out.push_back(p);
    return out;
}

Elem crt2(std::uint64_t p, Elem a, std::uint64_t q, Elem b)
{
    return arith::to_u64(arith::crt({arith::from_u64(p), arith::from_u64(q)}, {arith::from_u64(a), arith::from_u64(b)}));
}

}  // namespace

TEST_SUITE("curves")
{
    TEST_CASE("curve from j")
    {
        Zmod F83(83);
        auto E = curves::curve_from_j(15, F83);
        CHECK(curves::j_invariant(E) == 15);
        CHECK(error_code([&] { curves::curve_from_j(0, F83); }) == Errc::ForbiddenJ);
        CHECK(error_code([&] { curves::curve_from_j(1728 % 83, F83); }) == Errc::ForbiddenJ);

        Zmod RN(14359);
        auto EN = curves::curve_from_j(12631, RN);
        CHECK(curves::j_invariant(EN) == 12631);
        auto Ep = curves::curve_from_j(15, F83);
        auto Eq = curves::curve_from_j(2, Zmod(173));
        CHECK(EN.a() % 83 == Ep.a());
        CHECK(EN.b() % 83 == Ep.b());
        CHECK(EN.a() % 173 == Eq.a());
        CHECK(EN.b() % 173 == Eq.b());
        // j = 0 modulo one factor only exposes it
        try {
            curves::curve_from_j(83 * 5, RN);
            FAIL("accepted j divisible by 83");
        } catch (const FactorFoundError& e) {
            CHECK(e.divisor() == 83);
        }
    }

    TEST_CASE("j invariants of special curves and twists")
    {
        Zmod F(101);
        CHECK(curves::j_invariant(Curve(F, 0, 1)) == 0);
        CHECK(curves::j_invariant(Curve(F, 1, 0)) == 1728 % 101);
        auto E = curves::curve_from_j(33, F);
        CHECK(curves::j_invariant(curves::twist(E, nonresidue(F))) == 33);
        CHECK(error_code([&] { Curve(F, 0, 0); }) == Errc::Degenerate);
    }

    TEST_CASE("point counting")
    {
        Zmod F83(83);
        auto E = curves::curve_from_j(15, F83);
        Integer n = curves::count_points(E);
        CHECK((n == 75 || n == 93));
        CHECK(n == Integer(all_affine_points(E).size() + 1));
        for (std::uint64_t p : primes_in(5, 60)) {
            Zmod F(p);
            for (Elem j = 1; j < p; ++j) {
                if (j == 1728 % p)
                    continue;
                auto Ej = curves::curve_from_j(j, F);
                Integer nj = curves::count_points(Ej);
                CHECK(nj == Integer(all_affine_points(Ej).size() + 1));
                CHECK(nj + curves::count_points(curves::twist(Ej, nonresidue(F))) == Integer(2 * p + 2));
            }
        }
    }

    TEST_CASE("group law on random triples")
    {
        std::mt19937_64 rng(17);
        auto primes = primes_in(101, 2000);
        int triples = 0;
        while (triples < 1000) {
            std::uint64_t p = primes[rng() % primes.size()];
            Zmod F(p);
            Elem a = rng() % p, b = rng() % p;
            Curve* E = nullptr;
            std::optional<Curve> holder;
            try {
                holder.emplace(F, a, b);
                E = &*holder;
            } catch (const Error&) {
                continue;
            }
            std::uint64_t state = rng();
            auto P = curves::random_point(*E, state), Q = curves::random_point(*E, state),
                 S = curves::random_point(*E, state);
            if (!P || !Q || !S)
                continue;
            REQUIRE(curves::on_curve(*E, *P));
            auto PQ = curves::add(*E, *P, *Q);
            CHECK(curves::on_curve(*E, PQ));
            CHECK(curves::equal(*E, PQ, curves::add(*E, *Q, *P)));
            CHECK(curves::equal(*E, curves::add(*E, PQ, *S), curves::add(*E, *P, curves::add(*E, *Q, *S))));
            CHECK(curves::add(*E, *P, curves::negate(*E, *P)).is_infinity());
            CHECK(curves::equal(*E, curves::dbl(*E, *P), curves::add(*E, *P, *P)));
            Integer n = curves::count_points(*E);
            CHECK(curves::mul(*E, *P, n).is_infinity());
            ++triples;
        }
    }

    TEST_CASE("division polynomials vanish on torsion")
    {
        Zmod F(97);
        auto E = curves::curve_from_j(31, F);
        CHECK(curves::division_polynomial(E, 3).degree() == 4);
        CHECK(curves::division_polynomial(E, 5).degree() == 12);
        CHECK(curves::division_polynomial(E, 7).degree() == 24);
        CHECK(curves::division_polynomial(E, 2).degree() == 3);
        for (std::uint64_t p : {97ull, 101ull, 103ull, 83ull}) {
            Zmod Fp(p);
            for (Elem j : {5u, 15u, 40u, 66u}) {
                auto Ej = curves::curve_from_j(j, Fp);
                for (unsigned ell : {3u, 5u, 7u}) {
                    Poly psi = curves::division_polynomial(Ej, ell);
                    std::set<Elem> torsion_x;
                    for (auto [x, y] : all_affine_points(Ej))
                        if (curves::mul(Ej, Point::affine(x, y), ell).is_infinity())
                            torsion_x.insert(x);
                    std::set<Elem> root_x;
                    for (Elem r : arith::distinct_roots_fp(psi))
                        if (Fp.pow(Ej.rhs(r), (p - 1) / 2) <= 1)
                            root_x.insert(r);
                    CHECK(torsion_x == root_x);
                }
            }
        }
    }

    TEST_CASE("kernel polynomials and velu on the toy curve")
    {
        Zmod F83(83);
        auto E = curves::curve_from_j(15, F83);
        auto ks = curves::kernel_polynomials(E, 3);
        REQUIRE(ks.size() == 2);
        std::vector<Elem> targets;
        for (const auto& k : ks) {
            CHECK(k.h.degree() == 1);
            CHECK(arith::rem(curves::division_polynomial(E, 3), k.h).is_zero());
            auto iso = curves::velu(E, k);
            targets.push_back(curves::j_invariant(iso.target));
            // the image of every point lies on the target and the map is additive
            auto pts = all_affine_points(E);
            for (std::size_t i = 0; i < pts.size(); i += 7) {
                Point P = Point::affine(pts[i].first, pts[i].second);
                Point Q = Point::affine(pts[(i * 5 + 3) % pts.size()].first, pts[(i * 5 + 3) % pts.size()].second);
                auto phP = iso.map_point(P), phQ = iso.map_point(Q);
                CHECK(curves::on_curve(iso.target, phP));
                CHECK(curves::equal(iso.target, iso.map_point(curves::add(E, P, Q)), curves::add(iso.target, phP, phQ)));
            }
            // some kernel of the target leads back to j = 15
            bool back = false;
            for (const auto& kd : curves::kernel_polynomials(iso.target, 3))
                back |= curves::j_invariant(curves::velu(iso.target, kd).target) == 15;
            CHECK(back);
        }
        std::sort(targets.begin(), targets.end());
        CHECK(targets == std::vector<Elem>{48, 71});
    }

    TEST_CASE("kernel counts are 0, 1, 2 or l + 1 and may be empty")
    {
        bool saw_empty = false;
        for (std::uint64_t p : {83ull, 101ull}) {
            Zmod F(p);
            for (Elem j = 1; j < p; ++j) {
                if (j == 1728 % p)
                    continue;
                auto E = curves::curve_from_j(j, F);
                for (unsigned ell : {3u, 5u}) {
                    auto n = curves::kernel_polynomials(E, ell).size();
                    CHECK((n == 0 || n == 1 || n == 2 || n == ell + 1));
                    saw_empty |= n == 0;
                }
            }
        }
        CHECK(saw_empty);
    }

    TEST_CASE("phi roots match velu codomains for p <= 200")
    {
        for (std::uint64_t p : primes_in(5, 200)) {
            for (unsigned ell : {2u, 3u, 5u, 7u}) {
                if (p == ell)
                    continue;
                auto rep = modpoly::velu_crosscheck(p, ell);
                CHECK_MESSAGE(rep.ok(), "p=" << p << " ell=" << ell);
            }
        }
    }

    TEST_CASE("frobenius eigenvalues")
    {
        Zmod F83(83);
        auto E = curves::curve_from_j(15, F83);
        Integer t = curves::trace(E);
        CHECK((t == 9 || t == -9));
        auto ks = curves::kernel_polynomials(E, 3);
        REQUIRE(ks.size() == 2);
        unsigned mu = curves::frobenius_eigenvalue(E, 3, ks[0]);
        unsigned nu = curves::frobenius_eigenvalue(E, 3, ks[1]);
        CHECK(mu != nu);
        CHECK((mu * nu) % 3 == 83 % 3);
        // the dual of the isogeny with kernel ks[0] has eigenvalue nu
        auto iso = curves::velu(E, ks[0]);
        for (const auto& kd : curves::kernel_polynomials(iso.target, 3))
            if (curves::j_invariant(curves::velu(iso.target, kd).target) == 15)
                CHECK(curves::frobenius_eigenvalue(iso.target, 3, kd, t) == nu);

        // inert case
        Zmod F(101);
        for (Elem j = 1; j < 101; ++j) {
            auto Ej = curves::curve_from_j(j, F);
            Integer tj = curves::trace(Ej);
            long disc = arith::to_i64(tj * tj - 4 * 101);
            if (arith::kronecker(arith::from_i64(disc), 5) == -1) {
                CHECK(curves::kernel_polynomials(Ej, 5).empty());
                break;
            }
        }
    }

    TEST_CASE("frobenius eigenvalue for every split kernel at small primes")
    {
        for (std::uint64_t p : primes_in(11, 120)) {
            Zmod F(p);
            for (Elem j = 1; j < p; j += 3) {
                if (j == 1728 % p)
                    continue;
                auto E = curves::curve_from_j(j, F);
                Integer t = curves::trace(E);
                for (unsigned ell : {3u, 5u, 7u}) {
                    if (ell == p)
                        continue;
                    auto ks = curves::kernel_polynomials(E, ell);
                    for (const auto& k : ks) {
                        unsigned mu = curves::frobenius_eigenvalue(E, ell, k, t);
                        long v = (long(mu) * mu - arith::to_i64(arith::mod(t, ell)) * mu + long(p % ell)) % long(ell);
                        CHECK(v == 0);
                    }
                }
            }
        }
    }

    TEST_CASE("elkies kernel polynomial over the toy modulus")
    {
        auto res = curves::kernel_poly_mod_n(14359, 3, 12631, 7601);
        CHECK(res.kernel.h.degree() == 1);
        CHECK(curves::j_invariant(res.target) == 7601);
        for (auto [p, j1, j2] : std::vector<std::tuple<std::uint64_t, Elem, Elem>>{{83, 15, 48}, {173, 2, 7601 % 173}}) {
            Zmod F(p);
            auto E = curves::curve_from_j(j1, F);
            bool matched = false;
            for (const auto& k : curves::kernel_polynomials(E, 3)) {
                if (curves::j_invariant(curves::velu(E, k).target) != j2)
                    continue;
                matched = true;
                for (int i = 0; i <= 1; ++i)
                    CHECK(res.kernel.h.coeff(i) % p == k.h.coeff(i));
            }
            CHECK(matched);
        }
        CHECK(error_code([] { curves::kernel_poly_mod_n(14359, 3, 12631, 4096); }) == Errc::NotIsogenous);
    }

    TEST_CASE("elkies over a prime field agrees with factoring")
    {
        int compared = 0;
        for (std::uint64_t p : {101ull, 103ull, 107ull, 211ull}) {
            Zmod F(p);
            for (Elem j = 2; j < p; j += 5) {
                if (j == 1728 % p)
                    continue;
                auto E = curves::curve_from_j(j, F);
                for (unsigned ell : {2u, 3u, 5u, 7u, 11u}) {
                    for (const auto& k : curves::kernel_polynomials(E, ell)) {
                        Elem j2 = curves::j_invariant(curves::velu(E, k).target);
                        if (j2 == 0 || j2 == 1728 % p)
                            continue;
                        try {
                            auto r = curves::kernel_poly_mod_n(p, ell, j, j2);
                            CHECK(r.kernel.h == k.h);
                            ++compared;
                        } catch (const Error& e) {
                            CHECK(e.code() == Errc::Degenerate);
                        }
                    }
                }
            }
        }
        CHECK(compared > 100);
    }

    TEST_CASE("elkies mod N equals the CRT of per-prime kernels")
    {
        std::mt19937_64 rng(2024);
        auto primes = primes_in(100, 1000);
        int done = 0, attempts = 0;
        while (done < 50 && attempts < 2000) {
            ++attempts;
            std::uint64_t p = primes[rng() % primes.size()], q = primes[rng() % primes.size()];
            if (p == q)
                continue;
            unsigned ell = std::vector<unsigned>{3, 5, 7}[rng() % 3];
            struct Side {
                Elem j1, j2;
                Poly h;
            };
            auto pick = [&](std::uint64_t r) -> std::optional<Side> {
                Zmod F(r);
                Elem j = 1 + rng() % (r - 1);
                if (j == 1728 % r)
                    return std::nullopt;
                auto E = curves::curve_from_j(j, F);
                auto ks = curves::kernel_polynomials(E, ell);
                if (ks.empty())
                    return std::nullopt;
                const auto& k = ks[rng() % ks.size()];
                Elem j2 = curves::j_invariant(curves::velu(E, k).target);
                if (j2 == 0 || j2 == 1728 % r)
                    return std::nullopt;
                return Side{j, j2, k.h};
            };
            auto sp = pick(p), sq = pick(q);
            if (!sp || !sq)
                continue;
            Integer N = arith::from_u64(p) * arith::from_u64(q);
            Elem J1 = crt2(p, sp->j1, q, sq->j1), J2 = crt2(p, sp->j2, q, sq->j2);
            try {
                auto r = curves::kernel_poly_mod_n(N, ell, J1, J2);
                REQUIRE(r.kernel.h.degree() == static_cast<int>((ell - 1) / 2));
                for (int i = 0; i <= r.kernel.h.degree(); ++i)
                    CHECK(r.kernel.h.coeff(i) == crt2(p, sp->h.coeff(i), q, sq->h.coeff(i)));
                ++done;
            } catch (const FactorFoundError& e) {
                // a repeated root modulo one prime only splits N
                CHECK((e.divisor() == Integer(arith::from_u64(p)) || e.divisor() == Integer(arith::from_u64(q))));
            } catch (const Error& e) {
                // a repeated root of Phi_ell(j1, .) leaves the codomain ambiguous
                CHECK(e.code() == Errc::Degenerate);
            }
        }
        CHECK(done == 50);
    }
}
