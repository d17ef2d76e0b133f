#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "tgii/arith/integer.hpp"
#include "tgii/arith/lattice.hpp"
#include "tgii/arith/poly.hpp"
#include "tgii/arith/polyfp.hpp"
#include "tgii/arith/zmod.hpp"
#include "tgii/error.hpp"

using namespace tgii;
using namespace tgii::arith;

namespace {

Poly P(const Zmod& R, std::vector<long long> c)
{
    std::vector<Elem> v;
    for (auto x : c)
        v.push_back(R.from_int(x));
    return Poly(R, v);
}

// Brute force CRT by scanning every residue below the product.
Integer crt_scan(const std::vector<long>& m, const std::vector<long>& r)
{
    long prod = 1;
    for (long x : m)
        prod *= x;
    for (long y = 0; y < prod; ++y) {
        bool ok = true;
        for (std::size_t i = 0; i < m.size(); ++i)
            ok = ok && (y % m[i] == ((r[i] % m[i]) + m[i]) % m[i]);
        if (ok)
            return y;
    }
    return -1;
}

}  // namespace

TEST_SUITE("arith")
{
    TEST_CASE("crt examples")
    {
        CHECK(crt({83, 173}, {15, 2}) == 12631);
        CHECK(crt({5, 7}, {3, 4}) == crt_scan({5, 7}, {3, 4}));
        CHECK(crt({5, 7}, {3, 4}) == 18);
        for (int x = 0; x < 83; ++x)
            CHECK(crt({83, 173}, {x, x}) == x);
        CHECK_THROWS_AS(crt({6, 9}, {1, 2}), Error);
        try {
            crt({6, 9}, {1, 2});
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ModuliNotCoprime);
        }
    }

    TEST_CASE("crt round trip")
    {
        std::mt19937_64 rng(7);
        for (int t = 0; t < 200; ++t) {
            long a = rng() % 83, b = rng() % 173;
            Integer y = crt({83, 173}, {a, b});
            CHECK(mod(y, 83) == a);
            CHECK(mod(y, 173) == b);
        }
    }

    TEST_CASE("zmod inverse exposes factors")
    {
        Zmod R(35);
        CHECK(R.mul(R.inverse(2), 2) == 1);
        CHECK_THROWS_AS(R.inverse(5), FactorFoundError);
        try {
            R.inverse(14);
        } catch (const FactorFoundError& e) {
            CHECK(e.divisor() == 7);
        }
    }

    TEST_CASE("poly gcd over Z/35 finds 5")
    {
        Zmod R(35);
        auto r = poly_gcd_mod_n(P(R, {-1, 1}), P(R, {-6, 1}));
        REQUIRE(std::holds_alternative<FactorFound>(r));
        CHECK(std::get<FactorFound>(r).divisor == 5);
    }

    TEST_CASE("poly gcd idempotence and divisibility")
    {
        Zmod R(10007);
        std::mt19937_64 rng(3);
        for (int t = 0; t < 50; ++t) {
            std::vector<long long> a(6), b(5), c(3);
            for (auto* v : {&a, &b, &c})
                for (auto& x : *v)
                    x = static_cast<long long>(rng() % 10007);
            a.back() = b.back() = c.back() = 1;
            Poly f = P(R, a) * P(R, c), g = P(R, b) * P(R, c);
            auto res = poly_gcd_mod_n(f, g);
            REQUIRE(std::holds_alternative<Poly>(res));
            Poly d = std::get<Poly>(res);
            CHECK(rem(f, d).is_zero());
            CHECK(rem(g, d).is_zero());
            CHECK(d.degree() >= 2);
            CHECK(gcd(f, f) == monic(f));
        }
    }

    TEST_CASE("roots over F_p")
    {
        Zmod F5(5);
        CHECK(poly_roots_fp(P(F5, {-1, 0, 1})) == std::vector<Elem>{1, 4});
        CHECK(poly_roots_fp(P(F5, {3})).empty());
        CHECK_THROWS_AS(poly_roots_fp(P(Zmod(15), {1, 1})), Error);
        Zmod F101(101);
        // (x-3)^2 (x-7) (x^2+1)
        Poly f = P(F101, {-3, 1}) * P(F101, {-3, 1}) * P(F101, {-7, 1}) * P(F101, {2, 0, 1});
        CHECK(poly_roots_fp(f) == std::vector<Elem>{3, 3, 7});
        // exhaustive cross-check on random polynomials
        std::mt19937_64 rng(11);
        for (int t = 0; t < 100; ++t) {
            std::vector<long long> c(1 + rng() % 8);
            for (auto& x : c)
                x = static_cast<long long>(rng() % 101);
            c.back() = 1 + static_cast<long long>(rng() % 100);
            Poly g = P(F101, c);
            std::vector<Elem> brute;
            for (Elem x = 0; x < 101; ++x)
                if (g.eval(x) == 0)
                    brute.push_back(x);
            auto d = distinct_roots_fp(g, t);
            CHECK(d == brute);
        }
    }

    TEST_CASE("factorization over F_p")
    {
        Zmod F5(5), F3(3), F2(2);
        auto a = factor_poly_fp(P(F5, {-1, 0, 1}));
        REQUIRE(a.size() == 2);
        CHECK(a[0].factor == P(F5, {-1, 1}));
        CHECK(a[1].factor == P(F5, {-4, 1}));
        auto b = factor_poly_fp(P(F3, {1, 0, 1}));
        REQUIRE(b.size() == 1);
        CHECK(b[0].factor == P(F3, {1, 0, 1}));
        CHECK(b[0].multiplicity == 1);
        // x^4 + x + 1 irreducible over F_2, times (x+1)^3
        Poly g = P(F2, {1, 1, 0, 0, 1}) * P(F2, {1, 1}) * P(F2, {1, 1}) * P(F2, {1, 1});
        auto c = factor_poly_fp(g);
        REQUIRE(c.size() == 2);
        CHECK(c[0].factor == P(F2, {1, 1}));
        CHECK(c[0].multiplicity == 3);
        CHECK(c[1].factor == P(F2, {1, 1, 0, 0, 1}));
        // x^p - x has every linear factor once; also a p-th power input
        Zmod F7(7);
        Poly xp = Poly::monomial(F7, 1, 7) - Poly::x(F7);
        CHECK(factor_poly_fp(xp).size() == 7);
        Poly sq = Poly::monomial(F7, 1, 14) + Poly::constant(F7, 1);  // (x^2+1)^7
        auto d = factor_poly_fp(sq);
        REQUIRE(d.size() == 1);
        CHECK(d[0].multiplicity == 7);
        // product of the factors gives back the monic input
        std::mt19937_64 rng(5);
        Zmod F31(31);
        for (int t = 0; t < 50; ++t) {
            std::vector<long long> cc(2 + rng() % 12);
            for (auto& x : cc)
                x = static_cast<long long>(rng() % 31);
            cc.back() = 1;
            Poly h = P(F31, cc);
            Poly prod = Poly::constant(F31, 1);
            for (auto& pf : factor_poly_fp(h, t))
                for (unsigned k = 0; k < pf.multiplicity; ++k)
                    prod = prod * pf.factor;
            CHECK(prod == monic(h));
        }
    }

    TEST_CASE("lll")
    {
        CHECK(lll(IntMatrix::identity(3)) == IntMatrix::identity(3));
        IntMatrix B({{201, 37}, {1648, 297}});
        IntMatrix R = lll(B);
        CHECK(abs(determinant(R)) == abs(determinant(B)));
        // shortest nonzero vector by scanning coefficients in [-50,50]^2
        Integer best = -1;
        for (int x = -50; x <= 50; ++x)
            for (int y = -50; y <= 50; ++y) {
                if (x == 0 && y == 0)
                    continue;
                Integer u = x * B(0, 0) + y * B(1, 0), v = x * B(0, 1) + y * B(1, 1);
                Integer n2 = u * u + v * v;
                if (best < 0 || n2 < best)
                    best = n2;
            }
        Integer r0 = R(0, 0) * R(0, 0) + R(0, 1) * R(0, 1);
        Integer r1 = R(1, 0) * R(1, 0) + R(1, 1) * R(1, 1);
        CHECK((r0 == best || r1 == best));
        // every input row is an integer combination of the output rows
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(integer_coordinates(R, B.row(i)).has_value());
        CHECK_THROWS_AS(lll(IntMatrix({{1, 2}, {2, 4}})), Error);
        std::mt19937_64 rng(9);
        for (int t = 0; t < 30; ++t) {
            IntMatrix M(4, 4);
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                    M(i, j) = static_cast<long>(rng() % 200) - 100;
            if (determinant(M) == 0)
                continue;
            IntMatrix L = lll(M);
            CHECK(abs(determinant(L)) == abs(determinant(M)));
            for (std::size_t i = 0; i < 4; ++i)
                CHECK(integer_coordinates(L, M.row(i)).has_value());
        }
    }

    TEST_CASE("gaussian coset sampler")
    {
        std::mt19937_64 rng(1);
        IntMatrix seven(std::vector<IntVector>{{7}});
        CHECK_THROWS_AS(gauss_sample_coset(seven, {3}, 0.5, rng), Error);
        double mean = 0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            IntVector v = gauss_sample_coset(seven, {3}, 40.0, rng);
            CHECK(mod(v[0], 7) == 3);
            mean += v[0].get_d();
        }
        mean /= n;
        CHECK(std::abs(mean - 3.0) < 2.0);
        for (int i = 0; i < 100; ++i)
            CHECK(mod(gauss_sample_coset(seven, {21}, 1e6, rng)[0], 7) == 0);
        IntMatrix B({{7, 0}, {3, 1}});
        for (int i = 0; i < 1000; ++i) {
            IntVector v = gauss_sample_coset(B, {2, 5}, 20.0, rng, IntVector{0, 0});
            IntVector d{v[0] - 2, v[1] - 5};
            CHECK(integer_coordinates(B, d).has_value());
        }
    }
}
