#include <doctest.h>

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "tgii/arith/poly.hpp"
#include "tgii/error.hpp"
#include "tgii/modpoly/modpoly.hpp"
#include "tgii/tgii/json.hpp"
#include "tgii/tgii/tgii.hpp"
#include "tgii/volcano/volcano.hpp"

using namespace tgii;
using namespace tgii::core;
using arith::Poly;

namespace {

Errc code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return Errc::InvalidArgument;
}

const Generated& toy()
{
    static const Generated g = gen(toy_config());
    return g;
}

const Generated& conductor3()
{
    static const Generated g = [] {
        GenConfig c;
        c.d0 = -251;
        c.conductor = {Integer(3)};
        c.p_bound = 5000;
        c.seed = 7;
        return gen(c);
    }();
    return g;
}

const Generated& app()
{
    static const Generated g = gen(app_config());
    return g;
}

IdealClass x_toy() { return {3, 1, 21}; }

// Forms of prime norm l for D, both orientations.
std::vector<IdealClass> prime_norm_forms(const Integer& d, unsigned ell)
{
    std::vector<IdealClass> out;
    Integer l(ell);
    for (Integer b = -l + 1; b <= l; ++b)
        if (arith::mod(b * b - d, 4 * l) == 0)
            out.push_back({l, b, (b * b - d) / (4 * l)});
    return out;
}

bool phi_related(const PublicParams& pp, unsigned ell, const Integer& a, const Integer& b)
{
    arith::Zmod ring(pp.N);
    return modpoly::reduced(ell, ring).eval(ring.reduce(a), ring.reduce(b)) == 0;
}

}  // namespace

TEST_SUITE("tgii")
{
    TEST_CASE("gen reproduces the toy parameters")
    {
        const auto& g = toy();
        CHECK(g.pp.N == 14359);
        CHECK(g.pp.j0 == 12631);
        CHECK(g.trapdoor.field_p().base_j() == 15);
        CHECK(g.trapdoor.field_q().base_j() == 2);
        CHECK(abs(g.trapdoor.field_p().trace()) == 9);
        CHECK(abs(g.trapdoor.field_q().trace()) == 21);
        CHECK(g.trapdoor.field_p().v() == 1);
        CHECK(!g.trapdoor.warnings.empty());
        CHECK(g.trapdoor.group().order() == 7);
    }

    TEST_CASE("gen rejects bad configurations")
    {
        GenConfig c;
        c.d0 = -3;
        CHECK(code_of([&] { gen(c); }) == Errc::ConfigRejected);
        c.d0 = -7;  // h = 1
        CHECK(code_of([&] { gen(c); }) == Errc::ConfigRejected);
        c.d0 = -247;  // -247 = 1 mod 4, h(-247) = 6
        CHECK(code_of([&] { gen(c); }) == Errc::ConfigRejected);
        c.d0 = -8;
        CHECK(code_of([&] { gen(c); }) == Errc::ConfigRejected);
        c.d0 = -251;
        c.conductor = {Integer(9)};
        CHECK(code_of([&] { gen(c); }) == Errc::ConfigRejected);
        // a prime f whose f - (D0|f) has odd part divisible by h(D0) = 7
        unsigned bad = 0;
        for (unsigned f = 3; f < 400 && !bad; f += 2) {
            if (!arith::is_prime(Integer(f)))
                continue;
            long m = long(f) - arith::kronecker(Integer(-251), Integer(f));
            while (m % 2 == 0)
                m /= 2;
            bool sqf = true;
            for (long r = 3; r * r <= m; r += 2)
                if (m % (r * r) == 0)
                    sqf = false;
            if (sqf && m % 7 == 0)
                bad = f;
        }
        REQUIRE(bad != 0);
        c.conductor = {Integer(bad)};
        try {
            gen(c);
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ConfigRejected);
            CHECK(std::string(e.what()).find("divisible by h(D0)") != std::string::npos);
        }
    }

    TEST_CASE("gen with conductor 3")
    {
        const auto& g = conductor3();
        CHECK(g.trapdoor.discriminant().value() == -2259);
        CHECK(g.trapdoor.group().order() == 14);
        CHECK(g.trapdoor.group().odd_order() == 7);
        for (const auto* f : {&g.trapdoor.field_p(), &g.trapdoor.field_q()})
            CHECK(volcano::end_disc(f->base_j(), f->p()).value() == -2259);
    }

    TEST_CASE("act on the toy instance")
    {
        const auto& td = toy().trapdoor;
        const Integer j0 = toy().pp.j0;
        CHECK(td.act(j0, x_toy()) == 7601);
        CHECK(td.act(td.act(j0, x_toy()), x_toy()) == 1766);
        CHECK(td.act(j0, classgroup::identity(-251)) == j0);
        const std::vector<Integer> crater{12631, 7601, 1766, 4096, 7919, 2711, 1897};
        for (int k = 0; k < 7; ++k)
            CHECK(td.canonical(classgroup::pow(x_toy(), k)) == crater[k]);
        CHECK(td.canonical({5, -3, 13}) == 4096);
        CHECK(td.canonical({7, 1, 9}) == 2711);
        CHECK(td.class_of(4096) == classgroup::reduce({5, -3, 13}));
        CHECK(code_of([&] { td.act(100, x_toy()); }) == Errc::NotOnSurface);
        CHECK(code_of([&] { td.act(j0, {1, 1, 6}); }) == Errc::DiscriminantMismatch);
    }

    TEST_CASE("class tables agree with kernel stepping")
    {
        for (const auto* g : {&toy(), &conductor3()}) {
            const auto& td = g->trapdoor;
            const Integer d = td.discriminant().value();
            for (const auto* f : {&td.field_p(), &td.field_q()}) {
                for (const auto& c : td.group().elements()) {
                    for (unsigned ell : {3u, 5u, 7u, 13u}) {
                        if (arith::kronecker(d, Integer(ell)) != 1 || f->v() % ell == 0)
                            continue;
                        for (const auto& form : prime_norm_forms(d, ell)) {
                            CAPTURE(ell);
                            CAPTURE(form.str());
                            CHECK(f->step(f->j_of(c), form) ==
                                  f->j_of(classgroup::compose(c, classgroup::reduce(form))));
                        }
                    }
                }
            }
        }
    }

    TEST_CASE("action law and crt consistency on the toy group")
    {
        const auto& td = toy().trapdoor;
        const auto& els = td.group().elements();
        for (const auto& start : els) {
            Integer j = td.canonical(start);
            for (const auto& c1 : els)
                for (const auto& c2 : els)
                    CHECK(td.act(td.act(j, c1), c2) == td.act(j, classgroup::compose(c1, c2)));
        }
        for (const auto& c : els) {
            Integer j = td.canonical(c);
            CHECK(arith::mod(j, 83) == td.field_p().act(15, c));
            CHECK(arith::mod(j, 173) == td.field_q().act(2, c));
        }
    }

    TEST_CASE("toy crater walks on O_D")
    {
        const auto& td = toy().trapdoor;
        for (const auto& c : td.group().elements()) {
            Integer j = td.canonical(c);
            CHECK(volcano::end_disc(arith::to_u64(arith::mod(j, 83)), 83).value() == -251);
            CHECK(volcano::end_disc(arith::to_u64(arith::mod(j, 173)), 173).value() == -251);
            CHECK(phi_related(toy().pp, 3, j, td.act(j, x_toy())));
        }
    }

    TEST_CASE("trap_sam")
    {
        const auto& g = toy();
        PrimeRegistry reg;
        auto e = trap_sam(g.trapdoor, x_toy(), {x_toy()}, reg);
        CHECK(e.L == std::vector<unsigned>{3});
        REQUIRE(e.T.size() == 1);
        CHECK(e.T[0] == std::vector<Integer>{7601});
        CHECK(e.degree() == 3);
        CHECK(reg.used.count(3));
        auto id = trap_sam(g.trapdoor, classgroup::identity(-251), reg);
        CHECK(id.empty());
        CHECK(id.degree() == 1);
        CHECK(convert(g.pp, id) == g.pp.j0);

        PrimeRegistry fresh;
        std::mt19937_64 rng(1);
        for (const auto& x : g.trapdoor.group().elements()) {
            PrimeRegistry r2;
            auto enc = trap_sam(g.trapdoor, x, r2, 2, &rng);
            CHECK(well_formed(g.pp, enc));
            CHECK(convert(g.pp, enc) == g.trapdoor.canonical(x));
            for (const auto& list : enc.T)
                CHECK(!list.empty());
        }
        // registry exhaustion: 3, 5, 7, 13, 17, 23, 31 are usable but only six
        // nontrivial classes exist
        std::set<IdealClass> classes;
        for (int i = 0; i < 6; ++i) {
            unsigned ell = fresh_prime(g.trapdoor, fresh);
            IdealClass f = registry_form(g.trapdoor, fresh, ell);
            CHECK(f.a == ell);
            classes.insert(classgroup::reduce(f));
        }
        CHECK(classes.size() == 6);
        CHECK(code_of([&] { fresh_prime(g.trapdoor, fresh); }) == Errc::OutOfPrimes);
    }

    TEST_CASE("comp and gcd_op")
    {
        const auto& g = toy();
        PrimeRegistry reg;
        auto a = trap_sam(g.trapdoor, x_toy(), {x_toy()}, reg);
        auto b = trap_sam(g.trapdoor, classgroup::pow(x_toy(), 2), {IdealClass{7, -1, 9}}, reg);
        CHECK(b.T[0] == std::vector<Integer>{1766});
        auto ab = comp(g.pp, a, b);
        REQUIRE(ab);
        CHECK(ab->L == std::vector<unsigned>{3, 7});
        CHECK(ab->degree() == 21);
        CHECK(convert(g.pp, *ab) == 4096);
        CHECK(!comp(g.pp, a, a));

        CHECK(gcd_op(g.pp, 3, 7, 7601, 1766) == Integer(4096));
        CHECK(!gcd_op(g.pp, 3, 3, 7601, 1766));
        CHECK(!gcd_op(g.pp, 3, 9, 7601, 1766));
        CHECK(code_of([&] { gcd_op(g.pp, 3, 5, 7601, 12631); }) == Errc::NotLinear);

        ComposableEncoding dup = a;
        dup.L.push_back(3);
        dup.T.push_back({7601});
        try {
            convert(g.pp, dup);
            FAIL("converted");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::Failure);
            CHECK(std::string(e.what()).find("⊥: shared degree") != std::string::npos);
        }
        // worked example shape: (l; 3 entries) o ((m, n); 2 entries, 1 entry)
        PrimeRegistry r2;
        auto ex = trap_sam(g.trapdoor, classgroup::pow(x_toy(), 3), {x_toy()}, r2);
        CHECK(ex.T[0].size() == 3);
        auto ey = trap_sam(g.trapdoor, classgroup::identity(-251), r2);
        CHECK(comp(g.pp, ex, ey)->L == ex.L);
    }

    TEST_CASE("convert is a homomorphism on the toy group")
    {
        const auto& g = toy();
        const auto& td = g.trapdoor;
        const Integer d = -251;
        // one generation set per degree
        std::map<unsigned, IdealClass> gen_of;
        for (unsigned ell : {3u, 5u, 7u})
            gen_of.emplace(ell, prime_norm_forms(d, ell).front());
        for (const auto& x : td.group().elements())
            for (const auto& y : td.group().elements()) {
                PrimeRegistry r;
                auto ex = trap_sam(td, x, {gen_of.at(3)}, r);
                auto ey = trap_sam(td, y, {gen_of.at(5)}, r);
                auto xy = comp(g.pp, ex, ey);
                auto yx = comp(g.pp, ey, ex);
                REQUIRE(xy);
                REQUIRE(yx);
                Integer want = td.canonical(classgroup::compose(x, y));
                CHECK(convert(g.pp, *xy) == want);
                CHECK(convert(g.pp, *yx) == want);
            }
        // three lists with degrees 3, 5, 7
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 20; ++trial) {
            PrimeRegistry r;
            auto x = td.group().elements()[rng() % 7];
            auto enc = trap_sam(td, x, {gen_of.at(3), gen_of.at(5), gen_of.at(7)}, r, &rng);
            if (enc.empty())
                continue;
            CHECK(enc.L.size() == 3);
            CHECK(convert(g.pp, enc) == td.canonical(x));
        }
    }

    TEST_CASE("homomorphism over the conductor-3 order")
    {
        const auto& g = conductor3();
        const auto& td = g.trapdoor;
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            PrimeRegistry r;
            auto x = td.group().random_odd(rng);
            auto y = td.group().random_odd(rng);
            auto ex = trap_sam(td, x, r, 1);
            auto ey = trap_sam(td, y, r, 1);
            auto xy = comp(g.pp, ex, ey);
            REQUIRE(xy);
            CHECK(convert(g.pp, *xy) == td.canonical(classgroup::compose(x, y)));
            for (std::size_t i = 0; i < xy->L.size(); ++i)
                for (const auto& j : xy->T[i])
                    CHECK(volcano::end_disc(arith::to_u64(arith::mod(j, td.p())), arith::to_u64(td.p())).value() ==
                          -2259);
        }
    }

    TEST_CASE("gcd degree wall on the toy instance")
    {
        const auto& g = toy();
        arith::Zmod ring(g.pp.N);
        auto f = modpoly::reduced(3, ring).eval_partial(12631);
        auto h = modpoly::reduced(9, ring).eval_partial(7601);
        CHECK(arith::gcd(f, h).degree() == 3);
    }

    TEST_CASE("ladders")
    {
        const auto& g = toy();
        auto lad = sample_ladder(g.trapdoor, 3, 7, x_toy());
        const std::vector<Integer> cycle{7601, 1766, 4096, 7919, 2711, 1897, 12631};
        CHECK(lad.js == cycle);
        CHECK(sample_ladder(g.trapdoor, 3, 1, x_toy()).js == std::vector<Integer>{7601});
        for (std::size_t i = 1; i < lad.js.size(); ++i)
            CHECK(phi_related(g.pp, 3, lad.js[i - 1], lad.js[i]));

        PrimeRegistry r;
        auto ex = trap_sam(g.trapdoor, classgroup::pow(x_toy(), 2), {x_toy()}, r);
        auto ey = trap_sam(g.trapdoor, classgroup::pow(x_toy(), 3), {x_toy()}, r);
        CHECK(!comp(g.pp, ex, ey));
        auto z = comp_with_ladders(g.pp, {lad}, ex, ey);
        REQUIRE(z);
        CHECK(z->T[0].size() == 5);
        CHECK(convert(g.pp, *z) == g.trapdoor.canonical(classgroup::pow(x_toy(), 5)));
        auto shortl = sample_ladder(g.trapdoor, 3, 4, x_toy());
        CHECK(!comp_with_ladders(g.pp, {shortl}, ex, ey));
        auto e7 = trap_sam(g.trapdoor, classgroup::pow(x_toy(), 2), {IdealClass{7, -1, 9}}, r);
        CHECK(comp_with_ladders(g.pp, {lad}, ex, e7) == comp(g.pp, ex, e7));
    }

    TEST_CASE("random_sam")
    {
        const auto& g = toy();
        std::mt19937_64 rng(3);
        std::map<IdealClass, int> counts;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            PrimeRegistry r;
            auto s = random_sam(g.trapdoor, {x_toy()}, r, rng);
            counts[s.x]++;
            if (i < 200)
                CHECK(convert(g.pp, s.enc) == g.trapdoor.canonical(s.x));
        }
        CHECK(counts.size() == 7);
        double chi2 = 0, expect = n / 7.0;
        for (const auto& [c, k] : counts)
            chi2 += (k - expect) * (k - expect) / expect;
        CHECK(chi2 < 22.46);  // 6 degrees of freedom, 0.1% tail
    }

    TEST_CASE("partial_convert")
    {
        const auto& g = toy();
        PrimeRegistry r;
        auto a = trap_sam(g.trapdoor, x_toy(), {x_toy()}, r);
        auto b = trap_sam(g.trapdoor, classgroup::pow(x_toy(), 2), {IdealClass{7, -1, 9}}, r);
        auto pc = partial_convert(g.pp, a, b);
        CHECK(pc.jx == 7601);
        REQUIRE(pc.chain.size() == 1);
        CHECK(pc.chain[0].kernel.ell == 7);
        CHECK(pc.chain[0].kernel.h.degree() == 3);
        CHECK(curves::j_invariant(pc.chain[0].target) == 4096);
        auto none = partial_convert(g.pp, a, ComposableEncoding{});
        CHECK(none.jx == 7601);
        CHECK(none.chain.empty());

        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 10; ++trial) {
            PrimeRegistry r2;
            auto x = g.trapdoor.group().elements()[rng() % 7];
            auto y = g.trapdoor.group().elements()[1 + rng() % 6];
            auto ex = trap_sam(g.trapdoor, x, {x_toy()}, r2);
            auto ey = trap_sam(g.trapdoor, y, {prime_norm_forms(-251, 5).front()}, r2);
            std::size_t len = 0;
            for (const auto& l : ey.T)
                len += l.size();
            try {
                auto p = partial_convert(g.pp, ex, ey);
                CHECK(p.chain.size() == len);
                CHECK(p.path.back() == g.trapdoor.canonical(classgroup::compose(x, y)));
                CHECK(curves::j_invariant(p.chain.back().target) == p.path.back());
            } catch (const FactorFoundError& e) {
                CHECK((e.divisor() == 83 || e.divisor() == 173));
            } catch (const Error& e) {
                CHECK(e.code() == Errc::Degenerate);
            }
        }
    }

    TEST_CASE("application-scale instance")
    {
        auto t0 = std::chrono::steady_clock::now();
        const auto& g = app();
        CHECK(g.pp.N == 15088873);
        CHECK(g.trapdoor.group().order() == 31);
        std::vector<unsigned> usable;
        for (unsigned ell = 3; ell < 200; ell += 2)
            if (g.trapdoor.usable_degree(ell))
                usable.push_back(ell);
        CHECK(usable.size() == 27);
        {
            // one pair {C, C^-1} holds three primes (73, 179, 191): 26 oriented degrees
            PrimeRegistry reg;
            std::set<IdealClass> classes;
            for (int i = 0; i < 26; ++i)
                classes.insert(classgroup::reduce(registry_form(g.trapdoor, reg, fresh_prime(g.trapdoor, reg))));
            CHECK(classes.size() == 26);
            CHECK(code_of([&] { fresh_prime(g.trapdoor, reg); }) == Errc::OutOfPrimes);
        }
        const auto& td = g.trapdoor;
        for (unsigned ell : usable) {
            Integer j1 = td.canonical(td.degree_class(ell));
            CHECK(phi_related(g.pp, ell, g.pp.j0, j1));
        }
        std::mt19937_64 rng(9);
        for (int trial = 0; trial < 5; ++trial) {
            PrimeRegistry r;
            auto x = td.group().elements()[rng() % 31];
            auto y = td.group().elements()[rng() % 31];
            auto ex = trap_sam(td, x, r, 3, &rng);
            auto ey = trap_sam(td, y, r, 3, &rng);
            CHECK(well_formed(g.pp, ex));
            CHECK(convert(g.pp, *comp(g.pp, ex, ey)) == td.canonical(classgroup::compose(x, y)));
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        MESSAGE("application-scale checks took " << secs << " s");
    }

    TEST_CASE("json round trips")
    {
        const auto& g = toy();
        auto pp = public_params_from_json(Json::parse(dump(to_json(g.pp))));
        CHECK(pp.N == g.pp.N);
        CHECK(pp.j0 == g.pp.j0);
        auto text = dump(to_json(g.pp));
        CHECK(text.find("\"N\": \"14359\"") != std::string::npos);
        CHECK(text.find("\"demo_only\": true") != std::string::npos);
        CHECK(text.find("\"format\": \"tgii/1\"") != std::string::npos);
        CHECK(text.back() == '\n');

        PrimeRegistry r;
        auto e = trap_sam(g.trapdoor, classgroup::pow(x_toy(), 4), r, 2);
        auto back = encoding_from_json(Json::parse(dump(to_json(e))));
        CHECK(back == e);

        auto td = trapdoor_from_json(Json::parse(dump(to_json(g.trapdoor))));
        CHECK(td.public_params().j0 == 12631);
        CHECK(td.canonical(x_toy()) == 7601);

        auto lad = ladder_from_json(Json::parse(dump(to_json(sample_ladder(g.trapdoor, 3, 3, x_toy())))));
        CHECK(lad.js.size() == 3);
        CHECK(code_of([&] { encoding_from_json(to_json(g.pp)); }) == Errc::ParseError);
        auto reg = registry_from_json(to_json(r));
        CHECK(reg.used == r.used);
    }
}
