#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "tgii/attacks/attacks.hpp"
#include "tgii/error.hpp"
#include "tgii/modpoly/modpoly.hpp"
#include "tgii/tgii/tgii.hpp"
#include "tgii/volcano/volcano.hpp"

using namespace tgii;
using namespace tgii::attacks;
using core::IdealClass;
using core::PrimeRegistry;

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

const core::Generated& toy()
{
    static const core::Generated g = core::gen(core::toy_config());
    return g;
}

IdealClass x_toy() { return {3, 1, 21}; }

// Unreduced form (l, b, c) of discriminant -251 with b >= 0 minimal.
IdealClass norm_form(unsigned ell)
{
    for (long b = 0;; ++b)
        if ((b * b + 251) % (4 * ell) == 0)
            return {Integer(ell), Integer(b), Integer((b * b + 251) / (4 * ell))};
}

ComposableEncoding single(unsigned ell, const Integer& j) { return {{ell}, {{j}}}; }

// Roots of Phi_l(j, y) over F_p, by exhaustion.
std::vector<Integer> phi_roots_mod(unsigned ell, std::uint64_t p, std::uint64_t j)
{
    arith::Zmod F{Integer(p)};
    const auto& phi = modpoly::reduced(ell, F);
    std::vector<Integer> out;
    for (std::uint64_t y = 0; y < p; ++y)
        if (phi.eval(F.reduce(Integer(j)), F.reduce(Integer(y))) == 0)
            out.push_back(Integer(y));
    return out;
}

}  // namespace

TEST_SUITE("attacks")
{
    TEST_CASE("gcd scripts")
    {
        const auto pp = toy().pp;
        CHECK(run_gcd_script(pp, {}, {}).empty());
        // pool: 0 = j0, 1 = 7601, 2 = 1766
        std::vector<ComposableEncoding> pub{single(3, 7601), single(7, 1766)};
        GcdScript s{{{3, 7, 1, 2, "extract"}}};
        auto out = run_gcd_script(pp, pub, s);
        REQUIRE(out.size() == 1);
        CHECK(out[0] == 4096);
        CHECK(code_of([&] { run_gcd_script(pp, pub, GcdScript{{{3, 7, 1, 3, ""}}}); }) == Errc::ScriptError);
        CHECK(code_of([&] { run_gcd_script(pp, pub, GcdScript{{{3, 9, 1, 2, ""}}}); }) == Errc::ScriptError);
        auto back = script_from_json(to_json(s));
        REQUIRE(back.steps.size() == 1);
        CHECK(back.steps[0].ref2 == 2);
        CHECK(back.steps[0].l1 == 3);
    }

    TEST_CASE("parallelogram on the toy triple")
    {
        const auto& g = toy();
        auto a = single(3, 7601), b = single(7, 1766), c = single(5, 4096);
        auto r = parallelogram(g.pp, a, b, c);
        auto b_class = g.trapdoor.class_of(1766);
        CHECK(r.j == g.trapdoor.canonical(classgroup::inverse(b_class)));
        CHECK(r.j == 2711);
        // one step closes j_C, one fills the missing corner
        CHECK(r.script.steps.size() == 2);
        // promote(T) as a degree-7 encoding, composed with c, lands on j_A
        auto back = core::comp(g.pp, single(7, r.j), c);
        REQUIRE(back);
        CHECK(core::convert(g.pp, *back) == 7601);
        arith::Zmod ring(g.pp.N);
        CHECK(modpoly::reduced(7, ring).eval(ring.reduce(r.j), ring.reduce(g.pp.j0)) == 0);
    }

    TEST_CASE("parallelogram with six distinct degrees")
    {
        const auto& g = toy();
        const auto& td = g.trapdoor;
        for (int k = 1; k < 7; ++k) {
            PrimeRegistry reg;
            IdealClass xa = classgroup::pow(x_toy(), Integer(k));
            IdealClass xb = classgroup::pow(x_toy(), Integer(k * 3 % 7 == 0 ? 1 : k * 3 % 7));
            IdealClass xc = classgroup::compose(xa, xb);
            if (xc == classgroup::identity(-251))
                continue;
            auto ea = core::trap_sam(td, xa, {norm_form(3), norm_form(5)}, reg);
            auto eb = core::trap_sam(td, xb, {norm_form(7), norm_form(13)}, reg);
            auto ec = core::trap_sam(td, xc, {norm_form(17), norm_form(23)}, reg);
            auto r = parallelogram(g.pp, ea, eb, ec);
            CHECK(r.j == td.canonical(classgroup::inverse(xb)));
            CHECK(r.script.steps.size() > 1);
        }
    }

    TEST_CASE("parallelogram needs pairwise coprime degrees")
    {
        const auto pp = toy().pp;
        CHECK(code_of([&] { parallelogram(pp, single(3, 7601), single(7, 1766), single(7, 4096)); }) ==
              Errc::NotApplicable);
        CHECK(code_of([&] { parallelogram(pp, single(3, 7601), single(7, 1766), single(3, 4096)); }) ==
              Errc::NotApplicable);
    }

    TEST_CASE("hilbert class polynomials over Z")
    {
        CHECK(hilbert_over_Z(-3) == std::vector<Integer>{0, 1});
        CHECK(hilbert_over_Z(-4) == std::vector<Integer>{-1728, 1});
        // H_{-7} = x + 3375
        CHECK(hilbert_over_Z(-7) == std::vector<Integer>{3375, 1});
        // H_{-15} = x^2 + 191025 x - 121287375
        CHECK(hilbert_over_Z(-15) == std::vector<Integer>{Integer(-121287375), 191025, 1});
        auto h = hilbert_over_Z(-251);
        CHECK(h.size() == 8);
        CHECK(h.back() == 1);
        for (std::uint64_t p : {83u, 173u}) {
            arith::Zmod F{Integer(p)};
            auto hp = hilbert_mod(h, F);
            auto roots = volcano::ell_set(classgroup::Discriminant::from_value(-251), p);
            auto ref = arith::Poly::from_roots(F, roots);
            CHECK(hp == ref);
        }
        arith::Zmod F83{Integer(83)};
        std::set<std::uint64_t> crater;
        for (std::uint64_t y = 0; y < 83; ++y)
            if (hilbert_mod(h, F83).eval(y) == 0)
                crater.insert(y);
        CHECK(crater == std::set<std::uint64_t>{15, 48, 23, 29, 34, 55, 71});
        CHECK(code_of([] { hilbert_over_Z(-10007); }) == Errc::TooLarge);
    }

    TEST_CASE("hilbert attack")
    {
        const auto& g = toy();
        CHECK(hilbert_attack(g.pp, -251, 3, 12631, 7601).j == 1897);
        CHECK(code_of([&] { hilbert_attack(g.pp, -247, 3, 12631, 7601); }) == Errc::AttackFailed);
        // gcd_op alone is bottom on (3, 9)
        CHECK(!core::gcd_op(g.pp, 3, 9, 12631, 7601));
        const auto& td = g.trapdoor;
        const IdealClass c3 = norm_form(3);
        for (int k = 0; k < 7; ++k) {
            Integer j = td.canonical(classgroup::pow(x_toy(), Integer(k)));
            Integer j1 = td.act(j, c3);
            CHECK(hilbert_attack(g.pp, -251, 3, j, j1).j == td.act(j, classgroup::inverse(c3)));
        }
    }

    TEST_CASE("factoring from mixed neighbors")
    {
        const auto& g = toy();
        auto rp = phi_roots_mod(3, 83, 15);
        auto rq = phi_roots_mod(3, 173, 2);
        REQUIRE(rp.size() == 2);
        REQUIRE(rq.size() == 2);
        std::vector<Integer> js;
        for (const auto& a : rp)
            for (const auto& b : rq)
                js.push_back(arith::crt({Integer(83), Integer(173)}, {a, b}));
        Integer d = factor_from_neighbors(g.pp.N, js);
        CHECK((d == 83 || d == 173));
        CHECK(code_of([&] { factor_from_neighbors(g.pp.N, {js[0]}); }) == Errc::NoCollision);
        CHECK(code_of([&] { factor_from_neighbors(g.pp.N, {js[0], js[0]}); }) == Errc::NoCollision);
    }

    TEST_CASE("discriminant search")
    {
        const Integer n = 14359;
        std::vector<KroneckerConstraint> toy_c{{3, 1}, {5, 1}, {7, 1}};
        auto all = discriminant_search(n, {});
        std::size_t expect = 0;
        for (int a = 3; a * a < 14359; ++a)
            expect += (a % 4 == 0 || a % 4 == 3);
        CHECK(all.size() == expect);
        CHECK(all.front() == -3);
        for (const auto& d : discriminant_search(n, toy_c)) {
            CHECK(arith::kronecker(d, 3) == 1);
            CHECK(arith::kronecker(d, 7) == 1);
        }
        // |D| < sqrt(N) excludes -251 here
        auto wide = discriminant_search(n, toy_c, Integer(252));
        CHECK(std::find(wide.begin(), wide.end(), Integer(-251)) != wide.end());
        CHECK(discriminant_search(n, {{3, 1}, {3, -1}}).empty());
    }
}
