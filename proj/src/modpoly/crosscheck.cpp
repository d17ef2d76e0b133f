#include <algorithm>
#include <random>

#include "tgii/arith/polyfp.hpp"
#include "tgii/curves/curves.hpp"
#include "tgii/modpoly/modpoly.hpp"

namespace tgii::modpoly {

CrosscheckReport velu_crosscheck(std::uint64_t p, unsigned ell, std::size_t trials, std::uint64_t seed)
{
    Zmod F(p);
    const auto& phi = reduced(ell, F);
    CrosscheckReport rep;
    rep.p = p;
    rep.ell = ell;
    std::vector<Elem> js;
    if (trials == 0) {
        for (Elem j = 0; j < p; ++j)
            js.push_back(j);
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < trials; ++i)
            js.push_back(rng() % p);
    }
    const Elem j1728 = 1728 % p;
    for (Elem j : js) {
        if (j == 0 || j == j1728) {
            ++rep.skipped;
            continue;
        }
        auto E = curves::curve_from_j(j, F);
        // supersingular j can have Phi roots whose kernels are not F_p-rational
        if (arith::mod(curves::trace(E), arith::from_u64(p)) == 0) {
            ++rep.skipped;
            continue;
        }
        std::vector<Elem> targets;
        for (const auto& k : curves::kernel_polynomials(E, ell, seed))
            targets.push_back(curves::j_invariant(curves::velu(E, k).target));
        std::sort(targets.begin(), targets.end());
        auto roots = arith::poly_roots_fp(phi.eval_partial(j), seed);
        ++rep.checked;
        if (roots != targets)
            rep.mismatches.push_back(j);
    }
    return rep;
}

}  // namespace tgii::modpoly
