#include "tgii/attacks/attacks.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "tgii/error.hpp"
#include "tgii/modpoly/modpoly.hpp"
#include "tgii/volcano/volcano.hpp"

namespace tgii::attacks {

using arith::Poly;
using arith::Zmod;

std::size_t published_count(const std::vector<ComposableEncoding>& published)
{
    std::size_t n = 0;
    for (const auto& e : published)
        for (const auto& list : e.T)
            n += list.size();
    return n;
}

std::vector<Integer> run_gcd_script(const PublicParams& pp, const std::vector<ComposableEncoding>& published,
                                    const GcdScript& script)
{
    std::vector<Integer> pool{pp.j0};
    for (const auto& e : published)
        for (const auto& list : e.T)
            pool.insert(pool.end(), list.begin(), list.end());
    std::vector<Integer> out;
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        const auto& s = script.steps[i];
        if (s.ref1 >= pool.size() || s.ref2 >= pool.size())
            throw Error(Errc::ScriptError, "step " + std::to_string(i) + " refers past the pool");
        if (std::gcd(s.l1, s.l2) != 1)
            throw Error(Errc::ScriptError, "step " + std::to_string(i) + " has gcd(l1, l2) > 1");
        auto r = core::gcd_op(pp, s.l1, s.l2, pool[s.ref1], pool[s.ref2]);
        pool.push_back(*r);
        out.push_back(*r);
    }
    return out;
}

core::Json to_json(const GcdScript& s)
{
    core::Json j = core::document("gcd_script");
    core::Json steps = core::Json::array();
    for (const auto& st : s.steps)
        steps.push_back({{"l1", st.l1}, {"l2", st.l2}, {"ref1", st.ref1}, {"ref2", st.ref2}, {"label", st.label}});
    j["steps"] = steps;
    j["pool"] = "0 = j0, then published j's in order, then step outputs";
    return j;
}

GcdScript script_from_json(const core::Json& j)
{
    core::expect_kind(j, "gcd_script");
    try {
        GcdScript s;
        for (const auto& st : j.at("steps"))
            s.steps.push_back({st.at("l1").get<unsigned>(), st.at("l2").get<unsigned>(),
                               st.at("ref1").get<std::size_t>(), st.at("ref2").get<std::size_t>(),
                               st.value("label", "")});
        return s;
    } catch (const core::Json::exception& e) {
        throw Error(Errc::ParseError, std::string("gcd_script: ") + e.what());
    }
}

namespace {

// A list of an encoding as pool references.
struct RefList {
    unsigned ell;
    std::vector<std::size_t> refs;
};

class ScriptBuilder {
public:
    explicit ScriptBuilder(std::size_t base) : next_(base) {}

    std::size_t step(unsigned l1, unsigned l2, std::size_t r1, std::size_t r2, const std::string& label)
    {
        script.steps.push_back({l1, l2, r1, r2, label});
        return next_++;
    }

    // The double loop of convert, on references.  Returns U and V.
    std::pair<std::vector<std::size_t>, std::vector<unsigned>> convert(const std::vector<RefList>& lists,
                                                                       const std::string& label)
    {
        std::vector<std::size_t> U;
        std::vector<unsigned> V;
        if (lists.empty())
            return {U, V};
        for (auto r : lists[0].refs) {
            U.push_back(r);
            V.push_back(lists[0].ell);
        }
        for (std::size_t i = 1; i < lists.size(); ++i) {
            const std::size_t utemp = U.size();
            std::vector<std::size_t> prev(utemp + 1), row(utemp + 1);
            for (std::size_t k = 0; k < lists[i].refs.size(); ++k) {
                row[0] = lists[i].refs[k];
                for (std::size_t h = 1; h <= utemp; ++h)
                    row[h] = step(lists[i].ell, V[h - 1], row[h - 1], k == 0 ? U[h - 1] : prev[h], label);
                U.push_back(row[utemp]);
                V.push_back(lists[i].ell);
                std::swap(prev, row);
            }
        }
        return {U, V};
    }

    GcdScript script;

private:
    std::size_t next_;
};

bool share_prime(const ComposableEncoding& x, const ComposableEncoding& y)
{
    for (unsigned a : x.L)
        if (std::find(y.L.begin(), y.L.end(), a) != y.L.end())
            return true;
    return false;
}

}  // namespace

ParallelogramResult parallelogram(const PublicParams& pp, const ComposableEncoding& a, const ComposableEncoding& b,
                                  const ComposableEncoding& c)
{
    if (share_prime(a, b) || share_prime(b, c) || share_prime(a, c))
        throw Error(Errc::NotApplicable, "two of the three encodings share a degree");
    std::vector<ComposableEncoding> published{a, b, c};
    std::vector<std::vector<RefList>> refs;
    std::size_t next = 1;
    for (const auto& e : published) {
        std::vector<RefList> lists;
        for (std::size_t i = 0; i < e.L.size(); ++i) {
            RefList rl{e.L[i], {}};
            for (std::size_t k = 0; k < e.T[i].size(); ++k)
                rl.refs.push_back(next++);
            lists.push_back(std::move(rl));
        }
        refs.push_back(std::move(lists));
    }
    ScriptBuilder sb(next);

    // phase 1: the two far edges meeting at j_C
    std::vector<RefList> ab = refs[0];
    ab.insert(ab.end(), refs[1].begin(), refs[1].end());
    auto [u_ab, v_ab] = sb.convert(ab, "edge from j_A towards j_C");
    std::size_t a_len = published_count({a});
    std::vector<std::size_t> R{a_len == 0 ? 0 : u_ab[a_len - 1]};
    std::vector<unsigned> beta;
    for (std::size_t k = a_len; k < u_ab.size(); ++k) {
        R.push_back(u_ab[k]);
        beta.push_back(v_ab[k]);
    }
    auto [u_c, gamma] = sb.convert(refs[2], "edge from j0 towards j_C");
    std::vector<std::size_t> Q{0};
    Q.insert(Q.end(), u_c.begin(), u_c.end());

    // phase 2: W(k, s) = B_k C_s * (b^-1 j0), W(m, s) = Q_s, W(k, n) = R_k
    const std::size_t m = beta.size(), n = gamma.size();
    std::vector<std::size_t> upper(Q);  // row k
    for (std::size_t k = m; k >= 1; --k) {
        std::vector<std::size_t> lower(n + 1);  // row k - 1
        lower[n] = R[k - 1];
        for (std::size_t s = n; s >= 1; --s)
            lower[s - 1] = sb.step(gamma[s - 1], beta[k - 1], upper[s - 1], lower[s], "fill");
        upper = std::move(lower);
    }
    ParallelogramResult out;
    out.result_ref = upper[0];
    out.script = sb.script;
    auto values = run_gcd_script(pp, published, out.script);
    if (out.result_ref == 0)
        out.j = arith::mod(pp.j0, pp.N);
    else if (out.result_ref < next) {
        std::vector<Integer> pool;
        for (const auto& e : published)
            for (const auto& list : e.T)
                pool.insert(pool.end(), list.begin(), list.end());
        out.j = pool[out.result_ref - 1];
    } else
        out.j = values[out.result_ref - next];
    return out;
}

namespace {

constexpr unsigned aux_max_v = 8;

// H_D mod p from the ell set, with the extra-unit orders handled directly.
std::optional<std::vector<arith::Elem>> hilbert_roots_mod(const classgroup::Discriminant& d, std::uint64_t p,
                                                          std::size_t h)
{
    std::vector<arith::Elem> roots;
    if (d.value() == -3)
        roots = {0};
    else if (d.value() == -4)
        roots = {1728 % p};
    else
        roots = volcano::ell_set(d, p);
    if (roots.size() != h)
        return std::nullopt;
    return roots;
}

std::vector<Integer> symmetric(const std::vector<Integer>& c, const Integer& m)
{
    std::vector<Integer> out;
    for (const auto& x : c)
        out.push_back(x > m / 2 ? x - m : x);
    return out;
}

}  // namespace

std::vector<Integer> hilbert_over_Z(const Integer& d)
{
    if (d >= 0 || abs(d) > 10000)
        throw Error(Errc::TooLarge, "hilbert_over_Z handles -10^4 <= D < 0");
    auto disc = classgroup::Discriminant::from_value(d);
    const std::size_t h = arith::to_u64(classgroup::class_number(d));
    // auxiliary primes 4p = t^2 - v^2 D, ascending
    std::set<std::uint64_t> primes;
    const Integer limit = Integer(1u << 16);
    for (unsigned v = 1; v <= aux_max_v; ++v) {
        const Integer vd = Integer(v) * Integer(v) * d;
        for (Integer t = 0;; ++t) {
            Integer num = t * t - vd;
            if (num >= 4 * limit)
                break;
            if (num % 4 != 0)
                continue;
            Integer p = num / 4;
            if (p > 3 && d % p != 0 && arith::is_prime(p))
                primes.insert(arith::to_u64(p));
        }
    }
    Integer M = 1;
    std::vector<Integer> res(h + 1, 0);
    std::vector<Integer> last;
    int stable = 0;
    bool validate = false;
    for (std::uint64_t p : primes) {
        auto roots = hilbert_roots_mod(disc, p, h);
        if (!roots)
            continue;
        Zmod F(p);
        Poly hp = Poly::from_roots(F, *roots);
        if (validate) {
            bool ok = true;
            for (std::size_t i = 0; i <= h; ++i)
                ok = ok && F.reduce(arith::mod(last[i], Integer(p))) == hp.coeff(i);
            if (ok)
                return last;
            stable = 0;
            validate = false;
        }
        for (std::size_t i = 0; i <= h; ++i)
            res[i] = arith::crt({M, Integer(p)}, {res[i], arith::from_u64(hp.coeff(i))});
        M *= p;
        auto cur = symmetric(res, M);
        stable = cur == last ? stable + 1 : 0;
        last = cur;
        if (stable >= 2)
            validate = true;
    }
    throw Error(Errc::TooLarge, "ran out of auxiliary primes below 2^16");
}

Poly hilbert_mod(const std::vector<Integer>& h, const Zmod& ring)
{
    std::vector<arith::Elem> c;
    for (const auto& x : h)
        c.push_back(ring.reduce(arith::mod(x, ring.modulus_integer())));
    return Poly(ring, c);
}

HilbertAttackResult hilbert_attack(const PublicParams& pp, const Integer& d, unsigned ell, const Integer& j0,
                                   const Integer& j1)
{
    Zmod ring(pp.N);
    const auto& phi = modpoly::reduced(ell, ring);
    if (phi.eval(ring.reduce(j0), ring.reduce(j1)) != 0)
        throw Error(Errc::NotIsogenous, "j0 and j1 are not l-isogenous mod N");
    Poly f = phi.eval_partial(ring.reduce(j0));
    Poly g = modpoly::reduced(ell * ell, ring).eval_partial(ring.reduce(j1));
    Poly fg = core::stable_gcd(f, g);
    Poly gamma = core::stable_gcd(fg, hilbert_mod(hilbert_over_Z(d), ring));
    if (gamma.degree() != 1)
        throw Error(Errc::AttackFailed,
                    "gcd with H_D has degree " + std::to_string(gamma.degree()) + ", not 1");
    return {ring.lift(ring.neg(gamma.coeff(0))), "uses H_D(x): outside the gcd attack model"};
}

Integer factor_from_neighbors(const Integer& n, const std::vector<Integer>& js)
{
    for (std::size_t i = 0; i < js.size(); ++i)
        for (std::size_t k = i + 1; k < js.size(); ++k) {
            Integer g = arith::gcd(arith::mod(js[i] - js[k], n), n);
            if (g > 1 && g < n)
                return g;
        }
    throw Error(Errc::NoCollision, "no pair of neighbors splits N");
}

std::vector<Integer> discriminant_search(const Integer& n, const std::vector<KroneckerConstraint>& constraints,
                                         std::optional<Integer> bound)
{
    Integer b = bound ? *bound : arith::isqrt(n - 1) + 1;  // |D| < b
    std::vector<Integer> out;
    for (Integer a = 3; a < b; ++a) {
        Integer d = -a;
        Integer r = arith::mod(d, 4);
        if (r != 0 && r != 1)
            continue;
        bool ok = true;
        for (const auto& c : constraints)
            ok = ok && arith::kronecker(d, c.prime) == c.value;
        if (ok)
            out.push_back(d);
    }
    return out;
}

}  // namespace tgii::attacks
