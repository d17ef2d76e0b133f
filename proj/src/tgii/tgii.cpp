#include "tgii/tgii/tgii.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "tgii/arith/poly.hpp"
#include "tgii/error.hpp"
#include "tgii/modpoly/modpoly.hpp"
#include "tgii/volcano/volcano.hpp"

namespace tgii::core {

using arith::Poly;

namespace {

bool small_prime(unsigned n) { return n >= 2 && arith::is_prime(Integer(n)); }

}  // namespace

IdealClass prime_norm_form(const Integer& d, unsigned ell)
{
    Integer l(ell);
    Integer four_l = 4 * l;
    for (Integer b = 0; b <= l; ++b) {
        Integer r = arith::mod(b * b - d, four_l);
        if (r == 0)
            return {l, b, (b * b - d) / four_l};
    }
    throw Error(Errc::PrimeInert, "no form of norm " + std::to_string(ell));
}

bool PrimeRegistry::available(unsigned ell) const
{
    if (used.count(ell) || excluded.count(ell))
        return false;
    for (const auto& [name, primes] : pools)
        if (std::find(primes.begin(), primes.end(), ell) != primes.end())
            return false;
    return true;
}

FieldAction::FieldAction(std::uint64_t p, const Discriminant& d, Elem base_j)
    : p_(p), d_(d.value()), base_(base_j)
{
    Zmod F(p);
    auto E = curves::curve_from_j(base_j, F);
    t_ = curves::trace(E);
    Integer delta = t_ * t_ - 4 * arith::from_u64(p);
    if (delta % d_ != 0 || !arith::is_square(delta / d_))
        throw Error(Errc::ConfigRejected, "t^2 - 4p is not a square multiple of D at p = " + std::to_string(p));
    v_ = arith::isqrt(delta / d_);
    if (!(volcano::end_disc(base_j, p) == d))
        throw Error(Errc::ConfigRejected, "base curve does not have CM by O_D at p = " + std::to_string(p));

    const std::size_t h = arith::to_u64(classgroup::class_number(d_));
    const IdealClass one = classgroup::identity(d_);
    to_j_[one] = base_j;
    std::vector<std::pair<IdealClass, IdealClass>> gens;  // (form of prime norm, class)
    for (unsigned ell = 3; to_j_.size() < h; ell += 2) {
        if (ell > 1000)
            throw Error(Errc::OutOfPrimes, "class group not generated by small split primes");
        if (!small_prime(ell) || ell == p || arith::kronecker(d_, Integer(ell)) != 1 || v_ % ell == 0)
            continue;
        IdealClass form = prime_norm_form(d_, ell);
        IdealClass cls = classgroup::reduce(form);
        if (to_j_.count(cls))
            continue;
        gens.emplace_back(form, cls);
        gens_.push_back(ell);
        std::deque<IdealClass> queue;
        for (const auto& [c, j] : to_j_)
            queue.push_back(c);
        while (!queue.empty()) {
            IdealClass c = queue.front();
            queue.pop_front();
            for (const auto& [gf, gc] : gens) {
                IdealClass next = classgroup::compose(c, gc);
                if (to_j_.count(next))
                    continue;
                to_j_[next] = step(to_j_.at(c), gf);
                queue.push_back(next);
            }
        }
    }
    for (const auto& [c, j] : to_j_)
        if (!from_j_.emplace(j, c).second)
            throw Error(Errc::Degenerate, "two classes reach the same j");
    // eigenvalue of the kernel realising each generator on the base curve
    for (unsigned ell : gens_) {
        IdealClass form = prime_norm_form(d_, ell);
        Integer mu = arith::mod((t_ + v_ * form.b) / 2, Integer(ell));
        orient_[ell] = static_cast<unsigned>(arith::to_u64(mu));
    }
}

const IdealClass& FieldAction::class_of(Elem j) const
{
    auto it = from_j_.find(j);
    if (it == from_j_.end())
        throw Error(Errc::NotOnSurface, "j = " + std::to_string(j) + " is not on the surface mod " + std::to_string(p_));
    return it->second;
}

Elem FieldAction::j_of(const IdealClass& c) const
{
    auto it = to_j_.find(classgroup::reduce(c));
    if (it == to_j_.end())
        throw Error(Errc::DiscriminantMismatch, "class " + c.str() + " not in CL(D)");
    return it->second;
}

Elem FieldAction::act(Elem j, const IdealClass& c) const
{
    return j_of(classgroup::compose(class_of(j), classgroup::reduce(c)));
}

Elem FieldAction::step(Elem j, const IdealClass& c) const
{
    if (c.discriminant() != d_)
        throw Error(Errc::DiscriminantMismatch, "form " + c.str());
    if (!c.a.fits_uint_p() || !small_prime(static_cast<unsigned>(c.a.get_ui())))
        throw Error(Errc::InvalidArgument, "step needs a form of prime norm");
    const unsigned ell = static_cast<unsigned>(c.a.get_ui());
    Zmod F(p_);
    auto E = curves::curve_from_j(j, F);
    Integer tj = curves::trace(E);
    int eps;
    if (tj == t_)
        eps = 1;
    else if (tj == -t_)
        eps = -1;
    else
        throw Error(Errc::NotIsogenous, "j is outside the isogeny class of the base curve");
    Integer mu = arith::mod(eps * ((t_ + v_ * c.b) / 2), Integer(ell));
    for (const auto& k : curves::kernel_polynomials(E, ell)) {
        if (curves::frobenius_eigenvalue(E, ell, k, tj) == mu)
            return curves::j_invariant(curves::velu(E, k).target);
    }
    throw Error(Errc::InconsistentKernel, "no kernel with eigenvalue " + arith::to_string(mu) + " for l = " +
                                              std::to_string(ell));
}

Trapdoor::Trapdoor(const Integer& p, const Integer& q, const Discriminant& d, Elem jp, Elem jq)
    : p_(p), q_(q), d_(d), group_(d.value()), fp_(arith::to_u64(p), d, jp), fq_(arith::to_u64(q), d, jq)
{
    if (p == q)
        throw Error(Errc::ConfigRejected, "p and q must differ");
}

PublicParams Trapdoor::public_params() const
{
    Integer j0 = arith::crt({p_, q_}, {arith::from_u64(fp_.base_j()), arith::from_u64(fq_.base_j())});
    return {N(), j0};
}

Integer Trapdoor::act(const Integer& j, const IdealClass& c) const
{
    if (c.discriminant() != d_.value())
        throw Error(Errc::DiscriminantMismatch, "class " + c.str());
    Elem rp = fp_.act(arith::to_u64(arith::mod(j, p_)), c);
    Elem rq = fq_.act(arith::to_u64(arith::mod(j, q_)), c);
    return arith::crt({p_, q_}, {arith::from_u64(rp), arith::from_u64(rq)});
}

bool Trapdoor::on_surface(const Integer& j) const
{
    return fp_.on_surface(arith::to_u64(arith::mod(j, p_))) && fq_.on_surface(arith::to_u64(arith::mod(j, q_)));
}

IdealClass Trapdoor::class_of(const Integer& j) const
{
    auto j0 = public_params().j0;
    const auto& cp = fp_.class_of(arith::to_u64(arith::mod(j, p_)));
    const auto& cq = fq_.class_of(arith::to_u64(arith::mod(j, q_)));
    auto bp = fp_.class_of(arith::to_u64(arith::mod(j0, p_)));
    auto bq = fq_.class_of(arith::to_u64(arith::mod(j0, q_)));
    auto xp = classgroup::compose(cp, classgroup::inverse(bp));
    auto xq = classgroup::compose(cq, classgroup::inverse(bq));
    if (!(xp == xq))
        throw Error(Errc::NotOnSurface, "j mixes two classes across the factors");
    return xp;
}

bool Trapdoor::usable_degree(unsigned ell) const
{
    if (ell < 3 || !small_prime(ell))
        return false;
    Integer l(ell);
    if (l == p_ || l == q_ || arith::kronecker(d_.value(), l) != 1)
        return false;
    if (fp_.v() % l == 0 || fq_.v() % l == 0)
        return false;
    if (!modpoly::has_table(ell, N()))
        return false;
    return !(degree_class(ell) == classgroup::identity(d_.value()));
}

IdealClass Trapdoor::degree_class(unsigned ell) const
{
    return classgroup::reduce(prime_norm_form(d_.value(), ell));
}

namespace {

Integer odd_part(Integer n)
{
    n = abs(n);
    if (n == 0)
        return n;
    while (mpz_even_p(n.get_mpz_t()))
        n /= 2;
    return n;
}

bool square_free(const Integer& n)
{
    for (const auto& [f, e] : arith::factor(abs(n)))
        if (e > 1)
            return false;
    return true;
}

void check_config(const GenConfig& c, Integer& h0)
{
    if (c.d0 == -3 || c.d0 == -4)
        throw Error(Errc::ConfigRejected, "D0 in {-3, -4}: the order has extra units (j = 0 or 1728)");
    if (c.d0 >= 0 || arith::mod(c.d0, 4) != 1 || !square_free(c.d0))
        throw Error(Errc::ConfigRejected, "D0 must be a negative square-free integer congruent to 1 mod 4");
    h0 = classgroup::class_number(c.d0);
    if (!arith::is_prime(h0))
        throw Error(Errc::ConfigRejected, "h(D0) = " + arith::to_string(h0) + " is not prime");
    for (const auto& f : c.conductor) {
        if (!arith::is_prime(f))
            throw Error(Errc::ConfigRejected, "conductor factor " + arith::to_string(f) + " is not prime");
        Integer m = odd_part(f - arith::kronecker(c.d0, f));
        if (!square_free(m))
            throw Error(Errc::ConfigRejected,
                        "odd part of f - (D0|f) is not square-free for f = " + arith::to_string(f));
        if (m % h0 == 0)
            throw Error(Errc::ConfigRejected,
                        "odd part of f - (D0|f) is divisible by h(D0) for f = " + arith::to_string(f));
    }
}

// Smallest |t| with (4p - t^2) / |D| a nonzero square, or nullopt.
std::optional<Integer> trace_for(const Integer& p, const Integer& d)
{
    for (Integer t = 1; t * t < 4 * p; ++t) {
        Integer r = 4 * p - t * t;
        if (r % d == 0 && arith::is_square(r / (-d)))
            return t;
    }
    return std::nullopt;
}

std::vector<std::string> smoothness_warnings(const Integer& p, const Integer& t, std::uint64_t bound)
{
    std::vector<std::string> out;
    for (int s : {1, -1}) {
        Integer n = p + 1 - s * t;
        Integer largest = 1;
        for (const auto& [f, e] : arith::factor(n))
            largest = std::max(largest, f);
        if (largest <= arith::from_u64(bound))
            out.push_back((s == 1 ? "#E = " : "#twist = ") + arith::to_string(n) + " over F_" +
                          arith::to_string(p) + " is " + std::to_string(bound) + "-smooth");
    }
    return out;
}

}  // namespace

Generated gen(const GenConfig& config)
{
    Integer h0;
    check_config(config, h0);
    Discriminant d(config.d0, config.conductor);
    const Integer D = d.value();

    std::vector<Integer> primes;
    if (config.p && config.q) {
        primes = {*config.p, *config.q};
        for (const auto& p : primes)
            if (!arith::is_prime(p) || p <= 3 || !trace_for(p, D))
                throw Error(Errc::ConfigRejected, "pinned p = " + arith::to_string(p) +
                                                      " has no ordinary curve with CM by O_D");
    } else {
        // t^2 - 4p = D, so p = (t^2 - D) / 4
        std::vector<Integer> cands;
        for (Integer t = 1; (t * t - D) / 4 <= arith::from_u64(config.p_bound); ++t) {
            Integer num = t * t - D;
            if (num % 4 != 0)
                continue;
            Integer p = num / 4;
            if (p > 3 && arith::is_prime(p) && D % p != 0 && p < Integer(1u << 16))
                cands.push_back(p);
        }
        std::mt19937_64 rng(config.seed);
        std::shuffle(cands.begin(), cands.end(), rng);
        for (const auto& p : cands)
            if (std::find(primes.begin(), primes.end(), p) == primes.end() && primes.size() < 2)
                primes.push_back(p);
        if (primes.size() < 2)
            throw Error(Errc::ConfigRejected, "fewer than two primes with CM by O_D below the bound");
        std::sort(primes.begin(), primes.end());
    }
    std::vector<Elem> js;
    for (const auto& p : primes) {
        auto es = volcano::ell_set(d, arith::to_u64(p));
        if (es.empty())
            throw Error(Errc::ConfigRejected, "empty ell set at p = " + arith::to_string(p));
        js.push_back(es.front());
    }
    Trapdoor td(primes[0], primes[1], d, js[0], js[1]);
    for (unsigned ell : config.exclude)
        td.registry.excluded.insert(ell);
    td.warnings.push_back("demo-only parameters: p, q are far below cryptographic size and not safe primes");
    for (const auto& p : primes) {
        Integer t = abs((p == primes[0] ? td.field_p() : td.field_q()).trace());
        for (auto& w : smoothness_warnings(p, t, config.smooth_bound))
            td.warnings.push_back(std::move(w));
    }
    auto pp = td.public_params();
    Zmod ring(pp.N);
    Elem j0 = ring.reduce(pp.j0);
    if (j0 == 0 || j0 == ring.reduce(Integer(1728)))
        throw Error(Errc::ConfigRejected, "j0 in {0, 1728}");
    if (arith::gcd(pp.j0, pp.N) != 1)
        td.warnings.push_back("gcd(j0, N) > 1");
    return {pp, std::move(td)};
}

GenConfig toy_config()
{
    GenConfig c;
    c.d0 = -251;
    c.p = Integer(83);
    c.q = Integer(173);
    return c;
}

GenConfig app_config()
{
    GenConfig c;
    c.d0 = -12923;
    c.p = Integer(3413);
    c.q = Integer(4421);
    return c;
}

Integer ComposableEncoding::degree() const
{
    Integer d = 1;
    for (std::size_t i = 0; i < L.size(); ++i)
        for (std::size_t k = 0; k < T.at(i).size(); ++k)
            d *= L[i];
    return d;
}

IdealClass registry_form(const Trapdoor& td, const PrimeRegistry& registry, unsigned ell)
{
    IdealClass f = prime_norm_form(td.discriminant().value(), ell);
    auto it = registry.orientation.find(ell);
    if (it != registry.orientation.end() && it->second < 0)
        f.b = -f.b;
    return f;
}

unsigned fresh_prime(const Trapdoor& td, PrimeRegistry& registry)
{
    std::set<IdealClass> taken;
    for (const auto& [ell, sign] : registry.orientation)
        taken.insert(classgroup::reduce(registry_form(td, registry, ell)));
    for (unsigned ell = 3; ell < 2000; ell += 2) {
        if (!registry.available(ell) || !td.usable_degree(ell))
            continue;
        IdealClass c = td.degree_class(ell);
        int sign = 0;
        if (!taken.count(c))
            sign = 1;
        else if (!taken.count(classgroup::inverse(c)))
            sign = -1;
        else
            continue;
        registry.orientation[ell] = sign;
        registry.used.insert(ell);
        return ell;
    }
    throw Error(Errc::OutOfPrimes, "no fresh encoding degree left");
}

void reserve_pool(const Trapdoor& td, PrimeRegistry& registry, const std::string& name, std::size_t count)
{
    for (std::size_t i = 0; i < count; ++i) {
        unsigned ell = fresh_prime(td, registry);
        registry.pools[name].push_back(ell);
    }
}

ComposableEncoding trap_sam(const Trapdoor& td, const IdealClass& x, const GenerationSet& s,
                            PrimeRegistry& registry, std::mt19937_64* rng)
{
    const Integer D = td.discriminant().value();
    if (x.discriminant() != D)
        throw Error(Errc::DiscriminantMismatch, "class " + x.str());
    IdealClass xr = classgroup::reduce(x);
    if (xr == classgroup::identity(D))
        return {};
    if (s.empty())
        throw Error(Errc::NotInSpan, "empty generation set");
    GenerationSet classes;
    std::vector<unsigned> primes;
    for (const auto& f : s) {
        if (f.discriminant() != D)
            throw Error(Errc::DiscriminantMismatch, "generator " + f.str());
        if (!f.a.fits_uint_p() || !small_prime(static_cast<unsigned>(f.a.get_ui())))
            throw Error(Errc::InvalidArgument, "generator " + f.str() + " does not have prime norm");
        unsigned ell = static_cast<unsigned>(f.a.get_ui());
        if (std::find(primes.begin(), primes.end(), ell) != primes.end())
            throw Error(Errc::InvalidArgument, "generation set repeats the prime " + std::to_string(ell));
        primes.push_back(ell);
        classes.push_back(classgroup::reduce(f));
        if (!registry.orientation.count(ell))
            registry.orientation[ell] = classes.back() == td.degree_class(ell) ? 1 : -1;
    }
    auto lat = classgroup::relation_lattice(classes);
    auto e = rng ? classgroup::sample_short_exponents(xr, lat, classgroup::default_sigma(lat), *rng, 1)
                 : classgroup::short_exponents(xr, lat, 1);
    ComposableEncoding enc;
    const Integer j0 = td.public_params().j0;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        enc.L.push_back(primes[i]);
        std::vector<Integer> list;
        Integer j = j0;
        for (Integer k = 0; k < e[i]; ++k) {
            j = td.act(j, classes[i]);
            list.push_back(j);
        }
        enc.T.push_back(std::move(list));
        registry.used.insert(primes[i]);
    }
    return enc;
}

ComposableEncoding trap_sam(const Trapdoor& td, const IdealClass& x, PrimeRegistry& registry, std::size_t w,
                            std::mt19937_64* rng)
{
    const Integer D = td.discriminant().value();
    if (x.discriminant() != D)
        throw Error(Errc::DiscriminantMismatch, "class " + x.str());
    if (classgroup::reduce(x) == classgroup::identity(D))
        return {};
    GenerationSet s, classes;
    auto add = [&] {
        unsigned ell = fresh_prime(td, registry);
        s.push_back(registry_form(td, registry, ell));
        classes.push_back(classgroup::reduce(s.back()));
    };
    for (std::size_t i = 0; i < std::max<std::size_t>(w, 1); ++i)
        add();
    while (!classgroup::SpanIndex(classes).log(classgroup::reduce(x)))
        add();
    return trap_sam(td, x, s, registry, rng);
}

RandomSample random_sam(const Trapdoor& td, const GenerationSet& s, PrimeRegistry& registry, std::mt19937_64& rng)
{
    IdealClass x = td.group().random_odd(rng);
    return {x, trap_sam(td, x, s, registry, &rng)};
}

bool well_formed(const PublicParams& pp, const ComposableEncoding& e)
{
    if (e.L.size() != e.T.size())
        return false;
    std::set<unsigned> seen;
    Zmod ring(pp.N);
    for (std::size_t i = 0; i < e.L.size(); ++i) {
        if (!seen.insert(e.L[i]).second || e.T[i].empty() || !modpoly::has_table(e.L[i], pp.N))
            return false;
        const auto& phi = modpoly::reduced(e.L[i], ring);
        Elem prev = ring.reduce(pp.j0);
        for (const auto& j : e.T[i]) {
            Elem cur = ring.reduce(j);
            if (phi.eval(prev, cur) != 0)
                return false;
            prev = cur;
        }
    }
    return true;
}

std::optional<ComposableEncoding> comp(const PublicParams&, const ComposableEncoding& ex,
                                       const ComposableEncoding& ey)
{
    for (unsigned a : ex.L)
        if (std::find(ey.L.begin(), ey.L.end(), a) != ey.L.end())
            return std::nullopt;
    ComposableEncoding out = ex;
    out.L.insert(out.L.end(), ey.L.begin(), ey.L.end());
    out.T.insert(out.T.end(), ey.T.begin(), ey.T.end());
    return out;
}

namespace {

// Euclid over Z/NZ stalls when a remainder's leading coefficient vanishes
// modulo one prime only, even though the gcd has the same degree mod p and
// mod q.  gcd(f, h g mod f) is a multiple of gcd(f, g) for any h, and a
// random h changes the remainder sequence.
constexpr unsigned gcd_retries = 64;
constexpr std::uint64_t gcd_seed = 0x5eed;

}  // namespace

Poly stable_gcd(const Poly& f, const Poly& g)
{
    const Zmod& ring = f.ring();
    try {
        return arith::gcd(f, g);
    } catch (const FactorFoundError&) {
        if (ring.modulus() < 4 * gcd_retries || f.degree() < 1)
            throw;
    }
    std::mt19937_64 rng(gcd_seed);
    for (unsigned t = 0; t < gcd_retries; ++t) {
        std::vector<Elem> c(static_cast<std::size_t>(f.degree()));
        for (auto& x : c)
            x = rng() % ring.modulus();
        try {
            Poly r = arith::gcd(f, arith::rem(g * Poly(ring, c), f));
            // gcd(f, g) divides r; r dividing g makes them equal
            if (arith::rem(g, r).degree() == Poly::zero_degree)
                return r;
        } catch (const FactorFoundError&) {
        }
    }
    return arith::gcd(f, g);
}

namespace {

std::optional<Elem> gcd_op_elem(const Zmod& ring, unsigned l1, unsigned l2, Elem j1, Elem j2)
{
    if (std::gcd(l1, l2) > 1)
        return std::nullopt;
    Poly f = modpoly::reduced(l2, ring).eval_partial(j1);
    Poly g = modpoly::reduced(l1, ring).eval_partial(j2);
    Poly h = stable_gcd(f, g);
    if (h.degree() != 1)
        throw Error(Errc::NotLinear, "gcd has degree " + std::to_string(h.degree()) + " for (" +
                                         std::to_string(l1) + ", " + std::to_string(l2) + ")");
    return ring.neg(h.coeff(0));
}

// Every entry of U in order; the last one is the canonical encoding.
std::vector<Elem> convert_trace(const PublicParams& pp, const ComposableEncoding& e)
{
    if (e.L.size() != e.T.size())
        throw Error(Errc::InvalidArgument, "encoding has " + std::to_string(e.L.size()) + " degrees and " +
                                               std::to_string(e.T.size()) + " lists");
    Zmod ring(pp.N);
    std::vector<Elem> U;
    std::vector<unsigned> V;
    if (e.L.empty())
        return U;
    for (const auto& j : e.T[0]) {
        U.push_back(ring.reduce(j));
        V.push_back(e.L[0]);
    }
    for (std::size_t i = 1; i < e.L.size(); ++i) {
        const std::size_t utemp = U.size();
        std::vector<Elem> prev(utemp + 1), row(utemp + 1);
        for (std::size_t k = 0; k < e.T[i].size(); ++k) {
            row[0] = ring.reduce(e.T[i][k]);
            for (std::size_t h = 1; h <= utemp; ++h) {
                Elem j2 = k == 0 ? U[h - 1] : prev[h];
                std::optional<Elem> r;
                try {
                    r = gcd_op_elem(ring, e.L[i], V[h - 1], row[h - 1], j2);
                } catch (const FactorFoundError&) {
                    throw;
                } catch (const Error& err) {
                    std::ostringstream msg;
                    msg << "convert: list " << i + 1 << ", entry " << k + 1 << ", step " << h << ": "
                        << err.what();
                    throw Error(err.code(), msg.str());
                }
                if (!r) {
                    std::ostringstream msg;
                    msg << "⊥: shared degree " << e.L[i] << " (list " << i + 1 << ", entry " << k + 1
                        << ", step " << h << ")";
                    throw Error(Errc::Failure, msg.str());
                }
                row[h] = *r;
            }
            U.push_back(row[utemp]);
            V.push_back(e.L[i]);
            std::swap(prev, row);
        }
    }
    return U;
}

}  // namespace

std::optional<Integer> gcd_op(const PublicParams& pp, unsigned l1, unsigned l2, const Integer& j1, const Integer& j2)
{
    Zmod ring(pp.N);
    auto r = gcd_op_elem(ring, l1, l2, ring.reduce(j1), ring.reduce(j2));
    if (!r)
        return std::nullopt;
    return arith::from_u64(*r);
}

Integer convert(const PublicParams& pp, const ComposableEncoding& e)
{
    auto U = convert_trace(pp, e);
    if (U.empty())
        return arith::mod(pp.j0, pp.N);
    return arith::from_u64(U.back());
}

Ladder sample_ladder(const Trapdoor& td, unsigned ell, std::size_t k, const IdealClass& x)
{
    if (x.discriminant() != td.discriminant().value())
        throw Error(Errc::DiscriminantMismatch, "class " + x.str());
    IdealClass c = classgroup::reduce(x);
    if (!(x.a == Integer(ell)) && !(c == td.degree_class(ell)) &&
        !(c == classgroup::inverse(td.degree_class(ell))))
        throw Error(Errc::InvalidArgument, "ladder class must have norm " + std::to_string(ell));
    Ladder out{ell, {}};
    Integer j = td.public_params().j0;
    for (std::size_t i = 0; i < k; ++i) {
        j = td.act(j, c);
        out.js.push_back(j);
    }
    return out;
}

std::optional<ComposableEncoding> comp_with_ladders(const PublicParams& pp, const std::vector<Ladder>& ladders,
                                                    const ComposableEncoding& ex, const ComposableEncoding& ey)
{
    ComposableEncoding out = ex;
    for (std::size_t b = 0; b < ey.L.size(); ++b) {
        auto it = std::find(ex.L.begin(), ex.L.end(), ey.L[b]);
        if (it == ex.L.end()) {
            out.L.push_back(ey.L[b]);
            out.T.push_back(ey.T[b]);
            continue;
        }
        const std::size_t a = static_cast<std::size_t>(it - ex.L.begin());
        const unsigned ell = ey.L[b];
        const Ladder* lad = nullptr;
        for (const auto& l : ladders)
            if (l.ell == ell)
                lad = &l;
        const std::size_t need = ex.T[a].size() + ey.T[b].size();
        if (!lad || lad->js.size() < need)
            return std::nullopt;
        Zmod ring(pp.N);
        auto prefix_of = [&](const std::vector<Integer>& list) {
            for (std::size_t k = 0; k < list.size(); ++k)
                if (ring.reduce(list[k]) != ring.reduce(lad->js[k]))
                    return false;
            return true;
        };
        if (!prefix_of(ex.T[a]) || !prefix_of(ey.T[b]))
            return std::nullopt;
        out.T[a].assign(lad->js.begin(), lad->js.begin() + static_cast<std::ptrdiff_t>(need));
    }
    return out;
}

PartialConversion partial_convert(const PublicParams& pp, const ComposableEncoding& ex, const ComposableEncoding& ey)
{
    PartialConversion out;
    out.jx = convert(pp, ex);
    out.path.push_back(out.jx);
    if (ey.empty())
        return out;
    auto both = comp(pp, ex, ey);
    if (!both)
        throw Error(Errc::Failure, "⊥: shared degree between the two encodings");
    auto U = convert_trace(pp, *both);
    std::size_t m = 0;
    for (const auto& list : ex.T)
        m += list.size();
    std::size_t idx = m;
    for (std::size_t i = 0; i < ey.L.size(); ++i) {
        for (std::size_t k = 0; k < ey.T[i].size(); ++k, ++idx) {
            Integer a = out.path.back();
            Integer b = arith::from_u64(U.at(idx));
            auto ek = curves::kernel_poly_mod_n(pp.N, ey.L[i], a, b);
            auto phi = curves::velu(ek.source, ek.kernel);
            if (curves::j_invariant(phi.target) != U[idx])
                throw Error(Errc::Degenerate, "isogeny codomain does not match the converted j");
            out.chain.push_back(std::move(phi));
            out.path.push_back(b);
        }
    }
    return out;
}

}  // namespace tgii::core
