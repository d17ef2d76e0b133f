#include "tgii/classgroup/classgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tgii/error.hpp"

namespace tgii::classgroup {

using arith::mod;

namespace {

Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

bool squarefree(const Integer& n)
{
    for (const auto& [p, e] : arith::factor(n))
        if (e > 1)
            return false;
    return true;
}

// (g, u, v) with u*a + v*b = g = gcd(a, b) >= 0.
void xgcd(const Integer& a, const Integer& b, Integer& g, Integer& u, Integer& v)
{
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

}  // namespace

bool is_fundamental(const Integer& d)
{
    if (d == 0 || d == 1)
        return false;
    Integer r = mod(d, 4);
    if (r == 1)
        return squarefree(d);
    if (r != 0)
        return false;
    Integer m = d / 4;
    Integer rm = mod(m, 4);
    return (rm == 2 || rm == 3) && squarefree(m);
}

Discriminant::Discriminant(Integer d0, std::vector<Integer> conductor_factors)
    : d0_(std::move(d0)), fs_(std::move(conductor_factors))
{
    if (sgn(d0_) >= 0 || !is_fundamental(d0_))
        throw Error(Errc::InvalidArgument, arith::to_string(d0_) + " is not a negative fundamental discriminant");
    for (const auto& f : fs_)
        if (!arith::is_prime(f))
            throw Error(Errc::InvalidArgument, "conductor factor " + arith::to_string(f) + " is not prime");
    std::sort(fs_.begin(), fs_.end());
    Integer f = conductor();
    d_ = f * f * d0_;
}

Discriminant Discriminant::from_value(const Integer& d)
{
    Integer r = mod(d, 4);
    if (sgn(d) >= 0 || (r != 0 && r != 1))
        throw Error(Errc::InvalidArgument, arith::to_string(d) + " is not a negative discriminant");
    Integer core = -1;
    Integer square = 1;
    for (const auto& [p, e] : arith::factor(d)) {
        for (unsigned i = 0; i + 1 < e; i += 2)
            square *= p;
        if (e % 2 == 1)
            core *= p;
    }
    Integer d0 = mod(core, 4) == 1 ? core : 4 * core;
    Integer f2 = d / d0;
    Integer f = arith::isqrt(f2);
    std::vector<Integer> fs;
    for (const auto& [p, e] : arith::factor(f))
        for (unsigned i = 0; i < e; ++i)
            fs.push_back(p);
    return Discriminant(d0, fs);
}

Integer Discriminant::conductor() const
{
    Integer f = 1;
    for (const auto& p : fs_)
        f *= p;
    return f;
}

int Discriminant::units() const
{
    if (d_ == -3)
        return 6;
    if (d_ == -4)
        return 4;
    return 2;
}

bool QuadForm::is_reduced() const
{
    if (b > a || b <= -a || a > c)
        return false;
    if (a == c && sgn(b) < 0)
        return false;
    return true;
}

std::string QuadForm::str() const
{
    return "(" + arith::to_string(a) + "," + arith::to_string(b) + "," + arith::to_string(c) + ")";
}

IdealClass reduce(const QuadForm& form)
{
    Integer a = form.a, b = form.b, c = form.c;
    Integer d = form.discriminant();
    if (sgn(d) >= 0 || sgn(a) <= 0)
        throw Error(Errc::InvalidForm, form.str() + " is not positive definite");
    if (arith::gcd(arith::gcd(a, b), c) != 1)
        throw Error(Errc::InvalidForm, form.str() + " is not primitive");
    auto normalize = [&] {
        Integer r = floor_div(a - b, 2 * a);
        c = a * r * r + b * r + c;
        b = b + 2 * a * r;
    };
    normalize();
    while (a > c) {
        std::swap(a, c);
        b = -b;
        normalize();
    }
    if (a == c && sgn(b) < 0)
        b = -b;
    return {a, b, c};
}

IdealClass identity(const Integer& d)
{
    Integer b = mod(d, 2);
    return {1, b, (b * b - d) / 4};
}

IdealClass compose(const IdealClass& x, const IdealClass& y)
{
    if (x.discriminant() != y.discriminant())
        throw Error(Errc::DiscriminantMismatch, "composing forms of different discriminants");
    const QuadForm* f1 = &x;
    const QuadForm* f2 = &y;
    if (f1->a > f2->a)
        std::swap(f1, f2);
    const Integer &a1 = f1->a, &b1 = f1->b;
    const Integer &a2 = f2->a, &b2 = f2->b, &c2 = f2->c;
    Integer s = (b1 + b2) / 2;
    Integer n = b2 - s;
    Integer y1, d;
    if (mpz_divisible_p(a2.get_mpz_t(), a1.get_mpz_t())) {
        y1 = 0;
        d = a1;
    } else {
        Integer u, v;
        xgcd(a2, a1, d, u, v);
        y1 = u;
    }
    Integer x2, y2, d1;
    if (mpz_divisible_p(s.get_mpz_t(), d.get_mpz_t())) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        xgcd(s, d, d1, x2, y2);
        y2 = -y2;
    }
    Integer v1 = a1 / d1, v2 = a2 / d1;
    Integer r = mod(y1 * y2 * n - x2 * c2, v1);
    Integer b3 = b2 + 2 * v2 * r;
    Integer a3 = v1 * v2;
    Integer c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
    return reduce({a3, b3, c3});
}

IdealClass inverse(const IdealClass& x) { return reduce({x.a, -x.b, x.c}); }

IdealClass square(const IdealClass& x) { return compose(x, x); }

IdealClass pow(const IdealClass& x, const Integer& e)
{
    IdealClass base = sgn(e) < 0 ? inverse(x) : x;
    Integer k = abs(e);
    IdealClass result = identity(x.discriminant());
    std::size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
    if (k == 0)
        return result;
    for (std::size_t i = bits; i-- > 0;) {
        result = square(result);
        if (mpz_tstbit(k.get_mpz_t(), i))
            result = compose(result, base);
    }
    return result;
}

std::vector<IdealClass> reduced_forms(const Integer& d)
{
    if (sgn(d) >= 0 || (mod(d, 4) != 0 && mod(d, 4) != 1))
        throw Error(Errc::InvalidArgument, arith::to_string(d) + " is not a negative discriminant");
    if (abs(d) > Integer(1000000000))
        throw Error(Errc::TooLarge, "class enumeration bound exceeded");
    const long long D = arith::to_i64(d);
    std::vector<IdealClass> out;
    for (long long a = 1; 3 * a * a <= -D; ++a) {
        for (long long b = -a + 1; b <= a; ++b) {
            if (((b - D) & 1) != 0)
                continue;
            long long num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            long long c = num / (4 * a);
            if (c < a || (c == a && b < 0))
                continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1)
                continue;
            out.push_back({Integer(static_cast<long>(a)), Integer(static_cast<long>(b)), Integer(static_cast<long>(c))});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Integer class_number(const Integer& d) { return Integer(static_cast<unsigned long>(reduced_forms(d).size())); }

Integer class_number_formula(const Discriminant& d)
{
    // h(D)/w(D) = h(D0)/w(D0) * f * prod_{p | f} (1 - (D0|p)/p)
    int w0 = d.fundamental() == -3 ? 6 : d.fundamental() == -4 ? 4 : 2;
    mpq_class ratio(class_number(d.fundamental()), w0);
    ratio *= d.conductor();
    std::vector<Integer> primes = d.conductor_factors();
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (const auto& p : primes)
        ratio *= mpq_class(p - arith::kronecker(d.fundamental(), p), p);
    ratio *= d.units();
    ratio.canonicalize();
    if (ratio.get_den() != 1)
        throw Error(Errc::Failure, "conductor formula did not give an integer");
    return ratio.get_num();
}

IdealClass prime_form(const Integer& d, const Integer& l)
{
    if (!arith::is_prime(l))
        throw Error(Errc::NotPrime, arith::to_string(l) + " is not prime");
    if (mpz_divisible_p(d.get_mpz_t(), l.get_mpz_t()))
        throw Error(Errc::PrimeRamified, arith::to_string(l) + " divides the discriminant");
    if (arith::kronecker(d, l) == -1)
        throw Error(Errc::PrimeInert, arith::to_string(l) + " is inert");
    Integer m = 4 * l;
    Integer target = mod(d, m);
    for (Integer b = 0; b < 2 * l; ++b)
        if (mod(b * b, m) == target)
            return reduce({l, b, (b * b - d) / m});
    throw Error(Errc::Failure, "no square root of the discriminant found");
}

Integer order_of(const IdealClass& x, const Integer& multiple)
{
    const IdealClass one = identity(x.discriminant());
    if (pow(x, multiple) != one)
        throw Error(Errc::InvalidArgument, "order_of: the given multiple does not annihilate the class");
    Integer n = multiple;
    for (const auto& [p, e] : arith::factor(multiple)) {
        for (unsigned i = 0; i < e; ++i) {
            if (pow(x, n / p) == one)
                n /= p;
            else
                break;
        }
    }
    return n;
}

Integer order_of(const IdealClass& x) { return order_of(x, class_number(x.discriminant())); }

namespace {

// Smallest k in [0, q) with g^k = t, where g has order q.
std::optional<Integer> bsgs(const IdealClass& g, const IdealClass& t, const Integer& q)
{
    Integer m = arith::isqrt(q) + 1;
    std::map<IdealClass, Integer> baby;
    IdealClass cur = identity(g.discriminant());
    for (Integer j = 0; j < m; ++j) {
        baby.emplace(cur, j);
        cur = compose(cur, g);
    }
    IdealClass giant = inverse(pow(g, m));
    IdealClass gamma = t;
    for (Integer i = 0; i < m; ++i) {
        auto it = baby.find(gamma);
        if (it != baby.end()) {
            Integer k = i * m + it->second;
            if (k < q)
                return k;
        }
        gamma = compose(gamma, giant);
    }
    return std::nullopt;
}

}  // namespace

std::optional<Integer> dlog_cyclic(const IdealClass& g, const IdealClass& target, const Integer& order)
{
    std::vector<Integer> moduli, residues;
    for (const auto& [q, e] : arith::factor(order)) {
        Integer qe = 1;
        for (unsigned i = 0; i < e; ++i)
            qe *= q;
        Integer cof = order / qe;
        IdealClass gq = pow(g, cof), tq = pow(target, cof);
        IdealClass gamma = pow(gq, qe / q);
        Integer x = 0, qk = 1;
        for (unsigned k = 0; k < e; ++k) {
            IdealClass hk = pow(compose(pow(gq, -x), tq), qe / (qk * q));
            auto dk = bsgs(gamma, hk, q);
            if (!dk)
                return std::nullopt;
            x += *dk * qk;
            qk *= q;
        }
        moduli.push_back(qe);
        residues.push_back(x);
    }
    Integer k = moduli.empty() ? Integer(0) : arith::crt(moduli, residues);
    if (pow(g, k) != target)
        return std::nullopt;
    return k;
}

SpanIndex::SpanIndex(GenerationSet s) : s_(std::move(s))
{
    if (s_.empty())
        throw Error(Errc::InvalidArgument, "empty generation set");
    const Integer d = s_.front().discriminant();
    const std::size_t w = s_.size();
    table_.emplace(identity(d), IntVector(w, 0));
    order_ = 1;
    for (std::size_t i = 0; i < w; ++i) {
        if (s_[i].discriminant() != d)
            throw Error(Errc::DiscriminantMismatch, "generation set mixes discriminants");
        IdealClass p = s_[i];
        Integer k = 1;
        while (table_.find(p) == table_.end()) {
            p = compose(p, s_[i]);
            ++k;
        }
        IntVector rel = table_.at(p);
        for (auto& v : rel)
            v = -v;
        rel[i] = k;
        rel_.push_back(rel);
        k_.push_back(k);
        order_ *= k;
        if (k > 1) {
            std::vector<std::pair<IdealClass, IntVector>> base(table_.begin(), table_.end());
            for (const auto& [cls, e] : base) {
                IdealClass cur = cls;
                for (Integer j = 1; j < k; ++j) {
                    cur = compose(cur, s_[i]);
                    IntVector ej = e;
                    ej[i] = j;
                    table_.emplace(cur, ej);
                }
            }
        }
    }
}

std::optional<IntVector> SpanIndex::log(const IdealClass& target) const
{
    auto it = table_.find(target);
    if (it == table_.end())
        return std::nullopt;
    return it->second;
}

IntMatrix SpanIndex::triangular_relations() const { return IntMatrix(rel_); }

IdealClass recompose(const GenerationSet& s, const IntVector& e)
{
    if (s.size() != e.size())
        throw Error(Errc::InvalidArgument, "exponent vector length mismatch");
    if (s.empty())
        throw Error(Errc::InvalidArgument, "empty generation set");
    IdealClass out = identity(s.front().discriminant());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (e[i] != 0)
            out = compose(out, pow(s[i], e[i]));
    return out;
}

IntVector discrete_log(const IdealClass& target, const GenerationSet& s)
{
    if (s.empty()) {
        if (target == identity(target.discriminant()))
            return {};
        throw Error(Errc::NotInSpan, "target is not the identity and the generation set is empty");
    }
    if (target.discriminant() != s.front().discriminant())
        throw Error(Errc::DiscriminantMismatch, "target and generation set differ in discriminant");
    const Integer h = class_number(target.discriminant());
    Integer ord = order_of(s.front(), h);
    if (auto k = dlog_cyclic(s.front(), target, ord)) {
        IntVector e(s.size(), 0);
        e[0] = *k;
        return e;
    }
    SpanIndex idx(s);
    if (auto e = idx.log(target))
        return *e;
    throw Error(Errc::NotInSpan, target.str() + " is not in the span of the generation set");
}

RelationLattice relation_lattice(const GenerationSet& s)
{
    SpanIndex idx(s);
    RelationLattice out;
    out.generators = s;
    out.basis = idx.triangular_relations();
    out.reduced_basis = arith::lll(out.basis);
    out.order = idx.order();
    return out;
}

IntVector positive_shift(const RelationLattice& lat, const Integer& floor_entry)
{
    const std::size_t n = lat.generators.size();
    const Integer one = 1;
    Integer lo = std::max(floor_entry, one);
    // Width K of the search box [lo, lo+K]^n, sized so a lattice point is very likely inside.
    Integer want = 20 * lat.order;
    unsigned long K = 1;
    auto box = [&](unsigned long k) {
        Integer c = 1;
        for (std::size_t i = 0; i < n; ++i)
            c *= static_cast<unsigned long>(k + 1);
        return c;
    };
    while (box(K) < want)
        ++K;
    std::optional<IntVector> best;
    Integer best_sum;
    if (box(K) <= Integer(200000)) {
        const IdealClass one_cls = identity(lat.generators.front().discriminant());
        std::vector<unsigned long> digit(n, 0);
        for (;;) {
            IntVector v(n);
            Integer sum = 0;
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = lo + static_cast<unsigned long>(digit[i]);
                sum += v[i];
            }
            if (!best || sum < best_sum) {
                if (recompose(lat.generators, v) == one_cls) {
                    best = v;
                    best_sum = sum;
                }
            }
            std::size_t i = 0;
            while (i < n && digit[i] == K) {
                digit[i] = 0;
                ++i;
            }
            if (i == n)
                break;
            ++digit[i];
        }
    }
    if (best)
        return *best;
    // Multiples of each generator's order always lie in the lattice.
    IntVector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        Integer o = order_of(lat.generators[i], lat.order);
        v[i] = o * ((lo + o - 1) / o);
    }
    return v;
}

double default_sigma(const RelationLattice& lat) { return arith::sigma_floor(lat.reduced_basis); }

IntVector sample_short_exponents(const IdealClass& x, const RelationLattice& lat, double sigma,
                                 std::mt19937_64& rng, long min_entry)
{
    IntVector t = discrete_log(x, lat.generators);
    Integer floor_entry = Integer(static_cast<long>(std::ceil(2 * sigma))) + min_entry;
    IntVector v0 = positive_shift(lat, floor_entry);
    IntVector zero(t.size(), 0);
    for (;;) {
        IntVector e = arith::gauss_sample_coset(lat.reduced_basis, t, sigma, rng, zero);
        bool ok = true;
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] += v0[i];
            ok = ok && e[i] >= std::max(min_entry, 0L);
        }
        if (ok)
            return e;
    }
}

IntVector short_exponents(const IdealClass& x, const RelationLattice& lat, long min_entry)
{
    IntVector t = discrete_log(x, lat.generators);
    IntVector e = arith::babai_reduce(lat.reduced_basis, t);
    Integer lowest = 0;
    for (const auto& v : e)
        lowest = std::min(lowest, v);
    Integer need = std::max(min_entry, 0L);
    bool ok = true;
    for (const auto& v : e)
        ok = ok && v >= need;
    if (ok)
        return e;
    IntVector v0 = positive_shift(lat, need - lowest);
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] += v0[i];
    return e;
}

ClassGroup::ClassGroup(const Integer& d) : d_(d), all_(reduced_forms(d))
{
    odd_ = order();
    while (mpz_even_p(odd_.get_mpz_t())) {
        odd_ /= 2;
        ++two_;
    }
}

IdealClass ClassGroup::project_odd(const IdealClass& x) const
{
    IdealClass y = x;
    for (unsigned i = 0; i < two_; ++i)
        y = square(y);
    return y;
}

bool ClassGroup::in_odd_part(const IdealClass& x) const { return pow(x, odd_) == identity(d_); }

IdealClass ClassGroup::random_odd(std::mt19937_64& rng) const
{
    std::uniform_int_distribution<std::size_t> pick(0, all_.size() - 1);
    return project_odd(all_[pick(rng)]);
}

std::vector<IdealClass> ClassGroup::odd_elements() const
{
    std::vector<IdealClass> out;
    for (const auto& x : all_)
        if (in_odd_part(x))
            out.push_back(x);
    return out;
}

}  // namespace tgii::classgroup
