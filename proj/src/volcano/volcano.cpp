#include "tgii/volcano/volcano.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "tgii/arith/polyfp.hpp"
#include "tgii/curves/curves.hpp"
#include "tgii/error.hpp"
#include "tgii/modpoly/modpoly.hpp"

namespace tgii::volcano {

using arith::Zmod;

namespace {

constexpr std::int64_t no_trace = INT64_MIN;

// Traces of curve_from_j(j) for every j in F_p; no_trace at 0 and 1728.
const std::vector<std::int64_t>& trace_table(std::uint64_t p)
{
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<std::vector<std::int64_t>>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[p];
    if (slot)
        return *slot;
    if (p <= 3 || !arith::is_prime(arith::from_u64(p)))
        throw Error(Errc::NotPrime, "volcano work needs a prime p > 3");
    if (p > (std::uint64_t(1) << 16))
        throw Error(Errc::TooLarge, "exhaustive trace table limited to p < 2^16");
    Zmod F(p);
    std::vector<std::uint8_t> chi(p, 0);
    chi[0] = 1;
    for (std::uint64_t x = 1; x <= p / 2; ++x)
        chi[F.mul(x, x)] = 2;
    auto table = std::make_unique<std::vector<std::int64_t>>(p, no_trace);
    const Elem j1728 = 1728 % p;
    for (Elem j = 1; j < p; ++j) {
        if (j == j1728)
            continue;
        auto E = curves::curve_from_j(j, F);
        std::int64_t n = 1;
        for (Elem x = 0; x < p; ++x)
            n += chi[E.rhs(x)];
        (*table)[j] = static_cast<std::int64_t>(p) + 1 - n;
    }
    slot = std::move(table);
    return *slot;
}

std::vector<Elem> phi_roots(std::uint64_t p, unsigned ell, Elem j)
{
    Zmod F(p);
    return arith::poly_roots_fp(modpoly::reduced(ell, F).eval_partial(j));
}

unsigned valuation(Integer n, unsigned ell)
{
    unsigned v = 0;
    if (n == 0)
        return 0;
    while (n % ell == 0) {
        n /= ell;
        ++v;
    }
    return v;
}

struct TraceData {
    Integer t;   // |t|
    Integer d0;  // fundamental part of t^2 - 4p
    Integer v;   // t^2 - 4p = v^2 d0
};

TraceData trace_data(Elem j, std::uint64_t p)
{
    Integer t = trace_of_j(j, p);
    if (arith::mod(t, arith::from_u64(p)) == 0)
        throw Error(Errc::Unsupported, "supersingular j");
    Integer delta = t * t - 4 * arith::from_u64(p);
    auto disc = Discriminant::from_value(delta);
    return {abs(t), disc.fundamental(), disc.conductor()};
}

}  // namespace

IsogenyGraph::IsogenyGraph(std::uint64_t p, unsigned ell, std::vector<std::vector<Elem>> roots)
    : p_(p), ell_(ell), roots_(std::move(roots))
{
}

unsigned IsogenyGraph::multiplicity(Elem j1, Elem j2) const
{
    const auto& r = roots_.at(j1);
    return static_cast<unsigned>(std::count(r.begin(), r.end(), j2));
}

std::vector<IsogenyGraph::Edge> IsogenyGraph::edges() const
{
    std::vector<Edge> out;
    for (Elem j1 = 0; j1 < roots_.size(); ++j1) {
        const auto& r = roots_[j1];
        for (std::size_t i = 0; i < r.size();) {
            std::size_t k = i;
            while (k < r.size() && r[k] == r[i])
                ++k;
            out.push_back({j1, r[i], static_cast<unsigned>(k - i)});
            i = k;
        }
    }
    return out;
}

IsogenyGraph build_graph(std::uint64_t p, unsigned ell, unsigned jobs)
{
    Zmod F(p);
    const auto& phi = modpoly::reduced(ell, F);
    std::vector<std::vector<Elem>> roots(p);
    jobs = std::max(1u, jobs);
    auto work = [&](unsigned w) {
        for (Elem j = w; j < p; j += jobs)
            roots[j] = arith::poly_roots_fp(phi.eval_partial(j));
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back(work, w);
        for (auto& th : pool)
            th.join();
    }
    return IsogenyGraph(p, ell, std::move(roots));
}

std::string dump(const IsogenyGraph& g)
{
    std::ostringstream out;
    for (const auto& e : g.edges())
        out << e.j1 << ' ' << e.j2 << ' ' << e.multiplicity << '\n';
    return out.str();
}

unsigned component_depth(std::uint64_t p, unsigned ell, const Integer& t, const Integer& d0)
{
    Integer delta = t * t - 4 * arith::from_u64(p);
    if (delta % d0 != 0)
        throw Error(Errc::InvalidArgument, "D0 does not divide t^2 - 4p");
    Integer q = delta / d0;
    if (!arith::is_square(q))
        throw Error(Errc::InvalidArgument, "(t^2 - 4p) / D0 is not a square");
    return valuation(q, ell) / 2;
}

Integer trace_of_j(Elem j, std::uint64_t p)
{
    const auto& table = trace_table(p);
    if (j >= p || table[j] == no_trace)
        throw Error(Errc::Unsupported, "j = 0 and j = 1728 have no canonical trace here");
    return arith::from_i64(table[j]);
}

unsigned level(std::uint64_t p, unsigned ell, Elem j)
{
    auto td = trace_data(j, p);
    unsigned d = valuation(td.v, ell);
    if (d == 0)
        return 0;
    std::set<Elem> seen{j};
    std::vector<Elem> frontier{j};
    for (unsigned dist = 0; dist <= d && !frontier.empty(); ++dist) {
        std::vector<Elem> next;
        for (Elem x : frontier) {
            auto r = phi_roots(p, ell, x);
            if (r.size() == 1)
                return d - dist;
            for (Elem y : r)
                if (seen.insert(y).second)
                    next.push_back(y);
        }
        frontier = std::move(next);
    }
    throw Error(Errc::Degenerate, "no floor vertex within the volcano depth");
}

namespace {

using Undirected = std::vector<std::vector<Elem>>;

Undirected undirected_of(const IsogenyGraph& g)
{
    Undirected u(g.p());
    for (Elem a = 0; a < g.p(); ++a)
        for (Elem b : g.neighbors(a)) {
            u[a].push_back(b);
            u[b].push_back(a);
        }
    for (auto& row : u) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return u;
}

VolcanoComponent component_with(const IsogenyGraph& g, const Undirected& und, Elem j)
{
    const std::uint64_t p = g.p();
    std::set<Elem> members{j};
    std::deque<Elem> queue{j};
    while (!queue.empty()) {
        Elem x = queue.front();
        queue.pop_front();
        for (Elem y : und[x])
            if (members.insert(y).second)
                queue.push_back(y);
    }
    VolcanoComponent c;
    c.p = p;
    c.ell = g.ell();
    const Elem j1728 = 1728 % p;
    c.touches_special = members.count(0) || members.count(j1728);
    Elem probe = j;
    for (Elem x : members)
        if (x != 0 && x != j1728) {
            probe = x;
            break;
        }
    if (probe == 0 || probe == j1728) {
        c.levels = {{members.begin(), members.end()}};
        return c;
    }
    Integer t = trace_of_j(probe, p);
    if (arith::mod(t, arith::from_u64(p)) == 0) {
        c.supersingular = true;
        c.levels = {{members.begin(), members.end()}};
        return c;
    }
    auto td = trace_data(probe, p);
    c.trace = td.t;
    c.d0 = td.d0;
    c.depth = valuation(td.v, g.ell());
    c.levels.assign(c.depth + 1, {});
    if (c.depth == 0) {
        c.levels[0].assign(members.begin(), members.end());
        return c;
    }
    // multi-source distance from the floor
    std::map<Elem, unsigned> dist;
    std::deque<Elem> q;
    for (Elem x : members)
        if (g.degree(x) == 1) {
            dist[x] = 0;
            q.push_back(x);
        }
    while (!q.empty()) {
        Elem x = q.front();
        q.pop_front();
        for (Elem y : und[x])
            if (!dist.count(y)) {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
    }
    for (Elem x : members) {
        auto it = dist.find(x);
        if (it == dist.end() || it->second > c.depth)
            throw Error(Errc::Degenerate, "vertex farther from the floor than the depth");
        c.levels[c.depth - it->second].push_back(x);
    }
    return c;
}

}  // namespace

VolcanoComponent component(const IsogenyGraph& g, Elem j) { return component_with(g, undirected_of(g), j); }

std::vector<VolcanoComponent> components(const IsogenyGraph& g)
{
    auto und = undirected_of(g);
    std::vector<bool> done(g.p(), false);
    std::vector<VolcanoComponent> out;
    for (Elem j = 0; j < g.p(); ++j) {
        if (done[j])
            continue;
        auto c = component_with(g, und, j);
        for (const auto& lv : c.levels)
            for (Elem x : lv)
                done[x] = true;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Elem> crater_cycle(std::uint64_t p, unsigned ell, Elem j_start)
{
    if (level(p, ell, j_start) != 0)
        throw Error(Errc::NotOnSurface, "start vertex is not on the crater");
    auto crater_neighbors = [&](Elem j) {
        std::vector<Elem> out;
        for (Elem r : phi_roots(p, ell, j))
            if (r != 0 && r != 1728 % p && level(p, ell, r) == 0)
                out.push_back(r);
        return out;
    };
    auto first = crater_neighbors(j_start);
    if (first.empty())
        return {j_start};
    Zmod F(p);
    auto E = curves::curve_from_j(j_start, F);
    Integer t = curves::trace(E);
    Elem step = first.front();
    unsigned best = ell;
    for (const auto& k : curves::kernel_polynomials(E, ell)) {
        Elem target = curves::j_invariant(curves::velu(E, k).target);
        if (std::find(first.begin(), first.end(), target) == first.end())
            continue;
        unsigned mu = curves::frobenius_eigenvalue(E, ell, k, t);
        unsigned normalised = sgn(t) > 0 ? mu : (ell - mu) % ell;
        if (normalised < best) {
            best = normalised;
            step = target;
        }
    }
    std::vector<Elem> cycle{j_start};
    Elem prev = j_start, cur = step;
    while (cur != j_start) {
        cycle.push_back(cur);
        if (cycle.size() > p)
            throw Error(Errc::Degenerate, "crater walk does not close");
        auto nb = crater_neighbors(cur);
        auto it = std::find(nb.begin(), nb.end(), prev);
        if (it != nb.end())
            nb.erase(it);
        if (nb.empty())
            break;
        prev = cur;
        cur = nb.front();
    }
    return cycle;
}

std::vector<Elem> ell_set(const Discriminant& d, std::uint64_t p)
{
    const auto& table = trace_table(p);
    const Integer D = d.value();
    const Integer f = d.conductor();
    std::vector<Elem> out;
    for (Elem j = 1; j < p; ++j) {
        if (table[j] == no_trace || table[j] == 0)
            continue;
        Integer t = arith::from_i64(table[j]);
        Integer delta = t * t - 4 * arith::from_u64(p);
        if (delta % D != 0 || !arith::is_square(delta / D))
            continue;
        Integer v = f * arith::isqrt(delta / D);
        bool ok = true;
        for (const auto& [ell, e] : arith::factor(v)) {
            unsigned l = static_cast<unsigned>(arith::to_u64(ell));
            if (level(p, l, j) != valuation(f, l)) {
                ok = false;
                break;
            }
        }
        if (ok)
            out.push_back(j);
    }
    return out;
}

Poly hilbert_mod_p(const Discriminant& d, std::uint64_t p)
{
    return Poly::from_roots(Zmod(p), ell_set(d, p));
}

Discriminant end_disc(Elem j, std::uint64_t p)
{
    auto td = trace_data(j, p);
    std::vector<Integer> fs;
    for (const auto& [ell, e] : arith::factor(td.v)) {
        unsigned l = static_cast<unsigned>(arith::to_u64(ell));
        for (unsigned k = level(p, l, j); k > 0; --k)
            fs.push_back(ell);
    }
    return Discriminant(td.d0, fs);
}

Fraction two_neighbor_fraction(std::uint64_t p, unsigned ell)
{
    Zmod F(p);
    const auto& phi = modpoly::reduced(ell, F);
    std::vector<std::uint8_t> many(p);
    for (Elem j = 0; j < p; ++j)
        many[j] = arith::poly_roots_fp(phi.eval_partial(j)).size() >= 2;
    Fraction fr;
    for (Elem a = 0; a < p; ++a) {
        Elem a3 = F.mul(4, F.mul(a, F.mul(a, a)));
        for (Elem b = 0; b < p; ++b) {
            Elem disc = F.add(a3, F.mul(27, F.mul(b, b)));
            if (disc == 0)
                continue;
            ++fr.total;
            Elem j = F.mul(F.from_int(1728), F.mul(a3, F.inverse(disc)));
            fr.count += many[j];
        }
    }
    return fr;
}

}  // namespace tgii::volcano
