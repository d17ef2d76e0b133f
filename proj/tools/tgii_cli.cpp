#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tgii/apps/apps.hpp"
#include "tgii/arith/polyfp.hpp"
#include "tgii/attacks/attacks.hpp"
#include "tgii/error.hpp"
#include "tgii/modpoly/modpoly.hpp"
#include "tgii/tgii/json.hpp"
#include "tgii/tgii/tgii.hpp"
#include "tgii/volcano/volcano.hpp"

namespace fs = std::filesystem;
using namespace tgii;
using arith::Integer;
using core::Json;

namespace {

enum Exit { ok = 0, usage = 2, math = 3, factor = 4, not_applicable = 5 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string dir = ".";
    bool json = false;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

Globals G;

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep))
        if (!item.empty())
            out.push_back(item);
    return out;
}

Integer parse_int(const std::string& s)
{
    Integer n;
    if (s.empty() || n.set_str(s, 10) != 0)
        throw UsageError("not an integer: '" + s + "'");
    return n;
}

std::vector<Integer> parse_ints(const std::string& s)
{
    std::vector<Integer> out;
    for (const auto& item : split(s, ','))
        out.push_back(parse_int(item));
    return out;
}

std::vector<unsigned> parse_primes(const std::string& s)
{
    std::vector<unsigned> out;
    for (const auto& n : parse_ints(s)) {
        if (n < 2 || !n.fits_uint_p())
            throw UsageError("bad degree " + n.get_str());
        out.push_back(static_cast<unsigned>(n.get_ui()));
    }
    return out;
}

std::vector<unsigned> parse_ids(const std::string& s)
{
    std::vector<unsigned> out;
    for (const auto& n : parse_ints(s)) {
        if (n < 0 || !n.fits_uint_p())
            throw UsageError("bad id " + n.get_str());
        out.push_back(static_cast<unsigned>(n.get_ui()));
    }
    return out;
}

// "a,b" or "a,b,c"; c follows from the discriminant.
core::IdealClass parse_class(const std::string& s, const Integer& d)
{
    auto v = parse_ints(s);
    if (v.size() != 2 && v.size() != 3)
        throw UsageError("a class is given as a,b or a,b,c");
    if (v[0] <= 0 || (v[1] * v[1] - d) % (4 * v[0]) != 0)
        throw UsageError("no form (" + v[0].get_str() + ", " + v[1].get_str() + ", c) of discriminant " +
                         d.get_str());
    Integer c = (v[1] * v[1] - d) / (4 * v[0]);
    if (v.size() == 3 && v[2] != c)
        throw UsageError("c does not match the discriminant");
    return classgroup::reduce(core::IdealClass{v[0], v[1], c});
}

// ---- workspace: pp.json, trapdoor.json, registry.json, workspace.json ----

fs::path ws(const std::string& name) { return fs::path(G.dir) / name; }

Json read_doc(const fs::path& p)
{
    if (!fs::exists(p))
        throw UsageError("missing " + p.string());
    return core::read_json(p);
}

void write_secret(const fs::path& p, const Json& j)
{
    core::write_json(p, j);
    fs::permissions(p, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
}

core::PublicParams load_pp(const std::optional<std::string>& n = std::nullopt)
{
    if (n)
        return {parse_int(*n), 0};
    return core::public_params_from_json(read_doc(ws("pp.json")));
}

core::Trapdoor load_trapdoor()
{
    auto td = core::trapdoor_from_json(read_doc(ws("trapdoor.json")));
    if (fs::exists(ws("registry.json")))
        td.registry = core::registry_from_json(core::read_json(ws("registry.json")));
    return td;
}

void save_registry(const core::PrimeRegistry& r) { core::write_json(ws("registry.json"), core::to_json(r)); }

void emit(const Json& j, const std::string& text)
{
    if (G.json)
        std::cout << core::dump(j);
    else
        std::cout << text << "\n";
}

Json result(const std::string& kind) { return core::document(kind); }

std::string join(const std::vector<arith::Elem>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

std::string join(const std::vector<Integer>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + v[i].get_str();
    return s;
}

core::ComposableEncoding load_enc(const std::string& path) { return core::encoding_from_json(read_doc(path)); }

void write_or_print(const std::string& out, const Json& j)
{
    if (out.empty())
        std::cout << core::dump(j);
    else
        core::write_json(out, j);
}

std::mt19937_64 rng_for(std::uint64_t salt)
{
    std::seed_seq seq{static_cast<std::uint32_t>(G.seed), static_cast<std::uint32_t>(G.seed >> 32),
                      static_cast<std::uint32_t>(salt)};
    return std::mt19937_64(seq);
}

// ---- commands ----

struct GenOpts {
    std::string d0 = "-251", conductor, exclude;
    std::uint64_t p_bound = 20000;
    std::optional<std::string> p, q;
    bool toy = false, app = false;
};

int cmd_gen(const GenOpts& o)
{
    core::GenConfig c;
    if (o.toy)
        c = core::toy_config();
    else if (o.app)
        c = core::app_config();
    else {
        c.d0 = parse_int(o.d0);
        c.conductor = parse_ints(o.conductor);
        c.p_bound = o.p_bound;
        c.seed = G.seed;
        c.exclude = parse_primes(o.exclude);
        if (o.p)
            c.p = parse_int(*o.p);
        if (o.q)
            c.q = parse_int(*o.q);
    }
    auto g = core::gen(c);
    fs::create_directories(G.dir);
    core::write_json(ws("pp.json"), core::to_json(g.pp));
    write_secret(ws("trapdoor.json"), core::to_json(g.trapdoor));
    save_registry(g.trapdoor.registry);
    Json w = result("workspace");
    w["seed"] = G.seed;
    w["modpoly_data"] = TGII_DATA_DIR;
    core::write_json(ws("workspace.json"), w);
    Json j = result("gen");
    j["N"] = core::integer_json(g.pp.N);
    j["j0"] = core::integer_json(g.pp.j0);
    j["D"] = core::integer_json(g.trapdoor.discriminant().value());
    j["class_number"] = core::integer_json(g.trapdoor.group().order());
    j["warnings"] = g.trapdoor.warnings;
    std::string text = "N = " + g.pp.N.get_str() + "\nj0 = " + g.pp.j0.get_str() +
                       "\nD = " + g.trapdoor.discriminant().value().get_str() +
                       "\nh(D) = " + g.trapdoor.group().order().get_str();
    for (const auto& w2 : g.trapdoor.warnings)
        text += "\nwarning: " + w2;
    emit(j, text);
    return ok;
}

int cmd_encode(const std::string& cls, const std::string& primes, std::size_t w, bool sample, const std::string& out)
{
    auto td = load_trapdoor();
    auto x = parse_class(cls, td.discriminant().value());
    auto rng = rng_for(1);
    core::ComposableEncoding e;
    if (!primes.empty()) {
        core::GenerationSet s;
        for (unsigned ell : parse_primes(primes))
            s.push_back(core::registry_form(td, td.registry, ell));
        e = core::trap_sam(td, x, s, td.registry, sample ? &rng : nullptr);
    } else
        e = core::trap_sam(td, x, td.registry, w, sample ? &rng : nullptr);
    save_registry(td.registry);
    write_or_print(out, core::to_json(e));
    if (!out.empty() && !G.json)
        std::cout << "encoding of " << x.str() << " with degrees " << join(std::vector<Integer>(e.L.begin(), e.L.end()))
                  << " written to " << out << "\n";
    return ok;
}

int cmd_compose(const std::string& a, const std::string& b, bool force, const std::string& out)
{
    auto pp = load_pp();
    auto ea = load_enc(a), eb = load_enc(b);
    auto c = core::comp(pp, ea, eb);
    if (!c && !force) {
        std::cerr << "⊥: shared degree\n";
        return math;
    }
    if (!c) {
        c = ea;
        c->L.insert(c->L.end(), eb.L.begin(), eb.L.end());
        c->T.insert(c->T.end(), eb.T.begin(), eb.T.end());
    }
    write_or_print(out, core::to_json(*c));
    return ok;
}

int cmd_extract(const std::string& enc)
{
    auto pp = load_pp();
    Integer j = core::convert(pp, load_enc(enc));
    Json r = result("extract");
    r["j"] = core::integer_json(j);
    emit(r, j.get_str());
    return ok;
}

int cmd_act(const std::string& j, const std::string& cls)
{
    auto td = load_trapdoor();
    Integer out = td.act(parse_int(j), parse_class(cls, td.discriminant().value()));
    Json r = result("act");
    r["j"] = core::integer_json(out);
    emit(r, out.get_str());
    return ok;
}

int cmd_ladder(unsigned ell, std::size_t k, const std::string& cls, const std::string& out)
{
    auto td = load_trapdoor();
    auto c = cls.empty() ? classgroup::reduce(core::registry_form(td, td.registry, ell))
                         : parse_class(cls, td.discriminant().value());
    write_or_print(out, core::to_json(core::sample_ladder(td, ell, k, c)));
    return ok;
}

int cmd_volcano(const std::string& what, std::uint64_t p, unsigned ell, std::optional<std::uint64_t> j)
{
    if (!arith::is_prime(Integer(static_cast<unsigned long>(p))))
        throw UsageError("--p must be prime");
    if (what == "crater") {
        if (!j)
            throw UsageError("volcano crater needs --j");
        auto cyc = volcano::crater_cycle(p, ell, *j);
        Json r = result("crater");
        r["cycle"] = cyc;
        emit(r, join(cyc));
        return ok;
    }
    auto g = volcano::build_graph(p, ell, G.jobs);
    if (what == "dump") {
        if (G.json) {
            Json r = result("graph"), edges = Json::array();
            for (const auto& e : g.edges())
                edges.push_back({e.j1, e.j2, e.multiplicity});
            r["edges"] = edges;
            std::cout << core::dump(r);
        } else
            std::cout << volcano::dump(g);
        return ok;
    }
    Json r = result("volcano"), comps = Json::array();
    std::string text;
    for (const auto& c : volcano::components(g)) {
        Json cj;
        cj["trace"] = core::integer_json(c.trace);
        cj["d0"] = core::integer_json(c.d0);
        cj["depth"] = c.depth;
        cj["levels"] = c.levels;
        cj["supersingular"] = c.supersingular;
        cj["special"] = c.touches_special;
        comps.push_back(cj);
        text += "|t| = " + c.trace.get_str() + (c.supersingular ? " supersingular" : "") +
                (c.touches_special ? " special" : "") + "  depth " + std::to_string(c.depth) + "  crater " +
                join(c.levels.empty() ? std::vector<arith::Elem>{} : c.levels[0]) + "\n";
    }
    r["components"] = comps;
    if (G.json)
        std::cout << core::dump(r);
    else
        std::cout << text;
    return ok;
}

int cmd_parallelogram(const std::string& a, const std::string& b, const std::string& c, const std::string& script)
{
    auto pp = load_pp();
    auto res = attacks::parallelogram(pp, load_enc(a), load_enc(b), load_enc(c));
    if (!script.empty())
        core::write_json(script, attacks::to_json(res.script));
    Json r = result("parallelogram");
    r["j"] = core::integer_json(res.j);
    r["steps"] = res.script.steps.size();
    emit(r, res.j.get_str());
    return ok;
}

int cmd_hilbert(const std::string& d, unsigned ell, const std::string& j0, const std::string& j1,
                const std::optional<std::string>& n)
{
    auto pp = load_pp(n);
    auto res = attacks::hilbert_attack(pp, parse_int(d), ell, parse_int(j0), parse_int(j1));
    Json r = result("hilbert_attack");
    r["j"] = core::integer_json(res.j);
    r["note"] = res.note;
    emit(r, res.j.get_str());
    return ok;
}

int cmd_factor(const std::string& js, const std::optional<std::string>& mixed_from, unsigned ell,
               const std::optional<std::string>& n)
{
    core::PublicParams pp;
    std::vector<Integer> list;
    if (mixed_from) {
        // demo: neighbours mod p and mod q recombined in every way
        auto td = load_trapdoor();
        pp = td.public_params();
        Integer j = parse_int(*mixed_from);
        std::vector<std::vector<Integer>> roots(2);
        const Integer primes[2] = {td.p(), td.q()};
        for (int f = 0; f < 2; ++f) {
            arith::Zmod F(primes[f]);
            auto poly = modpoly::reduced(ell, F).eval_partial(F.reduce(j));
            for (auto r : arith::distinct_roots_fp(poly))
                roots[f].push_back(F.lift(r));
        }
        for (const auto& a : roots[0])
            for (const auto& b : roots[1])
                list.push_back(arith::crt({primes[0], primes[1]}, {a, b}));
    } else {
        pp = load_pp(n);
        list = parse_ints(js);
    }
    Integer d = attacks::factor_from_neighbors(pp.N, list);
    Json r = result("factor");
    r["divisor"] = core::integer_json(d);
    r["cofactor"] = core::integer_json(pp.N / d);
    emit(r, "N = " + d.get_str() + " * " + Integer(pp.N / d).get_str());
    return ok;
}

int cmd_disc_search(const std::optional<std::string>& n, const std::string& constraints,
                    const std::optional<std::string>& bound)
{
    auto pp = load_pp(n);
    std::vector<attacks::KroneckerConstraint> cs;
    for (const auto& item : split(constraints, ',')) {
        auto parts = split(item, ':');
        if (parts.size() != 2)
            throw UsageError("constraints are prime:value pairs");
        cs.push_back({parse_int(parts[0]), static_cast<int>(parse_int(parts[1]).get_si())});
    }
    auto ds = attacks::discriminant_search(pp.N, cs, bound ? std::optional<Integer>(parse_int(*bound)) : std::nullopt);
    Json r = result("discriminant_search");
    Json arr = Json::array();
    for (const auto& d : ds)
        arr.push_back(core::integer_json(d));
    r["candidates"] = arr;
    emit(r, std::to_string(ds.size()) + " candidates: " + join(ds));
    return ok;
}

// ---- DTS ----

apps::DtsMaster load_dts() { return apps::DtsMaster::from_json(read_doc(ws("dts_master.json"))); }

void save_dts(const apps::DtsMaster& m)
{
    write_secret(ws("dts_master.json"), m.to_json());
    core::write_json(ws("dts_public.json"), apps::to_json(m.pub()));
}

apps::DtsPublic load_dts_public() { return apps::dts_public_from_json(read_doc(ws("dts_public.json"))); }

int cmd_dts(const std::string& what, unsigned node, unsigned from, unsigned to, const std::string& a,
            const std::string& b, const std::string& sig, const std::string& out)
{
    if (what == "gen") {
        apps::DtsMaster m(load_trapdoor(), apps::RsaFdh::generate(G.seed));
        save_dts(m);
        emit(result("dts_gen"), "dts master key written; certificate scheme rsa-fdh-sha256 (demo only)");
        return ok;
    }
    if (what == "cert") {
        auto m = load_dts();
        auto rng = rng_for(node);
        const auto& n = m.certify(node, rng);
        Json r = result("dts_cert");
        r["node"] = node;
        r["degrees"] = n.pk.L;
        save_dts(m);
        emit(r, "node " + std::to_string(node) + " certified");
        return ok;
    }
    if (what == "sign") {
        auto m = load_dts();
        auto s = m.sign(from, to);
        save_dts(m);
        write_or_print(out, apps::to_json(s));
        return ok;
    }
    if (what == "compose") {
        auto pub = load_dts_public();
        auto s = apps::dts_comp(pub.pp, apps::dts_signature_from_json(read_doc(a)),
                                apps::dts_signature_from_json(read_doc(b)));
        write_or_print(out, apps::to_json(s));
        return ok;
    }
    if (what == "verify") {
        auto pub = load_dts_public();
        auto s = apps::dts_signature_from_json(read_doc(sig));
        apps::dts_ver(pub, s);
        Json r = result("dts_verify");
        r["accept"] = true;
        emit(r, "ACCEPT " + std::to_string(s.src) + " -> " + std::to_string(s.dst));
        return ok;
    }
    // compress
    auto pub = load_dts_public();
    auto c = apps::dts_compress(pub, apps::dts_signature_from_json(read_doc(sig)));
    auto check = apps::dts_ver_compressed(pub, c);
    Json r = apps::to_json(c);
    r["endpoint_ok"] = check.endpoint_ok;
    r["warning"] = check.warning;
    write_or_print(out, r);
    if (!out.empty() && !G.json)
        std::cout << "endpoint " << (check.endpoint_ok ? "matches" : "does not match") << "; " << check.warning
                  << "\n";
    return ok;
}

// ---- BE ----

apps::BeMaster load_be() { return apps::BeMaster::from_json(read_doc(ws("be_master.json"))); }

void save_be(const apps::BeMaster& m)
{
    write_secret(ws("be_master.json"), m.to_json());
    core::write_json(ws("be_public.json"), apps::to_json(m.pub()));
}

int cmd_be(const std::string& what, unsigned user, const std::string& to, const std::string& message,
           const std::string& nonce, const std::string& key, const std::string& ct, const std::string& out)
{
    if (what == "setup") {
        auto rng = rng_for(0);
        apps::BeMaster m(load_trapdoor(), rng);
        save_be(m);
        emit(result("be_setup"), "broadcast master key written");
        return ok;
    }
    if (what == "adduser") {
        auto m = load_be();
        auto rng = rng_for(user);
        auto sk = m.add_user(user, rng);
        save_be(m);
        fs::path p = out.empty() ? ws("be_sk_" + std::to_string(user) + ".json") : fs::path(out);
        write_secret(p, apps::to_json(sk));
        Json r = result("be_adduser");
        r["user"] = user;
        r["key_file"] = p.string();
        emit(r, "user " + std::to_string(user) + " key written to " + p.string());
        return ok;
    }
    if (what == "encrypt") {
        auto m = load_be();
        std::vector<unsigned> gamma = parse_ids(to);
        apps::Bytes n;
        if (nonce.empty()) {
            auto rng = rng_for(0x6e6f6e6365);
            for (int i = 0; i < 16; ++i)
                n.push_back(static_cast<std::uint8_t>(rng()));
        } else
            n = apps::from_hex(nonce);
        auto c = m.encrypt(gamma, apps::Bytes(message.begin(), message.end()), n);
        write_or_print(out, apps::to_json(c));
        return ok;
    }
    // decrypt
    auto pub = apps::be_public_from_json(read_doc(ws("be_public.json")));
    auto sk = apps::be_secret_from_json(read_doc(key));
    auto pt = apps::be_dec(pub, sk, apps::be_ciphertext_from_json(read_doc(ct)));
    std::string text(pt.begin(), pt.end());
    Json r = result("be_decrypt");
    r["message"] = text;
    emit(r, text);
    return ok;
}

// ---- demo ----

int cmd_demo_toy()
{
    auto g = core::gen(core::toy_config());
    const auto& td = g.trapdoor;
    const core::IdealClass x{3, 1, 21};
    std::vector<Integer> crater;
    for (int k = 0; k < 7; ++k)
        crater.push_back(td.canonical(classgroup::pow(x, Integer(k))));
    std::vector<arith::Elem> mod_p, mod_q;
    for (const auto& j : crater) {
        mod_p.push_back(arith::to_u64(arith::mod(j, td.p())));
        mod_q.push_back(arith::to_u64(arith::mod(j, td.q())));
    }
    auto cycle_p = volcano::crater_cycle(arith::to_u64(td.p()), 3, mod_p[0]);
    auto cycle_q = volcano::crater_cycle(arith::to_u64(td.q()), 3, mod_q[0]);
    auto same_cycle = [](std::vector<arith::Elem> a, const std::vector<arith::Elem>& b) {
        if (a == b)
            return true;
        std::reverse(a.begin() + 1, a.end());
        return a == b;
    };
    auto extracted = core::gcd_op(g.pp, 3, 7, 7601, 1766);
    auto hil = attacks::hilbert_attack(g.pp, -251, 3, 12631, 7601);
    Json r = result("demo_toy");
    r["N"] = core::integer_json(g.pp.N);
    r["j0"] = core::integer_json(g.pp.j0);
    r["p"] = core::integer_json(td.p());
    r["q"] = core::integer_json(td.q());
    r["crater_p"] = mod_p;
    r["crater_q"] = mod_q;
    Json cz = Json::array();
    for (const auto& j : crater)
        cz.push_back(core::integer_json(j));
    r["crater_N"] = cz;
    r["crater_check"] = same_cycle(cycle_p, mod_p) && same_cycle(cycle_q, mod_q);
    r["extract"] = core::integer_json(*extracted);
    r["hilbert_attack"] = core::integer_json(hil.j);
    std::ostringstream t;
    t << "N = " << g.pp.N << " = " << td.p() << " * " << td.q() << "\n"
      << "j0 = " << g.pp.j0 << "\n"
      << "crater mod " << td.p() << ": " << join(mod_p) << "\n"
      << "crater mod " << td.q() << ": " << join(mod_q) << "\n"
      << "crater mod N: " << join(crater) << "\n"
      << "crater matches the 3-isogeny cycle in both fields: " << (r["crater_check"].get<bool>() ? "yes" : "no")
      << "\n"
      << "gcd(Phi_7(7601, x), Phi_3(1766, x)) has the single root " << *extracted << "\n"
      << "hilbert attack on (12631, 7601, l = 3): " << hil.j;
    emit(r, t.str());
    return r["crater_check"].get<bool>() ? ok : math;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"trapdoor group with infeasible inversion over isogeny volcanoes (demo only)"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--dir", G.dir, "workspace directory")->capture_default_str();
    app.add_flag("--json", G.json, "machine-readable output");
    app.add_option("--seed", G.seed, "seed for every random choice")->capture_default_str();
    app.add_option("--jobs", G.jobs, "worker threads for volcano build")->capture_default_str();

    std::function<int()> run;

    GenOpts gen;
    auto* c_gen = app.add_subcommand("gen", "generate public parameters and trapdoor");
    c_gen->add_option("--d0", gen.d0, "fundamental discriminant")->capture_default_str();
    c_gen->add_option("--conductor", gen.conductor, "conductor primes f1,f2,..");
    c_gen->add_option("--p-bound", gen.p_bound, "search bound for p and q")->capture_default_str();
    c_gen->add_option("--exclude", gen.exclude, "degrees never handed out");
    c_gen->add_option("--p", gen.p, "pinned p");
    c_gen->add_option("--q", gen.q, "pinned q");
    c_gen->add_flag("--toy", gen.toy, "the 83 x 173 toy instance");
    c_gen->add_flag("--app", gen.app, "the application-scale instance");
    c_gen->callback([&] { run = [&] { return cmd_gen(gen); }; });

    std::string cls, primes, out, a, b, c, enc, j, script, d, j0s, j1s, js, constraints, sig, to, message, nonce,
        key, ct;
    std::size_t w = 2, k = 0;
    bool sample = false, force = false;
    unsigned ell = 3, node = 0, from = 0, dest = 0, user = 0;
    std::uint64_t vp = 0;
    std::optional<std::uint64_t> vj;
    std::optional<std::string> n_opt, bound, mixed;

    auto* c_enc = app.add_subcommand("encode", "encode a class (trapdoor)");
    c_enc->add_option("--class", cls, "class as a,b")->required();
    c_enc->add_option("--primes", primes, "generation-set degrees l1,l2,..");
    c_enc->add_option("--w", w, "number of fresh degrees")->capture_default_str();
    c_enc->add_flag("--sample", sample, "sample exponents instead of the short deterministic vector");
    c_enc->add_option("--out", out, "output file");
    c_enc->callback([&] { run = [&] { return cmd_encode(cls, primes, w, sample, out); }; });

    auto* c_comp = app.add_subcommand("compose", "concatenate two encodings");
    c_comp->add_option("--a", a)->required();
    c_comp->add_option("--b", b)->required();
    c_comp->add_flag("--force", force, "concatenate even when a degree repeats");
    c_comp->add_option("--out", out);
    c_comp->callback([&] { run = [&] { return cmd_compose(a, b, force, out); }; });

    auto* c_ext = app.add_subcommand("extract", "canonical j of an encoding (public)");
    c_ext->add_option("--enc", enc)->required();
    c_ext->callback([&] { run = [&] { return cmd_extract(enc); }; });

    auto* c_act = app.add_subcommand("act", "apply a class to j (trapdoor)");
    c_act->add_option("--j", j)->required();
    c_act->add_option("--class", cls)->required();
    c_act->callback([&] { run = [&] { return cmd_act(j, cls); }; });

    auto* c_lad = app.add_subcommand("ladder", "publish a ladder (trapdoor)");
    c_lad->add_option("--l", ell)->required();
    c_lad->add_option("--k", k)->required();
    c_lad->add_option("--class", cls, "class of norm l (default: the registry orientation)");
    c_lad->add_option("--out", out);
    c_lad->callback([&] { run = [&] { return cmd_ladder(ell, k, cls, out); }; });

    auto* c_vol = app.add_subcommand("volcano", "isogeny graphs over F_p");
    c_vol->require_subcommand(1);
    for (std::string what : {"build", "dump", "crater"}) {
        auto* s = c_vol->add_subcommand(what);
        s->add_option("--p", vp)->required();
        s->add_option("--l", ell)->required();
        if (what == "crater")
            s->add_option("--j", vj)->required();
        s->callback([&, what] { run = [&, what] { return cmd_volcano(what, vp, ell, vj); }; });
    }

    auto* c_att = app.add_subcommand("attack", "attacks (public)");
    c_att->require_subcommand(1);
    auto* a_par = c_att->add_subcommand("parallelogram");
    a_par->add_option("--a", a)->required();
    a_par->add_option("--b", b)->required();
    a_par->add_option("--c", c)->required();
    a_par->add_option("--script", script, "write the gcd script here");
    a_par->callback([&] { run = [&] { return cmd_parallelogram(a, b, c, script); }; });
    auto* a_hil = c_att->add_subcommand("hilbert");
    a_hil->add_option("--d", d)->required();
    a_hil->add_option("--l", ell)->required();
    a_hil->add_option("--j0", j0s)->required();
    a_hil->add_option("--j1", j1s)->required();
    a_hil->add_option("--n", n_opt, "modulus (default: pp.json)");
    a_hil->callback([&] { run = [&] { return cmd_hilbert(d, ell, j0s, j1s, n_opt); }; });
    auto* a_fac = c_att->add_subcommand("factor");
    a_fac->add_option("--js", js, "neighbour j's j1,j2,..");
    a_fac->add_option("--mixed-from", mixed, "build the mixed neighbour set of this j (trapdoor, demo)");
    a_fac->add_option("--l", ell)->capture_default_str();
    a_fac->add_option("--n", n_opt);
    a_fac->callback([&] { run = [&] { return cmd_factor(js, mixed, ell, n_opt); }; });
    auto* a_ds = c_att->add_subcommand("disc-search");
    a_ds->add_option("--n", n_opt);
    a_ds->add_option("--constraints", constraints, "prime:value,..");
    a_ds->add_option("--bound", bound, "|D| < bound (default sqrt N)");
    a_ds->callback([&] { run = [&] { return cmd_disc_search(n_opt, constraints, bound); }; });

    auto* c_dts = app.add_subcommand("dts", "directed transitive signatures");
    c_dts->require_subcommand(1);
    for (std::string what : {"gen", "cert", "sign", "compose", "verify", "compress"}) {
        auto* s = c_dts->add_subcommand(what);
        if (what == "cert")
            s->add_option("--node", node)->required();
        if (what == "sign") {
            s->add_option("--from", from)->required();
            s->add_option("--to", dest)->required();
        }
        if (what == "compose") {
            s->add_option("--a", a)->required();
            s->add_option("--b", b)->required();
        }
        if (what == "verify" || what == "compress")
            s->add_option("--sig", sig)->required();
        if (what == "sign" || what == "compose" || what == "compress")
            s->add_option("--out", out);
        s->callback([&, what] { run = [&, what] { return cmd_dts(what, node, from, dest, a, b, sig, out); }; });
    }

    auto* c_be = app.add_subcommand("be", "broadcast encryption");
    c_be->require_subcommand(1);
    for (std::string what : {"setup", "adduser", "encrypt", "decrypt"}) {
        auto* s = c_be->add_subcommand(what);
        if (what == "adduser") {
            s->add_option("--user", user)->required();
            s->add_option("--out", out);
        }
        if (what == "encrypt") {
            s->add_option("--to", to, "recipients u1,u2,..")->required();
            s->add_option("--message", message)->required();
            s->add_option("--nonce", nonce, "hex");
            s->add_option("--out", out);
        }
        if (what == "decrypt") {
            s->add_option("--key", key)->required();
            s->add_option("--ct", ct)->required();
        }
        s->callback([&, what] { run = [&, what] { return cmd_be(what, user, to, message, nonce, key, ct, out); }; });
    }

    auto* c_demo = app.add_subcommand("demo", "demonstrations");
    c_demo->require_subcommand(1);
    c_demo->add_subcommand("toy", "the 83 x 173 instance end to end")->callback([&] {
        run = [] { return cmd_demo_toy(); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }
    try {
        return run ? run() : usage;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return usage;
    } catch (const FactorFoundError& e) {
        std::cerr << "\n*** FACTOR FOUND: " << e.divisor() << " divides N ***\n" << e.what() << "\n";
        return factor;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        switch (e.code()) {
        case Errc::NotApplicable:
            return not_applicable;
        case Errc::ParseError:
        case Errc::InvalidArgument:
            return usage;
        default:
            return math;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return math;
    }
}
