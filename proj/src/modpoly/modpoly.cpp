#include "tgii/modpoly/modpoly.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>

#include "tgii/error.hpp"

namespace tgii::modpoly {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& why)
{
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + why);
}

unsigned parse_unsigned(const std::string& s, std::size_t line)
{
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        parse_fail(line, "bad index '" + s + "'");
    return static_cast<unsigned>(std::stoul(s));
}

void header_value(const std::string& comment, const std::string& key, std::optional<Integer>& out)
{
    auto pos = comment.find(key);
    if (pos == std::string::npos)
        return;
    std::istringstream rest(comment.substr(pos + key.size()));
    std::string tok;
    if (rest >> tok && tok.find_first_not_of("0123456789") == std::string::npos)
        out = arith::parse_integer(tok);
}

}  // namespace

unsigned ModularPolynomialTable::degree() const
{
    unsigned d = 0;
    for (const auto& [ij, c] : entries)
        d = std::max(d, ij.first);
    return d;
}

Integer ModularPolynomialTable::coefficient(unsigned i, unsigned j) const
{
    auto it = entries.find(i >= j ? std::make_pair(i, j) : std::make_pair(j, i));
    return it == entries.end() ? Integer(0) : it->second;
}

bool ModularPolynomialTable::usable_mod(const Integer& n) const
{
    return !modulus || (n > 1 && *modulus % n == 0);
}

ModularPolynomialTable parse(std::istream& in, unsigned level)
{
    ModularPolynomialTable t;
    std::optional<Integer> header_level;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty())
            continue;
        if (line[0] == '#') {
            if (t.entries.empty()) {
                header_value(line, "modulus", t.modulus);
                header_value(line, "level", header_level);
            }
            continue;
        }
        if (line[0] != '[')
            parse_fail(lineno, "expected '['");
        auto comma = line.find(',');
        auto close = line.find(']');
        if (comma == std::string::npos || close == std::string::npos || comma > close)
            parse_fail(lineno, "malformed index pair");
        unsigned i = parse_unsigned(trim(line.substr(1, comma - 1)), lineno);
        unsigned j = parse_unsigned(trim(line.substr(comma + 1, close - comma - 1)), lineno);
        std::string value = trim(line.substr(close + 1));
        Integer c;
        try {
            c = arith::parse_integer(value);
        } catch (const Error&) {
            parse_fail(lineno, "bad coefficient '" + value + "'");
        }
        if (t.modulus)
            c = arith::mod(c, *t.modulus);
        auto key = i >= j ? std::make_pair(i, j) : std::make_pair(j, i);
        auto [it, fresh] = t.entries.emplace(key, c);
        if (!fresh && it->second != c)
            throw Error(Errc::ConflictError, "line " + std::to_string(lineno) + ": conflicting coefficient for [" +
                                                 std::to_string(key.first) + "," + std::to_string(key.second) + "]");
    }
    if (t.entries.empty())
        throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": no coefficients");
    if (level != 0)
        t.level = level;
    else if (header_level)
        t.level = static_cast<unsigned>(arith::to_u64(*header_level));
    return t;
}

ModularPolynomialTable load(const std::filesystem::path& path, unsigned level)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::MissingTable, "cannot open " + path.string());
    auto t = parse(in, level);
    if (t.level == 0) {
        std::string stem = path.stem().string();
        if (stem.rfind("phi_", 0) == 0)
            t.level = static_cast<unsigned>(std::stoul(stem.substr(4)));
    }
    if (t.level == 0)
        t.level = t.degree() - 1;
    return t;
}

std::filesystem::path data_dir()
{
    if (const char* env = std::getenv("TGII_DATA_DIR"); env && *env)
        return env;
    return TGII_DATA_DIR;
}

namespace {

struct TableCache {
    std::mutex mu;
    // (level, reduced?) -> table, nullptr when the file is absent
    std::map<std::pair<unsigned, bool>, std::unique_ptr<ModularPolynomialTable>> tables;
    std::map<std::pair<unsigned, std::uint64_t>, std::unique_ptr<ReducedTable>> reduced;
};

TableCache& cache()
{
    static TableCache c;
    return c;
}

const ModularPolynomialTable* cached_file(TableCache& c, unsigned level, bool app)
{
    auto key = std::make_pair(level, app);
    auto it = c.tables.find(key);
    if (it == c.tables.end()) {
        auto path = data_dir() / "modpoly";
        if (app)
            path /= "app";
        path /= "phi_" + std::to_string(level) + ".txt";
        std::unique_ptr<ModularPolynomialTable> t;
        if (std::filesystem::exists(path))
            t = std::make_unique<ModularPolynomialTable>(load(path, level));
        it = c.tables.emplace(key, std::move(t)).first;
    }
    return it->second.get();
}

const ModularPolynomialTable* find_table(TableCache& c, unsigned level, const Integer& n)
{
    for (bool app : {false, true}) {
        const auto* t = cached_file(c, level, app);
        if (t && t->usable_mod(n))
            return t;
    }
    return nullptr;
}

}  // namespace

const ModularPolynomialTable& table_for(unsigned level, const Integer& n)
{
    auto& c = cache();
    std::lock_guard lock(c.mu);
    const auto* t = find_table(c, level, n);
    if (!t)
        throw Error(Errc::MissingTable, "no modular polynomial of level " + std::to_string(level) + " usable mod " +
                                            arith::to_string(n));
    return *t;
}

bool has_table(unsigned level, const Integer& n)
{
    auto& c = cache();
    std::lock_guard lock(c.mu);
    return find_table(c, level, n) != nullptr;
}

ReducedTable::ReducedTable(const ModularPolynomialTable& t, const Zmod& ring)
    : level_(t.level), d_(t.degree()), ring_(ring), c_((d_ + 1) * (d_ + 1), 0)
{
    if (!t.usable_mod(ring.modulus_integer()))
        throw Error(Errc::MissingTable, "table modulus incompatible with ring");
    for (const auto& [ij, v] : t.entries) {
        Elem r = ring.reduce(v);
        c_[ij.first * (d_ + 1) + ij.second] = r;
        c_[ij.second * (d_ + 1) + ij.first] = r;
    }
}

namespace {

// sum_i row[i] * w[i] with deferred reduction; entries are < m < 2^62.
Elem dot(const Zmod& R, const Elem* row, std::size_t stride, const std::vector<Elem>& w)
{
    const std::uint64_t m = R.modulus();
    unsigned __int128 acc = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += static_cast<unsigned __int128>(row[i * stride]) * w[i];
        if ((i & 7) == 7)
            acc %= m;
    }
    return static_cast<Elem>(acc % m);
}

std::vector<Elem> powers(const Zmod& R, Elem x, unsigned d)
{
    std::vector<Elem> p(d + 1);
    p[0] = 1 % R.modulus();
    for (unsigned i = 1; i <= d; ++i)
        p[i] = R.mul(p[i - 1], x);
    return p;
}

}  // namespace

Poly ReducedTable::eval_partial(Elem x) const
{
    auto xp = powers(ring_, x, d_);
    std::vector<Elem> out(d_ + 1);
    for (unsigned k = 0; k <= d_; ++k)
        out[k] = dot(ring_, &c_[k], d_ + 1, xp);
    return Poly(ring_, std::move(out));
}

Elem ReducedTable::eval(Elem x, Elem y) const { return eval_partial(x).eval(y); }

ReducedTable::Derivatives ReducedTable::derivatives(Elem x, Elem y) const
{
    const Zmod& R = ring_;
    auto yp = powers(R, y, d_);
    auto xp = powers(R, x, d_);
    // r0[i] = sum_j c_ij y^j, r1[i] = d/dy, r2[i] = d^2/dy^2
    std::vector<Elem> r0(d_ + 1), r1(d_ + 1), r2(d_ + 1);
    std::vector<Elem> w1(d_ + 1, 0), w2(d_ + 1, 0);
    for (unsigned j = 1; j <= d_; ++j)
        w1[j] = R.mul(R.from_int(j), yp[j - 1]);
    for (unsigned j = 2; j <= d_; ++j)
        w2[j] = R.mul(R.from_int(static_cast<std::int64_t>(j) * (j - 1)), yp[j - 2]);
    for (unsigned i = 0; i <= d_; ++i) {
        const Elem* row = &c_[i * (d_ + 1)];
        r0[i] = dot(R, row, 1, yp);
        r1[i] = dot(R, row, 1, w1);
        r2[i] = dot(R, row, 1, w2);
    }
    std::vector<Elem> v1(d_ + 1, 0), v2(d_ + 1, 0);
    for (unsigned i = 1; i <= d_; ++i)
        v1[i] = R.mul(R.from_int(i), xp[i - 1]);
    for (unsigned i = 2; i <= d_; ++i)
        v2[i] = R.mul(R.from_int(static_cast<std::int64_t>(i) * (i - 1)), xp[i - 2]);
    Derivatives out{};
    out.phi = dot(R, r0.data(), 1, xp);
    out.x = dot(R, r0.data(), 1, v1);
    out.xx = dot(R, r0.data(), 1, v2);
    out.y = dot(R, r1.data(), 1, xp);
    out.xy = dot(R, r1.data(), 1, v1);
    out.yy = dot(R, r2.data(), 1, xp);
    return out;
}

const ReducedTable& reduced(unsigned level, const Zmod& ring)
{
    auto& c = cache();
    std::lock_guard lock(c.mu);
    auto key = std::make_pair(level, ring.modulus());
    auto it = c.reduced.find(key);
    if (it == c.reduced.end()) {
        const auto* t = find_table(c, level, ring.modulus_integer());
        if (!t)
            throw Error(Errc::MissingTable, "no modular polynomial of level " + std::to_string(level) +
                                                " usable mod " + std::to_string(ring.modulus()));
        it = c.reduced.emplace(key, std::make_unique<ReducedTable>(*t, ring)).first;
    }
    return *it->second;
}

Poly eval_partial(const ModularPolynomialTable& t, Elem j, const Zmod& ring)
{
    return ReducedTable(t, ring).eval_partial(j);
}

}  // namespace tgii::modpoly
