#include "tgii/tgii/json.hpp"

#include <fstream>
#include <sstream>

#include "tgii/error.hpp"

namespace tgii::core {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::ParseError, "cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const Json& j)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::ParseError, "cannot write " + path.string());
    out << dump(j);
}

Json document(const std::string& kind)
{
    return Json{{"format", format_tag}, {"kind", kind}, {"demo_only", true}};
}

void expect_kind(const Json& j, const std::string& kind)
{
    if (!j.is_object() || j.value("format", "") != format_tag)
        throw Error(Errc::ParseError, "not a tgii/1 document");
    if (j.value("kind", "") != kind)
        throw Error(Errc::ParseError, "expected a " + kind + " document, got " + j.value("kind", "?"));
}

Json integer_json(const Integer& n) { return arith::to_string(n); }

Integer integer_from(const Json& j)
{
    if (j.is_string())
        return arith::parse_integer(j.get<std::string>());
    if (j.is_number_integer())
        return arith::from_i64(j.get<std::int64_t>());
    throw Error(Errc::ParseError, "expected a decimal integer string");
}

Json to_json(const IdealClass& c)
{
    return Json{{"a", integer_json(c.a)}, {"b", integer_json(c.b)}, {"c", integer_json(c.c)}};
}

IdealClass class_from_json(const Json& j)
{
    try {
        return {integer_from(j.at("a")), integer_from(j.at("b")), integer_from(j.at("c"))};
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("class: ") + e.what());
    }
}

Json to_json(const PublicParams& pp)
{
    Json j = document("public_params");
    j["N"] = integer_json(pp.N);
    j["j0"] = integer_json(pp.j0);
    return j;
}

PublicParams public_params_from_json(const Json& j)
{
    expect_kind(j, "public_params");
    try {
        return {integer_from(j.at("N")), integer_from(j.at("j0"))};
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("public_params: ") + e.what());
    }
}

Json to_json(const PrimeRegistry& r)
{
    Json j = document("registry");
    j["used"] = r.used;
    j["excluded"] = r.excluded;
    Json pools = Json::object();
    for (const auto& [name, primes] : r.pools)
        pools[name] = primes;
    j["pools"] = pools;
    Json orient = Json::object();
    for (const auto& [ell, sign] : r.orientation)
        orient[std::to_string(ell)] = sign;
    j["orientation"] = orient;
    j["policy"] = r.policy;
    return j;
}

PrimeRegistry registry_from_json(const Json& j)
{
    expect_kind(j, "registry");
    try {
        PrimeRegistry r;
        r.used = j.at("used").get<std::set<unsigned>>();
        r.excluded = j.at("excluded").get<std::set<unsigned>>();
        for (const auto& [name, primes] : j.at("pools").items())
            r.pools[name] = primes.get<std::vector<unsigned>>();
        for (const auto& [ell, sign] : j.at("orientation").items())
            r.orientation[static_cast<unsigned>(std::stoul(ell))] = sign.get<int>();
        r.policy = j.at("policy").get<std::string>();
        return r;
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("registry: ") + e.what());
    }
}

Json to_json(const Trapdoor& td)
{
    Json j = document("trapdoor");
    j["p"] = integer_json(td.p());
    j["q"] = integer_json(td.q());
    j["D0"] = integer_json(td.discriminant().fundamental());
    Json fs = Json::array();
    for (const auto& f : td.discriminant().conductor_factors())
        fs.push_back(integer_json(f));
    j["conductor"] = fs;
    j["D"] = integer_json(td.discriminant().value());
    auto field = [](const FieldAction& f) {
        Json o;
        o["base_j"] = std::to_string(f.base_j());
        o["trace"] = integer_json(f.trace());
        o["v"] = integer_json(f.v());
        Json orient = Json::object();
        for (const auto& [ell, mu] : f.orientation())
            orient[std::to_string(ell)] = mu;
        o["orientation"] = orient;
        return o;
    };
    j["field_p"] = field(td.field_p());
    j["field_q"] = field(td.field_q());
    j["registry"] = to_json(td.registry);
    j["warnings"] = td.warnings;
    return j;
}

Trapdoor trapdoor_from_json(const Json& j)
{
    expect_kind(j, "trapdoor");
    try {
        std::vector<Integer> fs;
        for (const auto& f : j.at("conductor"))
            fs.push_back(integer_from(f));
        Discriminant d(integer_from(j.at("D0")), fs);
        auto base = [](const Json& o) { return arith::to_u64(integer_from(o.at("base_j"))); };
        Trapdoor td(integer_from(j.at("p")), integer_from(j.at("q")), d, base(j.at("field_p")),
                    base(j.at("field_q")));
        for (const char* key : {"field_p", "field_q"}) {
            const auto& f = std::string(key) == "field_p" ? td.field_p() : td.field_q();
            const auto& o = j.at(key);
            if (integer_from(o.at("trace")) != f.trace())
                throw Error(Errc::ParseError, std::string(key) + ": recorded trace does not match the base curve");
            for (const auto& [ell, mu] : o.at("orientation").items()) {
                auto it = f.orientation().find(static_cast<unsigned>(std::stoul(ell)));
                if (it == f.orientation().end() || it->second != mu.get<unsigned>())
                    throw Error(Errc::ParseError, std::string(key) + ": orientation mismatch at l = " + ell);
            }
        }
        td.registry = registry_from_json(j.at("registry"));
        td.warnings = j.at("warnings").get<std::vector<std::string>>();
        return td;
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("trapdoor: ") + e.what());
    }
}

Json to_json(const ComposableEncoding& e)
{
    Json j = document("composable_encoding");
    j["L"] = e.L;
    Json lists = Json::array();
    for (const auto& list : e.T) {
        Json l = Json::array();
        for (const auto& x : list)
            l.push_back(integer_json(x));
        lists.push_back(l);
    }
    j["T"] = lists;
    j["degree"] = integer_json(e.degree());
    return j;
}

ComposableEncoding encoding_from_json(const Json& j)
{
    expect_kind(j, "composable_encoding");
    try {
        ComposableEncoding e;
        e.L = j.at("L").get<std::vector<unsigned>>();
        for (const auto& list : j.at("T")) {
            std::vector<Integer> l;
            for (const auto& x : list)
                l.push_back(integer_from(x));
            e.T.push_back(std::move(l));
        }
        if (e.L.size() != e.T.size())
            throw Error(Errc::ParseError, "composable_encoding: L and T differ in length");
        return e;
    } catch (const Json::exception& ex) {
        throw Error(Errc::ParseError, std::string("composable_encoding: ") + ex.what());
    }
}

Json to_json(const Ladder& l)
{
    Json j = document("ladder");
    j["ell"] = l.ell;
    Json js = Json::array();
    for (const auto& x : l.js)
        js.push_back(integer_json(x));
    j["js"] = js;
    return j;
}

Ladder ladder_from_json(const Json& j)
{
    expect_kind(j, "ladder");
    try {
        Ladder l;
        l.ell = j.at("ell").get<unsigned>();
        for (const auto& x : j.at("js"))
            l.js.push_back(integer_from(x));
        return l;
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("ladder: ") + e.what());
    }
}

}  // namespace tgii::core
