#include <doctest.h>

#include <functional>
#include <random>

#include "tgii/apps/apps.hpp"
#include "tgii/attacks/attacks.hpp"
#include "tgii/error.hpp"

using namespace tgii;
using namespace tgii::apps;

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

const core::Generated& app()
{
    static const core::Generated g = core::gen(core::app_config());
    return g;
}

const RsaFdh& ds()
{
    static const RsaFdh k = RsaFdh::generate(11, 768);
    return k;
}

Bytes text(const std::string& s) { return Bytes(s.begin(), s.end()); }

DtsSignature tamper(DtsSignature s, std::mt19937_64& rng, const Integer& n)
{
    std::size_t i = rng() % s.enc.T.size();
    std::size_t k = rng() % s.enc.T[i].size();
    s.enc.T[i][k] = arith::mod(s.enc.T[i][k] + 1 + Integer(static_cast<unsigned long>(rng() % 1000)), n);
    return s;
}

}  // namespace

TEST_SUITE("apps")
{
    TEST_CASE("rsa full-domain hash")
    {
        const auto& k = ds();
        Integer s = k.sign("node 1");
        CHECK(k.verify("node 1", s));
        CHECK(!k.verify("node 2", s));
        CHECK(!k.verify("node 1", s + 1));
        auto pub = RsaFdh::from_json(k.public_json());
        CHECK(pub.verify("node 1", s));
        CHECK(code_of([&] { pub.sign("x"); }) == Errc::Unsupported);
        CHECK(RsaFdh::from_json(k.secret_json()).sign("node 1") == s);
        CHECK(from_hex(to_hex(Bytes{0, 1, 171, 255})) == Bytes{0, 1, 171, 255});
        CHECK(code_of([] { from_hex("abc"); }) == Errc::ParseError);
    }

    TEST_CASE("dts chain of three nodes")
    {
        const auto& g = app();
        DtsMaster m(g.trapdoor, ds());
        std::mt19937_64 rng(3);
        for (unsigned i = 1; i <= 3; ++i)
            m.certify(i, rng);
        auto s12 = m.sign(1, 2), s23 = m.sign(2, 3);
        auto s13 = dts_comp(g.pp, s12, s23);
        CHECK(s13.src == 1);
        CHECK(s13.dst == 3);
        CHECK(dts_accepts(m.pub(), s12));
        CHECK(dts_accepts(m.pub(), s23));
        CHECK(dts_accepts(m.pub(), s13));
        CHECK(code_of([&] { dts_comp(g.pp, s12, s12); }) == Errc::NotConsecutive);
        CHECK(code_of([&] { dts_comp(g.pp, s23, s12); }) == Errc::NotConsecutive);
        // a composed signature is not a signature on a different edge
        DtsSignature wrong = s13;
        wrong.dst = 2;
        CHECK(!dts_accepts(m.pub(), wrong));
        CHECK(code_of([&] { dts_ver(m.pub(), tamper(s12, rng, g.pp.N)); }) == Errc::Reject);
        // certificates
        DtsPublic forged = m.pub();
        forged.nodes[3].cert += 1;
        CHECK(!dts_accepts(forged, s23));
        forged = m.pub();
        forged.nodes[2].pk = forged.nodes[3].pk;
        CHECK(!dts_accepts(forged, s12));
        // waiting signatures and edge direction
        CHECK(code_of([&] { m.sign(3, 4); }) == Errc::Unsupported);
        CHECK(code_of([&] { m.sign(2, 1); }) == Errc::InvalidArgument);
        CHECK(code_of([&] { m.certify(2, rng); }) == Errc::ConflictError);
        // the direct shortcut is published under the policy; the attack has no
        // coprime triple to work on
        auto direct = m.sign(1, 3);
        CHECK(dts_accepts(m.pub(), direct));
        CHECK(code_of([&] { attacks::parallelogram(g.pp, s12.enc, s23.enc, direct.enc); }) ==
              Errc::NotApplicable);
    }

    TEST_CASE("dts compression")
    {
        const auto& g = app();
        DtsMaster m(g.trapdoor, ds());
        std::mt19937_64 rng(4);
        for (unsigned i = 1; i <= 4; ++i)
            m.certify(i, rng);
        auto s = dts_comp(g.pp, dts_comp(g.pp, m.sign(1, 2), m.sign(2, 3)), m.sign(3, 4));
        auto direct = m.sign(1, 4);
        auto c = dts_compress(m.pub(), s);
        auto cd = dts_compress(m.pub(), direct);
        std::size_t pk_steps = 0;
        for (const auto& list : m.pub().nodes.at(1).pk.T)
            pk_steps += list.size();
        CHECK(c.path.size() == pk_steps + 1);
        CHECK(cd.path.size() == c.path.size());
        CHECK(c.j == cd.j);
        auto check = dts_ver_compressed(m.pub(), c);
        CHECK(check.endpoint_ok);
        CHECK(!check.proof_verified);
        CHECK(!check.warning.empty());
        CHECK(c.proof.at("verified") == false);
        auto bad = c;
        bad.path.back() += 1;
        CHECK(!dts_ver_compressed(m.pub(), bad).endpoint_ok);
        CHECK(to_json(c).at("kind") == "dts_compressed");
    }

    TEST_CASE("dts five-node dag")
    {
        const auto& g = app();
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 3; ++trial) {
            DtsMaster m(g.trapdoor, ds());
            for (unsigned i = 1; i <= 5; ++i)
                m.certify(i, rng);
            std::map<std::pair<unsigned, unsigned>, DtsSignature> sig;
            std::vector<DtsSignature> all;
            for (unsigned i = 1; i <= 5; ++i)
                for (unsigned k = i + 1; k <= 5; ++k)
                    if (k == i + 1 || rng() % 2) {
                        sig.emplace(std::make_pair(i, k), m.sign(i, k));
                        all.push_back(sig.at({i, k}));
                    }
            // closure by consecutive composition
            auto closure = sig;
            for (unsigned len = 2; len <= 4; ++len)
                for (const auto& [e1, s1] : closure)
                    for (const auto& [e2, s2] : sig)
                        if (e1.second == e2.first && !closure.count({e1.first, e2.second}))
                            closure.emplace(std::make_pair(e1.first, e2.second), dts_comp(g.pp, s1, s2));
            CHECK(closure.size() == 10);
            for (const auto& [e, s] : closure)
                CHECK(dts_accepts(m.pub(), s));
            for (const auto& t : dts_policy_triples(m.pub(), all)) {
                INFO(t.label, " ", t.a.L.size(), " ", t.b.L.size(), " ", t.c.L.size());
                CHECK(code_of([&] { attacks::parallelogram(g.pp, t.a, t.b, t.c); }) == Errc::NotApplicable);
            }
            auto h = dts_hygiene(m.pub(), all);
            CHECK(h.relations == all.size());
            CHECK(h.relations < h.primes);
        }
    }

    TEST_CASE("dts state round trip")
    {
        const auto& g = app();
        DtsMaster m(g.trapdoor, ds());
        std::mt19937_64 rng(6);
        m.certify(1, rng);
        m.certify(2, rng);
        auto back = DtsMaster::from_json(m.to_json());
        auto s = back.sign(1, 2);
        auto pub = dts_public_from_json(to_json(back.pub()));
        CHECK(dts_accepts(pub, dts_signature_from_json(to_json(s))));
        CHECK(back.registry().used.count(s.enc.L.back()));
        CHECK(!m.registry().used.count(s.enc.L.back()));
    }

    TEST_CASE("broadcast encryption with three users")
    {
        const auto& g = app();
        std::mt19937_64 rng(7);
        BeMaster be(g.trapdoor, rng);
        std::vector<BeSecretKey> sk;
        for (unsigned u = 1; u <= 3; ++u)
            sk.push_back(be.add_user(u, rng));
        const Bytes msg = text("attack at dawn");
        auto ct = be.encrypt({2, 1}, msg, text("n1"));
        CHECK(ct.gamma == std::vector<unsigned>{1, 2});
        CHECK(ct.payload != msg);
        for (int u : {0, 1}) {
            CHECK(be_key_j(be.pub(), sk[u], ct.gamma) == be.key_j({1, 2}));
            CHECK(be_dec(be.pub(), sk[u], ct) == msg);
        }
        CHECK(code_of([&] { be_dec(be.pub(), sk[2], ct); }) == Errc::KeyMismatch);
        // one recipient: K = x_1 s from SK_1 alone
        auto one = be.encrypt({1}, msg, text("n2"));
        CHECK(be_key_j(be.pub(), sk[0], {1}) == core::convert(g.pp, sk[0].sk));
        CHECK(be_dec(be.pub(), sk[0], one) == msg);
        CHECK(code_of([&] { be.encrypt({}, msg, text("n3")); }) == Errc::EmptyRecipientSet);
        BeCiphertext empty = ct;
        empty.gamma.clear();
        CHECK(code_of([&] { be_dec(be.pub(), sk[0], empty); }) == Errc::EmptyRecipientSet);
        // tampered payload
        BeCiphertext bad = ct;
        bad.payload[0] ^= 1;
        CHECK(code_of([&] { be_dec(be.pub(), sk[0], bad); }) == Errc::KeyMismatch);
        // serialization
        auto pub = be_public_from_json(to_json(be.pub()));
        auto k1 = be_secret_from_json(to_json(sk[0]));
        CHECK(be_dec(pub, k1, be_ciphertext_from_json(to_json(ct))) == msg);
        auto back = BeMaster::from_json(be.to_json());
        CHECK(back.key_j({1, 2}) == be.key_j({1, 2}));
    }

    TEST_CASE("broadcast encryption over all subsets of four users")
    {
        const auto& g = app();
        std::mt19937_64 rng(8);
        BeMaster be(g.trapdoor, rng);
        std::vector<BeSecretKey> sk;
        for (unsigned u = 1; u <= 4; ++u)
            sk.push_back(be.add_user(u, rng));
        const Bytes msg = text("subset");
        for (unsigned mask = 1; mask < 16; ++mask) {
            std::vector<unsigned> gamma;
            for (unsigned u = 1; u <= 4; ++u)
                if (mask >> (u - 1) & 1)
                    gamma.push_back(u);
            auto ct = be.encrypt(gamma, msg, Bytes{static_cast<std::uint8_t>(mask)});
            for (unsigned u = 1; u <= 4; ++u) {
                if (mask >> (u - 1) & 1)
                    CHECK(be_dec(be.pub(), sk[u - 1], ct) == msg);
                else
                    CHECK(code_of([&] { be_dec(be.pub(), sk[u - 1], ct); }) == Errc::KeyMismatch);
            }
        }
        for (const auto& t : be_policy_triples(be.pub(), sk))
            CHECK(code_of([&] { attacks::parallelogram(g.pp, t.a, t.b, t.c); }) == Errc::NotApplicable);
        CHECK(be_policy_triples(be.pub(), sk).size() == 12);
        auto h = be_hygiene(be.pub(), sk);
        CHECK(h.relations == 3);
        CHECK(h.primes == 13);
    }

    TEST_CASE("relation hygiene counting")
    {
        ComposableEncoding a{{3, 5}, {{1}, {2, 3}}}, b{{7}, {{4}}}, c{{3, 5, 7}, {{1}, {2, 3}, {4}}};
        auto h = relation_hygiene({a, b, c}, {{1, 1, -1}});
        CHECK(h.relations == 0);  // the relation is trivial on exponents
        CHECK(h.primes == 3);
        h = relation_hygiene({a, b}, {{1, 0}, {0, 1}, {1, 1}});
        CHECK(h.relations == 2);
        CHECK(code_of([&] { relation_hygiene({a}, {{1, 1}}); }) == Errc::InvalidArgument);
    }
}
