#include "tgii/apps/apps.hpp"

#include <algorithm>
#include <set>

#include <gmpxx.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "tgii/error.hpp"
#include "tgii/modpoly/modpoly.hpp"

namespace tgii::apps {

namespace {

constexpr std::size_t mac_key_size = 32;

Bytes digest(const EVP_MD* md, std::string_view data, std::size_t out_len)
{
    Bytes out(out_len);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    bool ok = ctx && EVP_DigestInit_ex(ctx.get(), md, nullptr) == 1 &&
              EVP_DigestUpdate(ctx.get(), data.data(), data.size()) == 1;
    if (ok && EVP_MD_get_flags(md) & EVP_MD_FLAG_XOF)
        ok = EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) == 1;
    else if (ok)
        ok = EVP_DigestFinal_ex(ctx.get(), out.data(), nullptr) == 1;
    if (!ok)
        throw Error(Errc::Failure, "digest failed");
    return out;
}

Integer from_bytes(const Bytes& b)
{
    Integer r;
    mpz_import(r.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
    return r;
}

IdealClass random_nontrivial(const core::Trapdoor& td, std::mt19937_64& rng)
{
    const IdealClass id = classgroup::identity(td.discriminant().value());
    for (;;) {
        IdealClass x = td.group().random_odd(rng);
        if (!(x == id))
            return x;
    }
}

core::GenerationSet forms_of(const core::Trapdoor& td, const core::PrimeRegistry& reg,
                             const std::vector<unsigned>& primes)
{
    core::GenerationSet s;
    for (unsigned ell : primes)
        s.push_back(core::registry_form(td, reg, ell));
    return s;
}

unsigned pool_prime(const core::Trapdoor& td, core::PrimeRegistry& reg, const std::string& name)
{
    auto it = reg.pools.find(name);
    if (it == reg.pools.end() || it->second.empty())
        core::reserve_pool(td, reg, name, 1);
    return reg.pools.at(name).front();
}

}  // namespace

std::string to_hex(const Bytes& b)
{
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (auto c : b) {
        s.push_back(digits[c >> 4]);
        s.push_back(digits[c & 15]);
    }
    return s;
}

Bytes from_hex(std::string_view s)
{
    auto val = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    };
    if (s.size() % 2)
        throw Error(Errc::ParseError, "odd-length hex string");
    Bytes out;
    for (std::size_t i = 0; i < s.size(); i += 2) {
        int hi = val(s[i]), lo = val(s[i + 1]);
        if (hi < 0 || lo < 0)
            throw Error(Errc::ParseError, "bad hex digit");
        out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
    }
    return out;
}

// ---- RSA-FDH ----

RsaFdh::RsaFdh(Integer n, Integer e, Integer d) : n_(std::move(n)), e_(std::move(e)), d_(std::move(d)) {}

RsaFdh RsaFdh::generate(std::uint64_t seed, unsigned bits)
{
    gmp_randclass r(gmp_randinit_mt);
    r.seed(static_cast<unsigned long>(seed));
    const Integer e = 65537;
    auto prime = [&] {
        for (;;) {
            Integer c = r.get_z_bits(bits / 2);
            mpz_setbit(c.get_mpz_t(), bits / 2 - 1);
            Integer p;
            mpz_nextprime(p.get_mpz_t(), c.get_mpz_t());
            if (arith::gcd(Integer(p - 1), e) == 1)
                return p;
        }
    };
    Integer p = prime(), q = prime();
    while (q == p)
        q = prime();
    Integer phi = (p - 1) * (q - 1), d;
    mpz_invert(d.get_mpz_t(), e.get_mpz_t(), phi.get_mpz_t());
    return RsaFdh(p * q, e, d);
}

Integer RsaFdh::hash(std::string_view message) const
{
    const std::size_t need = (mpz_sizeinbase(n_.get_mpz_t(), 2) + 128 + 7) / 8;
    Bytes stream;
    for (std::uint32_t ctr = 0; stream.size() < need; ++ctr) {
        std::string block;
        for (int s = 24; s >= 0; s -= 8)
            block.push_back(static_cast<char>((ctr >> s) & 0xff));
        block.append(message);
        auto h = digest(EVP_sha256(), block, 32);
        stream.insert(stream.end(), h.begin(), h.end());
    }
    stream.resize(need);
    return arith::mod(from_bytes(stream), n_);
}

Integer RsaFdh::sign(std::string_view message) const
{
    if (d_ == 0)
        throw Error(Errc::Unsupported, "public RSA key cannot sign");
    Integer s;
    Integer h = hash(message);
    mpz_powm(s.get_mpz_t(), h.get_mpz_t(), d_.get_mpz_t(), n_.get_mpz_t());
    return s;
}

bool RsaFdh::verify(std::string_view message, const Integer& sig) const
{
    if (sig < 0 || sig >= n_)
        return false;
    Integer m;
    mpz_powm(m.get_mpz_t(), sig.get_mpz_t(), e_.get_mpz_t(), n_.get_mpz_t());
    return m == hash(message);
}

Json RsaFdh::public_json() const
{
    Json j = core::document("rsa_fdh_public");
    j["scheme"] = name();
    j["n"] = core::integer_json(n_);
    j["e"] = core::integer_json(e_);
    return j;
}

Json RsaFdh::secret_json() const
{
    Json j = core::document("rsa_fdh_secret");
    j["scheme"] = name();
    j["n"] = core::integer_json(n_);
    j["e"] = core::integer_json(e_);
    j["d"] = core::integer_json(d_);
    return j;
}

RsaFdh RsaFdh::from_json(const Json& j)
{
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "rsa_fdh_public")
            return RsaFdh(core::integer_from(j.at("n")), core::integer_from(j.at("e")));
        core::expect_kind(j, "rsa_fdh_secret");
        return RsaFdh(core::integer_from(j.at("n")), core::integer_from(j.at("e")), core::integer_from(j.at("d")));
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("rsa key: ") + e.what());
    }
}

// ---- DTS ----

DtsMaster::DtsMaster(const core::Trapdoor& td, RsaFdh ds) : td_(td), registry_(td.registry), ds_(std::move(ds))
{
    pub_.pp = td_.public_params();
    pub_.ds = ds_.public_json();
    pool_prime(td_, registry_, "dts.common");
}

core::GenerationSet DtsMaster::forms(const std::vector<unsigned>& primes) const { return forms_of(td_, registry_, primes); }

const DtsNode& DtsMaster::certify(unsigned id, std::mt19937_64& rng)
{
    if (pub_.nodes.count(id))
        throw Error(Errc::ConflictError, "node " + std::to_string(id) + " is already certified");
    const std::string tag = std::to_string(id);
    unsigned common = pool_prime(td_, registry_, "dts.common");
    unsigned dst = pool_prime(td_, registry_, "dts.dst." + tag);
    pool_prime(td_, registry_, "dts.src." + tag);
    unsigned fresh = core::fresh_prime(td_, registry_);
    // node classes are pairwise distinct, so no edge signature is empty
    IdealClass x;
    bool clash = true;
    while (clash) {
        x = random_nontrivial(td_, rng);
        clash = false;
        for (const auto& [other, y] : x_)
            clash = clash || y == x;
    }
    DtsNode node{id, core::trap_sam(td_, x, forms({common, dst, fresh}), registry_), 0};
    node.cert = ds_.sign(dts_cert_message(node));
    x_[id] = x;
    return pub_.nodes[id] = std::move(node);
}

DtsSignature DtsMaster::sign(unsigned i, unsigned k)
{
    if (i >= k)
        throw Error(Errc::InvalidArgument, "edges run from a lower to a higher node");
    if (!x_.count(i) || !x_.count(k))
        throw Error(Errc::Unsupported, "waiting signatures are not supported: certify both nodes first");
    unsigned src = pool_prime(td_, registry_, "dts.src." + std::to_string(i));
    unsigned dst = pool_prime(td_, registry_, "dts.dst." + std::to_string(k));
    unsigned fresh = core::fresh_prime(td_, registry_);
    IdealClass y = classgroup::compose(classgroup::inverse(x_.at(i)), x_.at(k));
    return {i, k, core::trap_sam(td_, y, forms({src, dst, fresh}), registry_)};
}

std::string dts_cert_message(const DtsNode& node)
{
    return "tgii-dts-node|" + std::to_string(node.id) + "|" + core::dump(core::to_json(node.pk));
}

DtsSignature dts_comp(const PublicParams& pp, const DtsSignature& a, const DtsSignature& b)
{
    if (a.dst != b.src)
        throw Error(Errc::NotConsecutive, "edge " + std::to_string(a.src) + "->" + std::to_string(a.dst) +
                                              " does not end where " + std::to_string(b.src) + "->" +
                                              std::to_string(b.dst) + " starts");
    auto c = core::comp(pp, a.enc, b.enc);
    if (!c)
        throw Error(Errc::Failure, "⊥: the two signatures share a degree");
    return {a.src, b.dst, *c};
}

void dts_ver(const DtsPublic& pub, const DtsSignature& sig)
{
    auto reject = [](const std::string& why) { throw Error(Errc::Reject, why); };
    auto si = pub.nodes.find(sig.src), sk = pub.nodes.find(sig.dst);
    if (si == pub.nodes.end() || sk == pub.nodes.end())
        reject("unknown node");
    if (sig.src >= sig.dst)
        reject("edge does not run forward");
    const RsaFdh ds = RsaFdh::from_json(pub.ds);
    for (const auto* node : {&si->second, &sk->second})
        if (!ds.verify(dts_cert_message(*node), node->cert))
            reject("certificate of node " + std::to_string(node->id) + " is invalid");
    if (!sig.enc.empty() && !core::well_formed(pub.pp, sig.enc))
        reject("signature is not a well-formed encoding");
    auto both = core::comp(pub.pp, si->second.pk, sig.enc);
    if (!both)
        reject("signature shares a degree with PK(" + std::to_string(sig.src) + ")");
    try {
        if (core::convert(pub.pp, *both) != core::convert(pub.pp, sk->second.pk))
            reject("convert(PK(i) o sigma) differs from convert(PK(k))");
    } catch (const Error& e) {
        if (e.code() == Errc::Reject)
            throw;
        reject(std::string("convert failed: ") + e.what());
    }
}

bool dts_accepts(const DtsPublic& pub, const DtsSignature& sig)
{
    try {
        dts_ver(pub, sig);
        return true;
    } catch (const Error& e) {
        if (e.code() == Errc::Reject)
            return false;
        throw;
    }
}

CompressedSignature dts_compress(const DtsPublic& pub, const DtsSignature& sig)
{
    const auto& pk = pub.nodes.at(sig.src).pk;
    auto pc = core::partial_convert(pub.pp, sig.enc, pk);
    CompressedSignature c;
    c.src = sig.src;
    c.dst = sig.dst;
    c.j = pc.jx;
    c.path = pc.path;
    for (std::size_t i = 0; i < pk.L.size(); ++i)
        c.degrees.insert(c.degrees.end(), pk.T[i].size(), pk.L[i]);
    c.proof = {{"kind", "snarg_placeholder"},
               {"verified", false},
               {"note", "stands in for a succinct argument that j = convert(sigma); not checked, insecure"}};
    return c;
}

CompressedCheck dts_ver_compressed(const DtsPublic& pub, const CompressedSignature& c)
{
    CompressedCheck out;
    out.warning = "proof placeholder is not verified; the compressed signature is not secure";
    auto sk = pub.nodes.find(c.dst);
    if (sk == pub.nodes.end() || !pub.nodes.count(c.src) || c.path.size() != c.degrees.size() + 1 ||
        c.path.front() != c.j)
        return out;
    arith::Zmod ring(pub.pp.N);
    for (std::size_t i = 0; i < c.degrees.size(); ++i)
        if (modpoly::reduced(c.degrees[i], ring).eval(ring.reduce(c.path[i]), ring.reduce(c.path[i + 1])) != 0)
            return out;
    out.endpoint_ok = c.path.back() == core::convert(pub.pp, sk->second.pk);
    return out;
}

// ---- BE ----

namespace {

struct KeyStream {
    Bytes mac_key;
    Bytes stream;
};

KeyStream derive(const Integer& j, const std::vector<unsigned>& gamma, const Bytes& nonce, std::size_t len)
{
    std::string material = "tgii-be|" + j.get_str() + "|";
    for (std::size_t i = 0; i < gamma.size(); ++i)
        material += (i ? "," : "") + std::to_string(gamma[i]);
    material += "|" + to_hex(nonce);
    Bytes out = digest(EVP_shake256(), material, mac_key_size + len);
    return {Bytes(out.begin(), out.begin() + mac_key_size), Bytes(out.begin() + mac_key_size, out.end())};
}

Bytes checksum(const Bytes& key, const BeCiphertext& ct)
{
    Bytes data = ct.nonce;
    for (unsigned g : ct.gamma)
        for (int s = 24; s >= 0; s -= 8)
            data.push_back(static_cast<std::uint8_t>((g >> s) & 0xff));
    data.insert(data.end(), ct.payload.begin(), ct.payload.end());
    Bytes out(EVP_MAX_MD_SIZE);
    unsigned len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(), out.data(), &len))
        throw Error(Errc::Failure, "HMAC failed");
    out.resize(len);
    return out;
}

std::vector<unsigned> normalized(std::vector<unsigned> gamma)
{
    if (gamma.empty())
        throw Error(Errc::EmptyRecipientSet, "no recipients");
    std::sort(gamma.begin(), gamma.end());
    gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());
    return gamma;
}

}  // namespace

BeMaster::BeMaster(const core::Trapdoor& td, std::mt19937_64& rng) : td_(td), registry_(td.registry)
{
    pub_.pp = td_.public_params();
    pool_prime(td_, registry_, "be.msk");
    s_ = random_nontrivial(td_, rng);
}

BeSecretKey BeMaster::add_user(unsigned id, std::mt19937_64& rng)
{
    if (x_.count(id))
        throw Error(Errc::ConflictError, "user " + std::to_string(id) + " already exists");
    unsigned su = pool_prime(td_, registry_, "be.user." + std::to_string(id));
    unsigned msk = pool_prime(td_, registry_, "be.msk");
    IdealClass x, sx;
    const IdealClass id_class = classgroup::identity(td_.discriminant().value());
    do {
        x = random_nontrivial(td_, rng);
        sx = classgroup::compose(s_, x);
    } while (sx == id_class);
    unsigned f1 = core::fresh_prime(td_, registry_);
    pub_.pk[id] = core::trap_sam(td_, x, forms_of(td_, registry_, {su, f1}), registry_);
    unsigned f2 = core::fresh_prime(td_, registry_);
    BeSecretKey sk{id, core::trap_sam(td_, sx, forms_of(td_, registry_, {su, msk, f2}), registry_)};
    x_[id] = x;
    sk_[id] = sk;
    return sk;
}

Integer BeMaster::key_j(const std::vector<unsigned>& gamma) const
{
    IdealClass k = s_;
    for (unsigned u : normalized(gamma)) {
        auto it = x_.find(u);
        if (it == x_.end())
            throw Error(Errc::InvalidArgument, "unknown user " + std::to_string(u));
        k = classgroup::compose(k, it->second);
    }
    return td_.canonical(k);
}

BeCiphertext BeMaster::encrypt(const std::vector<unsigned>& gamma, const Bytes& message, const Bytes& nonce) const
{
    BeCiphertext ct;
    ct.gamma = normalized(gamma);
    ct.nonce = nonce;
    auto ks = derive(key_j(ct.gamma), ct.gamma, nonce, message.size());
    ct.payload = message;
    for (std::size_t i = 0; i < message.size(); ++i)
        ct.payload[i] ^= ks.stream[i];
    ct.checksum = checksum(ks.mac_key, ct);
    return ct;
}

Integer be_key_j(const BePublic& pub, const BeSecretKey& sk, const std::vector<unsigned>& gamma)
{
    ComposableEncoding enc = sk.sk;
    for (unsigned u : normalized(gamma)) {
        if (u == sk.id)
            continue;
        auto it = pub.pk.find(u);
        if (it == pub.pk.end())
            throw Error(Errc::InvalidArgument, "unknown user " + std::to_string(u));
        auto c = core::comp(pub.pp, it->second, enc);
        if (!c)
            throw Error(Errc::Failure, "⊥: PK(" + std::to_string(u) + ") shares a degree with the key so far");
        enc = std::move(*c);
    }
    return core::convert(pub.pp, enc);
}

Bytes be_dec(const BePublic& pub, const BeSecretKey& sk, const BeCiphertext& ct)
{
    auto gamma = normalized(ct.gamma);
    auto ks = derive(be_key_j(pub, sk, gamma), gamma, ct.nonce, ct.payload.size());
    Bytes expect = checksum(ks.mac_key, ct);
    if (expect.size() != ct.checksum.size() || CRYPTO_memcmp(expect.data(), ct.checksum.data(), expect.size()) != 0)
        throw Error(Errc::KeyMismatch, "checksum mismatch: user " + std::to_string(sk.id) +
                                           " does not hold the key for this recipient set");
    Bytes out = ct.payload;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] ^= ks.stream[i];
    return out;
}

// ---- policy regression ----

std::vector<PolicyTriple> dts_policy_triples(const DtsPublic& pub, const std::vector<DtsSignature>& sigs)
{
    std::map<std::pair<unsigned, unsigned>, const DtsSignature*> by_edge;
    for (const auto& s : sigs)
        by_edge[{s.src, s.dst}] = &s;
    std::vector<PolicyTriple> out;
    for (const auto& s : sigs) {
        const std::string e = std::to_string(s.src) + "," + std::to_string(s.dst);
        out.push_back({"PK(" + std::to_string(s.src) + ") o sigma(" + e + ") = PK(" + std::to_string(s.dst) + ")",
                       pub.nodes.at(s.src).pk, s.enc, pub.nodes.at(s.dst).pk});
    }
    for (const auto& [ij, a] : by_edge)
        for (const auto& [jk, b] : by_edge) {
            if (ij.second != jk.first)
                continue;
            auto ik = by_edge.find({ij.first, jk.second});
            if (ik == by_edge.end())
                continue;
            out.push_back({"sigma(" + std::to_string(ij.first) + "," + std::to_string(ij.second) + ") o sigma(" +
                               std::to_string(jk.first) + "," + std::to_string(jk.second) + ")",
                           a->enc, b->enc, ik->second->enc});
        }
    return out;
}

std::vector<PolicyTriple> be_policy_triples(const BePublic& pub, const std::vector<BeSecretKey>& sks)
{
    std::vector<PolicyTriple> out;
    for (const auto& ski : sks)
        for (const auto& skk : sks) {
            if (ski.id == skk.id)
                continue;
            const auto& pki = pub.pk.at(ski.id);
            const auto& pkk = pub.pk.at(skk.id);
            auto c = core::comp(pub.pp, pkk, ski.sk);
            if (!c)
                throw Error(Errc::Failure, "PK and SK of distinct users share a degree");
            out.push_back({"PK(" + std::to_string(ski.id) + ") o SK(" + std::to_string(skk.id) + ") = PK(" +
                               std::to_string(skk.id) + ") o SK(" + std::to_string(ski.id) + ")",
                           pki, skk.sk, *c});
        }
    return out;
}

HygieneCount relation_hygiene(const std::vector<ComposableEncoding>& published,
                              const std::vector<std::vector<int>>& relations)
{
    std::set<unsigned> primes;
    for (const auto& e : published)
        primes.insert(e.L.begin(), e.L.end());
    std::vector<unsigned> index(primes.begin(), primes.end());
    auto column = [&](unsigned ell) {
        return static_cast<std::size_t>(std::lower_bound(index.begin(), index.end(), ell) - index.begin());
    };
    std::vector<std::vector<mpq_class>> rows;
    for (const auto& rel : relations) {
        if (rel.size() != published.size())
            throw Error(Errc::InvalidArgument, "relation length differs from the published list");
        std::vector<mpq_class> row(index.size(), 0);
        for (std::size_t i = 0; i < rel.size(); ++i)
            for (std::size_t l = 0; l < published[i].L.size(); ++l)
                row[column(published[i].L[l])] +=
                    rel[i] * static_cast<long>(published[i].T[l].size());
        rows.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < index.size() && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0)
            ++piv;
        if (piv == rows.size())
            continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0)
                continue;
            mpq_class f = rows[r][col] / rows[rank][col];
            for (std::size_t c = col; c < index.size(); ++c)
                rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return {rank, index.size()};
}

HygieneCount dts_hygiene(const DtsPublic& pub, const std::vector<DtsSignature>& sigs)
{
    std::vector<ComposableEncoding> published;
    std::map<unsigned, std::size_t> at;
    for (const auto& [id, node] : pub.nodes) {
        at[id] = published.size();
        published.push_back(node.pk);
    }
    for (const auto& s : sigs)
        published.push_back(s.enc);
    std::vector<std::vector<int>> rels;
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        std::vector<int> r(published.size(), 0);
        r[at.at(sigs[i].src)] += 1;
        r[pub.nodes.size() + i] += 1;
        r[at.at(sigs[i].dst)] -= 1;
        rels.push_back(std::move(r));
    }
    return relation_hygiene(published, rels);
}

HygieneCount be_hygiene(const BePublic& pub, const std::vector<BeSecretKey>& sks)
{
    std::vector<ComposableEncoding> published;
    for (const auto& sk : sks)
        published.push_back(pub.pk.at(sk.id));
    for (const auto& sk : sks)
        published.push_back(sk.sk);
    const std::size_t n = sks.size();
    std::vector<std::vector<int>> rels;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k) {
            std::vector<int> r(2 * n, 0);
            r[i] += 1;
            r[n + k] += 1;
            r[k] -= 1;
            r[n + i] -= 1;
            rels.push_back(std::move(r));
        }
    return relation_hygiene(published, rels);
}

// ---- serialization ----

Json to_json(const DtsPublic& pub)
{
    Json j = core::document("dts_public");
    j["public_params"] = core::to_json(pub.pp);
    j["ds"] = pub.ds;
    Json nodes = Json::array();
    for (const auto& [id, node] : pub.nodes)
        nodes.push_back({{"id", id}, {"pk", core::to_json(node.pk)}, {"cert", core::integer_json(node.cert)}});
    j["nodes"] = nodes;
    return j;
}

DtsPublic dts_public_from_json(const Json& j)
{
    core::expect_kind(j, "dts_public");
    try {
        DtsPublic pub;
        pub.pp = core::public_params_from_json(j.at("public_params"));
        pub.ds = j.at("ds");
        for (const auto& n : j.at("nodes")) {
            DtsNode node{n.at("id").get<unsigned>(), core::encoding_from_json(n.at("pk")),
                         core::integer_from(n.at("cert"))};
            pub.nodes[node.id] = std::move(node);
        }
        return pub;
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("dts_public: ") + e.what());
    }
}

Json to_json(const DtsSignature& s)
{
    Json j = core::document("dts_signature");
    j["src"] = s.src;
    j["dst"] = s.dst;
    j["encoding"] = core::to_json(s.enc);
    return j;
}

DtsSignature dts_signature_from_json(const Json& j)
{
    core::expect_kind(j, "dts_signature");
    try {
        return {j.at("src").get<unsigned>(), j.at("dst").get<unsigned>(), core::encoding_from_json(j.at("encoding"))};
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("dts_signature: ") + e.what());
    }
}

Json to_json(const CompressedSignature& c)
{
    Json j = core::document("dts_compressed");
    j["src"] = c.src;
    j["dst"] = c.dst;
    j["j"] = core::integer_json(c.j);
    j["degrees"] = c.degrees;
    Json path = Json::array();
    for (const auto& x : c.path)
        path.push_back(core::integer_json(x));
    j["path"] = path;
    j["proof"] = c.proof;
    return j;
}

Json DtsMaster::to_json() const
{
    Json j = core::document("dts_master");
    j["trapdoor"] = core::to_json(td_);
    j["registry"] = core::to_json(registry_);
    j["ds"] = ds_.secret_json();
    j["public"] = apps::to_json(pub_);
    Json xs = Json::object();
    for (const auto& [id, x] : x_)
        xs[std::to_string(id)] = core::to_json(x);
    j["x"] = xs;
    return j;
}

DtsMaster DtsMaster::from_json(const Json& j)
{
    core::expect_kind(j, "dts_master");
    try {
        DtsMaster m(core::trapdoor_from_json(j.at("trapdoor")), RsaFdh::from_json(j.at("ds")));
        m.registry_ = core::registry_from_json(j.at("registry"));
        m.pub_ = dts_public_from_json(j.at("public"));
        for (const auto& [k, v] : j.at("x").items())
            m.x_[static_cast<unsigned>(std::stoul(k))] = core::class_from_json(v);
        return m;
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("dts_master: ") + e.what());
    }
}

Json to_json(const BePublic& pub)
{
    Json j = core::document("be_public");
    j["public_params"] = core::to_json(pub.pp);
    j["xof"] = pub.xof;
    j["mac"] = pub.mac;
    Json pks = Json::object();
    for (const auto& [id, pk] : pub.pk)
        pks[std::to_string(id)] = core::to_json(pk);
    j["pk"] = pks;
    return j;
}

BePublic be_public_from_json(const Json& j)
{
    core::expect_kind(j, "be_public");
    try {
        BePublic pub;
        pub.pp = core::public_params_from_json(j.at("public_params"));
        pub.xof = j.at("xof").get<std::string>();
        pub.mac = j.at("mac").get<std::string>();
        for (const auto& [k, v] : j.at("pk").items())
            pub.pk[static_cast<unsigned>(std::stoul(k))] = core::encoding_from_json(v);
        return pub;
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("be_public: ") + e.what());
    }
}

Json to_json(const BeSecretKey& k)
{
    Json j = core::document("be_secret_key");
    j["id"] = k.id;
    j["sk"] = core::to_json(k.sk);
    return j;
}

BeSecretKey be_secret_from_json(const Json& j)
{
    core::expect_kind(j, "be_secret_key");
    try {
        return {j.at("id").get<unsigned>(), core::encoding_from_json(j.at("sk"))};
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("be_secret_key: ") + e.what());
    }
}

Json to_json(const BeCiphertext& c)
{
    Json j = core::document("be_ciphertext");
    j["gamma"] = c.gamma;
    j["nonce"] = to_hex(c.nonce);
    j["checksum"] = to_hex(c.checksum);
    j["payload"] = to_hex(c.payload);
    return j;
}

BeCiphertext be_ciphertext_from_json(const Json& j)
{
    core::expect_kind(j, "be_ciphertext");
    try {
        return {j.at("gamma").get<std::vector<unsigned>>(), from_hex(j.at("nonce").get<std::string>()),
                from_hex(j.at("checksum").get<std::string>()), from_hex(j.at("payload").get<std::string>())};
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("be_ciphertext: ") + e.what());
    }
}

Json BeMaster::to_json() const
{
    Json j = core::document("be_master");
    j["trapdoor"] = core::to_json(td_);
    j["registry"] = core::to_json(registry_);
    j["s"] = core::to_json(s_);
    j["public"] = apps::to_json(pub_);
    Json xs = Json::object(), sks = Json::object();
    for (const auto& [id, x] : x_)
        xs[std::to_string(id)] = core::to_json(x);
    for (const auto& [id, sk] : sk_)
        sks[std::to_string(id)] = apps::to_json(sk);
    j["x"] = xs;
    j["sk"] = sks;
    return j;
}

BeMaster BeMaster::from_json(const Json& j)
{
    core::expect_kind(j, "be_master");
    try {
        BeMaster m(core::trapdoor_from_json(j.at("trapdoor")));
        m.registry_ = core::registry_from_json(j.at("registry"));
        m.s_ = core::class_from_json(j.at("s"));
        m.pub_ = be_public_from_json(j.at("public"));
        for (const auto& [k, v] : j.at("x").items())
            m.x_[static_cast<unsigned>(std::stoul(k))] = core::class_from_json(v);
        for (const auto& [k, v] : j.at("sk").items())
            m.sk_[static_cast<unsigned>(std::stoul(k))] = be_secret_from_json(v);
        return m;
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, std::string("be_master: ") + e.what());
    }
}

}  // namespace tgii::apps
