#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tgii/tgii/json.hpp"
#include "tgii/tgii/tgii.hpp"

namespace tgii::apps {

using arith::Integer;
using core::ComposableEncoding;
using core::IdealClass;
using core::Json;
using core::PublicParams;
using Bytes = std::vector<std::uint8_t>;

std::string to_hex(const Bytes& b);
Bytes from_hex(std::string_view s);  // ParseError

// Plain signature scheme used for node certificates.
class PlainSigner {
public:
    virtual ~PlainSigner() = default;
    virtual std::string name() const = 0;
    virtual Integer sign(std::string_view message) const = 0;
    virtual bool verify(std::string_view message, const Integer& sig) const = 0;
    virtual Json public_json() const = 0;
    virtual Json secret_json() const = 0;
};

// Textbook RSA full-domain hash over SHA-256.  Demo only: no padding scheme,
// and keys come from a seeded generator.
class RsaFdh : public PlainSigner {
public:
    RsaFdh(Integer n, Integer e, Integer d = 0);
    static RsaFdh generate(std::uint64_t seed, unsigned bits = 1024);
    static RsaFdh from_json(const Json& j);  // public or secret document

    std::string name() const override { return "rsa-fdh-sha256"; }
    Integer sign(std::string_view message) const override;  // Unsupported without d
    bool verify(std::string_view message, const Integer& sig) const override;
    Json public_json() const override;
    Json secret_json() const override;

    const Integer& n() const noexcept { return n_; }
    // SHA-256 in counter mode, reduced mod n.
    Integer hash(std::string_view message) const;

private:
    Integer n_, e_, d_;
};

// ---- directed transitive signatures ----

struct DtsNode {
    unsigned id = 0;
    ComposableEncoding pk;
    Integer cert;
};

struct DtsPublic {
    PublicParams pp;
    Json ds;  // public key of the certificate scheme
    std::map<unsigned, DtsNode> nodes;
};

// Signature on the edge src -> dst, an encoding of x_src^-1 x_dst.
struct DtsSignature {
    unsigned src = 0, dst = 0;
    ComposableEncoding enc;
};

// Master side.  Pools: "dts.common" (one prime), "dts.dst.<i>" and
// "dts.src.<i>" (one prime each); PK(i) uses common, dst(i) and a fresh prime,
// sigma(i, k) uses src(i), dst(k) and a fresh prime.
class DtsMaster {
public:
    DtsMaster(const core::Trapdoor& td, RsaFdh ds);  // dts_gen

    const DtsPublic& pub() const noexcept { return pub_; }
    const core::Trapdoor& trapdoor() const noexcept { return td_; }
    const core::PrimeRegistry& registry() const noexcept { return registry_; }

    // dts_cert: draws x_i, distinct from every other node's, and publishes
    // PK(i) with its certificate.
    const DtsNode& certify(unsigned id, std::mt19937_64& rng);
    // Edge i -> k with i < k, both certified.  Signing towards an uncertified
    // node (a waiting signature) is Unsupported.
    DtsSignature sign(unsigned i, unsigned k);

    Json to_json() const;
    static DtsMaster from_json(const Json& j);

private:
    core::GenerationSet forms(const std::vector<unsigned>& primes) const;

    core::Trapdoor td_;
    core::PrimeRegistry registry_;
    RsaFdh ds_;
    DtsPublic pub_;
    std::map<unsigned, IdealClass> x_;
};

std::string dts_cert_message(const DtsNode& node);
// NotConsecutive unless a.dst == b.src.
DtsSignature dts_comp(const PublicParams& pp, const DtsSignature& a, const DtsSignature& b);
// Reject with the reason.
void dts_ver(const DtsPublic& pub, const DtsSignature& sig);
bool dts_accepts(const DtsPublic& pub, const DtsSignature& sig);

struct CompressedSignature {
    unsigned src = 0, dst = 0;
    Integer j;                       // canonical j of x_src^-1 x_dst
    std::vector<unsigned> degrees;   // one per isogeny of PK(src)
    std::vector<Integer> path;       // j, then each codomain j
    Json proof;                      // unverified placeholder
};

CompressedSignature dts_compress(const DtsPublic& pub, const DtsSignature& sig);

struct CompressedCheck {
    bool endpoint_ok = false;
    bool proof_verified = false;
    std::string warning;
};
// Checks adjacency along the path and the endpoint against PK(dst); the
// proof is never checked.
CompressedCheck dts_ver_compressed(const DtsPublic& pub, const CompressedSignature& c);

// ---- broadcast encryption ----

struct BePublic {
    PublicParams pp;
    std::map<unsigned, ComposableEncoding> pk;
    std::string xof = "SHAKE256";
    std::string mac = "HMAC-SHA256";
};

struct BeSecretKey {
    unsigned id = 0;
    ComposableEncoding sk;  // enc(s x_id)
};

struct BeCiphertext {
    std::vector<unsigned> gamma;  // sorted recipients
    Bytes nonce;
    Bytes checksum;
    Bytes payload;
};

// Pools: "be.msk" (one prime, shared by every SK) and "be.user.<u>" (one
// prime, shared by PK_u and SK_u); each key adds a fresh prime.
class BeMaster {
public:
    BeMaster(const core::Trapdoor& td, std::mt19937_64& rng);  // be_setup

    const BePublic& pub() const noexcept { return pub_; }
    const core::Trapdoor& trapdoor() const noexcept { return td_; }

    BeSecretKey add_user(unsigned id, std::mt19937_64& rng);  // be_gen
    // K = (prod_{i in gamma} x_i) s, by direct action.  EmptyRecipientSet.
    Integer key_j(const std::vector<unsigned>& gamma) const;
    BeCiphertext encrypt(const std::vector<unsigned>& gamma, const Bytes& message, const Bytes& nonce) const;

    Json to_json() const;
    static BeMaster from_json(const Json& j);

private:
    BeMaster(const core::Trapdoor& td) : td_(td) {}

    core::Trapdoor td_;
    core::PrimeRegistry registry_;
    IdealClass s_;
    BePublic pub_;
    std::map<unsigned, IdealClass> x_;
    std::map<unsigned, BeSecretKey> sk_;
};

// K' = convert(prod_{i in gamma minus u} PK_i o SK_u).  EmptyRecipientSet;
// KeyMismatch when the checksum fails (u outside gamma among others).
Integer be_key_j(const BePublic& pub, const BeSecretKey& sk, const std::vector<unsigned>& gamma);
Bytes be_dec(const BePublic& pub, const BeSecretKey& sk, const BeCiphertext& ct);

// ---- policy regression ----

struct PolicyTriple {
    std::string label;
    ComposableEncoding a, b, c;  // a o b = c as classes
};

// (PK_i, sigma_ik, PK_k) for every signature, and (sigma_ij, sigma_jk, sigma_ik)
// for every path of two signed edges whose shortcut is signed.
std::vector<PolicyTriple> dts_policy_triples(const DtsPublic& pub, const std::vector<DtsSignature>& sigs);
// (PK_i, SK_k, PK_k o SK_i) for every ordered pair of distinct users.
std::vector<PolicyTriple> be_policy_triples(const BePublic& pub, const std::vector<BeSecretKey>& sks);

// Rank of the identity relations among published encodings, against the
// number of distinct primes they use.  A relation is a coefficient vector
// over the published list.
struct HygieneCount {
    std::size_t relations = 0;
    std::size_t primes = 0;
};
HygieneCount relation_hygiene(const std::vector<ComposableEncoding>& published,
                              const std::vector<std::vector<int>>& relations);
// PK_i + sigma_ik - PK_k = 0 for every signature.
HygieneCount dts_hygiene(const DtsPublic& pub, const std::vector<DtsSignature>& sigs);
// PK_i + SK_k - PK_k - SK_i = 0 for every pair.
HygieneCount be_hygiene(const BePublic& pub, const std::vector<BeSecretKey>& sks);

Json to_json(const DtsPublic& pub);
DtsPublic dts_public_from_json(const Json& j);
Json to_json(const DtsSignature& s);
DtsSignature dts_signature_from_json(const Json& j);
Json to_json(const CompressedSignature& c);
Json to_json(const BePublic& pub);
BePublic be_public_from_json(const Json& j);
Json to_json(const BeSecretKey& k);
BeSecretKey be_secret_from_json(const Json& j);
Json to_json(const BeCiphertext& c);
BeCiphertext be_ciphertext_from_json(const Json& j);

}  // namespace tgii::apps
