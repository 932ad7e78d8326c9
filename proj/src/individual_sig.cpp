#define OPENSSL_SUPPRESS_DEPRECATED
#include <openssl/ecdsa.h>

#include "acw/cost_meter.hpp"
#include "acw/error.hpp"
#include "acw/keccak.hpp"
#include "acw/wallet.hpp"
#include "bn_util.hpp"
#include "group_internal.hpp"

namespace acw::wallet {

namespace {

constexpr std::string_view kSchnorrTag = "acw/schnorr/v1";

bool is_production(const Group& grp) { return grp.id() == kProductionGroupId; }

struct EcKeyFree {
    void operator()(EC_KEY* k) const noexcept { EC_KEY_free(k); }
};
using EcKeyPtr = std::unique_ptr<EC_KEY, EcKeyFree>;

struct EcdsaSigFree {
    void operator()(ECDSA_SIG* s) const noexcept { ECDSA_SIG_free(s); }
};
using EcdsaSigPtr = std::unique_ptr<ECDSA_SIG, EcdsaSigFree>;

EcKeyPtr new_secp256k1_key() {
    EcKeyPtr key(EC_KEY_new());
    if (!key || EC_KEY_set_group(key.get(), detail::secp256k1_curve()) != 1) throw std::bad_alloc();
    return key;
}

Bytes ecdsa_sign(const Scalar& sigk, ByteView message) {
    auto key = new_secp256k1_key();
    auto d = detail::bn_from_scalar(sigk);
    if (EC_KEY_set_private_key(key.get(), d.get()) != 1) throw Error(Errc::invalid_argument, "bad ECDSA key");
    const auto digest = keccak256(message);
    EcdsaSigPtr sig(ECDSA_do_sign(digest.data(), static_cast<int>(digest.size()), key.get()));
    if (!sig) throw std::runtime_error("ECDSA_do_sign failed");
    const BIGNUM* r = nullptr;
    const BIGNUM* s = nullptr;
    ECDSA_SIG_get0(sig.get(), &r, &s);
    Bytes out = detail::bn_to_fixed(r, 32);
    Bytes s_bytes = detail::bn_to_fixed(s, 32);
    out.insert(out.end(), s_bytes.begin(), s_bytes.end());
    return out;
}

bool ecdsa_verify(const GroupElement& vk, ByteView message, ByteView signature) {
    // u1*G + u2*Q plus the message digest, matching the ring-side accounting.
    metering::count_exponentiations(2);
    metering::count_hash();
    if (signature.size() != 64) return false;
    auto key = new_secp256k1_key();
    if (EC_KEY_set_public_key(key.get(), GroupElementAccess::ec_point(vk)) != 1) return false;
    EcdsaSigPtr sig(ECDSA_SIG_new());
    if (!sig) throw std::bad_alloc();
    BIGNUM* r = BN_bin2bn(signature.data(), 32, nullptr);
    BIGNUM* s = BN_bin2bn(signature.data() + 32, 32, nullptr);
    if (!r || !s || ECDSA_SIG_set0(sig.get(), r, s) != 1) {
        BN_free(r);
        BN_free(s);
        return false;
    }
    const auto digest = keccak256(message);
    return ECDSA_do_verify(digest.data(), static_cast<int>(digest.size()), sig.get(), key.get()) == 1;
}

Scalar schnorr_challenge(const Group& grp, const GroupElement& vk, const GroupElement& commitment, ByteView message) {
    Transcript t;
    t.field(grp.id()).field(grp.encode(vk)).field(grp.encode(commitment)).field(message);
    return grp.hash_to_scalar(kSchnorrTag, t.bytes());
}

Bytes schnorr_sign(const Group& grp, const Scalar& sigk, ByteView message, RandomSource& rng) {
    const GroupElement vk = grp.exp_g(sigk);
    const Scalar k = grp.random_nonzero_scalar(rng);
    const GroupElement commitment = grp.exp_g(k);
    const Scalar e = schnorr_challenge(grp, vk, commitment, message);
    Bytes out = grp.encode(commitment);
    Bytes s = grp.encode_scalar(grp.add(k, grp.mul(e, sigk)));
    out.insert(out.end(), s.begin(), s.end());
    return out;
}

bool schnorr_verify(const Group& grp, const GroupElement& vk, ByteView message, ByteView signature) {
    if (signature.size() != grp.element_size() + grp.scalar_size()) return false;
    try {
        const GroupElement commitment = grp.decode(signature.first(grp.element_size()));
        const Scalar s = grp.decode_scalar(signature.subspan(grp.element_size()));
        const Scalar e = schnorr_challenge(grp, vk, commitment, message);
        return grp.exp2(grp.generator(), s, vk, grp.neg(e)) == commitment;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

IndividualKeyPair individual_keygen(const Group& grp, RandomSource& rng) {
    Scalar sigk = grp.random_nonzero_scalar(rng);
    return IndividualKeyPair{grp.exp_g(sigk), sigk};
}

Bytes individual_sign(const Group& grp, const Scalar& sigk, ByteView message, RandomSource& rng) {
    if (is_production(grp)) return ecdsa_sign(sigk, message);
    return schnorr_sign(grp, sigk, message, rng);
}

bool individual_verify(const Group& grp, const GroupElement& vk, ByteView message, ByteView signature) {
    if (vk.empty()) return false;
    try {
        if (is_production(grp)) return ecdsa_verify(vk, message, signature);
        return schnorr_verify(grp, vk, message, signature);
    } catch (const Error&) {
        return false;
    }
}

}  // namespace acw::wallet
