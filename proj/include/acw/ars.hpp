#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "acw/bytes.hpp"
#include "acw/group.hpp"
#include "acw/random.hpp"

/// Accountable ring signatures: ElGamal encryption of the signer's key under
/// the opener key, plus a Fiat-Shamir OR-proof that the ciphertext encrypts
/// some ring member whose secret key the signer holds.
///
/// For ring R = (pk_1..pk_N), opener key opk and ciphertext (u, v) = (g^r, pk_l * opk^r),
/// branch i proves knowledge of (r, sk_i) with
///   g^{z_r} = a * u^c,   opk^{z_r} = b * (v / pk_i)^c,   g^{z_s} = d * pk_i^c
/// and the branch challenges sum to the transcript hash.
namespace acw::ars {

inline constexpr std::uint8_t kSchemeVersion = 1;

struct PublicParams {
    std::shared_ptr<const Group> group;
    std::uint8_t scheme_version = kSchemeVersion;

    const Group& grp() const { return *group; }
};

struct OpenerKeyPair {
    GroupElement opk;
    Scalar osk;
};

struct UserKeyPair {
    GroupElement pk;
    Scalar sk;
};

/// Ordered, duplicate-free, non-empty list of user keys. Order is part of the
/// ring's identity: the same keys in another order form a different ring.
class Ring {
public:
    /// Throws Error(empty_ring) or Error(duplicate_ring_members).
    explicit Ring(std::vector<GroupElement> members);

    const std::vector<GroupElement>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    const GroupElement& operator[](std::size_t i) const { return members_.at(i); }
    std::optional<std::size_t> index_of(const GroupElement& pk) const;
    bool contains(const GroupElement& pk) const { return index_of(pk).has_value(); }

private:
    std::vector<GroupElement> members_;
};

struct Branch {
    GroupElement a, b, d;
    Scalar c, z_r, z_s;
};

struct RingSignature {
    GroupElement u;  // g^r
    GroupElement v;  // pk * opk^r
    std::vector<Branch> branches;
};

struct OpeningProof {
    GroupElement pk_identified;
    GroupElement a1;  // g^alpha
    GroupElement a2;  // u^alpha
    Scalar c;
    Scalar z;
};

/// Throws Error(unknown_group).
PublicParams setup(std::string_view group_id);

OpenerKeyPair okgen(const PublicParams& pp, RandomSource& rng);
UserKeyPair ukgen(const PublicParams& pp, RandomSource& rng);

/// Randomness is drawn in this order: r, alpha, beta, then (c_i, z_r_i, z_s_i)
/// for every i != signer index in ring order.
/// Throws Error(signer_not_in_ring).
RingSignature rsign(const PublicParams& pp, const GroupElement& opk, ByteView message, const Ring& ring,
                    const Scalar& sk, RandomSource& rng);

bool rverify(const PublicParams& pp, const GroupElement& opk, ByteView message, const Ring& ring,
             const RingSignature& sig);

/// ElGamal decryption v * u^{-osk}; no validity checks.
GroupElement decrypt_signer(const PublicParams& pp, const RingSignature& sig, const Scalar& osk);

/// nullopt is the scheme's "bottom" output: the signature does not verify
/// under g^osk, or it decrypts to a key outside the ring.
std::optional<OpeningProof> open(const PublicParams& pp, ByteView message, const Ring& ring, const RingSignature& sig,
                                 const Scalar& osk, RandomSource& rng);

bool judge(const PublicParams& pp, const GroupElement& opk, ByteView message, const Ring& ring,
           const RingSignature& sig, const GroupElement& pk, const OpeningProof& proof);

/// Fiat-Shamir challenge for the OR-proof, over (pp, opk, ring, message, u, v, all a/b/d).
Scalar signature_challenge(const PublicParams& pp, const GroupElement& opk, ByteView message, const Ring& ring,
                           const RingSignature& sig);

/// Challenge for the opening proof, over (pp, opk, message, ring, signature, pk, A1, A2).
Scalar opening_challenge(const PublicParams& pp, const GroupElement& opk, ByteView message, const Ring& ring,
                         const RingSignature& sig, const GroupElement& pk, const GroupElement& a1,
                         const GroupElement& a2);

// Wire format:
//   signature = version(1) || N(4, BE) || u || v || N * (a || b || d || c || z_r || z_s)
//   proof     = pk || A1 || A2 || c || z
Bytes serialize(const PublicParams& pp, const RingSignature& sig);
Bytes serialize(const PublicParams& pp, const OpeningProof& proof);
/// Throw Error(malformed_encoding) / Error(not_in_subgroup).
RingSignature deserialize_signature(const PublicParams& pp, ByteView bytes);
OpeningProof deserialize_proof(const PublicParams& pp, ByteView bytes);

}  // namespace acw::ars
