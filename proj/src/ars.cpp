#include "acw/ars.hpp"

#include "acw/error.hpp"

namespace acw::ars {

namespace {

constexpr std::string_view kSignTag = "acw/ars/v1/sign-challenge";
constexpr std::string_view kOpenTag = "acw/ars/v1/open-challenge";

void append_params(Transcript& t, const PublicParams& pp) {
    t.field(pp.grp().id());
    t.field(ByteView(&pp.scheme_version, 1));
}

void append_ring(Transcript& t, const Group& grp, const Ring& ring) {
    t.field_u64(ring.size());
    for (const auto& pk : ring.members()) t.field(grp.encode(pk));
}

bool any_empty(const RingSignature& sig) {
    if (sig.u.empty() || sig.v.empty()) return true;
    for (const auto& br : sig.branches) {
        if (br.a.empty() || br.b.empty() || br.d.empty()) return true;
    }
    return false;
}

void append(Bytes& out, const Bytes& more) { out.insert(out.end(), more.begin(), more.end()); }

ByteView take(ByteView& in, std::size_t n) {
    if (in.size() < n) throw Error(Errc::malformed_encoding, "truncated input");
    ByteView head = in.first(n);
    in = in.subspan(n);
    return head;
}

}  // namespace

Ring::Ring(std::vector<GroupElement> members) : members_(std::move(members)) {
    if (members_.empty()) throw Error(Errc::empty_ring, "a ring needs at least one member");
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i].empty()) throw Error(Errc::invalid_argument, "ring member is unset");
        for (std::size_t j = 0; j < i; ++j) {
            if (members_[i] == members_[j]) {
                throw Error(Errc::duplicate_ring_members,
                            "members " + std::to_string(j) + " and " + std::to_string(i) + " are equal");
            }
        }
    }
}

std::optional<std::size_t> Ring::index_of(const GroupElement& pk) const {
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i] == pk) return i;
    }
    return std::nullopt;
}

PublicParams setup(std::string_view group_id) { return PublicParams{instantiate(group_id), kSchemeVersion}; }

OpenerKeyPair okgen(const PublicParams& pp, RandomSource& rng) {
    Scalar osk = pp.grp().random_nonzero_scalar(rng);
    return OpenerKeyPair{pp.grp().exp_g(osk), osk};
}

UserKeyPair ukgen(const PublicParams& pp, RandomSource& rng) {
    Scalar sk = pp.grp().random_nonzero_scalar(rng);
    return UserKeyPair{pp.grp().exp_g(sk), sk};
}

Scalar signature_challenge(const PublicParams& pp, const GroupElement& opk, ByteView message, const Ring& ring,
                           const RingSignature& sig) {
    const Group& grp = pp.grp();
    Transcript t;
    append_params(t, pp);
    t.field(grp.encode(opk));
    append_ring(t, grp, ring);
    t.field(message);
    t.field(grp.encode(sig.u));
    t.field(grp.encode(sig.v));
    for (const auto& br : sig.branches) {
        t.field(grp.encode(br.a));
        t.field(grp.encode(br.b));
        t.field(grp.encode(br.d));
    }
    return grp.hash_to_scalar(kSignTag, t.bytes());
}

Scalar opening_challenge(const PublicParams& pp, const GroupElement& opk, ByteView message, const Ring& ring,
                         const RingSignature& sig, const GroupElement& pk, const GroupElement& a1,
                         const GroupElement& a2) {
    const Group& grp = pp.grp();
    Transcript t;
    append_params(t, pp);
    t.field(grp.encode(opk));
    t.field(message);
    append_ring(t, grp, ring);
    t.field(serialize(pp, sig));
    t.field(grp.encode(pk));
    t.field(grp.encode(a1));
    t.field(grp.encode(a2));
    return grp.hash_to_scalar(kOpenTag, t.bytes());
}

RingSignature rsign(const PublicParams& pp, const GroupElement& opk, ByteView message, const Ring& ring,
                    const Scalar& sk, RandomSource& rng) {
    const Group& grp = pp.grp();
    const GroupElement pk = grp.exp_g(sk);
    const auto signer = ring.index_of(pk);
    if (!signer) throw Error(Errc::signer_not_in_ring, "g^sk is not a member of the ring");

    const Scalar r = grp.random_nonzero_scalar(rng);
    const Scalar alpha = grp.random_nonzero_scalar(rng);
    const Scalar beta = grp.random_nonzero_scalar(rng);

    RingSignature sig;
    sig.u = grp.exp_g(r);
    sig.v = grp.mul(pk, grp.exp(opk, r));
    sig.branches.resize(ring.size());

    Scalar others_sum;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        Branch& br = sig.branches[i];
        if (i == *signer) {
            br.a = grp.exp_g(alpha);
            br.b = grp.exp(opk, alpha);
            br.d = grp.exp_g(beta);
            continue;
        }
        // Simulated branch: pick the responses, solve for the commitments.
        br.c = grp.random_scalar(rng);
        br.z_r = grp.random_scalar(rng);
        br.z_s = grp.random_scalar(rng);
        const Scalar minus_c = grp.neg(br.c);
        br.a = grp.exp2(grp.generator(), br.z_r, sig.u, minus_c);
        br.b = grp.exp2(opk, br.z_r, grp.div(sig.v, ring[i]), minus_c);
        br.d = grp.exp2(grp.generator(), br.z_s, ring[i], minus_c);
        others_sum = grp.add(others_sum, br.c);
    }

    const Scalar x = signature_challenge(pp, opk, message, ring, sig);
    Branch& real = sig.branches[*signer];
    real.c = grp.sub(x, others_sum);
    real.z_r = grp.add(alpha, grp.mul(real.c, r));
    real.z_s = grp.add(beta, grp.mul(real.c, sk));
    return sig;
}

bool rverify(const PublicParams& pp, const GroupElement& opk, ByteView message, const Ring& ring,
             const RingSignature& sig) {
    if (sig.branches.size() != ring.size() || opk.empty() || any_empty(sig)) return false;
    const Group& grp = pp.grp();
    try {
        const Scalar x = signature_challenge(pp, opk, message, ring, sig);
        Scalar sum;
        for (const auto& br : sig.branches) sum = grp.add(sum, br.c);
        if (sum != x) return false;

        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Branch& br = sig.branches[i];
            const Scalar minus_c = grp.neg(br.c);
            if (grp.exp2(grp.generator(), br.z_r, sig.u, minus_c) != br.a) return false;
            if (grp.exp2(opk, br.z_r, grp.div(sig.v, ring[i]), minus_c) != br.b) return false;
            if (grp.exp2(grp.generator(), br.z_s, ring[i], minus_c) != br.d) return false;
        }
        return true;
    } catch (const Error&) {
        // elements from a different group instantiation
        return false;
    }
}

GroupElement decrypt_signer(const PublicParams& pp, const RingSignature& sig, const Scalar& osk) {
    const Group& grp = pp.grp();
    return grp.div(sig.v, grp.exp(sig.u, osk));
}

std::optional<OpeningProof> open(const PublicParams& pp, ByteView message, const Ring& ring, const RingSignature& sig,
                                 const Scalar& osk, RandomSource& rng) {
    const Group& grp = pp.grp();
    const GroupElement opk = grp.exp_g(osk);
    if (!rverify(pp, opk, message, ring, sig)) return std::nullopt;

    GroupElement pk = decrypt_signer(pp, sig, osk);
    if (!ring.contains(pk)) return std::nullopt;

    // Discrete-log equality: log_g(opk) = log_u(v / pk) = osk.
    const Scalar alpha = grp.random_nonzero_scalar(rng);
    OpeningProof proof;
    proof.pk_identified = pk;
    proof.a1 = grp.exp_g(alpha);
    proof.a2 = grp.exp(sig.u, alpha);
    proof.c = opening_challenge(pp, opk, message, ring, sig, pk, proof.a1, proof.a2);
    proof.z = grp.add(alpha, grp.mul(proof.c, osk));
    return proof;
}

bool judge(const PublicParams& pp, const GroupElement& opk, ByteView message, const Ring& ring,
           const RingSignature& sig, const GroupElement& pk, const OpeningProof& proof) {
    if (!rverify(pp, opk, message, ring, sig)) return false;
    if (pk.empty() || proof.a1.empty() || proof.a2.empty() || proof.pk_identified.empty()) return false;
    const Group& grp = pp.grp();
    try {
        if (!ring.contains(pk) || !(proof.pk_identified == pk)) return false;
        const Scalar c = opening_challenge(pp, opk, message, ring, sig, pk, proof.a1, proof.a2);
        if (c != proof.c) return false;
        const Scalar minus_c = grp.neg(c);
        if (grp.exp2(grp.generator(), proof.z, opk, minus_c) != proof.a1) return false;
        if (grp.exp2(sig.u, proof.z, grp.div(sig.v, pk), minus_c) != proof.a2) return false;
        return true;
    } catch (const Error&) {
        return false;
    }
}

Bytes serialize(const PublicParams& pp, const RingSignature& sig) {
    const Group& grp = pp.grp();
    Bytes out;
    out.push_back(pp.scheme_version);
    append_u32_be(out, static_cast<std::uint32_t>(sig.branches.size()));
    append(out, grp.encode(sig.u));
    append(out, grp.encode(sig.v));
    for (const auto& br : sig.branches) {
        append(out, grp.encode(br.a));
        append(out, grp.encode(br.b));
        append(out, grp.encode(br.d));
        append(out, grp.encode_scalar(br.c));
        append(out, grp.encode_scalar(br.z_r));
        append(out, grp.encode_scalar(br.z_s));
    }
    return out;
}

Bytes serialize(const PublicParams& pp, const OpeningProof& proof) {
    const Group& grp = pp.grp();
    Bytes out;
    append(out, grp.encode(proof.pk_identified));
    append(out, grp.encode(proof.a1));
    append(out, grp.encode(proof.a2));
    append(out, grp.encode_scalar(proof.c));
    append(out, grp.encode_scalar(proof.z));
    return out;
}

RingSignature deserialize_signature(const PublicParams& pp, ByteView bytes) {
    const Group& grp = pp.grp();
    const std::size_t es = grp.element_size();
    const std::size_t ss = grp.scalar_size();
    ByteView in = bytes;
    if (take(in, 1)[0] != pp.scheme_version) throw Error(Errc::malformed_encoding, "unsupported scheme version");
    const std::uint32_t n = read_u32_be(take(in, 4));
    const std::size_t record = 3 * es + 3 * ss;
    if (n == 0 || in.size() != 2 * es + static_cast<std::size_t>(n) * record) {
        throw Error(Errc::malformed_encoding, "signature length does not match its branch count");
    }
    RingSignature sig;
    sig.u = grp.decode(take(in, es));
    sig.v = grp.decode(take(in, es));
    sig.branches.resize(n);
    for (auto& br : sig.branches) {
        br.a = grp.decode(take(in, es));
        br.b = grp.decode(take(in, es));
        br.d = grp.decode(take(in, es));
        br.c = grp.decode_scalar(take(in, ss));
        br.z_r = grp.decode_scalar(take(in, ss));
        br.z_s = grp.decode_scalar(take(in, ss));
    }
    return sig;
}

OpeningProof deserialize_proof(const PublicParams& pp, ByteView bytes) {
    const Group& grp = pp.grp();
    const std::size_t es = grp.element_size();
    const std::size_t ss = grp.scalar_size();
    if (bytes.size() != 3 * es + 2 * ss) throw Error(Errc::malformed_encoding, "opening proof has wrong length");
    ByteView in = bytes;
    OpeningProof proof;
    proof.pk_identified = grp.decode(take(in, es));
    proof.a1 = grp.decode(take(in, es));
    proof.a2 = grp.decode(take(in, es));
    proof.c = grp.decode_scalar(take(in, ss));
    proof.z = grp.decode_scalar(take(in, ss));
    return proof;
}

}  // namespace acw::ars
