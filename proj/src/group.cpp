#include "acw/group.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <mutex>

#include "acw/cost_meter.hpp"
#include "acw/error.hpp"
#include "bn_util.hpp"
#include "group_internal.hpp"

namespace acw {

using detail::bn_from_bytes;
using detail::bn_from_scalar;
using detail::bn_new;
using detail::scalar_from_bn;
using detail::thread_ctx;

bool Scalar::is_zero() const noexcept {
    return std::all_of(be_.begin(), be_.end(), [](std::uint8_t b) { return b == 0; });
}

std::uint32_t GroupElementAccess::toy_value(const GroupElement& e) {
    if (auto* v = std::get_if<std::uint32_t>(&e.rep_)) return *v;
    throw Error(Errc::invalid_argument, "element does not belong to the toy group");
}

GroupElement GroupElementAccess::ec(EC_POINT* point) {
    GroupElement e;
    e.rep_ = GroupElement::EcPoint(point, [](const ec_point_st* p) { EC_POINT_free(const_cast<EC_POINT*>(p)); });
    return e;
}

const EC_POINT* GroupElementAccess::ec_point(const GroupElement& e) {
    if (auto* p = std::get_if<GroupElement::EcPoint>(&e.rep_)) return p->get();
    throw Error(Errc::invalid_argument, "element does not belong to the production group");
}

bool operator==(const GroupElement& a, const GroupElement& b) {
    if (a.rep_.index() != b.rep_.index()) return false;
    if (auto* pa = std::get_if<GroupElement::EcPoint>(&a.rep_)) {
        auto* pb = std::get_if<GroupElement::EcPoint>(&b.rep_);
        if (pa->get() == pb->get()) return true;
        return EC_POINT_cmp(detail::secp256k1_curve(), pa->get(), pb->get(), detail::thread_ctx()) == 0;
    }
    return a.rep_ == b.rep_;
}

Group::Group(Bytes order_be) : order_(std::move(order_be)) {
    auto q = bn_from_bytes(order_);
    order_bits_ = BN_num_bits(q.get());
    scalar_size_ = static_cast<std::size_t>((order_bits_ + 7) / 8);
    order_ = detail::bn_to_fixed(q.get(), scalar_size_);
}

void Group::validate() const {
    auto q = bn_from_bytes(order_);
    if (BN_check_prime(q.get(), thread_ctx(), nullptr) != 1) throw Error(Errc::invalid_argument, "group order is not prime");
    GroupElement g = generator();
    if (g == identity()) throw Error(Errc::invalid_argument, "generator is the identity");
    // g^q via g^(q-1) * g, since q itself is not a reduced scalar.
    auto q_minus_1 = bn_new();
    BN_sub(q_minus_1.get(), q.get(), BN_value_one());
    if (mul(raw_exp(g, scalar_from_bn(q_minus_1.get())), g) != identity()) {
        throw Error(Errc::invalid_argument, "generator order is not q");
    }
}

GroupDescription Group::description() const { return GroupDescription{std::string(id()), order_, generator()}; }

GroupElement Group::exp(const GroupElement& base, const Scalar& e) const {
    metering::count_exponentiations();
    return raw_exp(base, e);
}

GroupElement Group::exp_g(const Scalar& e) const { return exp(generator(), e); }

GroupElement Group::exp2(const GroupElement& base1, const Scalar& e1, const GroupElement& base2,
                         const Scalar& e2) const {
    metering::count_exponentiations(2);
    return raw_exp2(base1, e1, base2, e2);
}

GroupElement Group::raw_exp2(const GroupElement& base1, const Scalar& e1, const GroupElement& base2,
                             const Scalar& e2) const {
    return mul(raw_exp(base1, e1), raw_exp(base2, e2));
}

namespace {

enum class Op { add, sub, mul };

Scalar scalar_op(const Bytes& order, const Scalar& a, const Scalar& b, Op op) {
    auto q = bn_from_bytes(order);
    auto x = bn_from_scalar(a);
    auto y = bn_from_scalar(b);
    auto r = bn_new();
    int ok = 0;
    switch (op) {
        case Op::add: ok = BN_mod_add(r.get(), x.get(), y.get(), q.get(), thread_ctx()); break;
        case Op::sub: ok = BN_mod_sub(r.get(), x.get(), y.get(), q.get(), thread_ctx()); break;
        case Op::mul: ok = BN_mod_mul(r.get(), x.get(), y.get(), q.get(), thread_ctx()); break;
    }
    if (!ok) throw std::runtime_error("BIGNUM modular arithmetic failed");
    return scalar_from_bn(r.get());
}

}  // namespace

Scalar Group::scalar(std::uint64_t v) const {
    Bytes be;
    append_u64_be(be, v);
    return reduce(be);
}

Scalar Group::add(const Scalar& a, const Scalar& b) const { return scalar_op(order_, a, b, Op::add); }
Scalar Group::sub(const Scalar& a, const Scalar& b) const { return scalar_op(order_, a, b, Op::sub); }
Scalar Group::mul(const Scalar& a, const Scalar& b) const { return scalar_op(order_, a, b, Op::mul); }
Scalar Group::neg(const Scalar& a) const { return sub(Scalar{}, a); }

Scalar Group::invert(const Scalar& a) const {
    if (a.is_zero()) throw Error(Errc::invalid_argument, "zero has no inverse");
    auto q = bn_from_bytes(order_);
    auto x = bn_from_scalar(a);
    auto r = bn_new();
    if (!BN_mod_inverse(r.get(), x.get(), q.get(), thread_ctx())) throw std::runtime_error("BN_mod_inverse failed");
    return scalar_from_bn(r.get());
}

Scalar Group::reduce(ByteView be) const {
    auto q = bn_from_bytes(order_);
    auto x = bn_from_bytes(be);
    auto r = bn_new();
    if (!BN_nnmod(r.get(), x.get(), q.get(), thread_ctx())) throw std::runtime_error("BN_nnmod failed");
    return scalar_from_bn(r.get());
}

Bytes Group::encode_scalar(const Scalar& s) const {
    const auto& be = s.be_bytes();
    return Bytes(be.end() - static_cast<std::ptrdiff_t>(scalar_size_), be.end());
}

Scalar Group::decode_scalar(ByteView bytes) const {
    if (bytes.size() != scalar_size_) throw Error(Errc::malformed_encoding, "scalar has wrong width");
    if (!std::lexicographical_compare(bytes.begin(), bytes.end(), order_.begin(), order_.end())) {
        throw Error(Errc::malformed_encoding, "scalar is not reduced mod q");
    }
    std::array<std::uint8_t, 32> be{};
    std::copy(bytes.begin(), bytes.end(), be.end() - static_cast<std::ptrdiff_t>(scalar_size_));
    return Scalar(be);
}

Scalar Group::random_scalar(RandomSource& rng) const {
    const int top_bits = order_bits_ % 8;
    const std::uint8_t top_mask = top_bits == 0 ? 0xff : static_cast<std::uint8_t>((1u << top_bits) - 1);
    Bytes buf(scalar_size_);
    for (;;) {
        rng.fill(buf);
        buf[0] &= top_mask;
        if (std::lexicographical_compare(buf.begin(), buf.end(), order_.begin(), order_.end())) {
            return decode_scalar(buf);
        }
    }
}

Scalar Group::random_nonzero_scalar(RandomSource& rng) const {
    for (;;) {
        Scalar s = random_scalar(rng);
        if (!s.is_zero()) return s;
    }
}

Scalar Group::hash_to_scalar(ByteView domain_tag, ByteView transcript) const {
    metering::count_hash();
    Bytes preimage;
    preimage.reserve(4 + domain_tag.size() + transcript.size());
    append_u32_be(preimage, static_cast<std::uint32_t>(domain_tag.size()));
    preimage.insert(preimage.end(), domain_tag.begin(), domain_tag.end());
    preimage.insert(preimage.end(), transcript.begin(), transcript.end());

    std::array<std::uint8_t, 64> digest{};
    unsigned int len = 0;
    if (!EVP_Digest(preimage.data(), preimage.size(), digest.data(), &len, EVP_sha512(), nullptr)) {
        throw std::runtime_error("SHA-512 failed");
    }
    return reduce(digest);
}

Scalar Group::hash_to_scalar(std::string_view domain_tag, ByteView transcript) const {
    auto p = reinterpret_cast<const std::uint8_t*>(domain_tag.data());
    return hash_to_scalar(ByteView(p, domain_tag.size()), transcript);
}

std::shared_ptr<const Group> instantiate(std::string_view group_id) {
    if (group_id == kToyGroupId) {
        static const std::shared_ptr<const Group> toy = detail::make_toy_group();
        return toy;
    }
    if (group_id == kProductionGroupId) {
        static const std::shared_ptr<const Group> production = detail::make_secp256k1_group();
        return production;
    }
    throw Error(Errc::unknown_group, "unknown group identifier '" + std::string(group_id) + "'");
}

}  // namespace acw
