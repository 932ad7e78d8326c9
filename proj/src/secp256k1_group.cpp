#define OPENSSL_SUPPRESS_DEPRECATED
#include <openssl/obj_mac.h>

#include <algorithm>

#include "acw/error.hpp"
#include "bn_util.hpp"
#include "group_internal.hpp"

namespace acw::detail {

namespace {

constexpr std::size_t kCompressedSize = 33;

EC_POINT* new_point(const EC_GROUP* curve) {
    EC_POINT* p = EC_POINT_new(curve);
    if (!p) throw std::bad_alloc();
    return p;
}

class Secp256k1Group final : public Group {
public:
    Secp256k1Group() : Group(order_bytes()) {}

    std::string_view id() const override { return kProductionGroupId; }
    std::size_t element_size() const override { return kCompressedSize; }

    GroupElement identity() const override {
        EC_POINT* p = new_point(secp256k1_curve());
        EC_POINT_set_to_infinity(secp256k1_curve(), p);
        return GroupElementAccess::ec(p);
    }

    GroupElement generator() const override {
        static const GroupElement g = [] {
            EC_POINT* p = EC_POINT_dup(EC_GROUP_get0_generator(secp256k1_curve()), secp256k1_curve());
            if (!p) throw std::bad_alloc();
            return GroupElementAccess::ec(p);
        }();
        return g;
    }

    GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
        EC_POINT* r = new_point(secp256k1_curve());
        GroupElement out = GroupElementAccess::ec(r);
        if (!EC_POINT_add(secp256k1_curve(), r, GroupElementAccess::ec_point(a), GroupElementAccess::ec_point(b),
                          thread_ctx())) {
            throw std::runtime_error("EC_POINT_add failed");
        }
        return out;
    }

    GroupElement inverse(const GroupElement& a) const override {
        EC_POINT* r = EC_POINT_dup(GroupElementAccess::ec_point(a), secp256k1_curve());
        if (!r) throw std::bad_alloc();
        GroupElement out = GroupElementAccess::ec(r);
        if (!EC_POINT_invert(secp256k1_curve(), r, thread_ctx())) throw std::runtime_error("EC_POINT_invert failed");
        return out;
    }

    // The identity has no SEC1 compressed form; it is written as all zeros,
    // which decode() refuses, so it never appears in a valid wire object.
    Bytes encode(const GroupElement& e) const override {
        const EC_POINT* p = GroupElementAccess::ec_point(e);
        Bytes out(kCompressedSize, 0);
        if (EC_POINT_is_at_infinity(secp256k1_curve(), p)) return out;
        if (EC_POINT_point2oct(secp256k1_curve(), p, POINT_CONVERSION_COMPRESSED, out.data(), out.size(),
                               thread_ctx()) != kCompressedSize) {
            throw std::runtime_error("EC_POINT_point2oct failed");
        }
        return out;
    }

    GroupElement decode(ByteView bytes) const override {
        if (bytes.size() != kCompressedSize) throw Error(Errc::malformed_encoding, "point must be 33 bytes");
        if (bytes[0] != 0x02 && bytes[0] != 0x03) throw Error(Errc::malformed_encoding, "bad SEC1 prefix");
        EC_POINT* p = new_point(secp256k1_curve());
        GroupElement out = GroupElementAccess::ec(p);
        if (!EC_POINT_oct2point(secp256k1_curve(), p, bytes.data(), bytes.size(), thread_ctx())) {
            throw Error(Errc::not_in_subgroup, "x-coordinate is not on secp256k1");
        }
        return out;
    }

protected:
    GroupElement raw_exp(const GroupElement& base, const Scalar& e) const override {
        auto k = bn_from_scalar(e);
        EC_POINT* r = new_point(secp256k1_curve());
        GroupElement out = GroupElementAccess::ec(r);
        const EC_POINT* b = GroupElementAccess::ec_point(base);
        int ok = is_generator(b) ? EC_POINT_mul(secp256k1_curve(), r, k.get(), nullptr, nullptr, thread_ctx())
                                 : EC_POINT_mul(secp256k1_curve(), r, nullptr, b, k.get(), thread_ctx());
        if (!ok) throw std::runtime_error("EC_POINT_mul failed");
        return out;
    }

    GroupElement raw_exp2(const GroupElement& base1, const Scalar& e1, const GroupElement& base2,
                          const Scalar& e2) const override {
        const EC_POINT* b1 = GroupElementAccess::ec_point(base1);
        const EC_POINT* b2 = GroupElementAccess::ec_point(base2);
        if (!is_generator(b1)) {
            if (!is_generator(b2)) return interleaved(b1, e1, b2, e2);
            std::swap(b1, b2);
            return combined(b2, e2, e1);
        }
        return combined(b2, e1, e2);
    }

private:
    static Bytes order_bytes() {
        const BIGNUM* order = EC_GROUP_get0_order(secp256k1_curve());
        return bn_to_fixed(order, static_cast<std::size_t>(BN_num_bytes(order)));
    }

    static bool is_generator(const EC_POINT* p) {
        const EC_POINT* g = EC_GROUP_get0_generator(secp256k1_curve());
        return p == g || EC_POINT_cmp(secp256k1_curve(), p, g, thread_ctx()) == 0;
    }

    // g^gen_exp * other^other_exp in one pass
    GroupElement combined(const EC_POINT* other, const Scalar& gen_exp, const Scalar& other_exp) const {
        auto k1 = bn_from_scalar(gen_exp);
        auto k2 = bn_from_scalar(other_exp);
        EC_POINT* r = new_point(secp256k1_curve());
        GroupElement out = GroupElementAccess::ec(r);
        if (!EC_POINT_mul(secp256k1_curve(), r, k1.get(), other, k2.get(), thread_ctx())) {
            throw std::runtime_error("EC_POINT_mul failed");
        }
        return out;
    }

    // wNAF, variable time: exp2 only ever sees public scalars
    GroupElement interleaved(const EC_POINT* p1, const Scalar& e1, const EC_POINT* p2, const Scalar& e2) const {
        auto k1 = bn_from_scalar(e1);
        auto k2 = bn_from_scalar(e2);
        const EC_POINT* points[2] = {p1, p2};
        const BIGNUM* scalars[2] = {k1.get(), k2.get()};
        EC_POINT* r = new_point(secp256k1_curve());
        GroupElement out = GroupElementAccess::ec(r);
        if (!EC_POINTs_mul(secp256k1_curve(), r, nullptr, 2, points, scalars, thread_ctx())) {
            throw std::runtime_error("EC_POINTs_mul failed");
        }
        return out;
    }
};

}  // namespace

const EC_GROUP* secp256k1_curve() {
    static const EC_GROUP* curve = [] {
        EC_GROUP* c = EC_GROUP_new_by_curve_name(NID_secp256k1);
        if (!c) throw std::runtime_error("secp256k1 unavailable in this OpenSSL build");
        BN_CTX* ctx = BN_CTX_new();
        EC_GROUP_precompute_mult(c, ctx);
        BN_CTX_free(ctx);
        return c;
    }();
    return curve;
}

std::shared_ptr<const Group> make_secp256k1_group() {
    auto g = std::make_shared<Secp256k1Group>();
    g->validate();
    return g;
}

}  // namespace acw::detail
