#include "bn_util.hpp"

#include "acw/error.hpp"

namespace acw::detail {

BnPtr bn_new() {
    BnPtr bn(BN_new());
    if (!bn) throw std::bad_alloc();
    return bn;
}

BnPtr bn_from_bytes(ByteView be) {
    BnPtr bn(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr));
    if (!bn) throw std::bad_alloc();
    return bn;
}

BnPtr bn_from_scalar(const Scalar& s) { return bn_from_bytes(s.be_bytes()); }

Scalar scalar_from_bn(const BIGNUM* bn) {
    std::array<std::uint8_t, 32> be{};
    if (BN_is_negative(bn) || BN_bn2binpad(bn, be.data(), static_cast<int>(be.size())) < 0) {
        throw Error(Errc::invalid_argument, "integer does not fit a scalar");
    }
    return Scalar(be);
}

Bytes bn_to_fixed(const BIGNUM* bn, std::size_t width) {
    Bytes out(width);
    if (BN_bn2binpad(bn, out.data(), static_cast<int>(width)) < 0) {
        throw Error(Errc::invalid_argument, "integer does not fit the fixed width");
    }
    return out;
}

BN_CTX* thread_ctx() {
    struct CtxHolder {
        BN_CTX* ctx = BN_CTX_new();
        ~CtxHolder() { BN_CTX_free(ctx); }
    };
    thread_local CtxHolder holder;
    if (!holder.ctx) throw std::bad_alloc();
    return holder.ctx;
}

}  // namespace acw::detail
