#pragma once

#include <openssl/bn.h>

#include <memory>

#include "acw/bytes.hpp"
#include "acw/group.hpp"

namespace acw::detail {

struct BnFree {
    void operator()(BIGNUM* bn) const noexcept { BN_clear_free(bn); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnFree>;

BnPtr bn_new();
BnPtr bn_from_bytes(ByteView be);
BnPtr bn_from_scalar(const Scalar& s);
/// Requires 0 <= bn < 2^256.
Scalar scalar_from_bn(const BIGNUM* bn);
Bytes bn_to_fixed(const BIGNUM* bn, std::size_t width);

/// Per-thread scratch context; BN_CTX is not thread safe.
BN_CTX* thread_ctx();

}  // namespace acw::detail
