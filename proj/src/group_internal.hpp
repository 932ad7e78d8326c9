#pragma once

#include <openssl/ec.h>

#include <memory>

#include "acw/group.hpp"

namespace acw {

struct GroupElementAccess {
    static GroupElement toy(std::uint32_t residue) {
        GroupElement e;
        e.rep_ = residue;
        return e;
    }
    static std::uint32_t toy_value(const GroupElement& e);

    /// Takes ownership of `point`.
    static GroupElement ec(EC_POINT* point);
    static const EC_POINT* ec_point(const GroupElement& e);
};

namespace detail {

std::shared_ptr<const Group> make_toy_group();
std::shared_ptr<const Group> make_secp256k1_group();

/// Shared curve handle backing the production group.
const EC_GROUP* secp256k1_curve();

}  // namespace detail
}  // namespace acw
