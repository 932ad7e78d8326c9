#pragma once

#include <array>
#include <cstdint>

#include "acw/bytes.hpp"

namespace acw {

/// Original Keccak-256 (0x01 padding, as used for Ethereum addresses), not FIPS-202 SHA3-256.
std::array<std::uint8_t, 32> keccak256(ByteView data);

}  // namespace acw
