#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acw {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);
/// Accepts an optional "0x" prefix; throws Error(invalid_argument) on odd length or bad digits.
Bytes from_hex(std::string_view hex);

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

void append_u32_be(Bytes& out, std::uint32_t v);
void append_u64_be(Bytes& out, std::uint64_t v);
std::uint32_t read_u32_be(ByteView in);
std::uint64_t read_u64_be(ByteView in);

/// Builds hash preimages out of length-prefixed fields (4-byte big-endian
/// length, then the bytes), so no two field sequences share an encoding.
class Transcript {
public:
    Transcript& field(ByteView data);
    Transcript& field(std::string_view text);
    Transcript& field_u64(std::uint64_t v);

    const Bytes& bytes() const noexcept { return buf_; }

private:
    Bytes buf_;
};

}  // namespace acw
