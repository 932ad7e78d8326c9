#include "acw/bytes.hpp"

#include "acw/error.hpp"

namespace acw {

std::string to_hex(ByteView data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) throw Error(Errc::invalid_argument, "odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error(Errc::invalid_argument, "invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

void append_u32_be(Bytes& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void append_u64_be(Bytes& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t read_u32_be(ByteView in) {
    if (in.size() < 4) throw Error(Errc::malformed_encoding, "truncated u32");
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | in[i];
    return v;
}

std::uint64_t read_u64_be(ByteView in) {
    if (in.size() < 8) throw Error(Errc::malformed_encoding, "truncated u64");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | in[i];
    return v;
}

Transcript& Transcript::field(ByteView data) {
    append_u32_be(buf_, static_cast<std::uint32_t>(data.size()));
    buf_.insert(buf_.end(), data.begin(), data.end());
    return *this;
}

Transcript& Transcript::field(std::string_view text) {
    auto p = reinterpret_cast<const std::uint8_t*>(text.data());
    return field(ByteView(p, text.size()));
}

Transcript& Transcript::field_u64(std::uint64_t v) {
    Bytes tmp;
    append_u64_be(tmp, v);
    return field(tmp);
}

}  // namespace acw
