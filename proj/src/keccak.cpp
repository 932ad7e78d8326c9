#include "acw/keccak.hpp"

#include <cstring>

namespace acw {

namespace {

constexpr std::array<std::uint64_t, 24> kRoundConstants = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr std::array<int, 25> kRotations = {
    0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43, 25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14,
};

inline std::uint64_t rotl(std::uint64_t x, int n) { return n == 0 ? x : (x << n) | (x >> (64 - n)); }

// state index = x + 5*y
void keccak_f1600(std::array<std::uint64_t, 25>& s) {
    for (std::uint64_t rc : kRoundConstants) {
        std::array<std::uint64_t, 5> c{};
        for (int x = 0; x < 5; ++x) c[x] = s[x] ^ s[x + 5] ^ s[x + 10] ^ s[x + 15] ^ s[x + 20];
        for (int x = 0; x < 5; ++x) {
            std::uint64_t d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5) s[x + y] ^= d;
        }
        std::array<std::uint64_t, 25> b{};
        for (int x = 0; x < 5; ++x) {
            for (int y = 0; y < 5; ++y) {
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(s[x + 5 * y], kRotations[x + 5 * y]);
            }
        }
        for (int x = 0; x < 5; ++x) {
            for (int y = 0; y < 5; ++y) {
                s[x + 5 * y] = b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
            }
        }
        s[0] ^= rc;
    }
}

void absorb_block(std::array<std::uint64_t, 25>& s, const std::uint8_t* block, std::size_t rate) {
    for (std::size_t i = 0; i < rate / 8; ++i) {
        std::uint64_t lane = 0;
        for (int j = 7; j >= 0; --j) lane = (lane << 8) | block[8 * i + j];
        s[i] ^= lane;
    }
    keccak_f1600(s);
}

}  // namespace

std::array<std::uint8_t, 32> keccak256(ByteView data) {
    constexpr std::size_t kRate = 136;
    std::array<std::uint64_t, 25> state{};

    std::size_t offset = 0;
    for (; offset + kRate <= data.size(); offset += kRate) absorb_block(state, data.data() + offset, kRate);

    std::array<std::uint8_t, kRate> last{};
    std::size_t tail = data.size() - offset;
    if (tail > 0) std::memcpy(last.data(), data.data() + offset, tail);
    last[tail] ^= 0x01;
    last[kRate - 1] ^= 0x80;
    absorb_block(state, last.data(), kRate);

    std::array<std::uint8_t, 32> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint8_t>(state[i / 8] >> (8 * (i % 8)));
    return out;
}

}  // namespace acw
