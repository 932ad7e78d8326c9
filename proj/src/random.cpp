#include "acw/random.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <climits>

#include "acw/error.hpp"

namespace acw {

void SystemRandom::fill(std::span<std::uint8_t> out) {
    if (out.empty()) return;
    if (out.size() > static_cast<std::size_t>(INT_MAX) || RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
        throw Error(Errc::io_error, "RAND_bytes failed");
    }
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
        std::uint64_t word = engine_();
        for (int k = 0; k < 8 && i < out.size(); ++k, ++i) out[i] = static_cast<std::uint8_t>(word >> (8 * k));
    }
}

void ScriptedRandom::fill(std::span<std::uint8_t> out) {
    if (queue_.empty()) throw Error(Errc::invalid_argument, "scripted randomness exhausted");
    Bytes chunk = std::move(queue_.front());
    queue_.pop_front();
    if (chunk.size() != out.size()) throw Error(Errc::invalid_argument, "scripted randomness chunk has wrong length");
    std::copy(chunk.begin(), chunk.end(), out.begin());
}

}  // namespace acw
