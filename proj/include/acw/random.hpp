#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <span>

#include "acw/bytes.hpp"

namespace acw {

/// Entropy source consumed by key generation, signing and opening.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// Operating-system entropy (OpenSSL's RAND_bytes).
class SystemRandom final : public RandomSource {
public:
    void fill(std::span<std::uint8_t> out) override;
};

/// Reproducible stream for tests and benchmarks. Not for key material.
class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
    void fill(std::span<std::uint8_t> out) override;

private:
    std::mt19937_64 engine_;
};

/// Replays queued byte strings, one per fill() call; each chunk must match the
/// requested length exactly. Used to force specific scalars (feed the scalar's
/// fixed-width encoding). Throws once exhausted.
class ScriptedRandom final : public RandomSource {
public:
    ScriptedRandom() = default;
    void push(Bytes chunk) { queue_.push_back(std::move(chunk)); }
    bool exhausted() const noexcept { return queue_.empty(); }
    void fill(std::span<std::uint8_t> out) override;

private:
    std::deque<Bytes> queue_;
};

}  // namespace acw
