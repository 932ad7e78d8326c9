#pragma once

#include <cstdint>

namespace acw {

/// Desk-scale stand-in for gas: counts group exponentiations and hash-to-scalar calls.
struct CostMeter {
    std::uint64_t exponentiations = 0;
    std::uint64_t hash_calls = 0;

    void reset() noexcept { *this = CostMeter{}; }
    friend bool operator==(const CostMeter&, const CostMeter&) = default;
};

/// Routes the calling thread's group and hash operations into `meter` for the
/// lifetime of the scope. Scopes nest; the innermost one receives the counts.
class MeterScope {
public:
    explicit MeterScope(CostMeter& meter) noexcept;
    ~MeterScope();
    MeterScope(const MeterScope&) = delete;
    MeterScope& operator=(const MeterScope&) = delete;

private:
    CostMeter* previous_;
};

namespace metering {
void count_exponentiations(std::uint64_t n = 1) noexcept;
void count_hash() noexcept;
}  // namespace metering

}  // namespace acw
