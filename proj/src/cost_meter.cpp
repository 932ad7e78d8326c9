#include "acw/cost_meter.hpp"

namespace acw {

namespace {
thread_local CostMeter* active_meter = nullptr;
}

MeterScope::MeterScope(CostMeter& meter) noexcept : previous_(active_meter) { active_meter = &meter; }

MeterScope::~MeterScope() { active_meter = previous_; }

namespace metering {

void count_exponentiations(std::uint64_t n) noexcept {
    if (active_meter) active_meter->exponentiations += n;
}

void count_hash() noexcept {
    if (active_meter) ++active_meter->hash_calls;
}

}  // namespace metering
}  // namespace acw
