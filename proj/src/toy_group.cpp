#include "acw/error.hpp"
#include "group_internal.hpp"

namespace acw::detail {

namespace {

// Order-1013 subgroup of quadratic residues mod the safe prime 2027 = 2*1013 + 1.
constexpr std::uint32_t kP = 2027;
constexpr std::uint32_t kQ = 1013;
constexpr std::uint32_t kG = 4;

std::uint32_t pow_mod(std::uint32_t base, std::uint32_t e) {
    std::uint64_t result = 1;
    std::uint64_t b = base % kP;
    while (e > 0) {
        if (e & 1) result = result * b % kP;
        b = b * b % kP;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

std::uint32_t scalar_value(const Scalar& s) {
    const auto& be = s.be_bytes();
    return (static_cast<std::uint32_t>(be[30]) << 8) | be[31];
}

class ToyGroup final : public Group {
public:
    ToyGroup() : Group(Bytes{0x03, 0xf5}) {}

    std::string_view id() const override { return kToyGroupId; }
    std::size_t element_size() const override { return 2; }

    GroupElement identity() const override { return GroupElementAccess::toy(1); }
    GroupElement generator() const override { return GroupElementAccess::toy(kG); }

    GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
        std::uint64_t x = GroupElementAccess::toy_value(a);
        std::uint64_t y = GroupElementAccess::toy_value(b);
        return GroupElementAccess::toy(static_cast<std::uint32_t>(x * y % kP));
    }

    GroupElement inverse(const GroupElement& a) const override {
        return GroupElementAccess::toy(pow_mod(GroupElementAccess::toy_value(a), kP - 2));
    }

    Bytes encode(const GroupElement& e) const override {
        std::uint32_t v = GroupElementAccess::toy_value(e);
        return Bytes{static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
    }

    GroupElement decode(ByteView bytes) const override {
        if (bytes.size() != 2) throw Error(Errc::malformed_encoding, "toy element must be 2 bytes");
        std::uint32_t v = (static_cast<std::uint32_t>(bytes[0]) << 8) | bytes[1];
        if (v == 0 || v >= kP) throw Error(Errc::malformed_encoding, "toy element outside [1, p)");
        if (pow_mod(v, kQ) != 1) throw Error(Errc::not_in_subgroup, "toy element is not a quadratic residue");
        return GroupElementAccess::toy(v);
    }

protected:
    GroupElement raw_exp(const GroupElement& base, const Scalar& e) const override {
        return GroupElementAccess::toy(pow_mod(GroupElementAccess::toy_value(base), scalar_value(e)));
    }
};

}  // namespace

std::shared_ptr<const Group> make_toy_group() {
    auto g = std::make_shared<ToyGroup>();
    g->validate();
    return g;
}

}  // namespace acw::detail
