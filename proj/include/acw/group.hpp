#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "acw/bytes.hpp"
#include "acw/random.hpp"

struct ec_point_st;  // OpenSSL EC_POINT

namespace acw {

inline constexpr std::string_view kProductionGroupId = "production";
inline constexpr std::string_view kToyGroupId = "toy";

/// Element of Z_q, stored as a 32-byte big-endian integer already reduced by
/// the owning group. Arithmetic goes through Group, which knows q.
class Scalar {
public:
    Scalar() = default;
    explicit Scalar(const std::array<std::uint8_t, 32>& be) : be_(be) {}

    const std::array<std::uint8_t, 32>& be_bytes() const noexcept { return be_; }
    bool is_zero() const noexcept;

    friend auto operator<=>(const Scalar&, const Scalar&) = default;

private:
    std::array<std::uint8_t, 32> be_{};
};

struct GroupElementAccess;

/// Opaque member of a prime-order group. Values are immutable; copies are cheap.
class GroupElement {
public:
    GroupElement() = default;

    bool empty() const noexcept { return std::holds_alternative<std::monostate>(rep_); }
    friend bool operator==(const GroupElement& a, const GroupElement& b);

private:
    friend struct GroupElementAccess;
    using EcPoint = std::shared_ptr<const ec_point_st>;
    std::variant<std::monostate, std::uint32_t, EcPoint> rep_;
};

struct GroupDescription {
    std::string group_id;
    Bytes order_q;  // big-endian
    GroupElement generator_g;
};

/// Prime-order group with its scalar field, written multiplicatively.
///
/// exp/exp_g count one exponentiation on the active CostMeter, exp2 counts two,
/// hash_to_scalar counts one hash call. Everything else is unmetered.
class Group {
public:
    virtual ~Group() = default;
    Group(const Group&) = delete;
    Group& operator=(const Group&) = delete;

    virtual std::string_view id() const = 0;
    virtual std::size_t element_size() const = 0;
    std::size_t scalar_size() const noexcept { return scalar_size_; }
    const Bytes& order() const noexcept { return order_; }
    GroupDescription description() const;
    /// Checks q prime and generator order exactly q; throws on failure.
    void validate() const;

    virtual GroupElement identity() const = 0;
    virtual GroupElement generator() const = 0;
    virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;
    virtual GroupElement inverse(const GroupElement& a) const = 0;
    GroupElement div(const GroupElement& a, const GroupElement& b) const { return mul(a, inverse(b)); }

    GroupElement exp(const GroupElement& base, const Scalar& e) const;
    GroupElement exp_g(const Scalar& e) const;
    /// base1^e1 * base2^e2. May run in variable time: public exponents only.
    GroupElement exp2(const GroupElement& base1, const Scalar& e1, const GroupElement& base2, const Scalar& e2) const;

    /// Fixed-width canonical encoding (compressed SEC1 point, or big-endian residue).
    virtual Bytes encode(const GroupElement& e) const = 0;
    /// Throws Error(malformed_encoding) or Error(not_in_subgroup).
    virtual GroupElement decode(ByteView bytes) const = 0;

    Scalar scalar(std::uint64_t v) const;
    Scalar add(const Scalar& a, const Scalar& b) const;
    Scalar sub(const Scalar& a, const Scalar& b) const;
    Scalar mul(const Scalar& a, const Scalar& b) const;
    Scalar neg(const Scalar& a) const;
    /// Throws Error(invalid_argument) for zero.
    Scalar invert(const Scalar& a) const;
    /// Arbitrary-length big-endian integer reduced mod q.
    Scalar reduce(ByteView be) const;

    /// Fixed-width big-endian (scalar_size() bytes).
    Bytes encode_scalar(const Scalar& s) const;
    /// Rejects wrong widths and non-canonical values (>= q).
    Scalar decode_scalar(ByteView bytes) const;

    Scalar random_scalar(RandomSource& rng) const;
    Scalar random_nonzero_scalar(RandomSource& rng) const;

    /// SHA-512(len(tag) || tag || transcript) reduced mod q.
    Scalar hash_to_scalar(ByteView domain_tag, ByteView transcript) const;
    Scalar hash_to_scalar(std::string_view domain_tag, ByteView transcript) const;

protected:
    explicit Group(Bytes order_be);

    virtual GroupElement raw_exp(const GroupElement& base, const Scalar& e) const = 0;
    virtual GroupElement raw_exp2(const GroupElement& base1, const Scalar& e1, const GroupElement& base2,
                                  const Scalar& e2) const;

private:
    Bytes order_;
    std::size_t scalar_size_;
    int order_bits_;
};

/// Shared, validated instance for "production" (secp256k1) or "toy"
/// (order-1013 subgroup of Z_2027^*). Throws Error(unknown_group).
std::shared_ptr<const Group> instantiate(std::string_view group_id);

}  // namespace acw
