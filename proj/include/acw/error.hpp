#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace acw {

enum class Errc {
    unknown_group,
    malformed_encoding,
    not_in_subgroup,
    empty_ring,
    duplicate_ring_members,
    signer_not_in_ring,
    empty_policy,
    overlapping_rings,
    duplicate_individuals,
    invalid_policy,
    address_collision,
    unknown_wallet,
    bad_nonce,
    missing_signature,
    extra_signature,
    invalid_ring_signature,
    invalid_individual_signature,
    insufficient_balance,
    out_of_range,
    untraceable,
    invalid_argument,
    io_error,
};

/// Stable kebab-case name, used in CLI diagnostics and JSON.
std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail, std::optional<std::size_t> index = std::nullopt);

    Errc code() const noexcept { return code_; }
    /// Ring or individual index the failure refers to, when there is one.
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    Errc code_;
    std::optional<std::size_t> index_;
};

}  // namespace acw
