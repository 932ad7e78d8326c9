#include "acw/error.hpp"

namespace acw {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::unknown_group: return "unknown-identifier";
        case Errc::malformed_encoding: return "malformed-encoding";
        case Errc::not_in_subgroup: return "not-in-subgroup";
        case Errc::empty_ring: return "empty-ring";
        case Errc::duplicate_ring_members: return "duplicate-ring-members";
        case Errc::signer_not_in_ring: return "signer-not-in-ring";
        case Errc::empty_policy: return "empty-policy";
        case Errc::overlapping_rings: return "overlapping-rings";
        case Errc::duplicate_individuals: return "duplicate-individuals";
        case Errc::invalid_policy: return "invalid-policy";
        case Errc::address_collision: return "address-collision";
        case Errc::unknown_wallet: return "unknown-wallet";
        case Errc::bad_nonce: return "bad-nonce";
        case Errc::missing_signature: return "missing-signature";
        case Errc::extra_signature: return "extra-signature";
        case Errc::invalid_ring_signature: return "invalid-ring-signature";
        case Errc::invalid_individual_signature: return "invalid-individual-signature";
        case Errc::insufficient_balance: return "insufficient-balance";
        case Errc::out_of_range: return "out-of-range";
        case Errc::untraceable: return "untraceable";
        case Errc::invalid_argument: return "invalid-argument";
        case Errc::io_error: return "io-error";
    }
    return "unknown";
}

namespace {

std::string format_what(Errc code, const std::string& detail, std::optional<std::size_t> index) {
    std::string out(errc_name(code));
    if (index) out += "(" + std::to_string(*index) + ")";
    if (!detail.empty()) out += ": " + detail;
    return out;
}

}  // namespace

Error::Error(Errc code, const std::string& detail, std::optional<std::size_t> index)
    : std::runtime_error(format_what(code, detail, index)), code_(code), index_(index) {}

}  // namespace acw
