#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "acw/ars.hpp"
#include "acw/bytes.hpp"
#include "acw/cost_meter.hpp"
#include "acw/group.hpp"

namespace acw::wallet {

using Address = std::array<std::uint8_t, 20>;

/// Last 20 bytes of Keccak-256 over `data`.
Address derive_address(ByteView data);
std::string address_hex(const Address& a);
/// Throws Error(invalid_argument) unless the input is 20 bytes of hex.
Address address_from_hex(std::string_view hex);

struct PolicyRing {
    ars::Ring ring;
    GroupElement opk;
};

/// Every ring (one anonymous member each) and every individual key must sign.
struct Policy {
    std::vector<PolicyRing> rings;
    std::vector<GroupElement> individuals;
};

/// Throws Error(empty_policy | overlapping_rings | duplicate_individuals | invalid_argument).
void validate_policy(const Group& grp, const Policy& policy);
Bytes encode_policy(const Group& grp, const Policy& policy);

/// Conventional signature key for individual users: ECDSA on the production
/// curve, Schnorr in the toy group. vk = g^sigk either way.
struct IndividualKeyPair {
    GroupElement vk;
    Scalar sigk;
};

IndividualKeyPair individual_keygen(const Group& grp, RandomSource& rng);
Bytes individual_sign(const Group& grp, const Scalar& sigk, ByteView message, RandomSource& rng);
bool individual_verify(const Group& grp, const GroupElement& vk, ByteView message, ByteView signature);

struct ActionRule {
    enum class Kind { record, transfer };
    Kind kind = Kind::record;
    std::uint64_t amount = 0;
    Address recipient{};

    friend bool operator==(const ActionRule&, const ActionRule&) = default;
};

/// "record" or "transfer:<amount>:<hex address>".
ActionRule parse_action_rule(std::string_view spec);
std::string format_action_rule(const ActionRule& rule);

struct ContractWallet {
    Address address{};
    Policy policy;
    std::uint64_t nonce = 0;
    ActionRule rule;
};

struct TransactionRequest {
    std::uint64_t chain_id = 0;
    Address wallet{};
    std::uint64_t nonce = 0;
    Bytes payload;
};

/// The message every signature in a bundle signs.
Bytes canonical_message(const TransactionRequest& req);

struct AuthorizationBundle {
    std::vector<std::pair<std::size_t, ars::RingSignature>> ring_sigs;  // (policy ring index, signature)
    std::vector<std::pair<std::size_t, Bytes>> ind_sigs;                // (policy individual index, signature)
};

/// Executed transactions carry no issuer identity, only what was submitted.
struct LogEntry {
    TransactionRequest request;
    AuthorizationBundle bundle;
};

struct Receipt {
    std::size_t tx_index = 0;
    CostMeter meter;
};

inline std::pair<std::uint64_t, std::uint64_t> meter_read(const Receipt& r) {
    return {r.meter.exponentiations, r.meter.hash_calls};
}

/// Single-writer, in-process account-abstraction chain. Submissions either
/// commit completely or leave every piece of state untouched.
class Chain {
public:
    Chain(ars::PublicParams pp, std::uint64_t chain_id);

    const ars::PublicParams& params() const noexcept { return pp_; }
    const Group& grp() const { return pp_.grp(); }
    std::uint64_t chain_id() const noexcept { return chain_id_; }

    /// Throws Error(invalid_policy | address_collision).
    Address deploy_contract_wallet(Policy policy, ActionRule rule, ByteView salt);
    /// Wallet address a deployment of (policy, salt) would receive.
    Address wallet_address(const Policy& policy, ByteView salt) const;

    /// Throws Error(unknown_wallet | bad_nonce | missing_signature | extra_signature |
    /// invalid_ring_signature | invalid_individual_signature | insufficient_balance | invalid_argument).
    Receipt submit_transaction(const TransactionRequest& req, const AuthorizationBundle& bundle);

    /// Request for `wallet` at its current nonce.
    TransactionRequest build_request(const Address& wallet, Bytes payload) const;

    /// Mint funds into an account (genesis allocation).
    void credit(const Address& account, std::uint64_t amount);

    const ContractWallet* find_wallet(const Address& a) const;
    /// Throws Error(unknown_wallet).
    const ContractWallet& wallet(const Address& a) const;
    std::uint64_t balance(const Address& a) const;

    const std::map<Address, ContractWallet>& wallets() const noexcept { return wallets_; }
    const std::map<Address, std::uint64_t>& accounts() const noexcept { return accounts_; }
    const std::vector<LogEntry>& log() const noexcept { return log_; }
    /// Reading of the most recent submission attempt.
    const CostMeter& meter() const noexcept { return meter_; }

    /// Rebuilds a chain from persisted parts; no re-verification.
    static Chain restore(ars::PublicParams pp, std::uint64_t chain_id, std::map<Address, ContractWallet> wallets,
                         std::map<Address, std::uint64_t> accounts, std::vector<LogEntry> log);

private:
    void verify_bundle(const ContractWallet& w, const TransactionRequest& req, const AuthorizationBundle& bundle) const;

    ars::PublicParams pp_;
    std::uint64_t chain_id_;
    std::map<Address, ContractWallet> wallets_;
    std::map<Address, std::uint64_t> accounts_;
    std::vector<LogEntry> log_;
    CostMeter meter_;
};

}  // namespace acw::wallet
