#include "acw/wallet.hpp"

#include <charconv>
#include <limits>
#include <set>

#include "acw/error.hpp"
#include "acw/keccak.hpp"

namespace acw::wallet {

Address derive_address(ByteView data) {
    const auto digest = keccak256(data);
    Address a{};
    std::copy(digest.end() - 20, digest.end(), a.begin());
    return a;
}

std::string address_hex(const Address& a) { return to_hex(a); }

Address address_from_hex(std::string_view hex) {
    Bytes raw = from_hex(hex);
    if (raw.size() != 20) throw Error(Errc::invalid_argument, "address must be 20 bytes");
    Address a{};
    std::copy(raw.begin(), raw.end(), a.begin());
    return a;
}

void validate_policy(const Group& grp, const Policy& policy) {
    if (policy.rings.empty() && policy.individuals.empty()) {
        throw Error(Errc::empty_policy, "policy requires no signature at all");
    }
    std::set<Bytes> seen_members;
    for (std::size_t i = 0; i < policy.rings.size(); ++i) {
        if (policy.rings[i].opk.empty()) throw Error(Errc::invalid_argument, "ring " + std::to_string(i) + " has no opener key");
        for (const auto& pk : policy.rings[i].ring.members()) {
            if (!seen_members.insert(grp.encode(pk)).second) {
                throw Error(Errc::overlapping_rings, "ring " + std::to_string(i) + " shares a member with an earlier ring");
            }
        }
    }
    std::set<Bytes> seen_individuals;
    for (const auto& vk : policy.individuals) {
        if (vk.empty()) throw Error(Errc::invalid_argument, "individual key is unset");
        if (!seen_individuals.insert(grp.encode(vk)).second) {
            throw Error(Errc::duplicate_individuals, "individual verification key listed twice");
        }
    }
}

Bytes encode_policy(const Group& grp, const Policy& policy) {
    Transcript t;
    t.field("acw/policy/v1");
    t.field(grp.id());
    t.field_u64(policy.rings.size());
    for (const auto& pr : policy.rings) {
        t.field(grp.encode(pr.opk));
        t.field_u64(pr.ring.size());
        for (const auto& pk : pr.ring.members()) t.field(grp.encode(pk));
    }
    t.field_u64(policy.individuals.size());
    for (const auto& vk : policy.individuals) t.field(grp.encode(vk));
    return t.bytes();
}

ActionRule parse_action_rule(std::string_view spec) {
    if (spec == "record") return ActionRule{};
    constexpr std::string_view kTransfer = "transfer:";
    if (spec.starts_with(kTransfer)) {
        std::string_view rest = spec.substr(kTransfer.size());
        auto colon = rest.find(':');
        if (colon != std::string_view::npos) {
            ActionRule rule;
            rule.kind = ActionRule::Kind::transfer;
            std::string_view amount = rest.substr(0, colon);
            auto [ptr, ec] = std::from_chars(amount.data(), amount.data() + amount.size(), rule.amount);
            if (ec == std::errc{} && ptr == amount.data() + amount.size()) {
                rule.recipient = address_from_hex(rest.substr(colon + 1));
                return rule;
            }
        }
    }
    throw Error(Errc::invalid_argument, "action rule must be 'record' or 'transfer:<amount>:<address>'");
}

std::string format_action_rule(const ActionRule& rule) {
    if (rule.kind == ActionRule::Kind::record) return "record";
    return "transfer:" + std::to_string(rule.amount) + ":" + address_hex(rule.recipient);
}

Bytes canonical_message(const TransactionRequest& req) {
    Transcript t;
    t.field("acw/tx/v1");
    t.field_u64(req.chain_id);
    t.field(req.wallet);
    t.field_u64(req.nonce);
    t.field(req.payload);
    return t.bytes();
}

Chain::Chain(ars::PublicParams pp, std::uint64_t chain_id) : pp_(std::move(pp)), chain_id_(chain_id) {}

Address Chain::wallet_address(const Policy& policy, ByteView salt) const {
    Bytes preimage = to_bytes("WALLET");
    preimage.insert(preimage.end(), salt.begin(), salt.end());
    Bytes enc = encode_policy(grp(), policy);
    preimage.insert(preimage.end(), enc.begin(), enc.end());
    return derive_address(preimage);
}

Address Chain::deploy_contract_wallet(Policy policy, ActionRule rule, ByteView salt) {
    try {
        validate_policy(grp(), policy);
    } catch (const Error& e) {
        throw Error(Errc::invalid_policy, e.what());
    }
    const Address addr = wallet_address(policy, salt);
    if (wallets_.contains(addr)) throw Error(Errc::address_collision, "wallet " + address_hex(addr) + " already deployed");
    ContractWallet w;
    w.address = addr;
    w.policy = std::move(policy);
    w.rule = rule;
    wallets_.emplace(addr, std::move(w));
    return addr;
}

TransactionRequest Chain::build_request(const Address& wallet_addr, Bytes payload) const {
    return TransactionRequest{chain_id_, wallet_addr, wallet(wallet_addr).nonce, std::move(payload)};
}

void Chain::credit(const Address& account, std::uint64_t amount) {
    std::uint64_t& bal = accounts_[account];
    if (bal > std::numeric_limits<std::uint64_t>::max() - amount) throw Error(Errc::invalid_argument, "balance overflow");
    bal += amount;
}

const ContractWallet* Chain::find_wallet(const Address& a) const {
    auto it = wallets_.find(a);
    return it == wallets_.end() ? nullptr : &it->second;
}

const ContractWallet& Chain::wallet(const Address& a) const {
    const ContractWallet* w = find_wallet(a);
    if (!w) throw Error(Errc::unknown_wallet, "no wallet at " + address_hex(a));
    return *w;
}

std::uint64_t Chain::balance(const Address& a) const {
    auto it = accounts_.find(a);
    return it == accounts_.end() ? 0 : it->second;
}

namespace {

// Index coverage: every policy slot exactly once, nothing outside the policy.
template <typename Entries>
void check_coverage(const Entries& entries, std::size_t slots, const char* what) {
    std::vector<bool> covered(slots, false);
    for (const auto& [index, sig] : entries) {
        if (index >= slots || covered[index]) {
            throw Error(Errc::extra_signature, std::string("unexpected ") + what + " signature", index);
        }
        covered[index] = true;
    }
    for (std::size_t i = 0; i < slots; ++i) {
        if (!covered[i]) throw Error(Errc::missing_signature, std::string("no ") + what + " signature", i);
    }
}

}  // namespace

void Chain::verify_bundle(const ContractWallet& w, const TransactionRequest& req,
                          const AuthorizationBundle& bundle) const {
    check_coverage(bundle.ring_sigs, w.policy.rings.size(), "ring");
    check_coverage(bundle.ind_sigs, w.policy.individuals.size(), "individual");

    const Bytes message = canonical_message(req);
    for (const auto& [index, sig] : bundle.ring_sigs) {
        const PolicyRing& pr = w.policy.rings[index];
        if (!ars::rverify(pp_, pr.opk, message, pr.ring, sig)) {
            throw Error(Errc::invalid_ring_signature, "ring signature rejected", index);
        }
    }
    for (const auto& [index, sig] : bundle.ind_sigs) {
        if (!individual_verify(grp(), w.policy.individuals[index], message, sig)) {
            throw Error(Errc::invalid_individual_signature, "individual signature rejected", index);
        }
    }
}

Receipt Chain::submit_transaction(const TransactionRequest& req, const AuthorizationBundle& bundle) {
    meter_.reset();
    const ContractWallet& w = wallet(req.wallet);
    if (req.chain_id != chain_id_) throw Error(Errc::invalid_argument, "request targets another chain");
    if (req.nonce != w.nonce) {
        throw Error(Errc::bad_nonce, "expected nonce " + std::to_string(w.nonce) + ", got " + std::to_string(req.nonce));
    }

    CostMeter meter;
    {
        MeterScope scope(meter);
        try {
            verify_bundle(w, req, bundle);
        } catch (...) {
            meter_ = meter;
            throw;
        }
    }
    meter_ = meter;

    if (w.rule.kind == ActionRule::Kind::transfer) {
        if (balance(w.address) < w.rule.amount) throw Error(Errc::insufficient_balance, "wallet cannot cover transfer");
        if (w.rule.recipient != w.address &&
            balance(w.rule.recipient) > std::numeric_limits<std::uint64_t>::max() - w.rule.amount) {
            throw Error(Errc::invalid_argument, "recipient balance overflow");
        }
    }

    // commit: nothing below can fail
    if (w.rule.kind == ActionRule::Kind::transfer && w.rule.amount > 0) {
        accounts_[w.address] -= w.rule.amount;
        accounts_[w.rule.recipient] += w.rule.amount;
    }
    log_.push_back(LogEntry{req, bundle});
    ++wallets_.at(req.wallet).nonce;
    return Receipt{log_.size() - 1, meter};
}

Chain Chain::restore(ars::PublicParams pp, std::uint64_t chain_id, std::map<Address, ContractWallet> wallets,
                     std::map<Address, std::uint64_t> accounts, std::vector<LogEntry> log) {
    Chain c(std::move(pp), chain_id);
    c.wallets_ = std::move(wallets);
    c.accounts_ = std::move(accounts);
    c.log_ = std::move(log);
    return c;
}

}  // namespace acw::wallet
