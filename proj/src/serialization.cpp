#include "acw/serialization.hpp"

#include "acw/error.hpp"

namespace acw::io {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(Errc::invalid_argument, std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string get_string(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) throw Error(Errc::invalid_argument, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t get_uint(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw Error(Errc::invalid_argument, std::string("field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

const json& get_array(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_array()) throw Error(Errc::invalid_argument, std::string("field '") + key + "' must be an array");
    return v;
}

GroupElement element_from(const Group& grp, const json& v) {
    if (!v.is_string()) throw Error(Errc::invalid_argument, "group element must be a hex string");
    return grp.decode(from_hex(v.get<std::string>()));
}

}  // namespace

json policy_to_json(const Group& grp, const wallet::Policy& policy) {
    json rings = json::array();
    for (const auto& pr : policy.rings) {
        json members = json::array();
        for (const auto& pk : pr.ring.members()) members.push_back(to_hex(grp.encode(pk)));
        rings.push_back({{"opk", to_hex(grp.encode(pr.opk))}, {"members", members}});
    }
    json individuals = json::array();
    for (const auto& vk : policy.individuals) individuals.push_back(to_hex(grp.encode(vk)));
    return {{"rings", rings}, {"individuals", individuals}};
}

wallet::Policy policy_from_json(const Group& grp, const json& j) {
    wallet::Policy policy;
    for (const auto& r : get_array(j, "rings")) {
        std::vector<GroupElement> members;
        for (const auto& m : get_array(r, "members")) members.push_back(element_from(grp, m));
        policy.rings.push_back(wallet::PolicyRing{ars::Ring(std::move(members)), element_from(grp, field(r, "opk"))});
    }
    for (const auto& vk : get_array(j, "individuals")) policy.individuals.push_back(element_from(grp, vk));
    return policy;
}

json transaction_to_json(const ars::PublicParams& pp, const wallet::TransactionRequest& req,
                         const wallet::AuthorizationBundle& bundle) {
    json ring_sigs = json::array();
    for (const auto& [index, sig] : bundle.ring_sigs) {
        ring_sigs.push_back({{"ring", index}, {"sig", to_hex(ars::serialize(pp, sig))}});
    }
    json ind_sigs = json::array();
    for (const auto& [index, sig] : bundle.ind_sigs) ind_sigs.push_back({{"vk", index}, {"sig", to_hex(sig)}});
    return {{"chain_id", req.chain_id},
            {"wallet", wallet::address_hex(req.wallet)},
            {"nonce", req.nonce},
            {"payload", to_hex(req.payload)},
            {"ring_sigs", ring_sigs},
            {"ind_sigs", ind_sigs}};
}

std::pair<wallet::TransactionRequest, wallet::AuthorizationBundle> transaction_from_json(const ars::PublicParams& pp,
                                                                                         const json& j) {
    wallet::TransactionRequest req;
    req.chain_id = get_uint(j, "chain_id");
    req.wallet = wallet::address_from_hex(get_string(j, "wallet"));
    req.nonce = get_uint(j, "nonce");
    req.payload = from_hex(get_string(j, "payload"));

    wallet::AuthorizationBundle bundle;
    if (j.contains("ring_sigs")) {
        for (const auto& e : get_array(j, "ring_sigs")) {
            bundle.ring_sigs.emplace_back(get_uint(e, "ring"),
                                          ars::deserialize_signature(pp, from_hex(get_string(e, "sig"))));
        }
    }
    if (j.contains("ind_sigs")) {
        for (const auto& e : get_array(j, "ind_sigs")) {
            bundle.ind_sigs.emplace_back(get_uint(e, "vk"), from_hex(get_string(e, "sig")));
        }
    }
    return {std::move(req), std::move(bundle)};
}

json receipt_to_json(const wallet::Receipt& receipt) {
    return {{"tx_index", receipt.tx_index},
            {"exponentiations", receipt.meter.exponentiations},
            {"hash_calls", receipt.meter.hash_calls}};
}

wallet::Receipt receipt_from_json(const json& j) {
    wallet::Receipt r;
    r.tx_index = get_uint(j, "tx_index");
    r.meter.exponentiations = get_uint(j, "exponentiations");
    r.meter.hash_calls = get_uint(j, "hash_calls");
    return r;
}

json claim_to_json(const ars::PublicParams& pp, const audit::AuditClaim& claim) {
    return {{"tx_index", claim.tx_index},
            {"ring", claim.ring_index},
            {"pk", to_hex(pp.grp().encode(claim.pk_identified))},
            {"proof", to_hex(ars::serialize(pp, claim.proof))}};
}

audit::AuditClaim claim_from_json(const ars::PublicParams& pp, const json& j) {
    audit::AuditClaim claim;
    claim.tx_index = get_uint(j, "tx_index");
    claim.ring_index = get_uint(j, "ring");
    claim.pk_identified = element_from(pp.grp(), field(j, "pk"));
    claim.proof = ars::deserialize_proof(pp, from_hex(get_string(j, "proof")));
    return claim;
}

json chain_to_json(const wallet::Chain& chain) {
    const Group& grp = chain.grp();
    json accounts = json::object();
    for (const auto& [addr, bal] : chain.accounts()) accounts[wallet::address_hex(addr)] = bal;
    json wallets = json::array();
    for (const auto& [addr, w] : chain.wallets()) {
        wallets.push_back({{"address", wallet::address_hex(addr)},
                           {"policy", policy_to_json(grp, w.policy)},
                           {"nonce", w.nonce},
                           {"rule", wallet::format_action_rule(w.rule)}});
    }
    json log = json::array();
    for (const auto& entry : chain.log()) log.push_back(transaction_to_json(chain.params(), entry.request, entry.bundle));
    return {{"format", "acw-chain/1"},
            {"group", std::string(grp.id())},
            {"chain_id", chain.chain_id()},
            {"accounts", accounts},
            {"wallets", wallets},
            {"log", log}};
}

wallet::Chain chain_from_json(const json& j) {
    if (get_string(j, "format") != "acw-chain/1") throw Error(Errc::invalid_argument, "unsupported chain state format");
    ars::PublicParams pp = ars::setup(get_string(j, "group"));
    std::map<wallet::Address, std::uint64_t> accounts;
    const json& acc = field(j, "accounts");
    if (!acc.is_object()) throw Error(Errc::invalid_argument, "accounts must be an object");
    for (const auto& [addr, bal] : acc.items()) {
        if (!bal.is_number_unsigned()) throw Error(Errc::invalid_argument, "balance must be a non-negative integer");
        accounts[wallet::address_from_hex(addr)] = bal.get<std::uint64_t>();
    }
    std::map<wallet::Address, wallet::ContractWallet> wallets;
    for (const auto& w : get_array(j, "wallets")) {
        wallet::ContractWallet cw;
        cw.address = wallet::address_from_hex(get_string(w, "address"));
        cw.policy = policy_from_json(pp.grp(), field(w, "policy"));
        cw.nonce = get_uint(w, "nonce");
        cw.rule = wallet::parse_action_rule(get_string(w, "rule"));
        wallets.emplace(cw.address, std::move(cw));
    }
    std::vector<wallet::LogEntry> log;
    for (const auto& e : get_array(j, "log")) {
        auto [req, bundle] = transaction_from_json(pp, e);
        log.push_back(wallet::LogEntry{std::move(req), std::move(bundle)});
    }
    return wallet::Chain::restore(std::move(pp), get_uint(j, "chain_id"), std::move(wallets), std::move(accounts),
                                  std::move(log));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::invalid_argument, std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace acw::io
