#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "acw/ars.hpp"
#include "acw/audit.hpp"
#include "acw/wallet.hpp"

/// JSON file formats exchanged between parties and persisted by the CLI.
/// Keys and signatures are hex strings of their canonical binary encodings.
/// Parsers throw Error(invalid_argument) for schema violations and pass
/// through decoding errors (malformed_encoding, not_in_subgroup, ...).
namespace acw::io {

using json = nlohmann::json;

/// {"rings":[{"opk":hex,"members":[hex,...]},...],"individuals":[hex,...]}
json policy_to_json(const Group& grp, const wallet::Policy& policy);
wallet::Policy policy_from_json(const Group& grp, const json& j);

/// TransactionData:
/// {"chain_id":int,"wallet":hex20,"nonce":int,"payload":hex,
///  "ring_sigs":[{"ring":int,"sig":hex}],"ind_sigs":[{"vk":int,"sig":hex}]}
json transaction_to_json(const ars::PublicParams& pp, const wallet::TransactionRequest& req,
                         const wallet::AuthorizationBundle& bundle);
std::pair<wallet::TransactionRequest, wallet::AuthorizationBundle> transaction_from_json(const ars::PublicParams& pp,
                                                                                         const json& j);

/// {"tx_index":int,"exponentiations":int,"hash_calls":int}
json receipt_to_json(const wallet::Receipt& receipt);
wallet::Receipt receipt_from_json(const json& j);

/// {"tx_index":int,"ring":int,"pk":hex,"proof":hex}
json claim_to_json(const ars::PublicParams& pp, const audit::AuditClaim& claim);
audit::AuditClaim claim_from_json(const ars::PublicParams& pp, const json& j);

/// Full chain state: group, chain id, balances, wallets and the transaction log.
json chain_to_json(const wallet::Chain& chain);
wallet::Chain chain_from_json(const json& j);

/// Canonical text form (sorted keys, two-space indent, trailing newline).
std::string dump(const json& j);
/// Throws Error(invalid_argument) on syntax errors.
json parse(std::string_view text);

}  // namespace acw::io
