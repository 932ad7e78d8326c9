#pragma once

#include <cstddef>
#include <optional>

#include "acw/ars.hpp"
#include "acw/random.hpp"
#include "acw/wallet.hpp"

namespace acw::audit {

/// Off-chain statement "ring member pk authorised log entry tx_index".
/// Exchanged between group members; never stored on the chain.
struct AuditClaim {
    std::size_t tx_index = 0;
    std::size_t ring_index = 0;
    GroupElement pk_identified;
    ars::OpeningProof proof;
};

/// Any holder of the ring's opening secret may open. nullopt when the key
/// does not belong to that ring (decryption lands outside it).
/// Throws Error(out_of_range) for unknown log or ring positions.
std::optional<AuditClaim> open_transaction(const wallet::Chain& chain, std::size_t tx_index, std::size_t ring_index,
                                           const Scalar& osk, RandomSource& rng);

/// Uses public chain data only. Any inconsistency yields false.
bool judge_transaction(const wallet::Chain& chain, const AuditClaim& claim);

}  // namespace acw::audit
