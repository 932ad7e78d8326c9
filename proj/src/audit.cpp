#include "acw/audit.hpp"

#include "acw/error.hpp"

namespace acw::audit {

namespace {

struct LoggedRingSig {
    const wallet::PolicyRing* ring = nullptr;
    const ars::RingSignature* sig = nullptr;
    Bytes message;
};

std::optional<LoggedRingSig> locate(const wallet::Chain& chain, std::size_t tx_index, std::size_t ring_index) {
    if (tx_index >= chain.log().size()) return std::nullopt;
    const wallet::LogEntry& entry = chain.log()[tx_index];
    const wallet::ContractWallet* w = chain.find_wallet(entry.request.wallet);
    if (!w || ring_index >= w->policy.rings.size()) return std::nullopt;
    for (const auto& [index, sig] : entry.bundle.ring_sigs) {
        if (index == ring_index) {
            return LoggedRingSig{&w->policy.rings[ring_index], &sig, wallet::canonical_message(entry.request)};
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<AuditClaim> open_transaction(const wallet::Chain& chain, std::size_t tx_index, std::size_t ring_index,
                                           const Scalar& osk, RandomSource& rng) {
    if (tx_index >= chain.log().size()) {
        throw Error(Errc::out_of_range, "transaction " + std::to_string(tx_index) + " is not in the log");
    }
    auto logged = locate(chain, tx_index, ring_index);
    if (!logged) throw Error(Errc::out_of_range, "ring " + std::to_string(ring_index) + " is not in the wallet policy");

    auto proof = ars::open(chain.params(), logged->message, logged->ring->ring, *logged->sig, osk, rng);
    if (!proof) return std::nullopt;
    return AuditClaim{tx_index, ring_index, proof->pk_identified, *proof};
}

bool judge_transaction(const wallet::Chain& chain, const AuditClaim& claim) {
    auto logged = locate(chain, claim.tx_index, claim.ring_index);
    if (!logged) return false;
    return ars::judge(chain.params(), logged->ring->opk, logged->message, logged->ring->ring, *logged->sig,
                      claim.pk_identified, claim.proof);
}

}  // namespace acw::audit
