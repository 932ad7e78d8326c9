#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acw/ars.hpp"
#include "acw/serialization.hpp"

/// Desk-scale security games, the toy-group brute-force oracle and the
/// timing benchmark. The games run fixed adversary strategy lists; they are
/// regression oracles, not proofs.
namespace acw::harness {

struct TrialRecord {
    std::uint8_t hidden_bit = 0;
    std::vector<std::uint8_t> guesses;  // one per distinguisher, same order as GameReport::distinguishers
};

struct DistinguisherResult {
    std::string name;
    bool holds_osk = false;
    double advantage = 0.0;  // |Pr[b'=1 | b=1] - Pr[b'=1 | b=0]|
    double sigma = 0.0;
};

struct GameReport {
    std::string game;
    std::size_t trials = 0;
    std::size_t adversary_wins = 0;
    std::vector<std::string> details;
    std::vector<DistinguisherResult> distinguishers;  // anonymity only
    std::vector<TrialRecord> records;                 // anonymity only
};

GameReport run_full_unforgeability_suite(const ars::PublicParams& pp, std::size_t trials, std::uint64_t seed = 1);
/// Non-osk distinguishers count as adversary wins when their advantage exceeds 3 sigma.
GameReport run_anonymity_suite(const ars::PublicParams& pp, std::size_t trials, std::uint64_t seed = 1);
GameReport run_traceability_suite(const ars::PublicParams& pp, std::size_t trials, std::uint64_t seed = 1);
GameReport run_tracing_soundness_suite(const ars::PublicParams& pp, std::size_t trials, std::uint64_t seed = 1);

inline constexpr std::string_view kSuiteNames[] = {"unforgeability", "anonymity", "traceability",
                                                   "tracing-soundness"};
/// Throws Error(invalid_argument) for an unknown suite name.
GameReport run_suite(std::string_view name, const ars::PublicParams& pp, std::size_t trials, std::uint64_t seed = 1);

/// Honest-verifier simulator: all (c_i, z_r_i, z_s_i) random, commitments
/// derived backwards, the overall challenge programmed to sum(c_i).
/// Returns how many of `trials` simulated transcripts satisfy every branch
/// equation and the programmed challenge sum.
std::size_t run_simulator_check(const ars::PublicParams& pp, std::size_t ring_size, std::size_t trials,
                                std::uint64_t seed = 1);

/// A signature context with one deliberate defect.
struct TamperCase {
    std::string name;
    GroupElement opk;
    Bytes message;
    ars::Ring ring;
    ars::RingSignature sig;
};

/// Deterministic mutations of an honest (opk, message, ring, sig): element
/// and scalar perturbations of every field, branch reordering, truncation and
/// padding, and transplants to another message, ring order and opener key.
std::vector<TamperCase> tamper_cases(const ars::PublicParams& pp, const GroupElement& opk, ByteView message,
                                     const ars::Ring& ring, const ars::RingSignature& sig);

/// Toy-group oracle: exhaustive discrete log base 4 mod 2027 by repeated
/// multiplication, independent of the Group implementation.
std::optional<std::uint32_t> toy_brute_force_dlog(std::uint32_t residue);
/// Recovers the ElGamal plaintext of `sig` from public data only, by brute
/// forcing r = log_g(u) and returning v / opk^r. Toy group only.
GroupElement toy_brute_force_decrypt(const ars::PublicParams& pp, const GroupElement& opk, const ars::RingSignature& sig);

struct BenchRow {
    std::string algorithm;  // rsign | rverify | open | judge
    std::size_t ring_size = 0;
    double mean_ms = 0.0;
    std::uint64_t exponentiations = 0;
    std::uint64_t hash_calls = 0;
};

struct BenchReport {
    std::string group_id;
    std::vector<std::size_t> ring_sizes;
    std::size_t runs = 0;
    std::vector<BenchRow> rows;

    /// Throws Error(invalid_argument) if the pair was not measured.
    const BenchRow& row(std::string_view algorithm, std::size_t ring_size) const;
};

inline constexpr std::string_view kBenchAlgorithms[] = {"rsign", "rverify", "open", "judge"};

/// Mean wall time of each algorithm over `runs` executions per ring size.
BenchReport run_bench(const ars::PublicParams& pp, const std::vector<std::size_t>& ring_sizes = {4, 10},
                      std::size_t runs = 100, std::uint64_t seed = 1);

io::json to_json(const GameReport& report, bool include_records = false);
io::json to_json(const BenchReport& report);
std::string format_table(const GameReport& report);
/// Algorithm x ring-size table.
std::string format_table(const BenchReport& report);

}  // namespace acw::harness
