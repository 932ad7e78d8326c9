#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "acw/cost_meter.hpp"
#include "acw/error.hpp"
#include "acw/harness.hpp"

namespace acw::harness {

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double elapsed_ms(Fn&& fn) {
    const auto start = Clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename Fn>
CostMeter metered(Fn&& fn) {
    CostMeter meter;
    MeterScope scope(meter);
    fn();
    return meter;
}

}  // namespace

const BenchRow& BenchReport::row(std::string_view algorithm, std::size_t ring_size) const {
    for (const auto& r : rows) {
        if (r.algorithm == algorithm && r.ring_size == ring_size) return r;
    }
    throw Error(Errc::invalid_argument, "no bench row for " + std::string(algorithm) + " at N=" + std::to_string(ring_size));
}

namespace {

struct Fixture {
    std::size_t n;
    ars::Ring ring;
    ars::OpenerKeyPair opener;
    Scalar sk;
    Bytes message;
    ars::RingSignature sig;
    ars::OpeningProof proof;
    double total_ms[4] = {0, 0, 0, 0};  // kBenchAlgorithms order
};

}  // namespace

// Runs are interleaved across ring sizes and algorithms, so machine load
// drift during the run affects every row alike.
BenchReport run_bench(const ars::PublicParams& pp, const std::vector<std::size_t>& ring_sizes, std::size_t runs,
                      std::uint64_t seed) {
    SeededRandom rng(seed);
    BenchReport report{std::string(pp.grp().id()), ring_sizes, runs, {}};

    std::vector<Fixture> fixtures;
    for (std::size_t n : ring_sizes) {
        std::vector<GroupElement> members;
        std::vector<ars::UserKeyPair> users;
        while (users.size() < n) {
            auto kp = ars::ukgen(pp, rng);
            if (std::find(members.begin(), members.end(), kp.pk) != members.end()) continue;
            members.push_back(kp.pk);
            users.push_back(kp);
        }
        Bytes message(32);
        rng.fill(message);
        Fixture f{n, ars::Ring(members), ars::okgen(pp, rng), users[n / 2].sk, message, {}, {}};
        f.sig = ars::rsign(pp, f.opener.opk, f.message, f.ring, f.sk, rng);
        auto proof = ars::open(pp, f.message, f.ring, f.sig, f.opener.osk, rng);
        if (!proof) throw Error(Errc::untraceable, "benchmark signature failed to open");
        f.proof = *proof;
        fixtures.push_back(std::move(f));
    }

    bool sink = true;
    for (std::size_t run = 0; run < runs; ++run) {
        for (auto& f : fixtures) {
            f.total_ms[0] += elapsed_ms([&] { ars::rsign(pp, f.opener.opk, f.message, f.ring, f.sk, rng); });
            f.total_ms[1] += elapsed_ms([&] { sink &= ars::rverify(pp, f.opener.opk, f.message, f.ring, f.sig); });
            f.total_ms[2] += elapsed_ms([&] { sink &= ars::open(pp, f.message, f.ring, f.sig, f.opener.osk, rng).has_value(); });
            f.total_ms[3] += elapsed_ms([&] {
                sink &= ars::judge(pp, f.opener.opk, f.message, f.ring, f.sig, f.proof.pk_identified, f.proof);
            });
        }
    }
    if (!sink) throw Error(Errc::invalid_ring_signature, "benchmark signature failed to verify or open");

    for (const auto& f : fixtures) {
        const CostMeter meters[4] = {
            metered([&] { ars::rsign(pp, f.opener.opk, f.message, f.ring, f.sk, rng); }),
            metered([&] { ars::rverify(pp, f.opener.opk, f.message, f.ring, f.sig); }),
            metered([&] { ars::open(pp, f.message, f.ring, f.sig, f.opener.osk, rng); }),
            metered([&] { ars::judge(pp, f.opener.opk, f.message, f.ring, f.sig, f.proof.pk_identified, f.proof); }),
        };
        for (std::size_t a = 0; a < 4; ++a) {
            const double mean = runs == 0 ? 0.0 : f.total_ms[a] / static_cast<double>(runs);
            report.rows.push_back({std::string(kBenchAlgorithms[a]), f.n, mean, meters[a].exponentiations,
                                   meters[a].hash_calls});
        }
    }
    return report;
}

io::json to_json(const BenchReport& report) {
    io::json rows = io::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"algorithm", r.algorithm},
                        {"ring_size", r.ring_size},
                        {"mean_ms", r.mean_ms},
                        {"exponentiations", r.exponentiations},
                        {"hash_calls", r.hash_calls}});
    }
    return {{"group", report.group_id}, {"runs", report.runs}, {"ring_sizes", report.ring_sizes}, {"rows", rows}};
}

std::string format_table(const BenchReport& report) {
    std::ostringstream os;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-10s", "Algorithm");
    os << buf;
    for (std::size_t n : report.ring_sizes) {
        std::snprintf(buf, sizeof buf, " | %22s", ("|R|=" + std::to_string(n)).c_str());
        os << buf;
    }
    os << "\n" << std::string(10 + 25 * report.ring_sizes.size(), '-') << "\n";
    for (std::string_view alg : kBenchAlgorithms) {
        std::snprintf(buf, sizeof buf, "%-10s", std::string(alg).c_str());
        os << buf;
        for (std::size_t n : report.ring_sizes) {
            const BenchRow& r = report.row(alg, n);
            std::snprintf(buf, sizeof buf, " | %8.2f ms %5llu exp", r.mean_ms,
                          static_cast<unsigned long long>(r.exponentiations));
            os << buf;
        }
        os << "\n";
    }
    os << "(" << report.group_id << " group, mean of " << report.runs << " runs)\n";
    return os.str();
}

}  // namespace acw::harness
