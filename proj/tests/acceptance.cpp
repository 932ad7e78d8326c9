// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "acw/audit.hpp"
#include "acw/cost_meter.hpp"
#include "acw/error.hpp"
#include "acw/harness.hpp"
#include "acw/serialization.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace acw;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
std::ofstream report_file;  // copy of stdout when ACW_ACCEPTANCE_REPORT names a file

void say(const std::string& line) {
    std::cout << line << std::endl;
    if (report_file) report_file << line << std::endl;
}

void report(int id, bool ok, const std::string& detail) {
    say(std::string(ok ? "[PASS]" : "[FAIL]") + " criterion " + std::to_string(id) + ": " + detail);
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int prec = 2) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(prec);
    ss << v;
    return ss.str();
}

// Fresh distinct user keys and one opener.
struct RingSetup {
    std::vector<ars::UserKeyPair> users;
    ars::OpenerKeyPair opener;
    ars::Ring ring;
};

RingSetup make_ring(const ars::PublicParams& pp, std::size_t n, RandomSource& rng) {
    std::vector<ars::UserKeyPair> users;
    std::vector<GroupElement> pks;
    while (users.size() < n) {
        auto kp = ars::ukgen(pp, rng);
        if (std::find(pks.begin(), pks.end(), kp.pk) != pks.end()) continue;
        users.push_back(kp);
        pks.push_back(kp.pk);
    }
    return RingSetup{users, ars::okgen(pp, rng), ars::Ring(pks)};
}

void criterion_correctness() {
    const auto t0 = Clock::now();
    std::size_t trials = 0, bad = 0;
    for (auto id : {"toy", "production"}) {
        auto pp = ars::setup(id);
        SeededRandom rng(1000);
        for (std::size_t n : {1, 2, 4, 10}) {
            auto rs = make_ring(pp, n, rng);
            for (std::size_t l = 0; l < n; ++l) {
                for (int t = 0; t < 100; ++t) {
                    ++trials;
                    const Bytes m = to_bytes("sweep " + std::to_string(n) + "/" + std::to_string(l) + "/" + std::to_string(t));
                    auto sig = ars::rsign(pp, rs.opener.opk, m, rs.ring, rs.users[l].sk, rng);
                    bool ok = ars::rverify(pp, rs.opener.opk, m, rs.ring, sig);
                    auto pi = ars::open(pp, m, rs.ring, sig, rs.opener.osk, rng);
                    ok = ok && pi && pi->pk_identified == rs.users[l].pk &&
                         ars::judge(pp, rs.opener.opk, m, rs.ring, sig, pi->pk_identified, *pi);
                    if (!ok) ++bad;
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    report(1, bad == 0 && secs < 120.0,
           std::to_string(trials) + " sign/verify/open/judge trials (toy + production, N in {1,2,4,10}, every signer, 100 each), " +
               std::to_string(bad) + " failures, " + fmt(secs, 1) + " s (limit 120 s)");
}

void criterion_timing() {
    auto rep = harness::run_bench(ars::setup("production"), {4, 10}, 100, 7);
    bool ok = true;
    std::string detail;
    for (auto alg : harness::kBenchAlgorithms) {
        const double t4 = rep.row(alg, 4).mean_ms, t10 = rep.row(alg, 10).mean_ms;
        const double ratio = t10 / t4;
        ok = ok && t4 < 1000.0 && t10 < 1000.0 && ratio >= 1.0 && ratio <= 4.0;
        detail += std::string(alg) + " " + fmt(t4) + "/" + fmt(t10) + " ms (x" + fmt(ratio) + ") ";
    }
    report(2, ok, "production means over 100 runs, |R|=4/|R|=10: " + detail + "(each < 1000 ms, ratio in [1,4])");
}

void criterion_cost() {
    SeededRandom rng(3);
    bool ok = true;
    std::uint64_t previous = 0;
    std::string detail;
    for (std::size_t n = 1; n <= 10; ++n) {
        auto s = testing::make_scenario("production", {n}, 0, rng);
        auto req = s.chain.build_request(s.address, to_bytes("cost"));
        auto receipt = s.chain.submit_transaction(req, testing::authorize(s, req, {n - 1}, rng));
        const auto exps = receipt.meter.exponentiations;
        ok = ok && exps == 6 * n && exps > previous;
        previous = exps;
        if (n == 4 || n == 10) detail += "N=" + std::to_string(n) + ": " + std::to_string(exps) + " ";
    }
    report(3, ok, "on-chain ring verification meter " + detail + "(exactly 6N, strictly increasing over N=1..10)");
}

void criterion_tamper() {
    auto pp = ars::setup("production");
    SeededRandom rng(4);
    auto rs = make_ring(pp, 4, rng);
    const Bytes m = to_bytes("tamper suite");
    auto sig = ars::rsign(pp, rs.opener.opk, m, rs.ring, rs.users[1].sk, rng);
    auto cases = harness::tamper_cases(pp, rs.opener.opk, m, rs.ring, sig);
    std::size_t accepted = 0;
    for (const auto& tc : cases) {
        if (ars::rverify(pp, tc.opk, tc.message, tc.ring, tc.sig)) ++accepted;
    }
    const bool honest = ars::rverify(pp, rs.opener.opk, m, rs.ring, sig);
    report(4, honest && cases.size() >= 30 && accepted == 0,
           std::to_string(cases.size()) + " deterministic mutations at N=4, " + std::to_string(accepted) + " accepted");
}

void criterion_games() {
    auto prod = ars::setup("production");
    auto toy = ars::setup("toy");
    bool ok = true;
    std::string detail;
    auto game = [&](const harness::GameReport& r, const char* group) {
        ok = ok && r.adversary_wins == 0 && r.trials >= 100;
        detail += r.game + "(" + group + ") " + std::to_string(r.adversary_wins) + "/" + std::to_string(r.trials) + ", ";
    };
    game(harness::run_full_unforgeability_suite(prod, 100), "production");
    game(harness::run_traceability_suite(toy, 100), "toy");
    game(harness::run_tracing_soundness_suite(prod, 100), "production");

    auto anon = harness::run_anonymity_suite(toy, 1000);
    ok = ok && anon.trials >= 1000 && anon.adversary_wins == 0;
    for (const auto& d : anon.distinguishers) {
        if (d.holds_osk) continue;
        ok = ok && d.advantage <= 3 * d.sigma;
        detail += d.name + " adv " + fmt(d.advantage, 4) + " <= " + fmt(3 * d.sigma, 4) + ", ";
    }

    // meter traces of verification, per signer index
    bool traces_equal = true;
    for (auto* pp : {&toy, &prod}) {
        SeededRandom rng(5);
        for (std::size_t n : {4, 10}) {
            auto rs = make_ring(*pp, n, rng);
            std::optional<CostMeter> reference;
            for (std::size_t l = 0; l < n; ++l) {
                auto sig = ars::rsign(*pp, rs.opener.opk, to_bytes("trace"), rs.ring, rs.users[l].sk, rng);
                CostMeter meter;
                {
                    MeterScope scope(meter);
                    ars::rverify(*pp, rs.opener.opk, to_bytes("trace"), rs.ring, sig);
                }
                if (!reference) reference = meter;
                traces_equal = traces_equal && meter == *reference;
            }
        }
    }
    ok = ok && traces_equal;
    detail += std::string("meter traces across signers ") + (traces_equal ? "identical" : "differ");
    report(5, ok, "adversary wins / trials: " + detail);
}

void criterion_oracle() {
    auto pp = ars::setup("toy");
    SeededRandom rng(6);
    auto rs = make_ring(pp, 4, rng);
    std::size_t agree = 0;
    const std::size_t trials = 100;
    for (std::size_t t = 0; t < trials; ++t) {
        const Bytes m = to_bytes("oracle " + std::to_string(t));
        auto sig = ars::rsign(pp, rs.opener.opk, m, rs.ring, rs.users[t % 4].sk, rng);
        auto pi = ars::open(pp, m, rs.ring, sig, rs.opener.osk, rng);
        if (pi && pi->pk_identified == harness::toy_brute_force_decrypt(pp, rs.opener.opk, sig)) ++agree;
    }
    report(6, agree == trials,
           "toy-group opening vs exhaustive-dlog decryption agreed on " + std::to_string(agree) + "/" + std::to_string(trials));
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& cmd) {
    std::string out;
    FILE* p = ::popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) return {-1, ""};
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = ::pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
    return s;
}

void criterion_cli() {
    const auto t0 = Clock::now();
    const fs::path dir = fs::temp_directory_path() / ("acw-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string acw = std::string("'") + ACW_CLI_PATH + "' --workspace '" + dir.string() + "' ";
    auto file = [&](const std::string& name) { return "'" + (dir / name).string() + "'"; };
    std::vector<std::string> problems;
    auto expect = [&](const std::string& args, int want) {
        auto r = run(acw + args);
        if (r.exit_code != want) problems.push_back(args + " -> " + std::to_string(r.exit_code));
        return r;
    };

    expect("chain init --group production --chain-id 1", 0);
    std::vector<std::string> pks;
    for (int i = 0; i < 4; ++i) pks.push_back(trim(expect("keygen user --out " + file("u" + std::to_string(i) + ".json"), 0).out));
    expect("keygen opener --out " + file("opener.json"), 0);
    const std::string j_vk = trim(expect("keygen individual --out " + file("j.json"), 0).out);
    expect("policy create --ring " + file("opener.json") + "=" + file("u0.json") + "," + file("u1.json") + "," +
               file("u2.json") + "," + file("u3.json") + " --individual " + file("j.json") + " --out " + file("policy.json"),
           0);
    const std::string wallet = trim(expect("wallet deploy --policy " + file("policy.json") + " --salt 01", 0).out);

    std::size_t submitted = 0, replays_rejected = 0, opened = 0, judged = 0, wrong_rejected = 0, wrong_total = 0;
    for (int i = 0; i < 4; ++i) {
        const std::string req = file("tx" + std::to_string(i) + ".json");
        expect("tx build --wallet " + wallet + " --payload 0" + std::to_string(i) + " --out " + req, 0);
        expect("tx sign-ring --req " + req + " --key " + file("u" + std::to_string(i) + ".json") + " --ring 0", 0);
        expect("tx sign-ind --req " + req + " --key " + file("j.json"), 0);
        if (run(acw + "tx submit --req " + req).exit_code == 0) ++submitted;
        if (run(acw + "tx submit --req " + req).exit_code == 21) ++replays_rejected;

        const std::string claim = file("claim" + std::to_string(i) + ".json");
        if (run(acw + "audit open --tx " + std::to_string(i) + " --ring 0 --osk " + file("opener.json") + " --out " + claim)
                .exit_code == 0)
            ++opened;
        auto jr = run(acw + "audit judge --claim " + claim);
        if (jr.exit_code == 0 && trim(jr.out) == "1") ++judged;

        // the same claim naming anyone else
        std::ifstream in(dir / ("claim" + std::to_string(i) + ".json"));
        auto cj = io::json::parse(in);
        std::vector<std::string> wrong = {j_vk};
        for (int k = 0; k < 4; ++k) {
            if (k != i) wrong.push_back(pks[k]);
        }
        for (const auto& pk : wrong) {
            ++wrong_total;
            cj["pk"] = pk;
            std::ofstream(dir / "edited.json") << cj.dump();
            auto wr = run(acw + "audit judge --claim " + file("edited.json"));
            if (wr.exit_code == 1 && trim(wr.out) == "0") ++wrong_rejected;
        }
    }
    const double secs = seconds_since(t0);
    fs::remove_all(dir);
    const bool ok = problems.empty() && submitted == 4 && replays_rejected == 4 && opened == 4 && judged == 4 &&
                    wrong_rejected == wrong_total && secs < 60.0;
    std::string detail = "CLI {R(4), j} walkthrough: " + std::to_string(submitted) + "/4 submitted, " +
                         std::to_string(replays_rejected) + "/4 replays rejected, " + std::to_string(judged) +
                         "/4 claims judged 1, " + std::to_string(wrong_rejected) + "/" + std::to_string(wrong_total) +
                         " wrong-pk claims judged 0, " + fmt(secs, 1) + " s (limit 60 s)";
    for (const auto& p : problems) detail += "; unexpected exit: " + p;
    report(7, ok, detail);
}

// Random mixture of valid and defective submissions; every rejection must
// leave the serialized chain state byte-identical.
struct AtomicityTally {
    std::size_t attempts = 0, accepted = 0, rejected = 0, rejected_changed = 0, valid_rejected = 0;
};

void atomicity_run(std::string_view group, std::size_t attempts, std::uint64_t seed, AtomicityTally& tally) {
    SeededRandom rng(seed);
    std::mt19937_64 pick(seed);
    const auto recipient = wallet::address_from_hex("00000000000000000000000000000000000000bb");
    auto s = testing::make_scenario(group, {4, 3}, 1, rng,
                                    wallet::parse_action_rule("transfer:3:" + wallet::address_hex(recipient)));
    const Group& g = s.pp.grp();
    for (std::size_t t = 0; t < attempts; ++t) {
        if (pick() % 3 == 0) s.chain.credit(s.address, pick() % 5);
        auto req = s.chain.build_request(s.address, to_bytes("op " + std::to_string(t)));
        auto bundle = testing::authorize(s, req, {pick() % 4, pick() % 3}, rng);
        const int kind = static_cast<int>(pick() % 10);
        switch (kind) {
            case 0: req.nonce += 1 + pick() % 3; break;
            case 1: if (req.nonce > 0) req.nonce -= 1; else req.nonce = 5; break;
            case 2: bundle.ring_sigs.erase(bundle.ring_sigs.begin() + static_cast<long>(pick() % 2)); break;
            case 3: bundle.ring_sigs.push_back(bundle.ring_sigs[0]); break;
            case 4: {
                auto& br = bundle.ring_sigs[pick() % 2].second.branches[0];
                br.z_r = g.add(br.z_r, g.scalar(1));
                break;
            }
            case 5: bundle.ind_sigs[0].second.back() ^= 0x40; break;
            case 6: req.payload.push_back(0); break;
            case 7: req.chain_id += 1; break;
            case 8: req.wallet[0] ^= 0x01; break;
            default: break;  // unmodified: valid unless the balance is short
        }
        const std::string before = io::dump(io::chain_to_json(s.chain));
        const bool short_funds = s.chain.balance(s.address) < 3;
        ++tally.attempts;
        try {
            s.chain.submit_transaction(req, bundle);
            ++tally.accepted;
            if (kind != 9) ++tally.valid_rejected;  // a defect went through
        } catch (const Error& e) {
            ++tally.rejected;
            if (kind == 9 && !(short_funds && e.code() == Errc::insufficient_balance)) ++tally.valid_rejected;
            if (io::dump(io::chain_to_json(s.chain)) != before) ++tally.rejected_changed;
        }
    }
}

void criterion_atomicity() {
    AtomicityTally tally;
    atomicity_run("toy", 1000, 8, tally);
    atomicity_run("production", 100, 9, tally);
    const bool ok = tally.attempts >= 1000 && tally.rejected > 0 && tally.accepted > 0 && tally.rejected_changed == 0 &&
                    tally.valid_rejected == 0;
    report(8, ok,
           std::to_string(tally.attempts) + " randomized submissions (" + std::to_string(tally.accepted) + " accepted, " +
               std::to_string(tally.rejected) + " rejected), " + std::to_string(tally.rejected_changed) +
               " rejections changed state, " + std::to_string(tally.valid_rejected) + " misclassified");
}

}  // namespace

// Optional arguments select criteria by number; default is all of them.
int main(int argc, char** argv) {
    const std::vector<void (*)()> criteria = {criterion_correctness, criterion_timing, criterion_cost,
                                              criterion_tamper,      criterion_games,  criterion_oracle,
                                              criterion_cli,         criterion_atomicity};
    std::vector<bool> selected(criteria.size(), argc == 1);
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id < 1 || id > static_cast<int>(criteria.size())) {
            std::cerr << "unknown criterion " << argv[i] << "\n";
            return 2;
        }
        selected[static_cast<std::size_t>(id - 1)] = true;
    }
    if (const char* path = std::getenv("ACW_ACCEPTANCE_REPORT")) report_file.open(path, std::ios::trunc);
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (selected[i]) criteria[i]();
    }
    say((failures == 0 ? std::string("all criteria passed") : std::to_string(failures) + " criteria failed") + " in " +
        fmt(seconds_since(t0), 1) + " s");
    return failures == 0 ? 0 : 1;
}
