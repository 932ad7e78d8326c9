#include "acw/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "acw/cost_meter.hpp"
#include "acw/error.hpp"

namespace acw::harness {

namespace {

struct RingSetup {
    std::vector<ars::UserKeyPair> users;
    ars::Ring ring;
    ars::OpenerKeyPair opener;
};

RingSetup make_setup(const ars::PublicParams& pp, std::size_t n, RandomSource& rng) {
    std::vector<ars::UserKeyPair> users;
    std::vector<GroupElement> members;
    // Rejection keeps the ring duplicate-free even in the 1013-element toy group.
    while (users.size() < n) {
        ars::UserKeyPair kp = ars::ukgen(pp, rng);
        bool dup = false;
        for (const auto& m : members) dup = dup || m == kp.pk;
        if (dup) continue;
        members.push_back(kp.pk);
        users.push_back(kp);
    }
    return RingSetup{std::move(users), ars::Ring(std::move(members)), ars::okgen(pp, rng)};
}

Bytes random_message(RandomSource& rng) {
    Bytes m(16);
    rng.fill(m);
    return m;
}

std::uint64_t random_below(RandomSource& rng, std::uint64_t bound) {
    std::uint8_t buf[8];
    rng.fill(buf);
    std::uint64_t v = 0;
    for (auto b : buf) v = (v << 8) | b;
    return v % bound;
}

GroupElement random_element(const Group& grp, RandomSource& rng) { return grp.exp_g(grp.random_nonzero_scalar(rng)); }

ars::RingSignature random_signature(const Group& grp, std::size_t n, RandomSource& rng) {
    ars::RingSignature sig;
    sig.u = random_element(grp, rng);
    sig.v = random_element(grp, rng);
    sig.branches.resize(n);
    for (auto& br : sig.branches) {
        br.a = random_element(grp, rng);
        br.b = random_element(grp, rng);
        br.d = random_element(grp, rng);
        br.c = grp.random_scalar(rng);
        br.z_r = grp.random_scalar(rng);
        br.z_s = grp.random_scalar(rng);
    }
    return sig;
}

// Branch commitments solved backwards from chosen (c, z_r, z_s).
void simulate_branch(const Group& grp, const GroupElement& opk, const GroupElement& u, const GroupElement& v,
                     const GroupElement& pk, ars::Branch& br, RandomSource& rng) {
    br.c = grp.random_scalar(rng);
    br.z_r = grp.random_scalar(rng);
    br.z_s = grp.random_scalar(rng);
    const Scalar minus_c = grp.neg(br.c);
    br.a = grp.exp2(grp.generator(), br.z_r, u, minus_c);
    br.b = grp.exp2(opk, br.z_r, grp.div(v, pk), minus_c);
    br.d = grp.exp2(grp.generator(), br.z_s, pk, minus_c);
}

ars::RingSignature simulate_signature(const Group& grp, const GroupElement& opk, const ars::Ring& ring,
                                      RandomSource& rng) {
    ars::RingSignature sig;
    sig.u = random_element(grp, rng);
    sig.v = random_element(grp, rng);
    sig.branches.resize(ring.size());
    for (std::size_t i = 0; i < ring.size(); ++i) simulate_branch(grp, opk, sig.u, sig.v, ring[i], sig.branches[i], rng);
    return sig;
}

// Chaum-Pedersen prover run with osk against an arbitrary claimed key.
ars::OpeningProof dleq_with_witness(const ars::PublicParams& pp, const GroupElement& opk, ByteView message,
                                    const ars::Ring& ring, const ars::RingSignature& sig, const GroupElement& claimed,
                                    const Scalar& witness, RandomSource& rng) {
    const Group& grp = pp.grp();
    const Scalar alpha = grp.random_nonzero_scalar(rng);
    ars::OpeningProof p;
    p.pk_identified = claimed;
    p.a1 = grp.exp_g(alpha);
    p.a2 = grp.exp(sig.u, alpha);
    p.c = ars::opening_challenge(pp, opk, message, ring, sig, claimed, p.a1, p.a2);
    p.z = grp.add(alpha, grp.mul(p.c, witness));
    return p;
}

// Both verification equations satisfied for `claimed`, but c is not the hash.
ars::OpeningProof forged_transcript(const Group& grp, const GroupElement& opk, const ars::RingSignature& sig,
                                    const GroupElement& claimed, RandomSource& rng) {
    ars::OpeningProof p;
    p.pk_identified = claimed;
    p.c = grp.random_scalar(rng);
    p.z = grp.random_scalar(rng);
    const Scalar minus_c = grp.neg(p.c);
    p.a1 = grp.exp2(grp.generator(), p.z, opk, minus_c);
    p.a2 = grp.exp2(sig.u, p.z, grp.div(sig.v, claimed), minus_c);
    return p;
}

class WinCounter {
public:
    explicit WinCounter(GameReport& report) : report_(report) {}

    void attempt(const std::string& strategy, bool adversary_won) {
        auto& [tries, wins] = counts_[strategy];
        ++tries;
        if (adversary_won) {
            ++wins;
            ++report_.adversary_wins;
        }
    }

    void flush() {
        for (const auto& [name, tw] : counts_) {
            report_.details.push_back(name + ": " + std::to_string(tw.second) + " wins / " + std::to_string(tw.first) +
                                      " attempts");
        }
    }

private:
    GameReport& report_;
    std::map<std::string, std::pair<std::size_t, std::size_t>> counts_;
};

std::uint32_t toy_residue(const Group& grp, const GroupElement& e) {
    Bytes b = grp.encode(e);
    return (static_cast<std::uint32_t>(b[0]) << 8) | b[1];
}

}  // namespace

std::vector<TamperCase> tamper_cases(const ars::PublicParams& pp, const GroupElement& opk, ByteView message,
                                     const ars::Ring& ring, const ars::RingSignature& sig) {
    const Group& grp = pp.grp();
    const GroupElement g = grp.generator();
    const Scalar one = grp.scalar(1);
    const Bytes msg(message.begin(), message.end());
    std::vector<TamperCase> out;
    auto add = [&](std::string name, ars::RingSignature s) {
        out.push_back(TamperCase{std::move(name), opk, msg, ring, std::move(s)});
    };

    {
        auto s = sig;
        s.u = grp.mul(s.u, g);
        add("replace u", s);
    }
    {
        auto s = sig;
        s.v = grp.mul(s.v, g);
        add("replace v", s);
    }
    {
        auto s = sig;
        std::swap(s.u, s.v);
        add("swap u and v", s);
    }
    for (std::size_t i = 0; i < sig.branches.size(); ++i) {
        const std::string at = " of branch " + std::to_string(i);
        auto perturb_element = [&](GroupElement ars::Branch::*field, const char* name) {
            auto s = sig;
            s.branches[i].*field = grp.mul(s.branches[i].*field, g);
            add(std::string("perturb ") + name + at, s);
        };
        auto perturb_scalar = [&](Scalar ars::Branch::*field, const char* name) {
            auto s = sig;
            s.branches[i].*field = grp.add(s.branches[i].*field, one);
            add(std::string("perturb ") + name + at, s);
        };
        perturb_element(&ars::Branch::a, "a");
        perturb_element(&ars::Branch::b, "b");
        perturb_element(&ars::Branch::d, "d");
        perturb_scalar(&ars::Branch::c, "c");
        perturb_scalar(&ars::Branch::z_r, "z_r");
        perturb_scalar(&ars::Branch::z_s, "z_s");
    }
    if (sig.branches.size() >= 2) {
        auto s = sig;
        std::swap(s.branches[0], s.branches[1]);
        add("permute branches 0 and 1", s);
        auto r = sig;
        std::reverse(r.branches.begin(), r.branches.end());
        add("reverse branch order", r);
    }
    {
        auto s = sig;
        s.branches.pop_back();
        add("drop last branch", s);
        auto p = sig;
        p.branches.push_back(p.branches.front());
        add("append duplicate branch", p);
    }

    Bytes other_msg = msg;
    other_msg.push_back(0x01);
    out.push_back(TamperCase{"verify under different message", opk, other_msg, ring, sig});
    if (ring.size() >= 2) {
        std::vector<GroupElement> reversed(ring.members().rbegin(), ring.members().rend());
        out.push_back(TamperCase{"verify under reversed ring order", opk, msg, ars::Ring(reversed), sig});
        std::vector<GroupElement> rotated = ring.members();
        std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
        out.push_back(TamperCase{"verify under rotated ring order", opk, msg, ars::Ring(rotated), sig});
    }
    out.push_back(TamperCase{"verify under different opener key", grp.mul(opk, g), msg, ring, sig});
    return out;
}

GameReport run_full_unforgeability_suite(const ars::PublicParams& pp, std::size_t trials, std::uint64_t seed) {
    constexpr std::size_t kRingSize = 4;
    const Group& grp = pp.grp();
    SeededRandom rng(seed);
    GameReport report{"full-unforgeability", trials, 0, {}, {}, {}};
    WinCounter wins(report);

    for (std::size_t t = 0; t < trials; ++t) {
        // The adversary picks the opener key, so it knows osk.
        RingSetup s = make_setup(pp, kRingSize, rng);
        const GroupElement& opk = s.opener.opk;
        const Bytes m = random_message(rng);
        const std::size_t l1 = t % kRingSize;
        const std::size_t l2 = (t + 1) % kRingSize;
        const auto sig1 = ars::rsign(pp, opk, m, s.ring, s.users[l1].sk, rng);
        const auto sig2 = ars::rsign(pp, opk, m, s.ring, s.users[l2].sk, rng);

        {
            auto forged = random_signature(grp, kRingSize, rng);
            ars::OpeningProof pi{s.ring[0], random_element(grp, rng), random_element(grp, rng), grp.random_scalar(rng),
                                 grp.random_scalar(rng)};
            wins.attempt("random signature", ars::rverify(pp, opk, m, s.ring, forged) ||
                                                 ars::judge(pp, opk, m, s.ring, forged, s.ring[0], pi));
        }
        {
            auto cases = tamper_cases(pp, opk, m, s.ring, sig1);
            const auto& tc = cases[t % cases.size()];
            wins.attempt("tamper mutation", ars::rverify(pp, tc.opk, tc.message, tc.ring, tc.sig));
        }
        {
            auto spliced = sig1;
            spliced.branches[t % kRingSize] = sig2.branches[t % kRingSize];
            wins.attempt("branch splice", ars::rverify(pp, opk, m, s.ring, spliced));
            auto cipher_swap = sig1;
            cipher_swap.u = sig2.u;
            cipher_swap.v = sig2.v;
            wins.attempt("ciphertext splice", ars::rverify(pp, opk, m, s.ring, cipher_swap));
        }
        {
            Bytes other = random_message(rng);
            wins.attempt("transplant to other message", other != m && ars::rverify(pp, opk, other, s.ring, sig1));
            std::vector<GroupElement> rotated = s.ring.members();
            std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
            wins.attempt("transplant to reordered ring", ars::rverify(pp, opk, m, ars::Ring(rotated), sig1));
            const GroupElement other_opk = ars::okgen(pp, rng).opk;
            wins.attempt("transplant to other opener key",
                         !(other_opk == opk) && ars::rverify(pp, other_opk, m, s.ring, sig1));
        }
        {
            // Simulator output without control of the random oracle.
            auto sim = simulate_signature(grp, opk, s.ring, rng);
            wins.attempt("unprogrammed simulation", ars::rverify(pp, opk, m, s.ring, sim));
        }
        {
            // Adversary joins the ring with its own key, signs, and then tries
            // to pin the signature on each honest member.
            ars::UserKeyPair adv = ars::ukgen(pp, rng);
            std::vector<GroupElement> members = s.ring.members();
            members[0] = adv.pk;
            bool unique = true;
            for (std::size_t i = 1; i < members.size(); ++i) unique = unique && !(members[i] == adv.pk);
            if (unique) {
                ars::Ring mixed(members);
                auto own = ars::rsign(pp, opk, m, mixed, adv.sk, rng);
                auto honest_open = ars::open(pp, m, mixed, own, s.opener.osk, rng);
                for (std::size_t i = 1; i < members.size(); ++i) {
                    auto pi = dleq_with_witness(pp, opk, m, mixed, own, members[i], s.opener.osk, rng);
                    bool accused = ars::judge(pp, opk, m, mixed, own, members[i], pi);
                    if (honest_open) {
                        auto relabelled = *honest_open;
                        relabelled.pk_identified = members[i];
                        accused = accused || ars::judge(pp, opk, m, mixed, own, members[i], relabelled);
                    }
                    wins.attempt("false accusation", accused);
                }
            }
        }
    }
    wins.flush();
    return report;
}

std::size_t run_simulator_check(const ars::PublicParams& pp, std::size_t ring_size, std::size_t trials,
                                std::uint64_t seed) {
    const Group& grp = pp.grp();
    SeededRandom rng(seed);
    std::size_t passing = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        RingSetup s = make_setup(pp, ring_size, rng);
        auto sim = simulate_signature(grp, s.opener.opk, s.ring, rng);
        Scalar programmed;
        for (const auto& br : sim.branches) programmed = grp.add(programmed, br.c);
        Scalar sum;
        bool ok = true;
        for (std::size_t i = 0; i < s.ring.size(); ++i) {
            const auto& br = sim.branches[i];
            sum = grp.add(sum, br.c);
            ok = ok && grp.mul(grp.exp(sim.u, br.c), br.a) == grp.exp_g(br.z_r);
            ok = ok && grp.mul(grp.exp(grp.div(sim.v, s.ring[i]), br.c), br.b) == grp.exp(s.opener.opk, br.z_r);
            ok = ok && grp.mul(grp.exp(s.ring[i], br.c), br.d) == grp.exp_g(br.z_s);
        }
        if (ok && sum == programmed) ++passing;
    }
    return passing;
}

GameReport run_anonymity_suite(const ars::PublicParams& pp, std::size_t trials, std::uint64_t seed) {
    constexpr std::size_t kRingSize = 4;
    const Group& grp = pp.grp();
    SeededRandom rng(seed);
    GameReport report{"anonymity", trials, 0, {}, {}, {}};
    report.distinguishers = {{"byte-pattern", false, 0, 0},
                             {"branch-statistics", false, 0, 0},
                             {"meter-trace", false, 0, 0},
                             {"osk-holder", true, 0, 0}};
    const std::size_t kd = report.distinguishers.size();

    auto verify_trace = [&](const GroupElement& opk, const Bytes& m, const ars::Ring& ring,
                            const ars::RingSignature& sig) {
        CostMeter meter;
        MeterScope scope(meter);
        bool ok = ars::rverify(pp, opk, m, ring, sig);
        return std::make_pair(ok, meter);
    };

    for (std::size_t t = 0; t < trials; ++t) {
        RingSetup s = make_setup(pp, kRingSize, rng);
        const Bytes m = random_message(rng);
        const std::size_t i0 = random_below(rng, kRingSize);
        const std::size_t i1 = (i0 + 1 + random_below(rng, kRingSize - 1)) % kRingSize;
        const std::uint8_t b = static_cast<std::uint8_t>(random_below(rng, 2));
        const auto sig = ars::rsign(pp, s.opener.opk, m, s.ring, s.users[b ? i1 : i0].sk, rng);

        TrialRecord rec;
        rec.hidden_bit = b;
        rec.guesses.resize(kd);

        // Guess that the real branch has the lexicographically smaller encoding.
        auto branch_bytes = [&](std::size_t i) {
            const auto& br = sig.branches[i];
            Bytes out = grp.encode(br.a);
            for (const Bytes& part : {grp.encode(br.b), grp.encode(br.d), grp.encode_scalar(br.c),
                                      grp.encode_scalar(br.z_r), grp.encode_scalar(br.z_s)}) {
                out.insert(out.end(), part.begin(), part.end());
            }
            return out;
        };
        rec.guesses[0] = branch_bytes(i1) < branch_bytes(i0);
        // Guess that the real branch carries the smaller challenge.
        rec.guesses[1] = sig.branches[i1].c < sig.branches[i0].c;
        // Compare the on-chain cost trace with a reference signature by i0.
        const auto reference = ars::rsign(pp, s.opener.opk, m, s.ring, s.users[i0].sk, rng);
        rec.guesses[2] = !(verify_trace(s.opener.opk, m, s.ring, sig).second ==
                           verify_trace(s.opener.opk, m, s.ring, reference).second);
        // Sanity inversion: with osk the signer is simply decrypted.
        rec.guesses[3] = ars::decrypt_signer(pp, sig, s.opener.osk) == s.ring[i1];

        report.records.push_back(std::move(rec));
    }

    std::size_t n1 = 0;
    for (const auto& r : report.records) n1 += r.hidden_bit;
    const std::size_t n0 = report.records.size() - n1;
    for (std::size_t k = 0; k < kd; ++k) {
        std::size_t ones_b1 = 0, ones_b0 = 0;
        for (const auto& r : report.records) (r.hidden_bit ? ones_b1 : ones_b0) += r.guesses[k];
        auto& d = report.distinguishers[k];
        if (n0 == 0 || n1 == 0) continue;
        const double p1 = static_cast<double>(ones_b1) / static_cast<double>(n1);
        const double p0 = static_cast<double>(ones_b0) / static_cast<double>(n0);
        const double pooled = static_cast<double>(ones_b1 + ones_b0) / static_cast<double>(n0 + n1);
        d.advantage = std::abs(p1 - p0);
        d.sigma = std::sqrt(pooled * (1 - pooled) * (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1)));
        char line[160];
        std::snprintf(line, sizeof line, "%s: advantage %.4f, 3 sigma %.4f%s", d.name.c_str(), d.advantage,
                      3 * d.sigma, d.holds_osk ? " (holds osk)" : "");
        report.details.emplace_back(line);
        if (!d.holds_osk && d.advantage > 3 * d.sigma + 1e-12) ++report.adversary_wins;
    }

    const std::size_t sim_trials = 100;
    const std::size_t sim_ok = run_simulator_check(pp, kRingSize, sim_trials, seed ^ 0x5eed);
    report.details.push_back("simulator transcripts accepted: " + std::to_string(sim_ok) + " / " +
                             std::to_string(sim_trials));
    if (sim_ok != sim_trials) ++report.adversary_wins;
    return report;
}

GameReport run_traceability_suite(const ars::PublicParams& pp, std::size_t trials, std::uint64_t seed) {
    const Group& grp = pp.grp();
    const bool toy = grp.id() == kToyGroupId;
    SeededRandom rng(seed);
    GameReport report{"traceability", 0, 0, {}, {}, {}};
    WinCounter wins(report);
    std::size_t oracle_checked = 0, oracle_agreed = 0;

    auto check = [&](const std::string& strategy, const Bytes& m, const ars::Ring& ring,
                     const ars::OpenerKeyPair& opener, const ars::RingSignature& sig) {
        if (!ars::rverify(pp, opener.opk, m, ring, sig)) return;  // only valid signatures matter
        auto proof = ars::open(pp, m, ring, sig, opener.osk, rng);
        bool untraceable = !proof || !ars::judge(pp, opener.opk, m, ring, sig, proof->pk_identified, *proof);
        if (toy && proof) {
            ++oracle_checked;
            bool agree = toy_brute_force_decrypt(pp, opener.opk, sig) == proof->pk_identified;
            oracle_agreed += agree;
            untraceable = untraceable || !agree;
        }
        wins.attempt(strategy, untraceable);
    };

    const std::size_t sizes[] = {2, 4, 10};
    for (std::size_t n : sizes) {
        for (std::size_t t = 0; t < trials; ++t) {
            ++report.trials;
            RingSetup s = make_setup(pp, n, rng);
            const Bytes m = random_message(rng);
            const std::size_t signer = t % n;
            check("honest, N=" + std::to_string(n), m, s.ring, s.opener,
                  ars::rsign(pp, s.opener.opk, m, s.ring, s.users[signer].sk, rng));

            // Adversary-generated opener keys, including degenerate ones.
            ars::OpenerKeyPair adv_opener;
            switch (t % 3) {
                case 0: adv_opener.osk = grp.scalar(1); break;
                case 1: adv_opener.osk = grp.neg(grp.scalar(1)); break;
                default: adv_opener.osk = grp.random_nonzero_scalar(rng); break;
            }
            adv_opener.opk = grp.exp_g(adv_opener.osk);
            check("adversarial opener key", m, s.ring, adv_opener,
                  ars::rsign(pp, adv_opener.opk, m, s.ring, s.users[signer].sk, rng));

            // Signer with fully fixed randomness.
            ScriptedRandom fixed;
            const Bytes one = grp.encode_scalar(grp.scalar(1));
            for (std::size_t k = 0; k < 3 + 3 * (n - 1); ++k) fixed.push(one);
            check("fixed signer randomness", m, s.ring, adv_opener,
                  ars::rsign(pp, adv_opener.opk, m, s.ring, s.users[signer].sk, fixed));
        }
    }
    wins.flush();
    if (toy) {
        report.details.push_back("brute-force decryption oracle agreed on " + std::to_string(oracle_agreed) + " / " +
                                 std::to_string(oracle_checked));
    }
    return report;
}

GameReport run_tracing_soundness_suite(const ars::PublicParams& pp, std::size_t trials, std::uint64_t seed) {
    constexpr std::size_t kRingSize = 4;
    const Group& grp = pp.grp();
    SeededRandom rng(seed);
    GameReport report{"tracing-soundness", trials, 0, {}, {}, {}};
    WinCounter wins(report);

    for (std::size_t t = 0; t < trials; ++t) {
        RingSetup s = make_setup(pp, kRingSize, rng);
        const GroupElement& opk = s.opener.opk;
        const Bytes m = random_message(rng);
        const std::size_t signer = t % kRingSize;
        const auto sig = ars::rsign(pp, opk, m, s.ring, s.users[signer].sk, rng);
        const auto pi = ars::open(pp, m, s.ring, sig, s.opener.osk, rng);
        const auto pi_again = ars::open(pp, m, s.ring, sig, s.opener.osk, rng);
        if (!pi || !pi_again || !ars::judge(pp, opk, m, s.ring, sig, pi->pk_identified, *pi)) {
            report.details.push_back("trial " + std::to_string(t) + ": honest opening failed");
            ++report.adversary_wins;
            continue;
        }
        const GroupElement& pk = pi->pk_identified;
        wins.attempt("two honest openings disagree", !(pi_again->pk_identified == pk));

        for (std::size_t j = 0; j < kRingSize; ++j) {
            const GroupElement& other = s.ring[j];
            if (other == pk) continue;
            auto relabelled = *pi;
            relabelled.pk_identified = other;
            wins.attempt("relabelled proof", ars::judge(pp, opk, m, s.ring, sig, other, relabelled));
            auto wrong_witness = dleq_with_witness(pp, opk, m, s.ring, sig, other, s.opener.osk, rng);
            wins.attempt("prover with wrong witness", ars::judge(pp, opk, m, s.ring, sig, other, wrong_witness));
            auto forged = forged_transcript(grp, opk, sig, other, rng);
            wins.attempt("transcript forgery", ars::judge(pp, opk, m, s.ring, sig, other, forged));
        }

        Bytes other_msg = random_message(rng);
        const auto sig_other = ars::rsign(pp, opk, other_msg, s.ring, s.users[signer].sk, rng);
        wins.attempt("proof replayed under other message",
                     other_msg != m && ars::judge(pp, opk, other_msg, s.ring, sig_other, pk, *pi));
    }
    wins.flush();
    return report;
}

GameReport run_suite(std::string_view name, const ars::PublicParams& pp, std::size_t trials, std::uint64_t seed) {
    if (name == "unforgeability") return run_full_unforgeability_suite(pp, trials, seed);
    if (name == "anonymity") return run_anonymity_suite(pp, trials, seed);
    if (name == "traceability") return run_traceability_suite(pp, trials, seed);
    if (name == "tracing-soundness") return run_tracing_soundness_suite(pp, trials, seed);
    throw Error(Errc::invalid_argument, "unknown suite '" + std::string(name) + "'");
}

std::optional<std::uint32_t> toy_brute_force_dlog(std::uint32_t residue) {
    std::uint32_t acc = 1;
    for (std::uint32_t k = 0; k < 1013; ++k) {
        if (acc == residue) return k;
        acc = acc * 4 % 2027;
    }
    return std::nullopt;
}

GroupElement toy_brute_force_decrypt(const ars::PublicParams& pp, const GroupElement& opk,
                                     const ars::RingSignature& sig) {
    const Group& grp = pp.grp();
    if (grp.id() != kToyGroupId) throw Error(Errc::invalid_argument, "brute-force oracle needs the toy group");
    auto r = toy_brute_force_dlog(toy_residue(grp, sig.u));
    if (!r) throw Error(Errc::not_in_subgroup, "u has no discrete log");
    std::uint64_t mask = 1;
    const std::uint64_t base = toy_residue(grp, opk);
    for (std::uint32_t k = 0; k < *r; ++k) mask = mask * base % 2027;
    // v / mask via Fermat inverse
    std::uint64_t inv = 1, b = mask, e = 2025;
    while (e) {
        if (e & 1) inv = inv * b % 2027;
        b = b * b % 2027;
        e >>= 1;
    }
    const std::uint64_t pk = toy_residue(grp, sig.v) * inv % 2027;
    return grp.decode(Bytes{static_cast<std::uint8_t>(pk >> 8), static_cast<std::uint8_t>(pk)});
}

io::json to_json(const GameReport& report, bool include_records) {
    io::json j = {{"game", report.game},
                  {"trials", report.trials},
                  {"adversary_wins", report.adversary_wins},
                  {"details", report.details}};
    if (!report.distinguishers.empty()) {
        io::json ds = io::json::array();
        for (const auto& d : report.distinguishers) {
            ds.push_back({{"name", d.name}, {"holds_osk", d.holds_osk}, {"advantage", d.advantage}, {"sigma", d.sigma}});
        }
        j["distinguishers"] = ds;
    }
    if (include_records) {
        io::json recs = io::json::array();
        for (const auto& r : report.records) recs.push_back({{"b", r.hidden_bit}, {"guesses", r.guesses}});
        j["records"] = recs;
    }
    return j;
}

std::string format_table(const GameReport& report) {
    std::ostringstream os;
    os << "game: " << report.game << "\ntrials: " << report.trials << "\nadversary wins: " << report.adversary_wins
       << "\n";
    for (const auto& d : report.details) os << "  " << d << "\n";
    return os.str();
}

}  // namespace acw::harness
