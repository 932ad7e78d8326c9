#include <doctest.h>

#include <openssl/evp.h>

#include <set>

#include "acw/ars.hpp"
#include "acw/cost_meter.hpp"
#include "acw/error.hpp"
#include "acw/harness.hpp"

using namespace acw;

namespace {

std::uint32_t pow_mod(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    b %= 2027;
    while (e) {
        if (e & 1) r = r * b % 2027;
        b = b * b % 2027;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

Bytes be16(std::uint32_t v) { return Bytes{static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)}; }

GroupElement toy_elem(const Group& g, std::uint32_t v) { return g.decode(be16(v)); }

struct Fixture {
    ars::PublicParams pp;
    std::vector<ars::UserKeyPair> users;
    ars::Ring ring;
    ars::OpenerKeyPair opener;
};

Fixture make_fixture(std::string_view group, std::size_t n, std::uint64_t seed) {
    auto pp = ars::setup(group);
    SeededRandom rng(seed);
    std::vector<ars::UserKeyPair> users;
    std::vector<GroupElement> members;
    while (users.size() < n) {
        auto kp = ars::ukgen(pp, rng);
        if (std::find(members.begin(), members.end(), kp.pk) != members.end()) continue;
        users.push_back(kp);
        members.push_back(kp.pk);
    }
    auto opener = ars::okgen(pp, rng);
    return Fixture{pp, users, ars::Ring(members), opener};
}

}  // namespace

TEST_CASE("setup") {
    CHECK(ars::setup("toy").grp().order() == Bytes{0x03, 0xf5});
    CHECK(to_hex(ars::setup("production").grp().order()) ==
          "fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141");
    CHECK_THROWS_AS(ars::setup("x"), Error);
}

TEST_CASE("key generation") {
    auto pp = ars::setup("toy");
    const Group& g = pp.grp();
    SeededRandom rng(1);
    auto ok = ars::okgen(pp, rng);
    CHECK(g.exp_g(ok.osk) == ok.opk);
    auto ok2 = ars::okgen(pp, rng);
    CHECK(ok.osk != ok2.osk);

    ScriptedRandom forced;
    forced.push(g.encode_scalar(g.scalar(5)));
    CHECK(ars::okgen(pp, forced).opk == toy_elem(g, pow_mod(4, 5)));  // 1024
    forced.push(g.encode_scalar(g.scalar(7)));
    auto u7 = ars::ukgen(pp, forced);
    CHECK(u7.pk == toy_elem(g, pow_mod(4, 7)));  // 168
    CHECK(g.exp_g(u7.sk) == u7.pk);

    std::set<Bytes> pks;
    for (int i = 0; i < 100; ++i) pks.insert(g.encode(ars::ukgen(pp, rng).pk));
    // 100 draws from 1012 nonzero exponents: collisions are possible at toy scale,
    // this seed happens to produce none
    CHECK(pks.size() == 100);

    auto prod = ars::setup("production");
    SystemRandom sys;
    auto a = ars::ukgen(prod, sys);
    auto b = ars::ukgen(prod, sys);
    CHECK(prod.grp().exp_g(a.sk) == a.pk);
    CHECK(!(a.pk == b.pk));
}

TEST_CASE("ring construction") {
    auto pp = ars::setup("toy");
    const Group& g = pp.grp();
    CHECK_THROWS_AS(ars::Ring({}), Error);
    try {
        ars::Ring({g.generator(), g.exp_g(g.scalar(2)), g.generator()});
        FAIL("duplicate accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::duplicate_ring_members);
    }
    ars::Ring r({g.generator(), g.exp_g(g.scalar(2))});
    CHECK(r.index_of(g.exp_g(g.scalar(2))) == 1);
    CHECK(!r.contains(g.exp_g(g.scalar(3))));
}

TEST_CASE("rsign: signer outside the ring") {
    auto f = make_fixture("toy", 3, 4);
    SeededRandom rng(2);
    auto outsider = ars::ukgen(f.pp, rng);
    REQUIRE(!f.ring.contains(outsider.pk));
    try {
        ars::rsign(f.pp, f.opener.opk, to_bytes("m"), f.ring, outsider.sk, rng);
        FAIL("expected signer-not-in-ring");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::signer_not_in_ring);
    }
}

// Independent script of the toy-group signing transcript with every random
// value fixed: plain modular arithmetic, a hand-built hash preimage and
// OpenSSL SHA-512 directly.
TEST_CASE("rsign with fixed randomness matches an independently scripted transcript") {
    constexpr std::uint64_t q = 1013, p = 2027;
    const std::uint32_t sks[4] = {7, 11, 13, 19};
    const std::uint32_t osk = 5, r = 3, alpha = 5, beta = 9;
    const std::size_t signer = 2;
    const std::uint32_t sim[4][3] = {{10, 20, 30}, {11, 21, 31}, {0, 0, 0}, {12, 22, 32}};
    const Bytes message = to_bytes("fixed message");

    // --- oracle ---
    auto inv = [&](std::uint64_t x) { return pow_mod(x, p - 2); };
    std::uint32_t pk[4];
    for (int i = 0; i < 4; ++i) pk[i] = pow_mod(4, sks[i]);
    const std::uint32_t opk = pow_mod(4, osk);
    const std::uint32_t u = pow_mod(4, r);
    const std::uint32_t v = static_cast<std::uint32_t>(std::uint64_t{pk[signer]} * pow_mod(opk, r) % p);
    std::uint32_t a[4], b[4], d[4], c[4], zr[4], zs[4];
    std::uint64_t others = 0;
    for (int i = 0; i < 4; ++i) {
        if (i == static_cast<int>(signer)) {
            a[i] = pow_mod(4, alpha);
            b[i] = pow_mod(opk, alpha);
            d[i] = pow_mod(4, beta);
            continue;
        }
        c[i] = sim[i][0];
        zr[i] = sim[i][1];
        zs[i] = sim[i][2];
        const std::uint64_t neg_c = (q - c[i]) % q;
        const std::uint64_t v_over_pk = std::uint64_t{v} * inv(pk[i]) % p;
        a[i] = static_cast<std::uint32_t>(std::uint64_t{pow_mod(4, zr[i])} * pow_mod(u, neg_c) % p);
        b[i] = static_cast<std::uint32_t>(std::uint64_t{pow_mod(opk, zr[i])} * pow_mod(v_over_pk, neg_c) % p);
        d[i] = static_cast<std::uint32_t>(std::uint64_t{pow_mod(4, zs[i])} * pow_mod(pk[i], neg_c) % p);
        others = (others + c[i]) % q;
    }
    Bytes pre;
    auto put_len = [&](std::size_t n) {
        for (int s = 24; s >= 0; s -= 8) pre.push_back(static_cast<std::uint8_t>(n >> s));
    };
    auto put = [&](const Bytes& f) {
        put_len(f.size());
        pre.insert(pre.end(), f.begin(), f.end());
    };
    const std::string tag = "acw/ars/v1/sign-challenge";
    put(Bytes(tag.begin(), tag.end()));
    put(to_bytes("toy"));
    put(Bytes{1});
    put(be16(opk));
    put(Bytes{0, 0, 0, 0, 0, 0, 0, 4});
    for (auto k : pk) put(be16(k));
    put(message);
    put(be16(u));
    put(be16(v));
    for (int i = 0; i < 4; ++i) {
        put(be16(a[i]));
        put(be16(b[i]));
        put(be16(d[i]));
    }
    unsigned char digest[64];
    unsigned int dl = 0;
    REQUIRE(EVP_Digest(pre.data(), pre.size(), digest, &dl, EVP_sha512(), nullptr) == 1);
    std::uint64_t x = 0;
    for (unsigned char byte : digest) x = (x * 256 + byte) % q;
    c[signer] = static_cast<std::uint32_t>((x + q - others) % q);
    zr[signer] = static_cast<std::uint32_t>((alpha + std::uint64_t{c[signer]} * r) % q);
    zs[signer] = static_cast<std::uint32_t>((beta + std::uint64_t{c[signer]} * sks[signer]) % q);

    Bytes expected{1, 0, 0, 0, 4};
    auto app = [&](std::uint32_t val) {
        Bytes e = be16(val);
        expected.insert(expected.end(), e.begin(), e.end());
    };
    app(u);
    app(v);
    for (int i = 0; i < 4; ++i) {
        app(a[i]);
        app(b[i]);
        app(d[i]);
        app(c[i]);
        app(zr[i]);
        app(zs[i]);
    }

    // --- implementation ---
    auto pp = ars::setup("toy");
    const Group& g = pp.grp();
    std::vector<GroupElement> members;
    for (auto k : pk) members.push_back(toy_elem(g, k));
    ars::Ring ring(members);
    ScriptedRandom fixed;
    for (auto s : {r, alpha, beta}) fixed.push(be16(s));
    for (int i = 0; i < 4; ++i) {
        if (i == static_cast<int>(signer)) continue;
        for (int k = 0; k < 3; ++k) fixed.push(be16(sim[i][k]));
    }
    auto sig = ars::rsign(pp, toy_elem(g, opk), message, ring, g.scalar(sks[signer]), fixed);
    CHECK(fixed.exhausted());
    CHECK(to_hex(ars::serialize(pp, sig)) == to_hex(expected));
    CHECK(ars::rverify(pp, toy_elem(g, opk), message, ring, sig));
}

TEST_CASE("rverify rejects single mutations") {
    auto f = make_fixture("toy", 4, 8);
    SeededRandom rng(3);
    const Bytes m = to_bytes("pay 5");
    auto sig = ars::rsign(f.pp, f.opener.opk, m, f.ring, f.users[1].sk, rng);
    REQUIRE(ars::rverify(f.pp, f.opener.opk, m, f.ring, sig));

    auto bumped = sig;
    bumped.branches[0].c = f.pp.grp().add(bumped.branches[0].c, f.pp.grp().scalar(1));
    CHECK_FALSE(ars::rverify(f.pp, f.opener.opk, m, f.ring, bumped));
    CHECK_FALSE(ars::rverify(f.pp, f.opener.opk, to_bytes("pay 6"), f.ring, sig));
    auto empty = sig;
    empty.u = GroupElement{};
    CHECK_FALSE(ars::rverify(f.pp, f.opener.opk, m, f.ring, empty));
}

TEST_CASE("correctness sweep and challenge sum") {
    for (auto id : {"toy", "production"}) {
        CAPTURE(id);
        const bool toy = std::string_view(id) == "toy";
        for (std::size_t n : {1, 2, 4, 10}) {
            auto f = make_fixture(id, n, 100 + n);
            SeededRandom rng(n);
            const std::size_t trials = toy ? 10 : 1;
            for (std::size_t l = 0; l < n; ++l) {
                for (std::size_t t = 0; t < trials; ++t) {
                    Bytes m = to_bytes("msg " + std::to_string(t));
                    auto sig = ars::rsign(f.pp, f.opener.opk, m, f.ring, f.users[l].sk, rng);
                    REQUIRE(ars::rverify(f.pp, f.opener.opk, m, f.ring, sig));
                    Scalar sum;
                    for (const auto& br : sig.branches) sum = f.pp.grp().add(sum, br.c);
                    CHECK(sum == ars::signature_challenge(f.pp, f.opener.opk, m, f.ring, sig));
                    auto pi = ars::open(f.pp, m, f.ring, sig, f.opener.osk, rng);
                    REQUIRE(pi.has_value());
                    CHECK(pi->pk_identified == f.users[l].pk);
                    CHECK(ars::judge(f.pp, f.opener.opk, m, f.ring, sig, f.users[l].pk, *pi));
                }
            }
        }
    }
}

TEST_CASE("tamper suite: at least 30 mutations at N = 4, none accepted") {
    auto f = make_fixture("production", 4, 21);
    SeededRandom rng(21);
    const Bytes m = to_bytes("tamper");
    auto sig = ars::rsign(f.pp, f.opener.opk, m, f.ring, f.users[3].sk, rng);
    auto cases = harness::tamper_cases(f.pp, f.opener.opk, m, f.ring, sig);
    CHECK(cases.size() >= 30);
    for (const auto& tc : cases) {
        CAPTURE(tc.name);
        CHECK_FALSE(ars::rverify(f.pp, tc.opk, tc.message, tc.ring, tc.sig));
    }
}

TEST_CASE("open returns bottom for invalid signatures and wrong keys") {
    auto f = make_fixture("toy", 4, 31);
    SeededRandom rng(5);
    const Bytes m = to_bytes("open me");
    auto sig = ars::rsign(f.pp, f.opener.opk, m, f.ring, f.users[0].sk, rng);

    // one mutated byte of the wire form
    Bytes wire = ars::serialize(f.pp, sig);
    wire[wire.size() - 1] ^= 0x01;
    try {
        auto mutated = ars::deserialize_signature(f.pp, wire);
        CHECK_FALSE(ars::open(f.pp, m, f.ring, mutated, f.opener.osk, rng).has_value());
    } catch (const Error&) {
        // the flip produced a non-canonical scalar: rejected even earlier
    }

    auto other = ars::okgen(f.pp, rng);
    CHECK_FALSE(ars::open(f.pp, m, f.ring, sig, other.osk, rng).has_value());
}

TEST_CASE("toy: opening agrees with brute-force ElGamal decryption") {
    auto f = make_fixture("toy", 4, 41);
    SeededRandom rng(41);
    for (int t = 0; t < 50; ++t) {
        const Bytes m = to_bytes("oracle " + std::to_string(t));
        auto sig = ars::rsign(f.pp, f.opener.opk, m, f.ring, f.users[t % 4].sk, rng);
        auto pi = ars::open(f.pp, m, f.ring, sig, f.opener.osk, rng);
        REQUIRE(pi.has_value());
        CHECK(pi->pk_identified == harness::toy_brute_force_decrypt(f.pp, f.opener.opk, sig));
    }
}

TEST_CASE("judge rejects wrong members and altered proofs") {
    auto f = make_fixture("production", 4, 51);
    SeededRandom rng(51);
    const Bytes m = to_bytes("judge");
    auto sig = ars::rsign(f.pp, f.opener.opk, m, f.ring, f.users[2].sk, rng);
    auto pi = ars::open(f.pp, m, f.ring, sig, f.opener.osk, rng);
    REQUIRE(pi.has_value());
    CHECK(ars::judge(f.pp, f.opener.opk, m, f.ring, sig, f.users[2].pk, *pi));
    for (std::size_t j = 0; j < 4; ++j) {
        if (j == 2) continue;
        CHECK_FALSE(ars::judge(f.pp, f.opener.opk, m, f.ring, sig, f.users[j].pk, *pi));
        auto relabelled = *pi;
        relabelled.pk_identified = f.users[j].pk;
        CHECK_FALSE(ars::judge(f.pp, f.opener.opk, m, f.ring, sig, f.users[j].pk, relabelled));
    }
    auto bumped = *pi;
    bumped.z = f.pp.grp().add(bumped.z, f.pp.grp().scalar(1));
    CHECK_FALSE(ars::judge(f.pp, f.opener.opk, m, f.ring, sig, f.users[2].pk, bumped));
    CHECK_FALSE(ars::judge(f.pp, f.opener.opk, to_bytes("other"), f.ring, sig, f.users[2].pk, *pi));
}

TEST_CASE("rverify cost is 6N exponentiations and one hash, independent of the signer") {
    for (std::size_t n : {1, 4, 10}) {
        auto f = make_fixture("toy", n, 61 + n);
        SeededRandom rng(n);
        std::optional<CostMeter> first;
        for (std::size_t l = 0; l < n; ++l) {
            auto sig = ars::rsign(f.pp, f.opener.opk, to_bytes("m"), f.ring, f.users[l].sk, rng);
            CostMeter meter;
            {
                MeterScope scope(meter);
                REQUIRE(ars::rverify(f.pp, f.opener.opk, to_bytes("m"), f.ring, sig));
            }
            CHECK(meter.exponentiations == 6 * n);
            CHECK(meter.hash_calls == 1);
            if (!first) first = meter;
            CHECK(meter == *first);
        }
    }
}

TEST_CASE("wire format") {
    auto f = make_fixture("production", 3, 71);
    SeededRandom rng(71);
    const Bytes m = to_bytes("wire");
    auto sig = ars::rsign(f.pp, f.opener.opk, m, f.ring, f.users[0].sk, rng);
    Bytes wire = ars::serialize(f.pp, sig);
    CHECK(wire.size() == 1 + 4 + 2 * 33 + 3 * (3 * 33 + 3 * 32));
    CHECK(wire[0] == ars::kSchemeVersion);
    CHECK(read_u32_be(ByteView(wire).subspan(1)) == 3);
    CHECK(ars::serialize(f.pp, ars::deserialize_signature(f.pp, wire)) == wire);

    Bytes truncated(wire.begin(), wire.end() - 1);
    CHECK_THROWS_AS(ars::deserialize_signature(f.pp, truncated), Error);
    Bytes bad_version = wire;
    bad_version[0] = 9;
    CHECK_THROWS_AS(ars::deserialize_signature(f.pp, bad_version), Error);

    auto pi = ars::open(f.pp, m, f.ring, sig, f.opener.osk, rng);
    REQUIRE(pi.has_value());
    Bytes pw = ars::serialize(f.pp, *pi);
    CHECK(pw.size() == 3 * 33 + 2 * 32);
    auto back = ars::deserialize_proof(f.pp, pw);
    CHECK(ars::judge(f.pp, f.opener.opk, m, f.ring, sig, back.pk_identified, back));
}

TEST_CASE("simulator transcripts satisfy every branch equation") {
    CHECK(harness::run_simulator_check(ars::setup("toy"), 4, 100) == 100);
    CHECK(harness::run_simulator_check(ars::setup("production"), 2, 10) == 10);
}
