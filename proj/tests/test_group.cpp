#include <doctest.h>

#include "acw/cost_meter.hpp"
#include "acw/error.hpp"
#include "acw/group.hpp"
#include "acw/keccak.hpp"

using namespace acw;

namespace {

std::uint32_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

std::uint32_t toy_value(const Group& g, const GroupElement& e) {
    Bytes b = g.encode(e);
    return (std::uint32_t{b[0]} << 8) | b[1];
}

Bytes two_bytes(std::uint32_t v) { return Bytes{static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)}; }

}  // namespace

TEST_CASE("keccak256 matches reference vectors") {
    CHECK(to_hex(keccak256(Bytes{})) == "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    CHECK(to_hex(keccak256(to_bytes("abc"))) == "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
    // multi-block input (200 bytes > 136-byte rate)
    CHECK(to_hex(keccak256(Bytes(200, 'a'))) == "96ea54061def936c4be90b518992fdc6f12f535068a256229aca54267b4d084d");
}

TEST_CASE("hex helpers") {
    CHECK(to_hex(from_hex("0x00ff10")) == "00ff10");
    CHECK_THROWS_AS(from_hex("abc"), Error);
    CHECK_THROWS_AS(from_hex("zz"), Error);
}

TEST_CASE("toy instantiation: p = 2027, q = 1013, g = 4") {
    auto g = instantiate("toy");
    CHECK(g->id() == "toy");
    CHECK(g->order() == Bytes{0x03, 0xf5});  // 1013
    CHECK(toy_value(*g, g->generator()) == 4);
    CHECK(g->element_size() == 2);
    CHECK(g->scalar_size() == 2);

    // independent check: 1013 and 2027 prime, 4 of order 1013
    auto is_prime = [](std::uint32_t n) {
        for (std::uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return n > 1;
    };
    CHECK(is_prime(1013));
    CHECK(is_prime(2027));
    CHECK(pow_mod(4, 1013, 2027) == 1);
    CHECK(toy_value(*g, g->exp_g(g->scalar(1012))) == pow_mod(4, 1012, 2027));
}

TEST_CASE("production instantiation is secp256k1") {
    auto g = instantiate("production");
    CHECK(to_hex(g->order()) == "fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141");
    CHECK(to_hex(g->encode(g->generator())) == "0279be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798");
    CHECK(g->element_size() == 33);
    CHECK(g->scalar_size() == 32);
    GroupDescription d = g->description();
    CHECK(d.group_id == "production");
    CHECK(d.generator_g == g->generator());
}

TEST_CASE("unknown group identifier") {
    try {
        instantiate("nosuch");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unknown_group);
        CHECK(errc_name(e.code()) == "unknown-identifier");
    }
}

TEST_CASE("hash_to_scalar") {
    for (auto id : {"toy", "production"}) {
        auto g = instantiate(id);
        Bytes data = to_bytes("transcript");
        CHECK(g->hash_to_scalar("tag", data) == g->hash_to_scalar("tag", data));
        // A || BC vs AB || C: the length prefix separates them
        CHECK(g->hash_to_scalar("A", to_bytes("BC")) != g->hash_to_scalar("AB", to_bytes("C")));
        SeededRandom rng(7);
        for (int i = 0; i < 200; ++i) {
            Bytes m(12);
            rng.fill(m);
            Scalar s = g->hash_to_scalar("range", m);
            // canonical decode succeeds iff value < q
            CHECK_NOTHROW(g->decode_scalar(g->encode_scalar(s)));
        }
    }
}

TEST_CASE("hash calls and exponentiations are metered") {
    auto g = instantiate("toy");
    CostMeter m;
    {
        MeterScope scope(m);
        g->exp_g(g->scalar(3));
        g->exp2(g->generator(), g->scalar(1), g->generator(), g->scalar(2));
        g->hash_to_scalar("x", Bytes{});
        g->mul(g->generator(), g->generator());
    }
    CHECK(m.exponentiations == 3);
    CHECK(m.hash_calls == 1);
    g->exp_g(g->scalar(3));
    CHECK(m.exponentiations == 3);
}

TEST_CASE("encode/decode") {
    for (auto id : {"toy", "production"}) {
        CAPTURE(id);
        auto g = instantiate(id);
        CHECK(g->decode(g->encode(g->generator())) == g->generator());
        try {
            g->decode(Bytes(g->element_size(), 0));
            FAIL("all-zero must be rejected");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::malformed_encoding);
        }
        CHECK_THROWS_AS(g->decode(Bytes(g->element_size() + 1, 1)), Error);
    }
}

TEST_CASE("toy decode: residues accepted, non-residues rejected") {
    auto g = instantiate("toy");
    // 3^1013 mod 2027 = 1, so 3 is a quadratic residue and a member.
    REQUIRE(pow_mod(3, 1013, 2027) == 1);
    CHECK_NOTHROW(g->decode(two_bytes(3)));
    // 2^1013 mod 2027 = 2026: non-residue
    REQUIRE(pow_mod(2, 1013, 2027) == 2026);
    try {
        g->decode(two_bytes(2));
        FAIL("2 is not in the subgroup");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_in_subgroup);
    }
    CHECK_THROWS_AS(g->decode(two_bytes(2027)), Error);
}

TEST_CASE("production decode rejects off-curve x") {
    auto g = instantiate("production");
    Bytes enc = g->encode(g->generator());
    // x = 5 is not the x-coordinate of any secp256k1 point (5^3 + 7 = 132 is a non-residue mod p)
    Bytes bad(33, 0);
    bad[0] = 0x02;
    bad[32] = 5;
    try {
        g->decode(bad);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::not_in_subgroup);
    }
    enc[0] = 0x04;
    CHECK_THROWS_AS(g->decode(enc), Error);
}

TEST_CASE("scalar decoding rejects non-canonical values") {
    auto g = instantiate("toy");
    CHECK(g->decode_scalar(two_bytes(1012)) == g->scalar(1012));
    CHECK_THROWS_AS(g->decode_scalar(two_bytes(1013)), Error);
    CHECK_THROWS_AS(g->decode_scalar(Bytes{1}), Error);
    CHECK(g->scalar(1013 + 5) == g->scalar(5));
}

TEST_CASE("homomorphism: g^(a+b) = g^a g^b and g^(ab) = (g^a)^b") {
    for (auto id : {"toy", "production"}) {
        CAPTURE(id);
        auto g = instantiate(id);
        SeededRandom rng(11);
        const int n = std::string_view(id) == "toy" ? 1000 : 200;
        for (int i = 0; i < n; ++i) {
            Scalar a = g->random_scalar(rng), b = g->random_scalar(rng);
            CHECK(g->exp_g(g->add(a, b)) == g->mul(g->exp_g(a), g->exp_g(b)));
            CHECK(g->exp_g(g->mul(a, b)) == g->exp(g->exp_g(a), b));
            CHECK(g->exp2(g->generator(), a, g->exp_g(b), b) == g->exp_g(g->add(a, g->mul(b, b))));
        }
    }
}

TEST_CASE("scalar field identities") {
    for (auto id : {"toy", "production"}) {
        auto g = instantiate(id);
        SeededRandom rng(3);
        for (int i = 0; i < 200; ++i) {
            Scalar a = g->random_nonzero_scalar(rng);
            CHECK(g->mul(a, g->invert(a)) == g->scalar(1));
            CHECK(g->add(a, g->neg(a)) == Scalar{});
            CHECK(g->sub(a, a) == Scalar{});
        }
        CHECK_THROWS_AS(g->invert(Scalar{}), Error);
    }
}

TEST_CASE("toy: exhaustive discrete log recovers the exponent") {
    auto g = instantiate("toy");
    SeededRandom rng(5);
    for (int i = 0; i < 100; ++i) {
        Scalar k = g->random_scalar(rng);
        std::uint32_t target = toy_value(*g, g->exp_g(k));
        std::uint32_t acc = 1, found = 0;
        for (std::uint32_t e = 0; e < 1013; ++e, acc = acc * 4 % 2027) {
            if (acc == target) {
                found = e;
                break;
            }
        }
        CHECK(g->scalar(found) == k);
    }
}

TEST_CASE("serialization round trip of random elements and scalars") {
    for (auto id : {"toy", "production"}) {
        CAPTURE(id);
        auto g = instantiate(id);
        SeededRandom rng(9);
        for (int i = 0; i < 1000; ++i) {
            Scalar s = g->random_scalar(rng);
            CHECK(g->decode_scalar(g->encode_scalar(s)) == s);
            GroupElement e = g->exp_g(g->random_nonzero_scalar(rng));
            CHECK(g->decode(g->encode(e)) == e);
        }
    }
}

TEST_CASE("scripted randomness forces exact scalars") {
    auto g = instantiate("toy");
    ScriptedRandom rng;
    rng.push(g->encode_scalar(g->scalar(5)));
    CHECK(g->random_scalar(rng) == g->scalar(5));
    CHECK(rng.exhausted());
    CHECK_THROWS_AS(g->random_scalar(rng), Error);
}
