#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "stabkit/channel.hpp"

using namespace stabkit;

TEST_CASE("independent X-Z channel vectors") {
    PauliChannel ch0 = independent_xz(3, Rational(0));
    for (std::size_t i = 0; i < 3; ++i) CHECK(ch0.prob(i, PauliKind::I) == 1);

    PauliChannel ch1 = independent_xz(2, Rational(1));
    for (int k = 0; k < 4; ++k) CHECK(ch1.prob(0, PauliKind(k)) == Rational(1, 4));

    PauliChannel ch = independent_xz(1, Rational(1, 2));
    CHECK(ch.prob(0, PauliKind::I) == Rational(9, 16));
    CHECK(ch.prob(0, PauliKind::X) == Rational(3, 16));
    CHECK(ch.prob(0, PauliKind::Z) == Rational(3, 16));
    CHECK(ch.prob(0, PauliKind::Y) == Rational(1, 16));

    CHECK_THROWS_AS(independent_xz(1, Rational(3, 2)), OutOfRange);
}

TEST_CASE("depolarizing channel vectors") {
    PauliChannel ch0 = depolarizing(2, Rational(0));
    CHECK(ch0.prob(1, PauliKind::I) == 1);
    PauliChannel uni = depolarizing(1, Rational(3, 4));
    for (int k = 0; k < 4; ++k) CHECK(uni.prob(0, PauliKind(k)) == Rational(1, 4));
    PauliChannel ch = depolarizing(1, Rational(1, 4));
    CHECK(ch.prob(0, PauliKind::I) == Rational(3, 4));
    CHECK(ch.prob(0, PauliKind::X) == Rational(1, 12));
}

TEST_CASE("z-only and error-free channels") {
    CHECK(z_only(Rational(0)).prob(0, PauliKind::I) == 1);
    PauliChannel half = z_only(Rational(1, 2));
    CHECK(half.prob(0, PauliKind::Z) == Rational(1, 2));
    CHECK(half.prob(0, PauliKind::X) == 0);
    PauliChannel third = z_only(Rational(1, 3));
    CHECK(third.prob(0, PauliKind::I) == Rational(2, 3));
    CHECK(error_free().prob(0, PauliKind::I) == 1);
}

TEST_CASE("composition") {
    PauliChannel ch = compose({independent_xz(3, Rational(1, 8)), repeat(error_free(), 2)});
    CHECK(ch.num_qubits() == 5);
    CHECK(ch.prob(4, PauliKind::I) == 1);
    CHECK(compose({}).num_qubits() == 0);

    PauliChannel layout = compose({independent_xz(2, Rational(1, 8)), z_only(Rational(1, 3))});
    CHECK(layout.num_qubits() == 3);
    CHECK(layout.prob(2, PauliKind::Z) == Rational(1, 3));
    CHECK(layout.prob(1, PauliKind::Y) == Rational(1, 256));
}

TEST_CASE("error probability") {
    PauliChannel ch = independent_xz(4, Rational(1, 8));
    Rational qi = ch.prob(0, PauliKind::I);
    CHECK(error_probability(ch, PauliOperator::identity(4)) == qi * qi * qi * qi);

    // uniform X-Z probability depends only on the symplectic weight
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        auto e = fixtures::random_pauli(rng, 4);
        std::size_t w = symplectic_weight(e);
        Rational expect = rational_pow(Rational(1, 16), static_cast<unsigned long>(w)) *
                          rational_pow(Rational(15, 16), static_cast<unsigned long>(8 - w));
        CHECK(error_probability(ch, e) == expect);
    }

    CHECK(error_probability(repeat(z_only(Rational(1, 3)), 2),
                            PauliOperator::from_string("XI")) == 0);
}

TEST_CASE("total probability over all Paulis") {
    std::mt19937_64 rng(42);
    for (std::size_t n = 1; n <= 6; n += 5) {
        PauliChannel ch = independent_xz(n, Rational(1, 8));
        Rational total = 0;
        std::uint64_t count = std::uint64_t(1) << (2 * n);
        for (std::uint64_t m = 0; m < count; ++m) {
            BitVector z(n), x(n);
            for (std::size_t b = 0; b < n; ++b) {
                z.set(b, (m >> (2 * b)) & 1);
                x.set(b, (m >> (2 * b + 1)) & 1);
            }
            total += error_probability(ch, PauliOperator(z, x));
        }
        CHECK(total == 1);
    }
    PauliChannel mixed = compose({depolarizing(1, Rational(2, 7)), z_only(Rational(1, 5)),
                                  independent_xz(1, Rational(3, 11))});
    Rational total = 0;
    for (std::uint64_t m = 0; m < 64; ++m) {
        BitVector z(3), x(3);
        for (std::size_t b = 0; b < 3; ++b) {
            z.set(b, (m >> (2 * b)) & 1);
            x.set(b, (m >> (2 * b + 1)) & 1);
        }
        total += error_probability(mixed, PauliOperator(z, x));
    }
    CHECK(total == 1);
}

TEST_CASE("uniform X-Z probability strictly decreases with symplectic weight") {
    for (Rational p : {Rational(1, 8), Rational(1, 3), Rational(49, 100)}) {
        PauliChannel ch = independent_xz(3, p);
        Rational prev;
        for (std::size_t w = 0; w <= 6; ++w) {
            PauliOperator e(3);
            std::size_t ys = w > 3 ? w - 3 : 0;
            std::size_t zs = w - 2 * ys;
            for (std::size_t b = 0; b < ys; ++b) e.set(b, PauliKind::Y);
            for (std::size_t b = ys; b < ys + zs; ++b) e.set(b, PauliKind::Z);
            REQUIRE(symplectic_weight(e) == w);
            Rational cur = error_probability(ch, e);
            if (w) CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("X and Z parts factorize on the independent X-Z channel") {
    std::mt19937_64 rng(43);
    std::size_t n = 5;
    Rational p(2, 9);
    PauliChannel ch = independent_xz(n, p);
    for (int trial = 0; trial < 30; ++trial) {
        auto e = fixtures::random_pauli(rng, n);
        auto zpart = PauliOperator(e.z(), BitVector(n));
        auto xpart = PauliOperator(BitVector(n), e.x());
        Rational half = p / 2;
        auto marginal = [&](std::size_t w) -> Rational {
            return rational_pow(half, static_cast<unsigned long>(w)) *
                   rational_pow(1 - half, static_cast<unsigned long>(n - w));
        };
        CHECK(error_probability(ch, e) ==
              marginal(zpart.z().popcount()) * marginal(xpart.x().popcount()));
    }
}

TEST_CASE("channel JSON round trip and CLI specs") {
    PauliChannel ch = compose({independent_xz(2, Rational(1, 8)), z_only(Rational(1, 3))});
    PauliChannel back = channel_from_json(channel_to_json(ch));
    CHECK(back.num_qubits() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (int k = 0; k < 4; ++k) CHECK(back.prob(i, PauliKind(k)) == ch.prob(i, PauliKind(k)));

    PauliChannel xz = parse_channel_spec("xz:p=1/8", 3);
    CHECK(xz.prob(2, PauliKind::Y) == Rational(1, 256));
    CHECK(parse_channel_spec("depol:p=1/10", 2).prob(0, PauliKind::X) == Rational(1, 30));
    CHECK(parse_channel_spec("free", 2).prob(1, PauliKind::I) == 1);
    CHECK(parse_channel_spec("zonly:q=1/4", 1).prob(0, PauliKind::Z) == Rational(1, 4));
    PauliChannel yf = parse_channel_spec("yfree:t=1/2", 1);
    CHECK(yf.prob(0, PauliKind::Y) == 0);
    CHECK(yf.prob(0, PauliKind::X) == Rational(1, 4));
    CHECK_THROWS_AS(parse_channel_spec("nonsense", 2), ParseError);
    CHECK_THROWS_AS(parse_channel_spec("xz:p=5/4", 2), OutOfRange);
}

TEST_CASE("channel validation") {
    std::vector<std::array<Rational, 4>> bad{{Rational(1, 2), Rational(1, 2), Rational(1, 2),
                                              Rational(-1, 2)}};
    CHECK_THROWS_AS((PauliChannel{bad}), OutOfRange);
    std::vector<std::array<Rational, 4>> off{{Rational(1, 2), Rational(1, 4), Rational(0),
                                              Rational(0)}};
    CHECK_THROWS_AS((PauliChannel{off}), OutOfRange);
}
