#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "stabkit/stabilizer.hpp"

using namespace stabkit;

TEST_CASE("canonical completion of the bit-flip code") {
    StabilizerCode code = fixtures::bitflip();
    CHECK(code.n == 3);
    CHECK(code.k == 1);
    CHECK(validate(code).ok);

    // T_1 anticommutes with ZZI only
    CHECK(commutes(code.pure_errors[0], code.stab_gens[0]) == 1);
    CHECK(commutes(code.pure_errors[0], code.stab_gens[1]) == 0);

    // XXX is in the logical-X class, ZZZ in the logical-Z class
    auto dx = decompose(code, PauliOperator::from_string("XXX"));
    CHECK(dx.syndrome.bits.is_zero());
    CHECK(dx.label.x_part.to_string() == "1");
    CHECK(dx.label.z_part.to_string() == "0");
    auto dz = decompose(code, PauliOperator::from_string("ZZZ"));
    CHECK(dz.label.x_part.to_string() == "0");
    CHECK(dz.label.z_part.to_string() == "1");
}

TEST_CASE("one-qubit code stabilized by Z") {
    StabilizerCode code = canonical_completion({PauliOperator::from_string("Z")}, 1);
    CHECK(code.k == 0);
    CHECK(code.pure_errors[0].to_string() == "X");
    CHECK(validate(code).ok);
}

TEST_CASE("XX ZZ code") {
    StabilizerCode code = fixtures::xxzz();
    CHECK(code.k == 0);
    CHECK(validate(code).ok);
}

TEST_CASE("degenerate generator inputs are rejected") {
    CHECK_THROWS_AS(canonical_completion(
                        {PauliOperator::from_string("XI"), PauliOperator::from_string("ZI")}, 2),
                    NotAbelian);
    CHECK_THROWS_AS(canonical_completion(
                        {PauliOperator::from_string("ZZ"), PauliOperator::from_string("ZZ")}, 2),
                    DependentGenerators);
}

TEST_CASE("validate flags a broken code") {
    StabilizerCode bogus = fixtures::bitflip();
    bogus.stab_gens[0] = PauliOperator::from_string("XII");
    bogus.stab_gens[1] = PauliOperator::from_string("ZII");
    ValidationReport rep = validate(bogus);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("Shor code fixture validates") {
    StabilizerCode code = fixtures::shor9();
    CHECK(code.n == 9);
    CHECK(code.k == 1);
    CHECK(validate(code).ok);
}

TEST_CASE("five-qubit code validates") { CHECK(validate(fixtures::five_qubit()).ok); }

TEST_CASE("syndromes") {
    StabilizerCode code = fixtures::bitflip();
    CHECK(syndrome_of(code, PauliOperator::identity(3)).bits.is_zero());
    for (std::size_t j = 0; j < 2; ++j)
        CHECK(syndrome_of(code, code.pure_errors[j]).bits == BitVector::unit(2, j));
    CHECK(syndrome_of(code, PauliOperator::from_string("XII")).bits.to_string() == "10");
}

TEST_CASE("syndrome is GF(2)-linear") {
    std::mt19937_64 rng(31);
    StabilizerCode code = fixtures::shor9();
    for (int trial = 0; trial < 40; ++trial) {
        auto a = fixtures::random_pauli(rng, 9);
        auto b = fixtures::random_pauli(rng, 9);
        CHECK(syndrome_of(code, multiply(a, b)).bits ==
              (syndrome_of(code, a).bits ^ syndrome_of(code, b).bits));
    }
}

TEST_CASE("pure errors reproduce syndromes") {
    StabilizerCode code = fixtures::bitflip();
    CHECK(pure_error_for(code, Syndrome(BitVector(2))).is_identity());
    CHECK(pure_error_for(code, Syndrome(BitVector::unit(2, 1))) == code.pure_errors[1]);
    Syndrome s(BitVector::from_string("11"));
    PauliOperator t = pure_error_for(code, s);
    CHECK(t == multiply(code.pure_errors[0], code.pure_errors[1]));
    CHECK(syndrome_of(code, t) == s);
}

TEST_CASE("decompose round trips") {
    StabilizerCode code = fixtures::bitflip();

    auto d = decompose(code, code.stab_gens[1]);
    CHECK(d.syndrome.bits.is_zero());
    CHECK(d.label.is_trivial());
    CHECK(recompose(code, d) == code.stab_gens[1]);

    auto dx = decompose(code, code.logical_x[0]);
    CHECK(dx.syndrome.bits.is_zero());
    CHECK(dx.label.x_part.to_string() == "1");
    CHECK(dx.label.z_part.to_string() == "0");
    CHECK(dx.stab_coords.is_zero());

    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 60; ++trial) {
        auto e = fixtures::random_pauli(rng, 3);
        CHECK(recompose(code, decompose(code, e)) == e);
    }
}

TEST_CASE("decompose round trips on random codes") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 15; ++trial) {
        std::size_t n = 2 + rng() % 5;
        std::size_t m = 1 + rng() % n;
        StabilizerCode code = fixtures::random_code(rng, n, m);
        CHECK(validate(code).ok);
        for (int inner = 0; inner < 10; ++inner) {
            auto e = fixtures::random_pauli(rng, n);
            CHECK(recompose(code, decompose(code, e)) == e);
        }
    }
}

TEST_CASE("stabilizer group enumeration") {
    StabilizerCode trivial = canonical_completion({}, 2);
    auto elems = enumerate_stabilizer_group(trivial);
    REQUIRE(elems.size() == 1);
    CHECK(elems[0].is_identity());

    StabilizerCode code = fixtures::bitflip();
    auto group = enumerate_stabilizer_group(code);
    std::set<std::string> strings;
    for (const auto& g : group) strings.insert(g.to_string());
    CHECK(strings == std::set<std::string>{"III", "ZZI", "IZZ", "ZIZ"});

    StabilizerCode shor = fixtures::shor9();
    std::size_t count = 0;
    for_each_stabilizer_element(shor, [&](const PauliOperator& g) {
        ++count;
        CHECK(syndrome_of(shor, g).bits.is_zero());
    });
    CHECK(count == 256);
    CHECK(group_size(shor) == 256);
}

TEST_CASE("enumeration limit") {
    Limits tight;
    tight.max_group_bits = 1;
    CHECK_THROWS_AS(enumerate_stabilizer_group(fixtures::bitflip(), tight), TooLarge);
}

TEST_CASE("code distance by exhaustion") {
    CHECK(distance(fixtures::bitflip()) == 1);
    CHECK(distance(fixtures::shor9()) == 3);
    CHECK(distance(fixtures::five_qubit()) == 3);
}

TEST_CASE("code text format") {
    StabilizerCode code = fixtures::bitflip();
    StabilizerCode reparsed = parse_code_text(format_code_text(code));
    CHECK(reparsed.n == code.n);
    CHECK(reparsed.k == code.k);
    CHECK(reparsed.stab_gens == code.stab_gens);
    CHECK_THROWS_AS(parse_code_text("3 1\nZZI\n"), ParseError);
    CHECK_THROWS_AS(parse_code_text("oops\n"), ParseError);
}
