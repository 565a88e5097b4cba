#pragma once

#include <random>

#include "stabkit/decoder.hpp"
#include "stabkit/reduction.hpp"
#include "stabkit/shor.hpp"

namespace fixtures {

using namespace stabkit;

// [[3,1]] bit-flip repetition code
inline StabilizerCode bitflip() {
    return canonical_completion(
        {PauliOperator::from_string("ZZI"), PauliOperator::from_string("IZZ")}, 3);
}

// [[2,0]] code stabilized by XX and ZZ
inline StabilizerCode xxzz() {
    return canonical_completion(
        {PauliOperator::from_string("XX"), PauliOperator::from_string("ZZ")}, 2);
}

// [[9,1]] Shor code on the 3x3 lattice
inline StabilizerCode shor9() { return build_shor(3, 3).code; }

// [[5,1,3]] five-qubit code
inline StabilizerCode five_qubit() {
    return canonical_completion(
        {PauliOperator::from_string("XZZXI"), PauliOperator::from_string("IXZZX"),
         PauliOperator::from_string("XIXZZ"), PauliOperator::from_string("ZXIXZ")},
        5);
}

// Toric code on an LxL torus: qubits on edges, X stars on vertices, Z
// plaquettes on faces. Horizontal edge (r,c) is qubit r*L+c, vertical edge
// (r,c) is qubit L*L + r*L + c.
struct Toric {
    std::size_t L = 0;
    StabilizerCode code;
    std::size_t h(std::size_t r, std::size_t c) const { return (r % L) * L + (c % L); }
    std::size_t v(std::size_t r, std::size_t c) const { return L * L + (r % L) * L + (c % L); }
};

inline Toric toric(std::size_t L) {
    Toric t;
    t.L = L;
    std::size_t nq = 2 * L * L;
    std::vector<PauliOperator> gens;
    for (std::size_t r = 0; r < L; ++r)
        for (std::size_t c = 0; c < L; ++c) {
            if (r == 0 && c == 0) continue;  // product of all stars is identity
            PauliOperator star(nq);
            star.set(t.h(r, c), PauliKind::X);
            star.set(t.h(r, c + L - 1), PauliKind::X);
            star.set(t.v(r, c), PauliKind::X);
            star.set(t.v(r + L - 1, c), PauliKind::X);
            gens.push_back(star);
        }
    for (std::size_t r = 0; r < L; ++r)
        for (std::size_t c = 0; c < L; ++c) {
            if (r == 0 && c == 0) continue;  // same for plaquettes
            PauliOperator plaq(nq);
            plaq.set(t.h(r, c), PauliKind::Z);
            plaq.set(t.h(r + 1, c), PauliKind::Z);
            plaq.set(t.v(r, c), PauliKind::Z);
            plaq.set(t.v(r, c + 1), PauliKind::Z);
            gens.push_back(plaq);
        }
    t.code = canonical_completion(std::move(gens), nq);
    return t;
}

// Odd-n chain of YY stabilizers. At the trivial syndrome the identity class
// keeps a single live element under a Y-free channel while the Xbar and Zbar
// classes keep all 2^(n-1) elements at weight n, so the decoders split
// exactly at t^n = 2^-(n-1).
inline StabilizerCode y_chain(std::size_t n) {
    std::vector<PauliOperator> gens;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        PauliOperator g(n);
        g.set(i, PauliKind::Y);
        g.set(i + 1, PauliKind::Y);
        gens.push_back(g);
    }
    PauliOperator xbar(n), zbar(n);
    for (std::size_t i = 0; i < n; ++i) {
        xbar.set(i, PauliKind::X);
        zbar.set(i, PauliKind::Z);
    }
    return complete_with_logicals(std::move(gens), {xbar}, {zbar}, n);
}

inline BitVector random_bits(std::mt19937_64& rng, std::size_t len) {
    BitVector v(len);
    for (std::size_t i = 0; i < len; ++i) v.set(i, rng() & 1);
    return v;
}

inline PauliOperator random_pauli(std::mt19937_64& rng, std::size_t n) {
    return PauliOperator(random_bits(rng, n), random_bits(rng, n));
}

// Random [[n, n-m]] stabilizer code by rejection sampling commuting
// independent generators.
inline StabilizerCode random_code(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    std::vector<PauliOperator> gens;
    BitMatrix eta(0, 2 * n);
    while (gens.size() < m) {
        PauliOperator cand = random_pauli(rng, n);
        if (cand.is_identity()) continue;
        bool ok = true;
        for (const auto& g : gens)
            if (commutes(cand, g)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        BitMatrix trial = eta;
        trial.append_row(eta_encode(cand));
        if (rank(trial) != gens.size() + 1) continue;
        eta = std::move(trial);
        gens.push_back(cand);
    }
    return canonical_completion(std::move(gens), n);
}

// rational in (0, 1) with denominator up to 64
inline Rational random_rate(std::mt19937_64& rng) {
    unsigned long den = 2 + rng() % 63;
    unsigned long num = 1 + rng() % (den - 1);
    return make_rational(long(num), long(den));
}

inline Syndrome random_syndrome(std::mt19937_64& rng, const StabilizerCode& code) {
    return Syndrome(random_bits(rng, code.n - code.k));
}

inline LogicalLabel random_label(std::mt19937_64& rng, const StabilizerCode& code) {
    return LogicalLabel{random_bits(rng, code.k), random_bits(rng, code.k)};
}

inline ClassicalCode hamming74() {
    return make_classical_code(BitMatrix::from_strings(
        {"1000110", "0100101", "0010011", "0001111"}));
}

}  // namespace fixtures
