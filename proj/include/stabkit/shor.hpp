#pragma once

#include "stabkit/decoder.hpp"

namespace stabkit {

// Shor code on an n1 x n2 lattice, one qubit per vertex: X-type stabilizers
// on horizontal links within each row, Z-type stabilizers on adjacent row
// pairs. Encodes one qubit; Zbar acts on a full row, Xbar on a full column.
struct ShorLattice {
    std::size_t n1 = 0, n2 = 0;
    StabilizerCode code;

    std::size_t qubit(std::size_t row, std::size_t col) const { return row * n2 + col; }
};

inline ShorLattice build_shor(std::size_t n1, std::size_t n2) {
    if (n1 < 1 || n2 < 1) throw OutOfRange("lattice sides must be at least 1");
    ShorLattice lat;
    lat.n1 = n1;
    lat.n2 = n2;
    const std::size_t nq = n1 * n2;

    std::vector<PauliOperator> gens;
    for (std::size_t r = 0; r < n1; ++r)
        for (std::size_t c = 0; c + 1 < n2; ++c) {
            PauliOperator g(nq);
            g.set(lat.qubit(r, c), PauliKind::X);
            g.set(lat.qubit(r, c + 1), PauliKind::X);
            gens.push_back(g);
        }
    for (std::size_t r = 0; r + 1 < n1; ++r) {
        PauliOperator g(nq);
        for (std::size_t c = 0; c < n2; ++c) {
            g.set(lat.qubit(r, c), PauliKind::Z);
            g.set(lat.qubit(r + 1, c), PauliKind::Z);
        }
        gens.push_back(g);
    }

    PauliOperator zbar(nq), xbar(nq);
    for (std::size_t c = 0; c < n2; ++c) zbar.set(lat.qubit(0, c), PauliKind::Z);
    for (std::size_t r = 0; r < n1; ++r) xbar.set(lat.qubit(r, 0), PauliKind::X);

    lat.code = complete_with_logicals(std::move(gens), {xbar}, {zbar}, nq);
    return lat;
}

// A single Z chain of length ell confined to the first row, starting at the
// boundary; ell fully determines the syndrome class structure.
inline PauliOperator row_chain(const ShorLattice& lat, std::size_t ell) {
    if (ell > lat.n2) throw OutOfRange("chain length exceeds row length");
    PauliOperator chain(lat.n1 * lat.n2);
    for (std::size_t c = 0; c < ell; ++c) chain.set(lat.qubit(0, c), PauliKind::Z);
    return chain;
}

inline Syndrome syndrome_for_ell(const ShorLattice& lat, std::size_t ell) {
    return syndrome_of(lat.code, row_chain(lat, ell));
}

// Conditional class probabilities for the row-chain syndrome, relative to the
// class containing the chain itself.
struct ShorClassProbs {
    Rational identity, logical_x, logical_z, logical_y;
};

namespace detail {

// Even/odd weight generating sums ((1+t)^m +- (1-t)^m)/2.
inline void even_odd_sums(const Rational& t, unsigned long m, Rational& even, Rational& odd) {
    Rational plus = rational_pow(1 + t, m);
    Rational minus = rational_pow(1 - t, m);
    even = (plus + minus) / 2;
    odd = (plus - minus) / 2;
}

}  // namespace detail

// Exact closed form of the four class probabilities. The coset sums factor
// into a Z-plane part over full-row patterns and an X-plane part over
// per-row even/odd patterns:
//   P(I)    ~ (pt^ell E1 + pt^(n2-ell) O1) Ev^n1
//   P(Zbar) ~ (pt^(n2-ell) E1 + pt^ell O1) Ev^n1
//   P(Xbar) ~ (pt^ell E1 + pt^(n2-ell) O1) Od^n1
//   P(Ybar) ~ (pt^(n2-ell) E1 + pt^ell O1) Od^n1
// with E1/O1 the even/odd sums of C(n1-1,j) pt^(j n2) and Ev/Od the per-row
// even/odd binomial sums of pt.
inline ShorClassProbs class_probs_formula(std::size_t n1, std::size_t n2, const Rational& p,
                                          std::size_t ell) {
    if (n1 < 1 || n2 < 1) throw OutOfRange("lattice sides must be at least 1");
    if (ell > n2) throw OutOfRange("ell outside [0, n2]");
    if (p <= 0 || p >= 1) throw OutOfRange("noise rate must lie in (0,1)");
    Rational pt = p / (2 - p);

    Rational e1 = 0, o1 = 0;
    Rational pt_n2 = rational_pow(pt, static_cast<unsigned long>(n2));
    detail::even_odd_sums(pt_n2, static_cast<unsigned long>(n1 - 1), e1, o1);

    Rational ev = 0, od = 0;
    detail::even_odd_sums(pt, static_cast<unsigned long>(n2), ev, od);
    Rational ev_n1 = rational_pow(ev, static_cast<unsigned long>(n1));
    Rational od_n1 = rational_pow(od, static_cast<unsigned long>(n1));

    Rational z_same = rational_pow(pt, static_cast<unsigned long>(ell)) * e1 +
                      rational_pow(pt, static_cast<unsigned long>(n2 - ell)) * o1;
    Rational z_flip = rational_pow(pt, static_cast<unsigned long>(n2 - ell)) * e1 +
                      rational_pow(pt, static_cast<unsigned long>(ell)) * o1;

    Rational total = (z_same + z_flip) * (ev_n1 + od_n1);
    ShorClassProbs out;
    out.identity = z_same * ev_n1 / total;
    out.logical_z = z_flip * ev_n1 / total;
    out.logical_x = z_same * od_n1 / total;
    out.logical_y = z_flip * od_n1 / total;
    return out;
}

// P(I|s)/P(Zbar|s) at integer ell, exact.
inline Rational achieved_ratio(std::size_t n1, std::size_t n2, const Rational& p,
                               std::size_t ell) {
    ShorClassProbs probs = class_probs_formula(n1, n2, p, ell);
    return probs.identity / probs.logical_z;
}

struct EllChoice {
    std::size_t ell = 0;
    Rational achieved;  // leading-order ratio pt^(2 ell - n2)
};

namespace detail {
inline Rational pow_signed(const Rational& base, long e) {
    if (e >= 0) return rational_pow(base, static_cast<unsigned long>(e));
    return Rational(1) / rational_pow(base, static_cast<unsigned long>(-e));
}
}  // namespace detail

// Nearest integer ell to the solution of v = pt^(2 ell - n2); v > 1 is the
// mirror case ell < n2/2. All comparisons are exact.
inline EllChoice ell_for_ratio(const Rational& v, const Rational& p, std::size_t n2) {
    if (v <= 0) throw OutOfRange("target ratio must be positive");
    if (p <= 0 || p >= Rational(1, 2)) throw OutOfRange("noise rate must lie in (0,1/2)");
    Rational pt = p / (2 - p);
    long n = long(n2);
    if (v > detail::pow_signed(pt, -n - 1) || v < detail::pow_signed(pt, n + 1))
        throw OutOfRange("target ratio unreachable for this row length");
    for (long ell = 0; ell <= n; ++ell) {
        // boundary between ell and ell+1 sits at v = pt^(2 ell + 1 - n2)
        if (v >= detail::pow_signed(pt, 2 * ell + 1 - n) || ell == n)
            return EllChoice{std::size_t(ell), detail::pow_signed(pt, 2 * ell - n)};
    }
    throw OutOfRange("unreachable");
}

struct LeakageReport {
    bool ok = false;
    bool series_valid = false;
    bool rate_in_range = false;
    bool holds = false;
    Rational leakage;  // P(Xbar|s) + P(Ybar|s), independent of ell
    Rational bound;
};

// Appendix bound on the X/Y leakage of the simulated channel, in the regime
// n2 = 2n and p <= 1/n: leakage <= (n2-1)^-n1 + n2^2 (n2-1)^-2n1 / (1 - n2 (n2-1)^-n1).
inline LeakageReport leakage_bound_check(std::size_t n1, std::size_t n2, const Rational& p) {
    if (n2 < 2) throw OutOfRange("bound needs n2 >= 2");
    LeakageReport rep;
    ShorClassProbs probs = class_probs_formula(n1, n2, p, 0);
    rep.leakage = probs.logical_x + probs.logical_y;

    Rational t = Rational(1) / Rational(integer_pow(Integer(long(n2 - 1)),
                                                    static_cast<unsigned long>(n1)));
    Rational denom = 1 - Rational(long(n2)) * t;
    rep.series_valid = denom > 0;
    rep.rate_in_range = p <= make_rational(2, long(n2));
    if (rep.series_valid) {
        rep.bound = t + Rational(long(n2)) * Rational(long(n2)) * t * t / denom;
        rep.holds = rep.leakage <= rep.bound;
    }
    rep.ok = rep.series_valid && rep.rate_in_range && rep.holds;
    return rep;
}

}  // namespace stabkit
