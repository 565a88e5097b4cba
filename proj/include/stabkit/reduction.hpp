#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stabkit/decoder.hpp"

namespace stabkit {

struct ClassicalCode {
    BitMatrix generator;  // k x n, full row rank
    std::size_t n = 0;
    std::size_t k = 0;
};

inline ClassicalCode make_classical_code(BitMatrix g) {
    ClassicalCode c;
    c.n = g.ncols();
    c.k = g.nrows();
    if (c.k == 0 || c.n == 0) throw RankDeficient("empty generator matrix");
    if (rank(g) != c.k) throw RankDeficient("generator matrix is not full row rank");
    c.generator = std::move(g);
    return c;
}

// Independent oracle: enumerate all 2^k codewords and histogram weights.
inline std::vector<Integer> brute_force_coset_we(const ClassicalCode& c, const BitVector& shift,
                                                 const Limits& lims = default_limits()) {
    if (c.k > std::size_t(lims.max_codeword_bits))
        throw TooLarge("codeword enumeration over 2^" + std::to_string(c.k));
    if (shift.size() != c.n) throw LengthMismatch("shift length mismatch");
    std::vector<Integer> we(c.n + 1, Integer(0));
    BitVector word = shift;
    ++we[word.popcount()];
    std::uint64_t total = std::uint64_t(1) << c.k;
    for (std::uint64_t i = 1; i < total; ++i) {
        word.xor_inplace(c.generator.row(std::size_t(std::countr_zero(i))));
        ++we[word.popcount()];
    }
    return we;
}

inline std::vector<Integer> brute_force_we(const ClassicalCode& c,
                                           const Limits& lims = default_limits()) {
    return brute_force_coset_we(c, BitVector(c.n), lims);
}

inline std::vector<Integer> binomial_we(std::size_t n) {
    std::vector<Integer> we(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        mpz_bin_uiui(we[i].get_mpz_t(), static_cast<unsigned long>(n),
                     static_cast<unsigned long>(i));
    return we;
}

enum class OracleAnswer { Identity, LogicalZ };

inline Rational ptilde_of(const Rational& p) { return p / (2 - p); }
inline Rational p_of_ptilde(const Rational& t) { return 2 * t / (1 + t); }

// The [[2n-k+1, 1]] instance built from a classical code: Z-type stabilizers
// carry the code's generator rows, X-type ones the dual basis rows, and two
// extra qubits pin the crossing to the Identity/LogicalZ pair. The last
// qubit's Z rate is the tunable knob.
struct ReductionInstance {
    ClassicalCode classical;
    BitVector g_last;  // coset shift: Zbar acts as Z^(g_last)
    std::size_t coset_distance = 0;
    StabilizerCode code;
    LogicalLabel identity_label, logical_z_label;
    std::size_t n_xz = 0;    // leading qubits on the uniform X-Z channel
    std::size_t n_free = 0;  // error-free middle block

    PauliChannel channel(const Rational& p, const Rational& q) const {
        return compose({independent_xz(n_xz, p), repeat(error_free(), n_free), z_only(q)});
    }

    Rational v_max() const {
        return Rational(1) /
               (2 * Rational(integer_pow(Integer(long(classical.n)),
                                         static_cast<unsigned long>(coset_distance))));
    }

    // geometric tunable-parameter schedule v_l = v_max 2^-l
    Rational v_at(std::size_t l) const { return v_max() / Rational(pow2(l)); }

    // nominal crossing localization width 4^(-n log2 n) = n^(-2n), exact
    Rational crossing_width() const {
        return Rational(1) / Rational(integer_pow(Integer(long(classical.n)),
                                                  2 * static_cast<unsigned long>(classical.n)));
    }

    unsigned long query_budget() const {
        Integer acc = integer_pow(Integer(long(classical.n)),
                                  2 * static_cast<unsigned long>(classical.n));
        return ceil_log2(acc) + 4;
    }
};

// Instance with a chosen coset shift (any vector outside the row space).
inline ReductionInstance build_instance_with_shift(const ClassicalCode& input,
                                                   const BitVector& shift,
                                                   const Limits& lims = default_limits()) {
    ReductionInstance inst;
    inst.classical = input;
    const std::size_t n = input.n;
    const std::size_t k = input.k;
    if (k >= n) throw RankDeficient("instance construction needs k < n");
    if (shift.size() != n) throw LengthMismatch("shift length mismatch");

    BitMatrix with_shift = input.generator;
    with_shift.append_row(shift);
    if (rank(with_shift) != k + 1) throw RankDeficient("shift lies in the code");
    BitMatrix ext = complete_basis(with_shift);
    BitMatrix gtilde = input.generator;
    for (std::size_t r = 0; r < ext.nrows(); ++r) gtilde.append_row(ext.row(r));
    gtilde.append_row(shift);  // row n-1 defines Zbar
    BitMatrix h = invert(gtilde).transposed();  // gtilde . h^T = I
    inst.g_last = shift;

    auto coset = brute_force_coset_we(input, shift, lims);
    for (std::size_t i = 0; i <= n; ++i)
        if (coset[i] > 0) {
            inst.coset_distance = i;
            break;
        }

    const std::size_t nq = 2 * n - k + 1;
    const std::size_t aux0 = n;  // first of the n-k-1 auxiliary qubits
    const std::size_t ext1 = 2 * n - k - 1;
    const std::size_t ext2 = 2 * n - k;

    auto z_string = [&](const BitVector& bits) {
        PauliOperator p(nq);
        for (std::size_t c = 0; c < n; ++c)
            if (bits.get(c)) p.set(c, PauliKind::Z);
        return p;
    };
    auto x_string = [&](const BitVector& bits) {
        PauliOperator p(nq);
        for (std::size_t c = 0; c < n; ++c)
            if (bits.get(c)) p.set(c, PauliKind::X);
        return p;
    };

    std::vector<PauliOperator> gens;
    for (std::size_t i = 0; i < k; ++i) gens.push_back(z_string(gtilde.row(i)));
    for (std::size_t i = 0; i + k + 1 < n; ++i) {
        PauliOperator s = z_string(gtilde.row(k + i));
        s.set(aux0 + i, PauliKind::Z);
        gens.push_back(s);
    }
    for (std::size_t i = 0; i + k + 1 < n; ++i) {
        PauliOperator s = x_string(h.row(k + i));
        s.set(aux0 + i, PauliKind::X);
        gens.push_back(s);
    }

    PauliOperator zbar = z_string(gtilde.row(n - 1));
    PauliOperator xbar = x_string(h.row(n - 1));

    PauliOperator s_ext1 = zbar;  // Zbar (x) Z on the first added qubit
    s_ext1.set(ext1, PauliKind::Z);
    gens.push_back(s_ext1);
    xbar.set(ext1, PauliKind::X);

    PauliOperator s_ext2 = xbar;  // Xbar (x) X on the second added qubit
    s_ext2.set(ext2, PauliKind::X);
    gens.push_back(s_ext2);
    zbar.set(ext2, PauliKind::Z);

    inst.code = complete_with_logicals(std::move(gens), {xbar}, {zbar}, nq);
    inst.identity_label = LogicalLabel::trivial(1);
    inst.logical_z_label = decompose(inst.code, zbar).label;
    inst.n_xz = n;
    inst.n_free = (n - k - 1) + 1;
    return inst;
}

// Default instance: the shift is the last basis-completion row. A full-rate
// code (k = n) has no coset to point at, so it is first padded with one zero
// coordinate, which leaves all weights unchanged.
inline ReductionInstance build_instance(const ClassicalCode& input,
                                        const Limits& lims = default_limits()) {
    const ClassicalCode* code = &input;
    ClassicalCode padded;
    if (input.k == input.n) {
        BitMatrix g(input.k, input.n + 1);
        for (std::size_t r = 0; r < input.k; ++r)
            for (std::size_t c = 0; c < input.n; ++c) g.set(r, c, input.generator.get(r, c));
        padded = make_classical_code(std::move(g));
        code = &padded;
    }
    BitMatrix ext = complete_basis(code->generator);
    return build_instance_with_shift(*code, ext.row(ext.nrows() - 1), lims);
}

// One black-box decoder query at the trivial syndrome. Only the winning label
// is consumed, never the probabilities.
inline OracleAnswer oracle_query(const ReductionInstance& inst, const Rational& p,
                                 const Rational& q, const Limits& lims = default_limits()) {
    if (p <= 0 || p >= 1) throw OutOfRange("noise rate must lie in (0,1)");
    if (q <= 0 || q >= 1) throw OutOfRange("tunable rate must lie in (0,1)");
    DecodeResult res = dqmld(inst.code, inst.channel(p, q), Syndrome(BitVector(inst.code.n - 1)),
                             lims);
    if (res.winner == inst.identity_label) return OracleAnswer::Identity;
    if (res.winner == inst.logical_z_label) return OracleAnswer::LogicalZ;
    throw Error("oracle returned a class outside {I, Zbar}");
}

struct QueryRecord {
    Rational p;
    OracleAnswer answer;
};

struct CrossingPoint {
    Rational v;
    Rational p_lo, p_hi, p_mid;
    std::vector<QueryRecord> queries;
};

// Binary search for the unique Identity -> LogicalZ flip on (0, 1/n]. The
// left endpoint is placed where the constant term provably dominates. The
// full per-crossing query budget is spent on bisection, which lands well
// below the nominal 4^(-n log2 n) localization width.
inline CrossingPoint find_crossing(const ReductionInstance& inst, const Rational& v,
                                   const Limits& lims = default_limits()) {
    const std::size_t n = inst.classical.n;
    const Rational q = 1 / (1 + v);
    CrossingPoint cp;
    cp.v = v;

    auto ask = [&](const Rational& p) {
        OracleAnswer a = oracle_query(inst, p, q, lims);
        cp.queries.push_back({p, a});
        return a;
    };

    // Identity is guaranteed while ptilde < v 2^-k: the Zbar polynomial is at
    // most 2^k ptilde while the identity side keeps its constant term.
    Rational safe_left =
        p_of_ptilde(v / Rational(pow2(static_cast<unsigned long>(inst.classical.k) + 1)));
    Rational nominal_left = inst.crossing_width() / 256;
    Rational lo = nominal_left < safe_left ? nominal_left : safe_left;
    Rational hi = Rational(1) / Rational(long(n));

    OracleAnswer a_lo = ask(lo);
    OracleAnswer a_hi = ask(hi);
    if (a_lo == a_hi) throw NoCrossing("oracle agrees at both endpoints; v out of range");

    for (unsigned long step = 2; step < inst.query_budget(); ++step) {
        Rational mid = (lo + hi) / 2;
        if (ask(mid) == OracleAnswer::Identity)
            lo = mid;
        else
            hi = mid;
    }
    cp.p_lo = lo;
    cp.p_hi = hi;
    cp.p_mid = (lo + hi) / 2;
    return cp;
}

// --- exact rational dense linear algebra for the constraint systems ---

namespace detail {

inline std::size_t rational_rank(std::vector<std::vector<Rational>> m) {
    std::size_t rows = m.size();
    if (rows == 0) return 0;
    std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

inline std::vector<Rational> solve_linear_system(std::vector<std::vector<Rational>> m,
                                                 std::vector<Rational> b) {
    std::size_t n = m.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) throw SingularMatrix("constraint matrix is singular");
        std::swap(m[p], m[c]);
        std::swap(b[p], b[c]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c] == 0) continue;
            Rational f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
            b[i] -= f * b[c];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
    return x;
}

inline Integer round_nearest(const Rational& x) {
    Rational shifted = x + Rational(1, 2);
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
    return fl;
}

inline Integer round_within_quarter(const Rational& x) {
    Integer r = round_nearest(x);
    Rational err = x - Rational(r);
    if (err < 0) err = -err;
    if (err >= Rational(1, 4))
        throw RoundingAmbiguous("component " + to_fraction_string(x) +
                                " is not within 1/4 of an integer");
    return r;
}

// Minimal-denominator rational in a half-open interval, by the classic
// continued-fraction walk. Both variants are needed because taking
// reciprocals swaps which endpoint is included.
inline Rational simplest_in_left_open(const Rational& lo, const Rational& hi);

inline Rational simplest_in_right_open(const Rational& lo, const Rational& hi) {
    // [lo, hi)
    Integer fl;
    mpz_cdiv_q(fl.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
    if (Rational(fl) < hi) return Rational(fl);  // ceil(lo) works iff < hi
    Integer base;
    mpz_fdiv_q(base.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
    Rational a = lo - Rational(base), b = hi - Rational(base);  // 0 < a < b <= 1
    return Rational(base) + 1 / simplest_in_left_open(1 / b, 1 / a);
}

inline Rational simplest_in_left_open(const Rational& lo, const Rational& hi) {
    // (lo, hi]
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
    if (Rational(fl) > lo) return Rational(fl);  // floor(hi) works iff > lo
    Integer base = fl;
    Rational a = lo - Rational(base), b = hi - Rational(base);  // 0 <= a < b < 1
    if (a == 0) {  // lo is an integer: pick 1/ceil(1/b)
        Rational inv = 1 / b;
        Integer c;
        mpz_cdiv_q(c.get_mpz_t(), inv.get_num().get_mpz_t(), inv.get_den().get_mpz_t());
        return Rational(base) + 1 / Rational(c);
    }
    return Rational(base) + 1 / simplest_in_right_open(1 / b, 1 / a);
}

inline Rational eval_poly(const std::vector<Integer>& coef, const Rational& x) {
    Rational acc = 0;
    Rational power = 1;
    for (const auto& c : coef) {
        acc += Rational(c) * power;
        power *= x;
    }
    return acc;
}

}  // namespace detail

// Crossing rows (1, pt, ..., pt^n, -v, -v pt, ..., -v pt^n) on the unknowns
// omega = (B_0..B_n, WE_0..WE_n), padded with the normalization row
// sum(B) + sum(WE) = |C| + |C+g_n| = 2^(k+1) and the two pinned coefficients
// B_0 = 0, WE_0 = 1 to make the matrix square.
struct ConstraintSystem {
    std::vector<std::vector<Rational>> matrix;
    std::vector<Rational> rhs;
    std::vector<CrossingPoint> crossings;  // rows 0..2n-2 came from these
    std::size_t n = 0;                     // classical code length
    std::size_t k = 0;                     // classical code dimension
};

inline std::vector<Rational> constraint_row(std::size_t n, const Rational& v,
                                            const Rational& ptilde) {
    std::vector<Rational> row(2 * n + 2);
    Rational power = 1;
    for (std::size_t i = 0; i <= n; ++i) {
        row[i] = power;
        row[n + 1 + i] = -v * power;
        power *= ptilde;
    }
    return row;
}

inline ConstraintSystem assemble_constraints(const ReductionInstance& inst,
                                             const std::vector<CrossingPoint>& crossings) {
    const std::size_t n = inst.classical.n;
    ConstraintSystem sys;
    sys.n = n;
    sys.k = inst.classical.k;
    sys.crossings = crossings;
    std::size_t used = std::min(crossings.size(), 2 * n - 1);
    for (std::size_t l = 0; l < used; ++l)
        sys.matrix.push_back(constraint_row(n, crossings[l].v, ptilde_of(crossings[l].p_mid)));
    sys.matrix.push_back(std::vector<Rational>(2 * n + 2, Rational(1)));
    std::vector<Rational> pin_b0(2 * n + 2, Rational(0));
    pin_b0[0] = 1;
    sys.matrix.push_back(pin_b0);
    std::vector<Rational> pin_we0(2 * n + 2, Rational(0));
    pin_we0[n + 1] = 1;
    sys.matrix.push_back(pin_we0);
    while (sys.matrix.size() < 2 * n + 2)
        sys.matrix.push_back(std::vector<Rational>(2 * n + 2, Rational(0)));

    sys.rhs.assign(sys.matrix.size(), Rational(0));
    sys.rhs[used] = Rational(pow2(static_cast<unsigned long>(sys.k) + 1));
    sys.rhs[used + 2] = 1;  // WE_0
    return sys;
}

// Leading principal minor test: the first l rows restricted to the first l
// columns must be nonsingular for the new constraint to be independent.
inline bool leading_minors_independent(const ReductionInstance& inst,
                                       const std::vector<CrossingPoint>& crossings) {
    const std::size_t n = inst.classical.n;
    const std::size_t l = crossings.size();
    std::vector<std::vector<Rational>> sub(l);
    for (std::size_t r = 0; r < l; ++r) {
        auto row = constraint_row(n, crossings[r].v, ptilde_of(crossings[r].p_mid));
        sub[r].assign(row.begin(), row.begin() + long(l));
    }
    return detail::rational_rank(std::move(sub)) == l;
}

struct WeightEnumeratorSolution {
    std::vector<Integer> we;  // WE_0..WE_n
    std::vector<Integer> b;   // B_0..B_n
    std::vector<Rational> omega;
};

namespace detail {

// Exact certificate: the candidate pair must reproduce every observed oracle
// flip, i.e. v W - B changes sign across each crossing bracket.
inline void check_bracket_certificate(const std::vector<Integer>& we,
                                      const std::vector<Integer>& b,
                                      const std::vector<CrossingPoint>& crossings) {
    for (const auto& cp : crossings) {
        Rational lo = ptilde_of(cp.p_lo), hi = ptilde_of(cp.p_hi);
        Rational h_lo = cp.v * eval_poly(we, lo) - eval_poly(b, lo);
        Rational h_hi = cp.v * eval_poly(we, hi) - eval_poly(b, hi);
        if (h_lo < 0 || h_hi > 0)
            throw PostCheckFailed("candidate enumerators contradict an observed crossing bracket");
    }
}

// No enumerator entry can exceed the binomial coefficient of its weight.
inline void check_binomial_caps(const std::vector<Integer>& we, const std::vector<Integer>& b,
                                std::size_t n) {
    std::vector<Integer> caps = binomial_we(n);
    for (std::size_t i = 0; i <= n; ++i)
        if (we[i] > caps[i] || b[i] > caps[i])
            throw PostCheckFailed("enumerator entry exceeds its binomial cap");
}

}  // namespace detail

inline WeightEnumeratorSolution solve_weight_enumerators(const ConstraintSystem& sys) {
    WeightEnumeratorSolution sol;
    sol.omega = detail::solve_linear_system(sys.matrix, sys.rhs);
    const std::size_t n = sys.n;
    for (std::size_t i = 0; i <= n; ++i) sol.b.push_back(detail::round_within_quarter(sol.omega[i]));
    for (std::size_t i = 0; i <= n; ++i)
        sol.we.push_back(detail::round_within_quarter(sol.omega[n + 1 + i]));

    Integer total = 0;
    for (const auto& x : sol.we) {
        if (x < 0) throw PostCheckFailed("negative weight enumerator");
        total += x;
    }
    for (const auto& x : sol.b) {
        if (x < 0) throw PostCheckFailed("negative coset enumerator");
        total += x;
    }
    if (sol.we[0] != 1) throw PostCheckFailed("WE_0 != 1");
    if (sol.b[0] != 0) throw PostCheckFailed("B_0 != 0");
    if (total != pow2(static_cast<unsigned long>(sys.k) + 1))
        throw PostCheckFailed("enumerators do not sum to 2^(k+1)");
    detail::check_binomial_caps(sol.we, sol.b, n);
    detail::check_bracket_certificate(sol.we, sol.b, sys.crossings);
    return sol;
}

struct CrossingTrace {
    CrossingPoint point;
    bool accepted = false;
    std::size_t level = 0;  // 0 is the input code's own instance
};

struct LevelTranscript {
    std::size_t level = 0;
    std::size_t code_dim = 0;  // dimension of the classical code at this level
    bool used_probes = false;
    std::vector<Rational> omega;
    std::vector<Integer> we, b;
};

// Exact probe of the decision boundary at a fixed rate p: the flip happens
// at v* = B(pt)/W(pt), a rational with denominator at most 2^k m^n when
// pt = 1/m. Bisecting v below 1/(2 bound^2) pins v* as the unique such
// rational in the bracket, recovered by the continued-fraction walk.
struct NodeProbe {
    Rational p;
    Rational ratio;  // exact B(pt)/W(pt)
    std::size_t queries = 0;
};

struct ReductionTranscript {
    std::size_t classical_n = 0, classical_k = 0, qubits = 0;
    bool padded = false;
    std::vector<CrossingTrace> crossings;  // all levels, schedule order
    std::vector<NodeProbe> probes;
    std::size_t total_queries = 0;
    std::vector<LevelTranscript> levels;
    ConstraintSystem system;  // the input code's own constraint system
};

struct ReductionResult {
    std::vector<Integer> we;  // for the input code, length input.n + 1
    std::vector<Integer> b;   // coset enumerator of C + g_last
    ReductionTranscript transcript;
};

// Grows the crossing set along the v-schedule, keeping only constraints that
// pass the exact leading-minor test; caps work at (2n+1)^2 crossings.
inline std::vector<CrossingPoint> collect_independent_crossings(
    const ReductionInstance& inst, ReductionTranscript& tr, std::size_t level,
    const Limits& lims = default_limits()) {
    const std::size_t n = inst.classical.n;
    const std::size_t wanted = 2 * n + 1;
    const std::size_t budget = (2 * n + 1) * (2 * n + 1);
    std::vector<CrossingPoint> accepted;
    std::size_t l = 0;
    while (accepted.size() < wanted) {
        if (l >= budget) throw Exhausted("no independent constraint set within (2n+1)^2 crossings");
        CrossingPoint cp = find_crossing(inst, inst.v_at(l), lims);
        ++l;
        tr.total_queries += cp.queries.size();
        accepted.push_back(cp);
        bool ok = leading_minors_independent(inst, accepted);
        tr.crossings.push_back({cp, ok, level});
        if (!ok) accepted.pop_back();
    }
    return accepted;
}

// One level of the nested-code chain: given the enumerator of the super-code
// C' = C u (C + shift), the exact rows W_i + B_i = W'_i remove the rank
// deficiency that pure crossing data has whenever the two enumerator
// polynomials share a factor, and n+1 crossings pin W on a scaled
// Vandermonde system.
struct ChainLevel {
    ReductionInstance inst;
    std::vector<CrossingPoint> crossings;
};

inline WeightEnumeratorSolution solve_chain_level(const ChainLevel& level,
                                                  const std::vector<Integer>& super_we) {
    const std::size_t n = level.inst.classical.n;
    if (level.crossings.size() < n + 1)
        throw Exhausted("chain level needs at least n+1 crossings");

    std::vector<std::vector<Rational>> m;
    std::vector<Rational> rhs;
    for (std::size_t i = 0; i <= n; ++i) {  // B_i + W_i = W'_i
        std::vector<Rational> row(2 * n + 2, Rational(0));
        row[i] = 1;
        row[n + 1 + i] = 1;
        m.push_back(std::move(row));
        rhs.push_back(Rational(super_we[i]));
    }
    for (std::size_t l = 0; l <= n; ++l) {
        m.push_back(constraint_row(n, level.crossings[l].v,
                                   ptilde_of(level.crossings[l].p_mid)));
        rhs.push_back(Rational(0));
    }

    WeightEnumeratorSolution sol;
    sol.omega = detail::solve_linear_system(std::move(m), std::move(rhs));
    for (std::size_t i = 0; i <= n; ++i)
        sol.b.push_back(detail::round_within_quarter(sol.omega[i]));
    for (std::size_t i = 0; i <= n; ++i)
        sol.we.push_back(detail::round_within_quarter(sol.omega[n + 1 + i]));

    const std::size_t dim = level.inst.classical.k;
    Integer we_total = 0, b_total = 0;
    for (const auto& x : sol.we) {
        if (x < 0) throw PostCheckFailed("negative weight enumerator");
        we_total += x;
    }
    for (const auto& x : sol.b) {
        if (x < 0) throw PostCheckFailed("negative coset enumerator");
        b_total += x;
    }
    if (sol.we[0] != 1) throw PostCheckFailed("WE_0 != 1");
    if (sol.b[0] != 0) throw PostCheckFailed("B_0 != 0");
    if (we_total != pow2(static_cast<unsigned long>(dim)))
        throw PostCheckFailed("weight enumerator does not sum to 2^k");
    if (b_total != pow2(static_cast<unsigned long>(dim)))
        throw PostCheckFailed("coset enumerator does not sum to 2^k");
    for (std::size_t i = 0; i <= n; ++i)
        if (sol.we[i] + sol.b[i] != super_we[i])
            throw PostCheckFailed("level result is inconsistent with the super-code");
    detail::check_binomial_caps(sol.we, sol.b, n);
    detail::check_bracket_certificate(sol.we, sol.b, level.crossings);
    return sol;
}

inline NodeProbe probe_ratio_at(const ReductionInstance& inst, unsigned long m,
                                const Limits& lims = default_limits()) {
    const std::size_t n = inst.classical.n;
    const std::size_t k = inst.classical.k;
    NodeProbe probe;
    Rational pt = make_rational(1, long(m));
    probe.p = p_of_ptilde(pt);

    Integer bound = pow2(static_cast<unsigned long>(k)) *
                    integer_pow(Integer(long(m)), static_cast<unsigned long>(n));
    Rational target = Rational(1) / Rational(2 * bound * bound);

    // Zbar wins below B(pt)/W(pt) >= pt^n / 2^k, identity above 2^k >= B/W.
    Rational lo = rational_pow(pt, static_cast<unsigned long>(n)) /
                  Rational(pow2(static_cast<unsigned long>(k) + 1));
    Rational hi = Rational(pow2(static_cast<unsigned long>(k))) + 1;
    while (hi - lo > target) {
        Rational mid = (lo + hi) / 2;
        ++probe.queries;
        // identity wins iff v >= v*, ties included
        if (oracle_query(inst, probe.p, 1 / (1 + mid), lims) == OracleAnswer::Identity)
            hi = mid;
        else
            lo = mid;
    }
    // invariant: v* in (lo, hi]
    probe.ratio = detail::simplest_in_left_open(lo, hi);
    if (probe.ratio.get_den() > bound)
        throw Error("ratio reconstruction exceeded its denominator bound");
    return probe;
}

// Exact level solve: W(pt_j) = W'(pt_j) / (1 + v*_j) at n+1 nodes, followed
// by exact interpolation. No rounding is involved; coefficients must come
// out as integers exactly.
inline WeightEnumeratorSolution solve_chain_level_by_probes(const ChainLevel& level,
                                                            const std::vector<Integer>& super_we,
                                                            std::vector<NodeProbe>& probes,
                                                            const Limits& lims = default_limits()) {
    const std::size_t n = level.inst.classical.n;
    std::vector<std::vector<Rational>> m;
    std::vector<Rational> rhs;
    for (std::size_t j = 0; j <= n; ++j) {
        NodeProbe probe = probe_ratio_at(level.inst, static_cast<unsigned long>(3 + j), lims);
        Rational pt = ptilde_of(probe.p);
        std::vector<Rational> row(n + 1);
        Rational power = 1;
        for (std::size_t i = 0; i <= n; ++i) {
            row[i] = power;
            power *= pt;
        }
        m.push_back(std::move(row));
        rhs.push_back(detail::eval_poly(super_we, pt) / (1 + probe.ratio));
        probes.push_back(std::move(probe));
    }
    std::vector<Rational> coeffs = detail::solve_linear_system(std::move(m), std::move(rhs));

    WeightEnumeratorSolution sol;
    for (std::size_t i = 0; i <= n; ++i) {
        if (coeffs[i].get_den() != 1)
            throw PostCheckFailed("interpolated weight enumerator is not integral");
        sol.we.push_back(coeffs[i].get_num());
        sol.b.push_back(super_we[i] - sol.we.back());
        sol.omega.push_back(coeffs[i]);
    }
    const std::size_t dim = level.inst.classical.k;
    Integer we_total = 0;
    for (const auto& x : sol.we) {
        if (x < 0) throw PostCheckFailed("negative weight enumerator");
        we_total += x;
    }
    for (const auto& x : sol.b)
        if (x < 0) throw PostCheckFailed("negative coset enumerator");
    if (sol.we[0] != 1) throw PostCheckFailed("WE_0 != 1");
    if (sol.b[0] != 0) throw PostCheckFailed("B_0 != 0");
    if (we_total != pow2(static_cast<unsigned long>(dim)))
        throw PostCheckFailed("weight enumerator does not sum to 2^k");
    detail::check_binomial_caps(sol.we, sol.b, n);
    detail::check_bracket_certificate(sol.we, sol.b, level.crossings);
    return sol;
}

// Builds the instances of the nested-code chain and finds their crossings.
// Level 0 is the input code's own instance with its default shift; each
// higher level absorbs the previous shift into the code.
inline std::vector<ChainLevel> collect_chain(const ClassicalCode& base, ReductionTranscript& tr,
                                             const Limits& lims = default_limits()) {
    const std::size_t n = base.n;
    const std::size_t k = base.k;
    if (k >= n) throw RankDeficient("chain needs k < n");
    BitMatrix ext = complete_basis(base.generator);
    std::vector<ChainLevel> levels;
    for (std::size_t level = 0; level + k < n; ++level) {
        BitMatrix gen = base.generator;
        for (std::size_t r = 0; r < level; ++r) gen.append_row(ext.row(ext.nrows() - 1 - r));
        ClassicalCode code = make_classical_code(std::move(gen));
        BitVector shift = ext.row(ext.nrows() - 1 - level);
        ChainLevel lv;
        lv.inst = build_instance_with_shift(code, shift, lims);
        lv.crossings = collect_independent_crossings(lv.inst, tr, level, lims);
        levels.push_back(std::move(lv));
    }
    return levels;
}

inline ClassicalCode zero_padded(const ClassicalCode& input) {
    BitMatrix g(input.k, input.n + 1);
    for (std::size_t r = 0; r < input.k; ++r)
        for (std::size_t c = 0; c < input.n; ++c) g.set(r, c, input.generator.get(r, c));
    return make_classical_code(std::move(g));
}

inline ReductionResult run_reduction(const ClassicalCode& input,
                                     const Limits& lims = default_limits()) {
    // A full-rate code is padded by a zero coordinate so a coset exists; the
    // padded column must come back with zero weight.
    const ClassicalCode* base = &input;
    ClassicalCode padded;
    bool was_padded = false;
    if (input.k == input.n) {
        padded = zero_padded(input);
        base = &padded;
        was_padded = true;
    }
    const std::size_t n = base->n;
    const std::size_t k = base->k;

    // Nested chain C = C^0 c C^1 c ... c C^(n-k) = F_2^n, adding one
    // completion row per level, the input instance's own shift first.
    ReductionResult res;
    res.transcript.classical_n = n;
    res.transcript.classical_k = k;
    res.transcript.padded = was_padded;

    std::vector<ChainLevel> levels = collect_chain(*base, res.transcript, lims);
    if (!levels.empty()) res.transcript.qubits = levels.front().inst.code.n;

    // Solve top-down; each level is re-pinned to exact integers, so errors
    // do not propagate down the chain. If the crossing-based linear system
    // is too ill-conditioned to round (the per-crossing query budget
    // undershoots what monomial-coefficient extraction needs at small n),
    // fall back to exact boundary probes with rational reconstruction.
    std::vector<Integer> current = binomial_we(n);
    std::vector<Integer> base_b;
    for (std::size_t idx = levels.size(); idx-- > 0;) {
        ChainLevel& lv = levels[idx];
        WeightEnumeratorSolution sol;
        bool probed = false;
        try {
            sol = solve_chain_level(lv, current);
        } catch (const Error&) {
            std::vector<NodeProbe> probes;
            sol = solve_chain_level_by_probes(lv, current, probes, lims);
            probed = true;
            for (const auto& probe : probes) res.transcript.total_queries += probe.queries;
            res.transcript.probes.insert(res.transcript.probes.end(), probes.begin(),
                                         probes.end());
        }
        LevelTranscript lt;
        lt.level = idx;
        lt.code_dim = lv.inst.classical.k;
        lt.used_probes = probed;
        lt.omega = sol.omega;
        lt.we = sol.we;
        lt.b = sol.b;
        res.transcript.levels.push_back(std::move(lt));
        current = sol.we;
        if (idx == 0) base_b = sol.b;
    }

    if (!levels.empty())
        res.transcript.system = assemble_constraints(levels.front().inst, levels.front().crossings);

    res.b = base_b;
    if (was_padded) {
        if (current.back() != 0) throw PostCheckFailed("padded coordinate carries weight");
        current.pop_back();
    }
    res.we = std::move(current);
    return res;
}

// Exact identities Prob(I|0) = (1-q) N sum WE_i pt^i and
// Prob(Zbar|0) = q N sum B_i pt^i against the brute-force enumerators.
struct IdentityCheckReport {
    bool ok = false;
    Rational lhs_identity, rhs_identity;
    Rational lhs_zbar, rhs_zbar;
};

inline IdentityCheckReport trivial_class_probability_identity(const ReductionInstance& inst,
                                                              const Rational& p, const Rational& q,
                                                              const Limits& lims = default_limits()) {
    IdentityCheckReport rep;
    PauliChannel ch = inst.channel(p, q);
    Syndrome zero(BitVector(inst.code.n - 1));
    rep.lhs_identity = class_probability(inst.code, ch, zero, inst.identity_label, lims);
    rep.lhs_zbar = class_probability(inst.code, ch, zero, inst.logical_z_label, lims);

    const std::size_t n = inst.classical.n;
    Rational prefactor = rational_pow(1 - p / 2, 2 * static_cast<unsigned long>(n));
    Rational pt = ptilde_of(p);
    rep.rhs_identity =
        (1 - q) * prefactor * detail::eval_poly(brute_force_we(inst.classical, lims), pt);
    rep.rhs_zbar =
        q * prefactor *
        detail::eval_poly(brute_force_coset_we(inst.classical, inst.g_last, lims), pt);
    rep.ok = rep.lhs_identity == rep.rhs_identity && rep.lhs_zbar == rep.rhs_zbar;
    return rep;
}

// Joint class-probability curves at the neutral tunable setting q = 1/2,
// sampled on a uniform rational grid over (0, 1/n].
struct GridCurves {
    std::vector<Rational> p;
    std::vector<Rational> prob_identity;
    std::vector<Rational> prob_zbar;
};

inline GridCurves grid_curves(const ReductionInstance& inst, std::size_t points,
                              const Limits& lims = default_limits()) {
    GridCurves g;
    Syndrome zero(BitVector(inst.code.n - 1));
    const Rational top = Rational(1) / Rational(long(inst.classical.n));
    const Rational half(1, 2);
    for (std::size_t j = 1; j <= points; ++j) {
        Rational p = top * Rational(long(j)) / Rational(long(points));
        PauliChannel ch = inst.channel(p, half);
        g.p.push_back(p);
        g.prob_identity.push_back(class_probability(inst.code, ch, zero, inst.identity_label, lims));
        g.prob_zbar.push_back(class_probability(inst.code, ch, zero, inst.logical_z_label, lims));
    }
    return g;
}

struct MonotonicityReport {
    bool ok = false;
    bool identity_strictly_decreasing = false;
    bool zbar_strictly_increasing = false;
    std::size_t points = 0;
};

inline MonotonicityReport monotonicity_check(const ReductionInstance& inst, std::size_t points,
                                             const Limits& lims = default_limits()) {
    GridCurves g = grid_curves(inst, points, lims);
    MonotonicityReport rep;
    rep.points = points;
    rep.identity_strictly_decreasing = true;
    rep.zbar_strictly_increasing = true;
    for (std::size_t j = 1; j < g.p.size(); ++j) {
        if (!(g.prob_identity[j] < g.prob_identity[j - 1]))
            rep.identity_strictly_decreasing = false;
        if (!(g.prob_zbar[j] > g.prob_zbar[j - 1])) rep.zbar_strictly_increasing = false;
    }
    rep.ok = rep.identity_strictly_decreasing && rep.zbar_strictly_increasing;
    return rep;
}

// Number of sign changes of v P(I|0) - P(Zbar|0) along precomputed curves.
inline std::size_t count_sign_changes(const GridCurves& g, const Rational& v) {
    int last = 0;
    std::size_t changes = 0;
    for (std::size_t j = 0; j < g.p.size(); ++j) {
        Rational f = v * g.prob_identity[j] - g.prob_zbar[j];
        int s = sgn(f);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

inline nlohmann::json transcript_to_json(const ReductionTranscript& tr) {
    nlohmann::json crossings = nlohmann::json::array();
    for (const auto& ct : tr.crossings) {
        nlohmann::json queries = nlohmann::json::array();
        for (const auto& q : ct.point.queries)
            queries.push_back({{"p", to_fraction_string(q.p)},
                               {"answer", q.answer == OracleAnswer::Identity ? "I" : "Z"}});
        crossings.push_back({{"level", ct.level},
                             {"v", to_fraction_string(ct.point.v)},
                             {"p_lo", to_fraction_string(ct.point.p_lo)},
                             {"p_hi", to_fraction_string(ct.point.p_hi)},
                             {"p_mid", to_fraction_string(ct.point.p_mid)},
                             {"accepted", ct.accepted},
                             {"queries", queries}});
    }
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& lt : tr.levels) {
        nlohmann::json omega = nlohmann::json::array();
        for (const auto& x : lt.omega) omega.push_back(to_fraction_string(x));
        nlohmann::json we = nlohmann::json::array();
        for (const auto& x : lt.we) we.push_back(x.get_str());
        nlohmann::json b = nlohmann::json::array();
        for (const auto& x : lt.b) b.push_back(x.get_str());
        levels.push_back({{"level", lt.level},
                          {"code_dim", lt.code_dim},
                          {"used_probes", lt.used_probes},
                          {"omega", omega},
                          {"we", we},
                          {"b", b}});
    }
    nlohmann::json probes = nlohmann::json::array();
    for (const auto& probe : tr.probes)
        probes.push_back({{"p", to_fraction_string(probe.p)},
                          {"ratio", to_fraction_string(probe.ratio)},
                          {"queries", probe.queries}});
    nlohmann::json omega = nlohmann::json::array();
    if (!tr.levels.empty())
        for (const auto& x : tr.levels.back().omega) omega.push_back(to_fraction_string(x));
    return {{"classical_n", tr.classical_n},
            {"classical_k", tr.classical_k},
            {"qubits", tr.qubits},
            {"padded", tr.padded},
            {"total_queries", tr.total_queries},
            {"crossings", crossings},
            {"probes", probes},
            {"levels", levels},
            {"omega", omega}};
}

}  // namespace stabkit
