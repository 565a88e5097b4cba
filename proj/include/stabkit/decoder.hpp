#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stabkit/channel.hpp"
#include "stabkit/stabilizer.hpp"

namespace stabkit {

namespace detail {

// Word masks marking qubits whose X / Y / Z / I probability is exactly zero.
// Lets the coset sums discard zero-probability elements with a few word ops.
struct DeadMask {
    std::vector<std::uint64_t> dead_x, dead_y, dead_z, dead_i, valid;
    bool nontrivial = false;

    explicit DeadMask(const PauliChannel& ch) {
        std::size_t n = ch.num_qubits();
        std::size_t nw = (n + 63) / 64;
        dead_x.assign(nw, 0);
        dead_y.assign(nw, 0);
        dead_z.assign(nw, 0);
        dead_i.assign(nw, 0);
        valid.assign(nw, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t bit = std::uint64_t(1) << (i & 63);
            valid[i >> 6] |= bit;
            if (ch.prob(i, PauliKind::X) == 0) dead_x[i >> 6] |= bit, nontrivial = true;
            if (ch.prob(i, PauliKind::Y) == 0) dead_y[i >> 6] |= bit, nontrivial = true;
            if (ch.prob(i, PauliKind::Z) == 0) dead_z[i >> 6] |= bit, nontrivial = true;
            if (ch.prob(i, PauliKind::I) == 0) dead_i[i >> 6] |= bit, nontrivial = true;
        }
    }

    bool alive(const PauliOperator& p) const {
        if (!nontrivial) return true;
        const auto& z = p.z().words();
        const auto& x = p.x().words();
        for (std::size_t w = 0; w < valid.size(); ++w) {
            std::uint64_t bad = ((x[w] & ~z[w]) & dead_x[w]) | ((z[w] & ~x[w]) & dead_z[w]) |
                                ((z[w] & x[w]) & dead_y[w]) | ((~(z[w] | x[w])) & valid[w] & dead_i[w]);
            if (bad) return false;
        }
        return true;
    }
};

// Labels in lexicographic order on (x_part, z_part), bit 0 most significant.
template <class F>
inline void for_each_label(std::size_t k, F&& fn) {
    std::uint64_t count = std::uint64_t(1) << k;
    for (std::uint64_t mx = 0; mx < count; ++mx)
        for (std::uint64_t mz = 0; mz < count; ++mz) {
            LogicalLabel label{BitVector(k), BitVector(k)};
            for (std::size_t b = 0; b < k; ++b) {
                label.x_part.set(b, (mx >> (k - 1 - b)) & 1);
                label.z_part.set(b, (mz >> (k - 1 - b)) & 1);
            }
            fn(label);
        }
}

inline void require_class_enum(const StabilizerCode& code, const Limits& lims) {
    if (2 * code.k > std::size_t(lims.max_label_bits))
        throw TooLarge("class enumeration over 4^" + std::to_string(code.k) + " labels");
}

}  // namespace detail

// Weight enumerators A_i of one coset T_s . L . S, indexed by symplectic
// weight i = 0..2n; the counts sum to 2^(n-k).
struct CosetEnumerator {
    std::vector<std::uint64_t> counts;

    Integer total() const {
        Integer t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

inline CosetEnumerator coset_enumerator(const StabilizerCode& code, const Syndrome& s,
                                        const LogicalLabel& label,
                                        const Limits& lims = default_limits()) {
    CosetEnumerator en;
    en.counts.assign(2 * code.n + 1, 0);
    PauliOperator rep = multiply(pure_error_for(code, s), logical_rep(code, label));
    for_each_span_element(rep, code.stab_gens, lims.max_group_bits,
                          [&](const PauliOperator& p) { ++en.counts[symplectic_weight(p)]; });
    return en;
}

// Joint class probability P(L, s) as a direct rational sum over the coset.
inline Rational class_probability(const StabilizerCode& code, const PauliChannel& ch,
                                  const Syndrome& s, const LogicalLabel& label,
                                  const Limits& lims = default_limits()) {
    if (ch.num_qubits() != code.n) throw LengthMismatch("channel qubit count mismatch");
    detail::DeadMask mask(ch);
    Rational sum = 0;
    PauliOperator rep = multiply(pure_error_for(code, s), logical_rep(code, label));
    for_each_span_element(rep, code.stab_gens, lims.max_group_bits, [&](const PauliOperator& p) {
        if (mask.alive(p)) sum += error_probability(ch, p);
    });
    return sum;
}

// Same quantity through the weight-enumerator polynomial, valid only for the
// uniform independent X-Z channel: (1-p/2)^(2n) sum_i A_i ptilde^i.
inline Rational xz_class_probability_from_counts(const CosetEnumerator& en, const Rational& p,
                                                 std::size_t n) {
    Rational ptilde = p / (2 - p);
    Rational prefactor = rational_pow(1 - p / 2, 2 * static_cast<unsigned long>(n));
    Rational acc = 0;
    Rational power = 1;
    for (std::size_t i = 0; i < en.counts.size(); ++i) {
        if (en.counts[i]) acc += Rational(long(en.counts[i])) * power;
        power *= ptilde;
    }
    return prefactor * acc;
}

struct DecodeResult {
    LogicalLabel winner;
    std::vector<std::pair<LogicalLabel, Rational>> class_probs;  // label lex order
    Rational achieved_gap;                                       // (P* - runner_up) / P*
};

// Optimal decoder: argmax of the joint class probability over all 4^k labels.
// Exact ties resolve to the lexicographically first label.
inline DecodeResult dqmld(const StabilizerCode& code, const PauliChannel& ch, const Syndrome& s,
                          const Limits& lims = default_limits()) {
    detail::require_class_enum(code, lims);
    DecodeResult res;
    std::size_t best = 0;
    detail::for_each_label(code.k, [&](const LogicalLabel& label) {
        Rational p = class_probability(code, ch, s, label, lims);
        res.class_probs.emplace_back(label, std::move(p));
        if (res.class_probs.back().second > res.class_probs[best].second)
            best = res.class_probs.size() - 1;
    });
    res.winner = res.class_probs[best].first;
    Rational runner_up = 0;
    bool have_runner_up = false;
    for (std::size_t i = 0; i < res.class_probs.size(); ++i) {
        if (i == best) continue;
        if (!have_runner_up || res.class_probs[i].second > runner_up) {
            runner_up = res.class_probs[i].second;
            have_runner_up = true;
        }
    }
    const Rational& top = res.class_probs[best].second;
    res.achieved_gap = (top == 0 || !have_runner_up) ? Rational(0) : (top - runner_up) / top;
    return res;
}

// Non-degenerate decoder: the single most probable error consistent with s,
// ties broken lexicographically on the eta image.
inline PauliOperator qmld(const StabilizerCode& code, const PauliChannel& ch, const Syndrome& s,
                          const Limits& lims = default_limits()) {
    if (code.n + code.k > std::size_t(lims.max_qmld_bits))
        throw TooLarge("QMLD enumeration over 2^" + std::to_string(code.n + code.k) + " errors");
    detail::require_class_enum(code, lims);
    detail::DeadMask mask(ch);
    PauliOperator t = pure_error_for(code, s);
    PauliOperator best(code.n);
    Rational best_prob(-1);
    detail::for_each_label(code.k, [&](const LogicalLabel& label) {
        PauliOperator rep = multiply(t, logical_rep(code, label));
        for_each_span_element(rep, code.stab_gens, lims.max_group_bits,
                              [&](const PauliOperator& cand) {
                                  Rational p = mask.alive(cand) ? error_probability(ch, cand)
                                                                : Rational(0);
                                  if (p > best_prob || (p == best_prob && eta_less(cand, best))) {
                                      best = cand;
                                      best_prob = std::move(p);
                                  }
                              });
    });
    return best;
}

// Minimum symplectic-weight error consistent with s (channel-independent),
// lexicographic tie-break on the eta image.
inline PauliOperator min_weight_error(const StabilizerCode& code, const Syndrome& s,
                                      const Limits& lims = default_limits()) {
    if (code.n + code.k > std::size_t(lims.max_qmld_bits))
        throw TooLarge("minimum-weight search over 2^" + std::to_string(code.n + code.k));
    detail::require_class_enum(code, lims);
    PauliOperator t = pure_error_for(code, s);
    PauliOperator best(code.n);
    std::size_t best_w = 2 * code.n + 1;
    detail::for_each_label(code.k, [&](const LogicalLabel& label) {
        PauliOperator rep = multiply(t, logical_rep(code, label));
        for_each_span_element(rep, code.stab_gens, lims.max_group_bits,
                              [&](const PauliOperator& cand) {
                                  std::size_t w = symplectic_weight(cand);
                                  if (w < best_w || (w == best_w && eta_less(cand, best))) {
                                      best = cand;
                                      best_w = w;
                                  }
                              });
    });
    return best;
}

// Symplectic-weight enumerator of the normalizer N(S); entries sum to 2^(n+k).
inline std::vector<Integer> normalizer_weight_enumerator(const StabilizerCode& code,
                                                         const Limits& lims = default_limits()) {
    if (code.n + code.k > std::size_t(lims.max_qmld_bits))
        throw TooLarge("normalizer enumeration over 2^" + std::to_string(code.n + code.k));
    detail::require_class_enum(code, lims);
    std::vector<Integer> counts(2 * code.n + 1, Integer(0));
    detail::for_each_label(code.k, [&](const LogicalLabel& label) {
        for_each_span_element(logical_rep(code, label), code.stab_gens, lims.max_group_bits,
                              [&](const PauliOperator& p) { ++counts[symplectic_weight(p)]; });
    });
    return counts;
}

struct LargeGapReport {
    bool ok = false;
    bool gap_condition_met = false;  // achieved_gap >= 1 - 2^(-n-k)
    bool classes_agree = false;      // class of QMLD output == DQMLD winner
    bool ratio_ok = false;           // P(L_min, s)/P(s) >= 2^(-n-k)
    Rational achieved_gap;
    Rational ratio;
    Rational bound;
};

// Checks the large-gap equivalence of the two decoders: when the achieved gap
// meets 1 - 2^(-n-k), the QMLD answer's class must match the DQMLD winner,
// and the class holding the minimum-weight error keeps at least a 2^(-n-k)
// share of the syndrome probability.
inline LargeGapReport large_gap_equivalence_check(const StabilizerCode& code,
                                                  const PauliChannel& ch, const Syndrome& s,
                                                  const Limits& lims = default_limits()) {
    LargeGapReport rep;
    rep.bound = Rational(1) / Rational(pow2(static_cast<unsigned long>(code.n + code.k)));

    DecodeResult dres = dqmld(code, ch, s, lims);
    rep.achieved_gap = dres.achieved_gap;
    rep.gap_condition_met = dres.achieved_gap >= 1 - rep.bound;

    PauliOperator q = qmld(code, ch, s, lims);
    LogicalLabel q_label = decompose(code, q).label;
    rep.classes_agree = q_label == dres.winner;

    LogicalLabel min_label = decompose(code, min_weight_error(code, s, lims)).label;
    Rational total = 0;
    Rational min_class = 0;
    for (const auto& [label, prob] : dres.class_probs) {
        total += prob;
        if (label == min_label) min_class = prob;
    }
    rep.ratio = total == 0 ? Rational(0) : min_class / total;
    rep.ratio_ok = total != 0 && rep.ratio >= rep.bound;

    rep.ok = rep.ratio_ok && (!rep.gap_condition_met || rep.classes_agree);
    return rep;
}

}  // namespace stabkit
