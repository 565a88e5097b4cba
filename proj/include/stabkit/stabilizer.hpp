#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stabkit/pauli.hpp"

namespace stabkit {

struct Syndrome {
    BitVector bits;

    Syndrome() = default;
    explicit Syndrome(BitVector b) : bits(std::move(b)) {}
    explicit Syndrome(std::size_t len) : bits(len) {}

    std::size_t size() const { return bits.size(); }
    bool operator==(const Syndrome& o) const { return bits == o.bits; }
    bool operator<(const Syndrome& o) const { return bits < o.bits; }
};

// Coset label of an error class: x_part marks logical-X content, z_part
// logical-Z content. (0,0) is the trivial class.
struct LogicalLabel {
    BitVector x_part, z_part;

    LogicalLabel() = default;
    LogicalLabel(BitVector x, BitVector z) : x_part(std::move(x)), z_part(std::move(z)) {}
    static LogicalLabel trivial(std::size_t k) { return LogicalLabel{BitVector(k), BitVector(k)}; }

    bool is_trivial() const { return x_part.is_zero() && z_part.is_zero(); }
    bool operator==(const LogicalLabel& o) const { return x_part == o.x_part && z_part == o.z_part; }
    bool operator!=(const LogicalLabel& o) const { return !(*this == o); }
    bool operator<(const LogicalLabel& o) const {
        if (x_part != o.x_part) return x_part < o.x_part;
        return z_part < o.z_part;
    }
    std::string to_string() const { return x_part.to_string() + "|" + z_part.to_string(); }
};

// An [[n,k]] stabilizer code together with the full canonical operator basis
// {S_i, T_i, Xbar_j, Zbar_j}. Values are immutable after construction.
struct StabilizerCode {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<PauliOperator> stab_gens;    // n-k
    std::vector<PauliOperator> pure_errors;  // n-k, T_i anticommutes only with S_i
    std::vector<PauliOperator> logical_x;    // k
    std::vector<PauliOperator> logical_z;    // k
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;

    void fail(std::string msg) {
        ok = false;
        violations.push_back(std::move(msg));
    }
};

namespace detail {

// Symplectic functional of u as a row vector: <u, v> = (u_x|u_z) . (v_z|v_x).
inline BitVector symplectic_row(const PauliOperator& u) {
    return BitVector::concat(u.x(), u.z());
}

inline int sp2n(const BitVector& a, const BitVector& b) {
    std::size_t n = a.size() / 2;
    BitVector az = a.slice(0, n), ax = a.slice(n, n);
    BitVector bz = b.slice(0, n), bx = b.slice(n, n);
    return int(az.dot(bx) ^ ax.dot(bz));
}

inline void check_generators(const std::vector<PauliOperator>& gens, std::size_t n) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].num_qubits() != n) throw LengthMismatch("generator qubit count mismatch");
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (commutes(gens[i], gens[j]))
                throw NotAbelian("generators " + std::to_string(i) + " and " + std::to_string(j) +
                                 " anticommute");
    }
    BitMatrix eta(0, 2 * n);
    for (const auto& g : gens) eta.append_row(eta_encode(g));
    if (rank(eta) != gens.size()) throw DependentGenerators();
}

// T_j: anticommutes with S_j, commutes with every other fixed basis operator.
inline std::vector<PauliOperator> build_pure_errors(const std::vector<PauliOperator>& gens,
                                                    const std::vector<PauliOperator>& extra_commuting,
                                                    std::size_t n) {
    std::vector<PauliOperator> pure;
    pure.reserve(gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j) {
        BitMatrix a(0, 2 * n);
        BitVector rhs(gens.size() + extra_commuting.size() + j);
        std::size_t r = 0;
        for (std::size_t i = 0; i < gens.size(); ++i, ++r) {
            a.append_row(symplectic_row(gens[i]));
            rhs.set(r, i == j);
        }
        for (const auto& op : extra_commuting) {
            a.append_row(symplectic_row(op));
            ++r;
        }
        for (std::size_t i = 0; i < j; ++i) {
            a.append_row(symplectic_row(pure[i]));
            ++r;
        }
        pure.push_back(eta_decode(solve(a, rhs)));
    }
    return pure;
}

}  // namespace detail

// Completes given logicals (already canonical among themselves) with pure
// errors. Used when a construction fixes its own logical representatives.
inline StabilizerCode complete_with_logicals(std::vector<PauliOperator> stab_gens,
                                             std::vector<PauliOperator> logical_x,
                                             std::vector<PauliOperator> logical_z,
                                             std::size_t n) {
    detail::check_generators(stab_gens, n);
    if (logical_x.size() != logical_z.size()) throw LengthMismatch("logical count mismatch");
    std::size_t k = logical_x.size();
    if (stab_gens.size() + k != n)
        throw DependentGenerators("generator count plus logical count must equal n");
    for (std::size_t i = 0; i < k; ++i) {
        for (const auto& g : stab_gens)
            if (commutes(logical_x[i], g) || commutes(logical_z[i], g))
                throw NotAbelian("logical anticommutes with a stabilizer generator");
        for (std::size_t j = 0; j < k; ++j) {
            if (commutes(logical_x[i], logical_x[j]) || commutes(logical_z[i], logical_z[j]))
                throw NotAbelian("logicals of equal type must commute");
            if (commutes(logical_x[i], logical_z[j]) != (i == j ? 1 : 0))
                throw NotAbelian("logical pair commutation is not canonical");
        }
    }
    std::vector<PauliOperator> extra;
    extra.reserve(2 * k);
    for (const auto& p : logical_x) extra.push_back(p);
    for (const auto& p : logical_z) extra.push_back(p);
    StabilizerCode code;
    code.n = n;
    code.k = k;
    code.pure_errors = detail::build_pure_errors(stab_gens, extra, n);
    code.stab_gens = std::move(stab_gens);
    code.logical_x = std::move(logical_x);
    code.logical_z = std::move(logical_z);
    return code;
}

// Symplectic Gram-Schmidt completion of commuting independent generators into
// the full canonical basis. Deterministic for a fixed generator ordering.
inline StabilizerCode canonical_completion(std::vector<PauliOperator> stab_gens, std::size_t n) {
    detail::check_generators(stab_gens, n);
    std::size_t m = stab_gens.size();
    if (m > n) throw DependentGenerators("more generators than qubits");

    StabilizerCode code;
    code.n = n;
    code.k = n - m;
    code.pure_errors = detail::build_pure_errors(stab_gens, {}, n);
    code.stab_gens = std::move(stab_gens);

    // Logicals live in the symplectic complement of span{S_i, T_i}.
    BitMatrix constraints(0, 2 * n);
    for (const auto& s : code.stab_gens) constraints.append_row(detail::symplectic_row(s));
    for (const auto& t : code.pure_errors) constraints.append_row(detail::symplectic_row(t));
    BitMatrix ker = kernel_basis(constraints);

    std::vector<BitVector> pool;
    for (std::size_t i = 0; i < ker.nrows(); ++i) pool.push_back(ker.row(i));

    while (!pool.empty()) {
        BitVector u = pool.front();
        pool.erase(pool.begin());
        std::size_t wi = pool.size();
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (detail::sp2n(u, pool[i])) {
                wi = i;
                break;
            }
        if (wi == pool.size())
            throw DependentGenerators("degenerate symplectic form on logical space");
        BitVector w = pool[wi];
        pool.erase(pool.begin() + std::ptrdiff_t(wi));
        for (auto& r : pool) {
            if (detail::sp2n(r, w)) r.xor_inplace(u);
            if (detail::sp2n(r, u)) r.xor_inplace(w);
        }
        PauliOperator pu = eta_decode(u), pw = eta_decode(w);
        bool u_pure_z = pu.x().is_zero(), w_pure_z = pw.x().is_zero();
        bool u_pure_x = pu.z().is_zero(), w_pure_x = pw.z().is_zero();
        if (u_pure_z && !w_pure_z) {
            code.logical_z.push_back(pu);
            code.logical_x.push_back(pw);
        } else if (w_pure_z && !u_pure_z) {
            code.logical_z.push_back(pw);
            code.logical_x.push_back(pu);
        } else if (w_pure_x && !u_pure_x) {
            code.logical_x.push_back(pw);
            code.logical_z.push_back(pu);
        } else {
            code.logical_x.push_back(pu);
            code.logical_z.push_back(pw);
        }
    }
    return code;
}

inline ValidationReport validate(const StabilizerCode& code) {
    ValidationReport rep;
    std::size_t n = code.n, k = code.k;
    if (code.stab_gens.size() != n - k) rep.fail("stabilizer generator count != n-k");
    if (code.pure_errors.size() != n - k) rep.fail("pure error count != n-k");
    if (code.logical_x.size() != k || code.logical_z.size() != k)
        rep.fail("logical generator count != k");
    auto check_len = [&](const std::vector<PauliOperator>& ops, const char* what) {
        for (const auto& op : ops)
            if (op.num_qubits() != n) rep.fail(std::string(what) + " has wrong qubit count");
    };
    check_len(code.stab_gens, "stabilizer generator");
    check_len(code.pure_errors, "pure error");
    check_len(code.logical_x, "logical X");
    check_len(code.logical_z, "logical Z");
    if (!rep.ok) return rep;

    BitMatrix eta(0, 2 * n);
    for (const auto& g : code.stab_gens) eta.append_row(eta_encode(g));
    if (rank(eta) != n - k) rep.fail("stabilizer generators are dependent");

    auto expect = [&](const PauliOperator& a, const PauliOperator& b, int want, std::string what) {
        if (commutes(a, b) != want) rep.fail("commutation violated: " + std::move(what));
    };
    for (std::size_t i = 0; i < n - k; ++i)
        for (std::size_t j = 0; j < n - k; ++j) {
            if (j > i)
                expect(code.stab_gens[i], code.stab_gens[j], 0,
                       "S" + std::to_string(i) + ",S" + std::to_string(j));
            if (j > i)
                expect(code.pure_errors[i], code.pure_errors[j], 0,
                       "T" + std::to_string(i) + ",T" + std::to_string(j));
            expect(code.stab_gens[i], code.pure_errors[j], i == j ? 1 : 0,
                   "S" + std::to_string(i) + ",T" + std::to_string(j));
        }
    for (std::size_t i = 0; i < n - k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            expect(code.stab_gens[i], code.logical_x[j], 0,
                   "S" + std::to_string(i) + ",Xbar" + std::to_string(j));
            expect(code.stab_gens[i], code.logical_z[j], 0,
                   "S" + std::to_string(i) + ",Zbar" + std::to_string(j));
            expect(code.pure_errors[i], code.logical_x[j], 0,
                   "T" + std::to_string(i) + ",Xbar" + std::to_string(j));
            expect(code.pure_errors[i], code.logical_z[j], 0,
                   "T" + std::to_string(i) + ",Zbar" + std::to_string(j));
        }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (j > i) {
                expect(code.logical_x[i], code.logical_x[j], 0,
                       "Xbar" + std::to_string(i) + ",Xbar" + std::to_string(j));
                expect(code.logical_z[i], code.logical_z[j], 0,
                       "Zbar" + std::to_string(i) + ",Zbar" + std::to_string(j));
            }
            expect(code.logical_x[i], code.logical_z[j], i == j ? 1 : 0,
                   "Xbar" + std::to_string(i) + ",Zbar" + std::to_string(j));
        }

    BitMatrix all(0, 2 * n);
    for (const auto& g : code.stab_gens) all.append_row(eta_encode(g));
    for (const auto& g : code.pure_errors) all.append_row(eta_encode(g));
    for (const auto& g : code.logical_x) all.append_row(eta_encode(g));
    for (const auto& g : code.logical_z) all.append_row(eta_encode(g));
    if (rank(all) != 2 * n) rep.fail("canonical basis does not span the full Pauli group");
    return rep;
}

inline Syndrome syndrome_of(const StabilizerCode& code, const PauliOperator& e) {
    if (e.num_qubits() != code.n) throw LengthMismatch("error qubit count mismatch");
    BitVector s(code.stab_gens.size());
    for (std::size_t j = 0; j < code.stab_gens.size(); ++j)
        s.set(j, commutes(e, code.stab_gens[j]));
    return Syndrome{std::move(s)};
}

// T_s = prod_j T_j^{s_j}
inline PauliOperator pure_error_for(const StabilizerCode& code, const Syndrome& s) {
    if (s.size() != code.n - code.k) throw LengthMismatch("syndrome length mismatch");
    PauliOperator t(code.n);
    for (std::size_t j = 0; j < s.size(); ++j)
        if (s.bits.get(j)) t.multiply_inplace(code.pure_errors[j]);
    return t;
}

inline PauliOperator logical_rep(const StabilizerCode& code, const LogicalLabel& label) {
    if (label.x_part.size() != code.k || label.z_part.size() != code.k)
        throw LengthMismatch("label length mismatch");
    PauliOperator l(code.n);
    for (std::size_t j = 0; j < code.k; ++j) {
        if (label.x_part.get(j)) l.multiply_inplace(code.logical_x[j]);
        if (label.z_part.get(j)) l.multiply_inplace(code.logical_z[j]);
    }
    return l;
}

struct Decomposition {
    Syndrome syndrome;
    LogicalLabel label;
    BitVector stab_coords;
};

// E = T.L.S coordinates, read off through symplectic products with the basis.
inline Decomposition decompose(const StabilizerCode& code, const PauliOperator& e) {
    if (e.num_qubits() != code.n) throw LengthMismatch("error qubit count mismatch");
    Decomposition d;
    d.syndrome = syndrome_of(code, e);
    d.label.x_part = BitVector(code.k);
    d.label.z_part = BitVector(code.k);
    for (std::size_t j = 0; j < code.k; ++j) {
        d.label.x_part.set(j, commutes(e, code.logical_z[j]));
        d.label.z_part.set(j, commutes(e, code.logical_x[j]));
    }
    d.stab_coords = BitVector(code.n - code.k);
    for (std::size_t i = 0; i < code.n - code.k; ++i)
        d.stab_coords.set(i, commutes(e, code.pure_errors[i]));
    return d;
}

inline PauliOperator recompose(const StabilizerCode& code, const Decomposition& d) {
    PauliOperator e = pure_error_for(code, d.syndrome);
    e.multiply_inplace(logical_rep(code, d.label));
    for (std::size_t i = 0; i < code.n - code.k; ++i)
        if (d.stab_coords.get(i)) e.multiply_inplace(code.stab_gens[i]);
    return e;
}

inline Integer group_size(const StabilizerCode& code) {
    return pow2(static_cast<unsigned long>(code.n - code.k));
}

// Gray-code walk over all 2^m products of the given generators starting from
// `base`. The callback receives a scratch operator valid for the duration of
// the call only.
template <class F>
inline void for_each_span_element(const PauliOperator& base,
                                  const std::vector<PauliOperator>& gens, int max_bits, F&& fn) {
    if (gens.size() > std::size_t(max_bits))
        throw TooLarge("span enumeration of 2^" + std::to_string(gens.size()) + " elements");
    PauliOperator cur = base;
    fn(static_cast<const PauliOperator&>(cur));
    std::uint64_t total = std::uint64_t(1) << gens.size();
    for (std::uint64_t i = 1; i < total; ++i) {
        cur.multiply_inplace(gens[std::size_t(std::countr_zero(i))]);
        fn(static_cast<const PauliOperator&>(cur));
    }
}

template <class F>
inline void for_each_stabilizer_element(const StabilizerCode& code, F&& fn,
                                        const Limits& lims = default_limits()) {
    for_each_span_element(PauliOperator::identity(code.n), code.stab_gens, lims.max_group_bits,
                          std::forward<F>(fn));
}

inline std::vector<PauliOperator> enumerate_stabilizer_group(const StabilizerCode& code,
                                                             const Limits& lims = default_limits()) {
    std::vector<PauliOperator> out;
    out.reserve(std::size_t(1) << (code.n - code.k));
    for_each_stabilizer_element(code, [&](const PauliOperator& p) { out.push_back(p); }, lims);
    return out;
}

// d = min weight over N(S) \ S, by exhaustive walk of the nontrivial classes.
inline std::size_t distance(const StabilizerCode& code, const Limits& lims = default_limits()) {
    if (code.n + code.k > std::size_t(lims.max_qmld_bits))
        throw TooLarge("distance search over 2^" + std::to_string(code.n + code.k) + " operators");
    std::size_t best = code.n + 1;
    std::uint64_t nlabels = std::uint64_t(1) << (2 * code.k);
    for (std::uint64_t m = 1; m < nlabels; ++m) {
        LogicalLabel label{BitVector(code.k), BitVector(code.k)};
        for (std::size_t b = 0; b < code.k; ++b) {
            label.x_part.set(b, (m >> (2 * code.k - 1 - b)) & 1);
            label.z_part.set(b, (m >> (code.k - 1 - b)) & 1);
        }
        for_each_span_element(logical_rep(code, label), code.stab_gens, lims.max_group_bits,
                              [&](const PauliOperator& p) { best = std::min(best, weight(p)); });
    }
    return best;
}

// Code file format: "n k" header, then n-k stabilizer generator strings.
inline StabilizerCode parse_code_text(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            std::size_t start = line.find_first_not_of(' ');
            if (start != std::string::npos && line[start] != '#') lines.push_back(line.substr(start));
            line.clear();
        } else {
            line += text[i];
        }
    }
    if (lines.empty()) throw ParseError("empty code file");
    std::size_t n = 0, k = 0;
    {
        std::size_t sp = lines[0].find(' ');
        if (sp == std::string::npos) throw ParseError("code header must be \"n k\"");
        try {
            n = std::stoul(lines[0].substr(0, sp));
            k = std::stoul(lines[0].substr(sp + 1));
        } catch (const std::exception&) {
            throw ParseError("code header must be \"n k\"");
        }
    }
    if (k > n) throw ParseError("k exceeds n");
    if (lines.size() != 1 + (n - k)) throw ParseError("expected n-k stabilizer rows");
    std::vector<PauliOperator> gens;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        PauliOperator g = PauliOperator::from_string(lines[i]);
        if (g.num_qubits() != n) throw ParseError("generator has wrong qubit count");
        gens.push_back(std::move(g));
    }
    return canonical_completion(std::move(gens), n);
}

inline std::string format_code_text(const StabilizerCode& code) {
    std::string out = std::to_string(code.n) + " " + std::to_string(code.k) + "\n";
    for (const auto& g : code.stab_gens) out += g.to_string() + "\n";
    return out;
}

}  // namespace stabkit
