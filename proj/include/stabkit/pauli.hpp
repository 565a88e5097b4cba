#pragma once

#include <ostream>
#include <string>

#include "stabkit/gf2.hpp"

namespace stabkit {

enum class PauliKind : int { I = 0, X = 1, Y = 2, Z = 3 };

inline PauliKind pauli_kind(bool z, bool x) {
    if (z && x) return PauliKind::Y;
    if (z) return PauliKind::Z;
    if (x) return PauliKind::X;
    return PauliKind::I;
}

inline char pauli_char(PauliKind k) { return "IXYZ"[static_cast<int>(k)]; }

// Phase-quotiented n-qubit Pauli operator in symplectic form: a Z-part and an
// X-part of n bits each. Global phases are not tracked.
class PauliOperator {
  public:
    PauliOperator() = default;
    explicit PauliOperator(std::size_t n) : z_(n), x_(n) {}
    PauliOperator(BitVector z, BitVector x) : z_(std::move(z)), x_(std::move(x)) {
        if (z_.size() != x_.size()) throw LengthMismatch("z/x parts differ in length");
    }

    static PauliOperator identity(std::size_t n) { return PauliOperator(n); }

    // "XZIY" style, leftmost character acts on qubit 1
    static PauliOperator from_string(const std::string& s) {
        PauliOperator p(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            switch (s[i]) {
                case 'I': break;
                case 'X': p.x_.set(i, true); break;
                case 'Z': p.z_.set(i, true); break;
                case 'Y':
                    p.x_.set(i, true);
                    p.z_.set(i, true);
                    break;
                default: throw ParseError("Pauli string may contain only IXYZ: " + s);
            }
        }
        return p;
    }

    std::size_t num_qubits() const { return z_.size(); }
    const BitVector& z() const { return z_; }
    const BitVector& x() const { return x_; }

    PauliKind at(std::size_t i) const { return pauli_kind(z_.get(i), x_.get(i)); }

    void set(std::size_t i, PauliKind k) {
        int v = static_cast<int>(k);
        z_.set(i, k == PauliKind::Z || k == PauliKind::Y);
        x_.set(i, k == PauliKind::X || k == PauliKind::Y);
        (void)v;
    }

    bool is_identity() const { return z_.is_zero() && x_.is_zero(); }

    void multiply_inplace(const PauliOperator& o) {
        if (o.num_qubits() != num_qubits()) throw LengthMismatch();
        z_.xor_inplace(o.z_);
        x_.xor_inplace(o.x_);
    }

    std::string to_string() const {
        std::string s(num_qubits(), 'I');
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = pauli_char(at(i));
        return s;
    }

    bool operator==(const PauliOperator& o) const { return z_ == o.z_ && x_ == o.x_; }
    bool operator!=(const PauliOperator& o) const { return !(*this == o); }

  private:
    BitVector z_, x_;
};

inline std::ostream& operator<<(std::ostream& os, const PauliOperator& p) {
    return os << p.to_string();
}

// eta map: the 2n-bit concatenation (z|x), so eta(X (x) Z (x) I (x) Y) = 01011001.
inline BitVector eta_encode(const PauliOperator& p) { return BitVector::concat(p.z(), p.x()); }

inline PauliOperator eta_decode(const BitVector& b) {
    if (b.size() % 2 != 0) throw OddLength();
    std::size_t n = b.size() / 2;
    return PauliOperator(b.slice(0, n), b.slice(n, n));
}

inline PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
    PauliOperator r = a;
    r.multiply_inplace(b);
    return r;
}

// Symplectic product: 0 iff the operators commute.
inline int commutes(const PauliOperator& a, const PauliOperator& b) {
    if (a.num_qubits() != b.num_qubits()) throw LengthMismatch();
    return int(a.z().dot(b.x()) ^ a.x().dot(b.z()));
}

// Number of qubits acted on non-trivially.
inline std::size_t weight(const PauliOperator& p) {
    std::size_t w = 0;
    const auto& zw = p.z().words();
    const auto& xw = p.x().words();
    for (std::size_t i = 0; i < zw.size(); ++i) w += std::size_t(std::popcount(zw[i] | xw[i]));
    return w;
}

// Hamming weight of the eta image; Y counts twice.
inline std::size_t symplectic_weight(const PauliOperator& p) {
    return p.z().popcount() + p.x().popcount();
}

// Ordering on eta images, used for deterministic tie-breaking.
inline bool eta_less(const PauliOperator& a, const PauliOperator& b) {
    return eta_encode(a) < eta_encode(b);
}

}  // namespace stabkit
