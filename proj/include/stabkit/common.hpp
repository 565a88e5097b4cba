#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stabkit {

// Exact rational arithmetic everywhere; no floating point in any result path.
using Rational = mpq_class;
using Integer = mpz_class;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& m = "matrix is singular") : Error(m) {}
};
struct RankDeficient : Error {
    explicit RankDeficient(const std::string& m = "rows are linearly dependent") : Error(m) {}
};
struct Inconsistent : Error {
    explicit Inconsistent(const std::string& m = "linear system has no solution") : Error(m) {}
};
struct OddLength : Error {
    explicit OddLength(const std::string& m = "symplectic vector must have even length") : Error(m) {}
};
struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& m = "operand lengths differ") : Error(m) {}
};
struct NotAbelian : Error {
    explicit NotAbelian(const std::string& m = "generators do not mutually commute") : Error(m) {}
};
struct DependentGenerators : Error {
    explicit DependentGenerators(const std::string& m = "generators are dependent") : Error(m) {}
};
struct TooLarge : Error {
    explicit TooLarge(const std::string& m = "enumeration exceeds configured limit") : Error(m) {}
};
struct NoCrossing : Error {
    explicit NoCrossing(const std::string& m = "no crossing point in search interval") : Error(m) {}
};
struct Exhausted : Error {
    explicit Exhausted(const std::string& m = "crossing budget exhausted") : Error(m) {}
};
struct RoundingAmbiguous : Error {
    explicit RoundingAmbiguous(const std::string& m = "solution too far from integers") : Error(m) {}
};
struct PostCheckFailed : Error {
    explicit PostCheckFailed(const std::string& m = "solution fails post-conditions") : Error(m) {}
};
struct OutOfRange : Error {
    explicit OutOfRange(const std::string& m = "argument out of range") : Error(m) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& m = "malformed input") : Error(m) {}
};

// Enumeration caps. Group enumeration walks 2^(n-k) elements, class
// enumeration 4^k labels, QMLD 2^(n+k) candidates.
struct Limits {
    int max_group_bits = 26;
    int max_label_bits = 20;  // 2k
    int max_qmld_bits = 26;
    int max_codeword_bits = 24;
};

inline const Limits& default_limits() {
    static Limits lims;
    return lims;
}

// mpq_class(num, den) does not canonicalize; this does.
inline Rational make_rational(const Integer& num, const Integer& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// "a/b" or "a"; always canonicalized, denominator > 0.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational");
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
            throw ParseError("bad rational: " + s);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational: " + s);
    if (q.get_den() == 0) throw ParseError("zero denominator: " + s);
    q.canonicalize();
    return q;
}

// Canonical "num/den" form, denominator always printed.
inline std::string to_fraction_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational rational_pow(const Rational& base, unsigned long e) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
    return r;  // base canonical => power canonical
}

inline Integer integer_pow(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Integer pow2(unsigned long e) { return integer_pow(2, e); }

// Smallest t with 2^t >= v, for v >= 1.
inline unsigned long ceil_log2(const Integer& v) {
    if (v <= 0) throw OutOfRange("ceil_log2 of non-positive value");
    Integer w = v - 1;
    return w == 0 ? 0 : mpz_sizeinbase(w.get_mpz_t(), 2);
}

}  // namespace stabkit
