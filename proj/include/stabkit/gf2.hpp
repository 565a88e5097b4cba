#pragma once

#include <bit>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "stabkit/common.hpp"

namespace stabkit {

// Dense GF(2) vector, bit-packed into 64-bit words. Bit 0 is the leftmost
// position in the textual form, and the most significant one for ordering.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

    static BitVector from_string(const std::string& s) {
        BitVector v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                v.set(i, true);
            else if (s[i] != '0')
                throw ParseError("bit string may contain only 0/1: " + s);
        }
        return v;
    }

    static BitVector unit(std::size_t len, std::size_t pos) {
        BitVector v(len);
        v.set(pos, true);
        return v;
    }

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool b) {
        std::uint64_t m = std::uint64_t(1) << (i & 63);
        if (b)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    void xor_inplace(const BitVector& o) {
        if (o.len_ != len_) throw LengthMismatch();
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    }

    BitVector operator^(const BitVector& o) const {
        BitVector r = *this;
        r.xor_inplace(o);
        return r;
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) c += std::size_t(std::popcount(w));
        return c;
    }

    bool is_zero() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    // parity of <a,b> over GF(2)
    bool dot(const BitVector& o) const {
        if (o.len_ != len_) throw LengthMismatch();
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
        return std::popcount(acc) & 1;
    }

    BitVector slice(std::size_t from, std::size_t count) const {
        BitVector r(count);
        for (std::size_t i = 0; i < count; ++i) r.set(i, get(from + i));
        return r;
    }

    static BitVector concat(const BitVector& a, const BitVector& b) {
        BitVector r(a.size() + b.size());
        for (std::size_t i = 0; i < a.size(); ++i) r.set(i, a.get(i));
        for (std::size_t i = 0; i < b.size(); ++i) r.set(a.size() + i, b.get(i));
        return r;
    }

    bool operator==(const BitVector& o) const { return len_ == o.len_ && words_ == o.words_; }
    bool operator!=(const BitVector& o) const { return !(*this == o); }

    // lexicographic with position 0 most significant
    bool operator<(const BitVector& o) const {
        std::size_t n = std::min(len_, o.len_);
        for (std::size_t i = 0; i < n; ++i) {
            bool a = get(i), b = o.get(i);
            if (a != b) return b;
        }
        return len_ < o.len_;
    }

    std::string to_string() const {
        std::string s(len_, '0');
        for (std::size_t i = 0; i < len_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

  private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

inline std::ostream& operator<<(std::ostream& os, const BitVector& v) { return os << v.to_string(); }

class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.rows_[i].set(i, true);
        return m;
    }

    static BitMatrix from_rows(std::vector<BitVector> rows) {
        BitMatrix m;
        if (!rows.empty()) {
            m.cols_ = rows.front().size();
            for (const auto& r : rows)
                if (r.size() != m.cols_) throw LengthMismatch("ragged rows");
        }
        m.rows_ = std::move(rows);
        return m;
    }

    static BitMatrix from_strings(const std::vector<std::string>& rows) {
        std::vector<BitVector> rs;
        rs.reserve(rows.size());
        for (const auto& s : rows) rs.push_back(BitVector::from_string(s));
        return from_rows(std::move(rs));
    }

    std::size_t nrows() const { return rows_.size(); }
    std::size_t ncols() const { return cols_; }

    const BitVector& row(std::size_t i) const { return rows_[i]; }
    BitVector& row(std::size_t i) { return rows_[i]; }
    const std::vector<BitVector>& rows() const { return rows_; }

    bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool b) { rows_[r].set(c, b); }

    void append_row(const BitVector& r) {
        if (rows_.empty() && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw LengthMismatch("appended row has wrong length");
        rows_.push_back(r);
    }

    BitMatrix transposed() const {
        BitMatrix t(cols_, nrows());
        for (std::size_t r = 0; r < nrows(); ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (get(r, c)) t.set(c, r, true);
        return t;
    }

    BitVector mul_vector(const BitVector& v) const {
        if (v.size() != cols_) throw LengthMismatch("matrix-vector size mismatch");
        BitVector out(nrows());
        for (std::size_t r = 0; r < nrows(); ++r) out.set(r, rows_[r].dot(v));
        return out;
    }

    BitMatrix mul(const BitMatrix& o) const {
        if (o.nrows() != cols_) throw LengthMismatch("matrix product size mismatch");
        BitMatrix ot = o.transposed();
        BitMatrix out(nrows(), o.ncols());
        for (std::size_t r = 0; r < nrows(); ++r)
            for (std::size_t c = 0; c < o.ncols(); ++c)
                out.set(r, c, rows_[r].dot(ot.rows_[c]));
        return out;
    }

    bool operator==(const BitMatrix& o) const { return cols_ == o.cols_ && rows_ == o.rows_; }

    std::string to_string() const {
        std::string s;
        for (const auto& r : rows_) {
            s += r.to_string();
            s += '\n';
        }
        return s;
    }

  private:
    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

struct RrefResult {
    BitMatrix reduced;
    std::vector<std::size_t> pivots;  // pivot column per pivot row
    std::size_t rank = 0;
};

inline RrefResult rref(const BitMatrix& m) {
    RrefResult res;
    res.reduced = m;
    auto& a = res.reduced;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.ncols() && r < m.nrows(); ++c) {
        std::size_t p = r;
        while (p < m.nrows() && !a.get(p, c)) ++p;
        if (p == m.nrows()) continue;
        std::swap(a.row(p), a.row(r));
        for (std::size_t i = 0; i < m.nrows(); ++i)
            if (i != r && a.get(i, c)) a.row(i).xor_inplace(a.row(r));
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

inline std::size_t rank(const BitMatrix& m) { return rref(m).rank; }

inline BitMatrix stack(const BitMatrix& top, const BitMatrix& bottom) {
    BitMatrix out = top;
    for (std::size_t r = 0; r < bottom.nrows(); ++r) out.append_row(bottom.row(r));
    return out;
}

inline BitMatrix invert(const BitMatrix& m) {
    if (m.nrows() != m.ncols()) throw SingularMatrix("only square matrices invert");
    std::size_t n = m.nrows();
    BitMatrix a = m;
    BitMatrix inv = BitMatrix::identity(n);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = r;
        while (p < n && !a.get(p, c)) ++p;
        if (p == n) throw SingularMatrix();
        std::swap(a.row(p), a.row(r));
        std::swap(inv.row(p), inv.row(r));
        for (std::size_t i = 0; i < n; ++i)
            if (i != r && a.get(i, c)) {
                a.row(i).xor_inplace(a.row(r));
                inv.row(i).xor_inplace(inv.row(r));
            }
        ++r;
    }
    return inv;
}

// Particular solution of m x = b with free variables set to 0.
inline BitVector solve(const BitMatrix& m, const BitVector& b) {
    if (b.size() != m.nrows()) throw LengthMismatch("rhs length != row count");
    BitMatrix aug(m.nrows(), m.ncols() + 1);
    for (std::size_t r = 0; r < m.nrows(); ++r) {
        for (std::size_t c = 0; c < m.ncols(); ++c) aug.set(r, c, m.get(r, c));
        aug.set(r, m.ncols(), b.get(r));
    }
    RrefResult rr = rref(aug);
    BitVector x(m.ncols());
    for (std::size_t i = 0; i < rr.rank; ++i) {
        std::size_t pc = rr.pivots[i];
        if (pc == m.ncols()) throw Inconsistent();
        x.set(pc, rr.reduced.get(i, m.ncols()));
    }
    return x;
}

// Rows extending m's rows to a full basis of GF(2)^ncols: one standard basis
// vector per non-pivot column of rref(m). Deterministic.
inline BitMatrix complete_basis(const BitMatrix& m) {
    RrefResult rr = rref(m);
    if (rr.rank != m.nrows()) throw RankDeficient();
    BitMatrix ext(0, m.ncols());
    std::size_t next_pivot = 0;
    for (std::size_t c = 0; c < m.ncols(); ++c) {
        if (next_pivot < rr.pivots.size() && rr.pivots[next_pivot] == c) {
            ++next_pivot;
            continue;
        }
        ext.append_row(BitVector::unit(m.ncols(), c));
    }
    return ext;
}

// Basis of the right kernel {x : m x = 0}, one vector per free column.
inline BitMatrix kernel_basis(const BitMatrix& m) {
    RrefResult rr = rref(m);
    std::vector<bool> is_pivot(m.ncols(), false);
    for (auto c : rr.pivots) is_pivot[c] = true;
    BitMatrix ker(0, m.ncols());
    for (std::size_t c = 0; c < m.ncols(); ++c) {
        if (is_pivot[c]) continue;
        BitVector v(m.ncols());
        v.set(c, true);
        for (std::size_t i = 0; i < rr.rank; ++i)
            if (rr.reduced.get(i, c)) v.set(rr.pivots[i], true);
        ker.append_row(v);
    }
    return ker;
}

// Text format: one row of '0'/'1' per line, '#' starts a comment line.
inline BitMatrix parse_matrix_text(const std::string& text) {
    std::vector<std::string> rows;
    std::string line;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            std::size_t start = line.find_first_not_of(' ');
            if (start != std::string::npos && line[start] != '#') rows.push_back(line.substr(start));
            line.clear();
        } else {
            line += text[i];
        }
    }
    if (rows.empty()) throw ParseError("no matrix rows");
    return BitMatrix::from_strings(rows);
}

inline std::string format_matrix_text(const BitMatrix& m) { return m.to_string(); }

}  // namespace stabkit
