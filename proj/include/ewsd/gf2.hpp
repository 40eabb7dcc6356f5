// Bit-level linear algebra over F2. Vectors of width kappa <= 20 live in a
// single machine word; bit i-1 of the mask is the row-i entry, so the integer
// value of a column equals its index i in the code-definition vector nu(i).
#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ewsd/common.hpp"

namespace ewsd {

inline constexpr int kMaxKappa = 20;  // masks stay in one word, 2^kappa tables stay in memory

struct BinVec {
    std::uint32_t bits = 0;
    int width = 0;

    friend bool operator==(const BinVec&, const BinVec&) = default;
    friend bool operator<(const BinVec& a, const BinVec& b) {
        return a.width != b.width ? a.width < b.width : a.bits < b.bits;
    }
};

inline void check_width(int width) {
    if (width < 1) throw validation_error("vector width must be positive, got " + std::to_string(width));
    if (width > kMaxKappa)
        throw resource_error("vector width capped at " + std::to_string(kMaxKappa) + ", got " +
                             std::to_string(width));
}

inline int common_width(std::span<const BinVec> vectors) {
    int w = vectors.empty() ? 0 : vectors.front().width;
    for (const auto& v : vectors)
        if (v.width != w) throw validation_error("mixed vector widths");
    if (w != 0) check_width(w);
    return w;
}

// Reverses the low `width` bits (row 1 <-> row kappa). Hyperplane indexing
// depends on this convention.
inline std::uint32_t flip_bits(std::uint32_t v, int width) {
    std::uint32_t out = 0;
    for (int i = 0; i < width; ++i)
        if (v & (1u << i)) out |= 1u << (width - 1 - i);
    return out;
}

namespace mask_ops {

// Row reduction with the lowest set bit as pivot (row 1 = LSB). Output rows
// are in strictly increasing pivot order and each pivot bit appears in
// exactly one row, which makes the result the unique canonical basis.
inline std::vector<std::uint32_t> rref(std::span<const std::uint32_t> vectors) {
    std::vector<std::uint32_t> rows;  // rows[j] has pivot = lowest set bit, ascending
    for (std::uint32_t v : vectors) {
        for (std::uint32_t r : rows) {
            const std::uint32_t pivot = r & -r;
            if (v & pivot) v ^= r;
        }
        if (v == 0) continue;
        const std::uint32_t pivot = v & -v;
        for (std::uint32_t& r : rows)
            if (r & pivot) r ^= v;
        rows.push_back(v);
    }
    std::sort(rows.begin(), rows.end(),
              [](std::uint32_t a, std::uint32_t b) { return (a & -a) < (b & -b); });
    return rows;
}

inline int rank(std::span<const std::uint32_t> vectors) {
    std::vector<std::uint32_t> rows;
    for (std::uint32_t v : vectors) {
        for (std::uint32_t r : rows) {
            const std::uint32_t pivot = r & -r;
            if (v & pivot) v ^= r;
        }
        if (v != 0) rows.push_back(v);
    }
    return static_cast<int>(rows.size());
}

// All 2^d XOR combinations of an independent basis, ascending.
inline std::vector<std::uint32_t> span_elements(std::span<const std::uint32_t> basis) {
    std::vector<std::uint32_t> elems{0};
    for (std::uint32_t b : basis) {
        const std::size_t half = elems.size();
        elems.resize(half * 2);
        for (std::size_t i = 0; i < half; ++i) elems[half + i] = elems[i] ^ b;
    }
    std::sort(elems.begin(), elems.end());
    return elems;
}

inline bool in_span(std::span<const std::uint32_t> rref_basis, std::uint32_t v) {
    for (std::uint32_t r : rref_basis) {
        const std::uint32_t pivot = r & -r;
        if (v & pivot) v ^= r;
    }
    return v == 0;
}

}  // namespace mask_ops

inline int rank(std::span<const BinVec> vectors) {
    common_width(vectors);
    std::vector<std::uint32_t> masks;
    masks.reserve(vectors.size());
    for (const auto& v : vectors) masks.push_back(v.bits);
    return mask_ops::rank(masks);
}

inline std::vector<BinVec> rref(std::span<const BinVec> vectors) {
    const int w = common_width(vectors);
    std::vector<std::uint32_t> masks;
    masks.reserve(vectors.size());
    for (const auto& v : vectors) masks.push_back(v.bits);
    std::vector<BinVec> out;
    for (std::uint32_t m : mask_ops::rref(masks)) out.push_back({m, w});
    return out;
}

inline std::vector<BinVec> span_elements(std::span<const BinVec> basis) {
    const int w = common_width(basis);
    if (basis.empty()) return {{0u, 0}};  // zero space; width unknowable from an empty basis
    std::vector<std::uint32_t> masks;
    masks.reserve(basis.size());
    for (const auto& v : basis) masks.push_back(v.bits);
    if (mask_ops::rank(masks) != static_cast<int>(masks.size()))
        throw validation_error("span_elements requires a linearly independent basis");
    std::vector<BinVec> out;
    for (std::uint32_t m : mask_ops::span_elements(masks)) out.push_back({m, w});
    return out;
}

// kappa x n generator matrix stored as n column bitmasks. Full rank is a
// queryable property, not an invariant: the worked examples include an
// all-zero column.
class GeneratorMatrix {
  public:
    GeneratorMatrix(int kappa, std::vector<std::uint32_t> cols) : kappa_(kappa), cols_(std::move(cols)) {
        check_width(kappa_);
        for (std::uint32_t c : cols_)
            if (c >= (1u << kappa_)) throw validation_error("column value exceeds 2^kappa - 1");
    }

    int kappa() const { return kappa_; }
    int n() const { return static_cast<int>(cols_.size()); }
    const std::vector<std::uint32_t>& cols() const { return cols_; }
    std::uint32_t col(int j) const { return cols_.at(static_cast<std::size_t>(j)); }  // 0-based
    BinVec col_vec(int j) const { return {col(j), kappa_}; }

    bool full_rank() const { return mask_ops::rank(cols_) == kappa_; }

    // Submatrix columns selected by an n-bit revealed mask (bit p-1 <-> position p).
    std::vector<std::uint32_t> selected(std::uint32_t revealed_mask) const {
        std::vector<std::uint32_t> out;
        for (int j = 0; j < n(); ++j)
            if (revealed_mask & (1u << j)) out.push_back(cols_[static_cast<std::size_t>(j)]);
        return out;
    }

    friend bool operator==(const GeneratorMatrix&, const GeneratorMatrix&) = default;

  private:
    int kappa_;
    std::vector<std::uint32_t> cols_;
};

// Text format: kappa lines of n characters from {0,1}, whitespace between
// characters allowed. Line 1 is row 1 (the LSB of each column mask).
inline GeneratorMatrix parse_generator(std::istream& in) {
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::string bits;
        for (char ch : line) {
            if (ch == '0' || ch == '1')
                bits.push_back(ch);
            else if (!std::isspace(static_cast<unsigned char>(ch)))
                throw validation_error(std::string("invalid character '") + ch + "' in generator matrix");
        }
        if (!bits.empty()) rows.push_back(bits);
    }
    if (rows.empty()) throw validation_error("empty generator matrix");
    const std::size_t n = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != n) throw validation_error("ragged generator matrix rows");
    const int kappa = static_cast<int>(rows.size());
    check_width(kappa);
    std::vector<std::uint32_t> cols(n, 0);
    for (int i = 0; i < kappa; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rows[static_cast<std::size_t>(i)][j] == '1') cols[j] |= 1u << i;
    return GeneratorMatrix(kappa, std::move(cols));
}

inline GeneratorMatrix parse_generator(const std::string& text) {
    std::istringstream in(text);
    return parse_generator(in);
}

inline void emit_generator(const GeneratorMatrix& g, std::ostream& out) {
    for (int i = 0; i < g.kappa(); ++i) {
        for (int j = 0; j < g.n(); ++j) out << ((g.col(j) >> i) & 1u);
        out << '\n';
    }
}

inline std::string emit_generator(const GeneratorMatrix& g) {
    std::ostringstream out;
    emit_generator(g, out);
    return out.str();
}

}  // namespace ewsd
