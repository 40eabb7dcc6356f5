// Subspace lattice of F2^kappa: enumeration by dimension, Gaussian binomials
// in exact big-integer arithmetic, hyperplane indexing, and the closed-form
// superspace/overlap counts used by the optimality machinery.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ewsd/common.hpp"
#include "ewsd/gf2.hpp"

namespace ewsd {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kMaxFullLatticeKappa = 8;   // full Xi(W, d) enumeration
inline constexpr int kMaxHyperplaneKappa = 12;   // materialized hyperplane list

inline BigInt pow2(int e) { return BigInt(1) << e; }

// Gaussian binomial coefficient: the number of d'-dimensional subspaces of a
// d-dimensional space over F2. Zero outside d >= d' >= 0, including negative
// arguments (the overlap formulas rely on that case split).
inline BigInt gaussian_binomial(int d, int d_prime) {
    if (!(d >= d_prime && d_prime >= 0)) return 0;
    BigInt num = 1, den = 1;
    for (int iota = 0; iota < d_prime; ++iota) {
        num *= pow2(d - iota) - 1;
        den *= pow2(d_prime - iota) - 1;
    }
    return num / den;  // exact: the product is integral
}

// A linear subspace of F2^kappa with canonical RREF basis (pivot-ascending)
// and a cached sorted element list. Identity is the basis key.
class Subspace {
  public:
    static Subspace from_basis(int kappa, std::span<const std::uint32_t> any_basis) {
        check_width(kappa);
        Subspace s;
        s.kappa_ = kappa;
        s.basis_ = mask_ops::rref(any_basis);
        s.elements_ = mask_ops::span_elements(s.basis_);
        return s;
    }
    static Subspace zero(int kappa) { return from_basis(kappa, {}); }
    static Subspace full(int kappa) {
        std::vector<std::uint32_t> units;
        for (int i = 0; i < kappa; ++i) units.push_back(1u << i);
        return from_basis(kappa, units);
    }

    int kappa() const { return kappa_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<std::uint32_t>& basis() const { return basis_; }
    const std::vector<std::uint32_t>& elements() const { return elements_; }
    const std::vector<std::uint32_t>& key() const { return basis_; }

    bool contains(std::uint32_t v) const { return mask_ops::in_span(basis_, v); }
    bool contains(const Subspace& other) const {
        for (std::uint32_t b : other.basis_)
            if (!contains(b)) return false;
        return true;
    }

    // Debug form matching the worked examples' set notation: {0, 1, 4, 5}.
    std::string to_string() const {
        std::string out = "{";
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (i) out += ", ";
            out += std::to_string(elements_[i]);
        }
        return out + "}";
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.kappa_ == b.kappa_ && a.basis_ == b.basis_;
    }
    friend bool operator<(const Subspace& a, const Subspace& b) { return a.basis_ < b.basis_; }

  private:
    int kappa_ = 1;
    std::vector<std::uint32_t> basis_;
    std::vector<std::uint32_t> elements_;
};

namespace detail {

// Generates every canonical RREF basis with d rows over F2^kappa directly:
// choose the pivot set, then run a counter over the free entries. Each basis
// comes out exactly once, so the count provably matches the Gaussian
// binomial without dedup hashing.
inline void enumerate_rref_bases(int kappa, int d, const std::function<void(std::span<const std::uint32_t>)>& emit) {
    if (d == 0) {
        emit({});
        return;
    }
    std::vector<int> pivots(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) pivots[static_cast<std::size_t>(i)] = i;  // 0-based bit positions

    std::vector<std::uint32_t> rows(static_cast<std::size_t>(d));
    for (;;) {
        // Free positions for row i: non-pivot bits above pivots[i].
        std::uint32_t pivot_mask = 0;
        for (int p : pivots) pivot_mask |= 1u << p;
        std::vector<std::vector<int>> free_bits(static_cast<std::size_t>(d));
        int total_free = 0;
        for (int i = 0; i < d; ++i) {
            for (int b = pivots[static_cast<std::size_t>(i)] + 1; b < kappa; ++b)
                if (!(pivot_mask & (1u << b))) free_bits[static_cast<std::size_t>(i)].push_back(b);
            total_free += static_cast<int>(free_bits[static_cast<std::size_t>(i)].size());
        }
        const std::uint64_t combos = 1ull << total_free;
        for (std::uint64_t c = 0; c < combos; ++c) {
            std::uint64_t bits = c;
            for (int i = 0; i < d; ++i) {
                std::uint32_t row = 1u << pivots[static_cast<std::size_t>(i)];
                for (int b : free_bits[static_cast<std::size_t>(i)]) {
                    if (bits & 1ull) row |= 1u << b;
                    bits >>= 1;
                }
                rows[static_cast<std::size_t>(i)] = row;
            }
            emit(rows);
        }
        // next pivot combination (lexicographic)
        int i = d - 1;
        while (i >= 0 && pivots[static_cast<std::size_t>(i)] == kappa - d + i) --i;
        if (i < 0) break;
        ++pivots[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < d; ++j)
            pivots[static_cast<std::size_t>(j)] = pivots[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace detail

// All dimension-d subspaces of F2^kappa, in lexicographic order of the
// canonical basis key.
inline std::vector<Subspace> enumerate_subspaces(int kappa, int d) {
    check_width(kappa);
    if (kappa > kMaxFullLatticeKappa)
        throw resource_error("full-lattice enumeration capped at kappa <= " +
                             std::to_string(kMaxFullLatticeKappa));
    if (d < 0 || d > kappa) throw validation_error("dimension out of range");
    std::vector<Subspace> out;
    detail::enumerate_rref_bases(kappa, d, [&](std::span<const std::uint32_t> rows) {
        // Rows are already RREF-canonical with ascending pivots; adopt directly.
        out.push_back(Subspace::from_basis(kappa, rows));
    });
    std::sort(out.begin(), out.end());
    return out;
}

// The 2^kappa - 1 hyperplanes, 1-based index i following the null-vector
// convention: hyperplane i is { v : flip(nu(i)) . v = 0 }.
inline std::vector<Subspace> hyperplanes(int kappa) {
    check_width(kappa);
    if (kappa > kMaxHyperplaneKappa)
        throw resource_error("materialized hyperplane list capped at kappa <= " +
                             std::to_string(kMaxHyperplaneKappa));
    std::vector<Subspace> out;
    out.reserve((1u << kappa) - 1);
    for (std::uint32_t i = 1; i < (1u << kappa); ++i) {
        const std::uint32_t a = flip_bits(i, kappa);  // parity vector
        const int anchor = std::countr_zero(a);
        std::vector<std::uint32_t> basis;
        for (int j = 0; j < kappa; ++j) {
            if (j == anchor) continue;
            if (a & (1u << j))
                basis.push_back((1u << j) | (1u << anchor));
            else
                basis.push_back(1u << j);
        }
        out.push_back(Subspace::from_basis(kappa, basis));
    }
    return out;
}

// All dimension-d' subspaces of S, via RREF enumeration in S's coordinate
// space mapped through its basis and re-canonicalized.
inline std::vector<Subspace> subspaces_of(const Subspace& s, int d_prime) {
    if (d_prime < 0 || d_prime > s.dim()) throw validation_error("dimension out of range");
    std::vector<Subspace> out;
    detail::enumerate_rref_bases(s.dim(), d_prime, [&](std::span<const std::uint32_t> coord_rows) {
        std::vector<std::uint32_t> ambient;
        ambient.reserve(coord_rows.size());
        for (std::uint32_t row : coord_rows) {
            std::uint32_t v = 0;
            for (int b = 0; b < s.dim(); ++b)
                if (row & (1u << b)) v ^= s.basis()[static_cast<std::size_t>(b)];
            ambient.push_back(v);
        }
        out.push_back(Subspace::from_basis(s.kappa(), ambient));
    });
    std::sort(out.begin(), out.end());
    return out;
}

// Number of dimension-d subspaces of F2^kappa containing a fixed
// d'-dimensional subspace.
inline BigInt superspace_count(int kappa, int d_prime, int d) {
    if (!(0 <= d_prime && d_prime <= d && d <= kappa)) throw validation_error("need 0 <= d' <= d <= kappa");
    return gaussian_binomial(kappa - d_prime, d - d_prime);
}

// Membership cases for the overlap-superspace counts. U is the canonical
// subspace spanned by the first u unit vectors, i.e. { nu(i) : i < 2^u }.
// Counted: dimension-d subspaces S with dim(S intersect U) = v containing the
// named vector(s). The pair cases split by dim(span{nu(i),nu(j)} ^ U): the
// one-in-one-out and both-out-sum-in configurations share a single count.
enum class OverlapCase {
    vector_in_u,          // nu(i) in U \ {0}
    vector_outside_u,     // nu(i) outside U
    pair_both_in_u,       // i != j, both in U
    pair_span_meets_u,    // i != j, span{nu(i),nu(j)} meets U in dimension 1
    pair_span_avoids_u,   // i != j, span{nu(i),nu(j)} meets U only at 0
};

inline BigInt overlap_superspace_count(int kappa, int u, int d, int v, OverlapCase c) {
    if (!(0 <= u && u <= kappa && 0 <= d && d <= kappa)) throw validation_error("bad (kappa, u, d)");
    auto term = [&](int b1_top, int exp_d_shift, int b2_top_shift, int b2_bot_shift) -> BigInt {
        const BigInt b1 = gaussian_binomial(b1_top, u - v);
        const BigInt b2 = gaussian_binomial(kappa - u - b2_top_shift, d - v - b2_bot_shift);
        if (b1 == 0 || b2 == 0) return 0;
        return b1 * pow2((u - v) * (d - v - exp_d_shift)) * b2;
    };
    switch (c) {
        case OverlapCase::vector_in_u:        return term(u - 1, 0, 0, 0);
        case OverlapCase::vector_outside_u:   return term(u,     1, 1, 1);
        case OverlapCase::pair_both_in_u:     return term(u - 2, 0, 0, 0);
        case OverlapCase::pair_span_meets_u:  return term(u - 1, 1, 1, 1);
        case OverlapCase::pair_span_avoids_u: return term(u,     2, 2, 2);
    }
    throw validation_error("invalid overlap case");
}

// Total number of subspaces of F2^kappa (all dimensions), for cross-checks.
inline BigInt total_subspace_count(int kappa) {
    BigInt total = 0;
    for (int d = 0; d <= kappa; ++d) total += gaussian_binomial(kappa, d);
    return total;
}

}  // namespace ewsd
