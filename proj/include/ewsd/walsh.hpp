// In-place Walsh-Hadamard transform, unnormalized:
// out[a] = sum_i (-1)^popcount(a & i) in[i]. Self-inverse up to 1/2^kappa.
#pragma once

#include <cstddef>
#include <span>

#include "ewsd/common.hpp"

namespace ewsd {

inline void fwht_inplace(std::span<double> a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw validation_error("fwht size must be a power of two");
    for (std::size_t len = 1; len < n; len <<= 1) {
        for (std::size_t block = 0; block < n; block += len << 1) {
            for (std::size_t i = block; i < block + len; ++i) {
                const double x = a[i];
                const double y = a[i + len];
                a[i] = x + y;
                a[i + len] = x - y;
            }
        }
    }
}

}  // namespace ewsd
