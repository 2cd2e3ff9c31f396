// indexing.hpp
// Multi-index arithmetic for the canonical amplitude layout: row-major with
// the LAST party's index varying fastest. Every module that reshapes,
// projects or merges indices goes through these helpers.

#pragma once

#include <cstdint>
#include <vector>

namespace mcb::detail {

// strides[p] = product of dims of parties after p; global index
// g = sum_p digit[p] * strides[p].
inline std::vector<std::int64_t> strides_of(const std::vector<int>& dims) {
    std::vector<std::int64_t> strides(dims.size(), 1);
    for (std::size_t p = dims.size(); p-- > 1;)
        strides[p - 1] = strides[p] * dims[p];
    return strides;
}

inline std::int64_t total_dim(const std::vector<int>& dims) {
    std::int64_t total = 1;
    for (int d : dims) total *= d;
    return total;
}

inline void decompose(std::int64_t g, const std::vector<std::int64_t>& strides,
                      std::vector<int>& digits) {
    for (std::size_t p = 0; p < strides.size(); ++p) {
        digits[p] = static_cast<int>(g / strides[p]);
        g %= strides[p];
    }
}

inline std::int64_t compose(const std::vector<int>& digits,
                            const std::vector<std::int64_t>& strides) {
    std::int64_t g = 0;
    for (std::size_t p = 0; p < strides.size(); ++p) g += digits[p] * strides[p];
    return g;
}

// Odometer increment over mixed radices, last position fastest.
// Returns false once the odometer wraps around to all zeros.
inline bool next_digits(std::vector<int>& digits, const std::vector<int>& dims) {
    for (std::size_t p = digits.size(); p-- > 0;) {
        if (++digits[p] < dims[p]) return true;
        digits[p] = 0;
    }
    return false;
}

} // namespace mcb::detail
