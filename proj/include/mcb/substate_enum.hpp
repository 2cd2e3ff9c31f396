// substate_enum.hpp
// Enumeration and extraction of projected substates: per-party index
// subsets of a chosen size, producing unnormalized compressed states.
// Selections stream in lexicographic order (first party most significant,
// each party's subsets in combinadic order) so every consumer sees the
// same deterministic sequence.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcb/errors.hpp"
#include "mcb/indexing.hpp"
#include "mcb/qstate.hpp"

namespace mcb {

// Ordered index subsets, one per party; party p keeps a strictly
// increasing subset of {0..d_p-1} of size >= 2.
struct SubstateSelection {
    std::vector<std::vector<int>> indices;
};

inline void validate_selection(const SubstateSelection& sel, const DimensionVector& dims) {
    if (static_cast<int>(sel.indices.size()) != dims.party_count())
        throw shape_error("selection: party count mismatch");
    for (int p = 0; p < dims.party_count(); ++p) {
        const auto& idx = sel.indices[static_cast<std::size_t>(p)];
        if (idx.size() < 2)
            throw shape_error("selection: party " + std::to_string(p) +
                              " keeps fewer than 2 indices");
        int prev = -1;
        for (int i : idx) {
            if (i <= prev)
                throw shape_error("selection: indices for party " + std::to_string(p) +
                                  " not strictly increasing");
            if (i < 0 || i >= dims.dim(p))
                throw shape_error("selection: index " + std::to_string(i) +
                                  " out of range for party " + std::to_string(p));
            prev = i;
        }
    }
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) result = result * static_cast<std::uint64_t>(n - k + i) /
                                          static_cast<std::uint64_t>(i);
    return result;
}

inline void validate_sizes(const DimensionVector& dims, const std::vector<int>& sizes) {
    if (static_cast<int>(sizes.size()) != dims.party_count())
        throw shape_error("substate sizes: party count mismatch");
    for (int p = 0; p < dims.party_count(); ++p)
        if (sizes[static_cast<std::size_t>(p)] < 2 ||
            sizes[static_cast<std::size_t>(p)] > dims.dim(p))
            throw domain_error("substate size " +
                               std::to_string(sizes[static_cast<std::size_t>(p)]) +
                               " out of range [2, " + std::to_string(dims.dim(p)) +
                               "] for party " + std::to_string(p));
}

inline std::uint64_t count_substates(const DimensionVector& dims,
                                     const std::vector<int>& sizes) {
    validate_sizes(dims, sizes);
    std::uint64_t count = 1;
    for (int p = 0; p < dims.party_count(); ++p)
        count *= binomial(dims.dim(p), sizes[static_cast<std::size_t>(p)]);
    return count;
}

inline std::uint64_t count_substates(const DimensionVector& dims, int size) {
    return count_substates(dims,
                           std::vector<int>(static_cast<std::size_t>(dims.party_count()), size));
}

// Deterministic lexicographic stream of selections.
class SelectionStream {
public:
    SelectionStream(const DimensionVector& dims, std::vector<int> sizes)
        : dims_(dims.dims()), sizes_(std::move(sizes)) {
        validate_sizes(dims, sizes_);
        reset();
    }

    SelectionStream(const DimensionVector& dims, int size)
        : SelectionStream(dims, std::vector<int>(static_cast<std::size_t>(dims.party_count()),
                                                 size)) {}

    void reset() {
        current_.indices.assign(dims_.size(), {});
        for (std::size_t p = 0; p < dims_.size(); ++p) {
            current_.indices[p].resize(static_cast<std::size_t>(sizes_[p]));
            for (int i = 0; i < sizes_[p]; ++i) current_.indices[p][static_cast<std::size_t>(i)] = i;
        }
        exhausted_ = false;
    }

    // Copies the next selection into `out`; false once the stream is done.
    bool next(SubstateSelection& out) {
        if (exhausted_) return false;
        out = current_;
        advance();
        return true;
    }

private:
    void advance() {
        // Odometer over per-party combinations, last party fastest.
        for (std::size_t p = dims_.size(); p-- > 0;) {
            if (next_combination(current_.indices[p], dims_[p])) return;
            for (int i = 0; i < sizes_[p]; ++i)
                current_.indices[p][static_cast<std::size_t>(i)] = i;
        }
        exhausted_ = true;
    }

    // Lexicographically next k-combination of {0..d-1}; false on wrap.
    static bool next_combination(std::vector<int>& comb, int d) {
        const int k = static_cast<int>(comb.size());
        for (int i = k - 1; i >= 0; --i) {
            if (comb[static_cast<std::size_t>(i)] < d - (k - i)) {
                ++comb[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < k; ++j)
                    comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
                return true;
            }
        }
        return false;
    }

    std::vector<int> dims_;
    std::vector<int> sizes_;
    SubstateSelection current_;
    bool exhausted_ = false;
};

inline std::vector<SubstateSelection> all_selections(const DimensionVector& dims,
                                                     const std::vector<int>& sizes) {
    SelectionStream stream(dims, sizes);
    std::vector<SubstateSelection> out;
    out.reserve(static_cast<std::size_t>(count_substates(dims, sizes)));
    SubstateSelection sel;
    while (stream.next(sel)) out.push_back(sel);
    return out;
}

inline std::vector<SubstateSelection> all_selections(const DimensionVector& dims, int size) {
    return all_selections(
        dims, std::vector<int>(static_cast<std::size_t>(dims.party_count()), size));
}

namespace detail {

// Compressed index -> original global index under a selection.
inline std::vector<std::int64_t> selection_index_map(const SubstateSelection& sel,
                                                     const std::vector<int>& dims) {
    std::vector<int> sub_dims;
    for (const auto& idx : sel.indices) sub_dims.push_back(static_cast<int>(idx.size()));
    const auto sub_strides = strides_of(sub_dims);
    const auto strides = strides_of(dims);
    const std::int64_t sub_total = total_dim(sub_dims);

    std::vector<std::int64_t> map(static_cast<std::size_t>(sub_total));
    std::vector<int> digits(sub_dims.size(), 0);
    for (std::int64_t t = 0; t < sub_total; ++t) {
        decompose(t, sub_strides, digits);
        std::int64_t g = 0;
        for (std::size_t p = 0; p < sub_dims.size(); ++p)
            g += sel.indices[p][static_cast<std::size_t>(digits[p])] * strides[p];
        map[static_cast<std::size_t>(t)] = g;
    }
    return map;
}

} // namespace detail

// Amplitude restriction onto the selected indices, reindexed to the
// compressed basis. Unnormalized; the all-zero restriction is yielded.
inline PureState project_substate(const PureState& state, const SubstateSelection& sel) {
    validate_selection(sel, state.dims());
    const auto map = detail::selection_index_map(sel, state.dims().dims());
    ComplexVector amps(static_cast<std::int64_t>(map.size()));
    for (std::size_t t = 0; t < map.size(); ++t)
        amps(static_cast<std::int64_t>(t)) = state.amplitudes()(map[t]);
    std::vector<int> sub_dims;
    for (const auto& idx : sel.indices) sub_dims.push_back(static_cast<int>(idx.size()));
    return PureState(DimensionVector(std::move(sub_dims)), std::move(amps));
}

// G rho G^dag compressed, with G the product of per-party index projectors.
// Hermiticity and PSD carry over; the trace can only shrink.
inline DensityMatrix project_substate(const DensityMatrix& rho, const SubstateSelection& sel) {
    validate_selection(sel, rho.dims());
    const auto map = detail::selection_index_map(sel, rho.dims().dims());
    const auto n = static_cast<std::int64_t>(map.size());
    ComplexMatrix m(n, n);
    for (std::int64_t r = 0; r < n; ++r)
        for (std::int64_t c = 0; c < n; ++c)
            m(r, c) = rho.matrix()(map[static_cast<std::size_t>(r)],
                                   map[static_cast<std::size_t>(c)]);
    std::vector<int> sub_dims;
    for (const auto& idx : sel.indices) sub_dims.push_back(static_cast<int>(idx.size()));
    return DensityMatrix::unchecked(DimensionVector(std::move(sub_dims)), std::move(m));
}

} // namespace mcb
