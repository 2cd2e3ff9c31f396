// pure_concurrence.hpp
// Exact concurrence of pure states: the subset-purity formula, its
// partitioned variant, and the coefficient-difference formulas for 3, 4 and
// N parties, plus the four-partite purity identities used as cross-checks.
//
// Two independent evaluation routes are kept on purpose: subset purities
// (Gram products of amplitude reshapes) and brute-force coefficient
// differences. The test suites pin them against each other.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mcb/errors.hpp"
#include "mcb/indexing.hpp"
#include "mcb/qstate.hpp"

namespace mcb {

struct ConcurrenceValue {
    double value = 0.0;    // C
    double squared = 0.0;  // C^2, kept explicitly so callers never re-square
};

namespace detail {

// tr(rho_subset^2) for rho = |phi><phi| with phi possibly unnormalized
// (degree 4 homogeneous in the amplitudes). Computed from the Gram matrix
// of the amplitude reshape, on whichever side is smaller.
inline double subset_purity(const ComplexVector& amps, const std::vector<int>& dims,
                            unsigned subset_mask) {
    const int n = static_cast<int>(dims.size());
    std::vector<int> in_dims, out_dims, in_parties, out_parties;
    for (int p = 0; p < n; ++p) {
        if (subset_mask & (1u << p)) {
            in_parties.push_back(p);
            in_dims.push_back(dims[static_cast<std::size_t>(p)]);
        } else {
            out_parties.push_back(p);
            out_dims.push_back(dims[static_cast<std::size_t>(p)]);
        }
    }
    const std::int64_t rows = total_dim(in_dims);
    const std::int64_t cols = total_dim(out_dims);

    const auto strides = strides_of(dims);
    const auto row_strides = strides_of(in_dims);
    const auto col_strides = strides_of(out_dims);

    ComplexMatrix m(rows, cols);
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    for (std::int64_t g = 0; g < amps.size(); ++g) {
        decompose(g, strides, digits);
        std::int64_t r = 0, c = 0;
        for (std::size_t q = 0; q < in_parties.size(); ++q)
            r += digits[static_cast<std::size_t>(in_parties[q])] * row_strides[q];
        for (std::size_t q = 0; q < out_parties.size(); ++q)
            c += digits[static_cast<std::size_t>(out_parties[q])] * col_strides[q];
        m(r, c) = amps(g);
    }
    // ||M M^dag||_F^2 == ||M^dag M||_F^2; take the cheaper product.
    if (rows <= cols) {
        ComplexMatrix gram = m * m.adjoint();
        return gram.squaredNorm();
    }
    ComplexMatrix gram = m.adjoint() * m;
    return gram.squaredNorm();
}

// Canonical representatives of the unordered bipartitions {T, complement}:
// the smaller side, with party 0 breaking ties when the sizes match.
inline bool canonical_bipartition(unsigned mask, int parties) {
    const int size = std::popcount(mask);
    if (2 * size < parties) return true;
    if (2 * size > parties) return false;
    return (mask & 1u) != 0;
}

// Sum over all proper nonempty subsets of tr(rho_subset^2); pure-state
// duality pairs each subset with its complement, so only canonical
// representatives are evaluated.
inline double all_subset_purity_sum(const ComplexVector& amps, const std::vector<int>& dims) {
    const int n = static_cast<int>(dims.size());
    double sum = 0.0;
    const unsigned full = (1u << n) - 1u;
    for (unsigned mask = 1; mask < full; ++mask)
        if (canonical_bipartition(mask, n)) sum += 2.0 * subset_purity(amps, dims, mask);
    return sum;
}

inline ConcurrenceValue concurrence_from_radicand(double radicand, int parties,
                                                  double scale_squared) {
    if (radicand < -1e-8 * std::max(1.0, scale_squared))
        throw numeric_error("concurrence radicand " + std::to_string(radicand) +
                            " is negative beyond tolerance");
    radicand = std::max(0.0, radicand);
    const double squared = std::ldexp(radicand, 2 - parties);  // 2^(2-N) * radicand
    return ConcurrenceValue{std::sqrt(squared), squared};
}

// Sum over ordered pairs of global indices of
// |a_g a_h - a_g' a_h'|^2, where (g', h') swaps the digits of the parties in
// `swap_mask` between the two factors.
inline double coefficient_family_sum(const ComplexVector& amps, const std::vector<int>& dims,
                                     unsigned swap_mask) {
    const auto strides = strides_of(dims);
    const std::int64_t total = amps.size();
    const int n = static_cast<int>(dims.size());

    // Component of each global index carried by the swapped parties.
    std::vector<std::int64_t> swapped_part(static_cast<std::size_t>(total));
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    for (std::int64_t g = 0; g < total; ++g) {
        decompose(g, strides, digits);
        std::int64_t part = 0;
        for (int p = 0; p < n; ++p)
            if (swap_mask & (1u << p)) part += digits[static_cast<std::size_t>(p)] * strides[static_cast<std::size_t>(p)];
        swapped_part[static_cast<std::size_t>(g)] = part;
    }

    double sum = 0.0;
    for (std::int64_t g = 0; g < total; ++g) {
        const std::int64_t g_rest = g - swapped_part[static_cast<std::size_t>(g)];
        for (std::int64_t h = 0; h < total; ++h) {
            const std::int64_t h_rest = h - swapped_part[static_cast<std::size_t>(h)];
            const std::int64_t g_swapped = swapped_part[static_cast<std::size_t>(h)] + g_rest;
            const std::int64_t h_swapped = swapped_part[static_cast<std::size_t>(g)] + h_rest;
            const cxd diff = amps(g) * amps(h) - amps(g_swapped) * amps(h_swapped);
            sum += std::norm(diff);
        }
    }
    return sum;
}

} // namespace detail

// C_N of a normalized pure state via subset purities.
inline ConcurrenceValue concurrence_pure(const PureState& phi) {
    const int n = phi.party_count();
    if (n < 2) throw shape_error("concurrence_pure: need at least 2 parties");
    if (!phi.is_normalized())
        throw domain_error("concurrence_pure: state not normalized (squared norm " +
                           std::to_string(phi.squared_norm()) + ")");
    const double subsets = std::ldexp(1.0, n) - 2.0;  // 2^N - 2
    const double radicand =
        subsets - detail::all_subset_purity_sum(phi.amplitudes(), phi.dims().dims());
    return detail::concurrence_from_radicand(radicand, n, 1.0);
}

// Degree-1 homogeneous extension to sub-normalized pure states:
// value = c * C(phi / sqrt(c)) with c the squared norm. The zero vector is a
// legal input and maps to zero.
inline ConcurrenceValue homogeneous_concurrence_pure(const PureState& phi) {
    const int n = phi.party_count();
    if (n < 2) throw shape_error("homogeneous_concurrence_pure: need at least 2 parties");
    const double c = phi.squared_norm();
    if (c <= 0.0) return ConcurrenceValue{0.0, 0.0};
    const double subsets = std::ldexp(1.0, n) - 2.0;
    const double radicand =
        subsets * c * c - detail::all_subset_purity_sum(phi.amplitudes(), phi.dims().dims());
    return detail::concurrence_from_radicand(radicand, n, c * c);
}

// Concurrence of phi under a coarser partition: each block becomes one
// party, then the plain pure formula applies over block subsets.
inline ConcurrenceValue concurrence_partitioned(const PureState& phi,
                                                const Partition& partition) {
    if (partition.block_count() < 2)
        throw shape_error("concurrence_partitioned: partition needs at least 2 blocks");
    return concurrence_pure(merge_parties(phi, partition));
}

// Tripartite squared concurrence from coefficient differences (squared
// moduli). Homogeneous of degree 4 in the amplitudes.
inline double c3_squared_coefficients(const PureState& phi) {
    if (phi.party_count() != 3)
        throw shape_error("c3_squared_coefficients: state is not tripartite");
    const auto& dims = phi.dims().dims();
    double sum = 0.0;
    for (unsigned mask : {0b100u, 0b010u, 0b001u})
        sum += detail::coefficient_family_sum(phi.amplitudes(), dims, mask);
    return 0.5 * sum;
}

// Four-partite squared concurrence from the seven coefficient-difference
// families (single-party swaps plus the pair swaps anchored at party 1).
inline double c4_squared_coefficients(const PureState& phi) {
    if (phi.party_count() != 4)
        throw shape_error("c4_squared_coefficients: state is not four-partite");
    const auto& dims = phi.dims().dims();
    double sum = 0.0;
    for (unsigned mask : {0b0001u, 0b0010u, 0b0100u, 0b1000u, 0b0011u, 0b0101u, 0b1001u})
        sum += detail::coefficient_family_sum(phi.amplitudes(), dims, mask);
    return 0.25 * sum;
}

// N-partite squared concurrence from coefficient differences, one family
// per unordered bipartition of the parties.
inline double cN_squared_coefficients(const PureState& phi) {
    const int n = phi.party_count();
    if (n < 2) throw shape_error("cN_squared_coefficients: need at least 2 parties");
    const auto& dims = phi.dims().dims();
    double sum = 0.0;
    const unsigned full = (1u << n) - 1u;
    for (unsigned mask = 1; mask < full; ++mask)
        if (detail::canonical_bipartition(mask, n))
            sum += detail::coefficient_family_sum(phi.amplitudes(), dims, mask);
    return std::ldexp(sum, 2 - n);  // / 2^(N-2)
}

// Worst absolute residual of the seven four-partite purity identities
// I_0^2 - tr(rho_subset^2) = (coefficient family sum) / 2. Holds for any
// normalization; both sides are degree 4 in the amplitudes.
inline double purity_identity_residual(const PureState& phi) {
    if (phi.party_count() != 4)
        throw shape_error("purity_identity_residual: state is not four-partite");
    const auto& dims = phi.dims().dims();
    const ComplexVector& amps = phi.amplitudes();
    const double i0 = phi.squared_norm();

    struct Identity {
        unsigned subset_mask;  // alpha in tr(rho_alpha^2)
        unsigned swap_mask;    // parties swapped in the printed pattern
    };
    // The two-party identity for parties {1,2} is printed with the
    // complementary swap of parties {3,4}; the sum is the same either way.
    const Identity identities[] = {
        {0b0001u, 0b0001u}, {0b0010u, 0b0010u}, {0b0100u, 0b0100u}, {0b1000u, 0b1000u},
        {0b0011u, 0b1100u}, {0b0101u, 0b0101u}, {0b1001u, 0b1001u},
    };
    double worst = 0.0;
    for (const auto& id : identities) {
        const double lhs = i0 * i0 - detail::subset_purity(amps, dims, id.subset_mask);
        const double rhs = 0.5 * detail::coefficient_family_sum(amps, dims, id.swap_mask);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace mcb
