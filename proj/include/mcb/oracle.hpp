// oracle.hpp
// Independent brute-force machinery: convex-roof upper estimation via
// random purification ensembles, monogamy residuals, and the projection
// inequality suite. Everything here is an oracle for the bound engine, so
// none of it reuses the engine's code paths.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mcb/errors.hpp"
#include "mcb/linalg.hpp"
#include "mcb/pure_concurrence.hpp"
#include "mcb/qstate.hpp"
#include "mcb/substate_enum.hpp"
#include "mcb/wootters.hpp"

namespace mcb {

struct EnsembleMember {
    double probability = 0.0;
    PureState state;  // normalized
};

// Pure-state decomposition of a density matrix: probabilities in (0,1]
// summing to 1, members reconstructing the target.
using Ensemble = std::vector<EnsembleMember>;

inline ComplexMatrix reconstruct(const Ensemble& ensemble) {
    if (ensemble.empty()) throw domain_error("reconstruct: empty ensemble");
    const std::int64_t n = ensemble.front().state.amplitudes().size();
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (const auto& member : ensemble)
        m += member.probability *
             (member.state.amplitudes() * member.state.amplitudes().adjoint());
    return m;
}

inline double ensemble_average_concurrence(const Ensemble& ensemble) {
    double avg = 0.0;
    for (const auto& member : ensemble)
        avg += member.probability * concurrence_pure(member.state).value;
    return avg;
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 step on seed + golden-ratio stride
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Subnormalized eigenvectors sqrt(lambda_i) v_i above the rank cutoff.
inline std::vector<ComplexVector> principal_vectors(const DensityMatrix& rho) {
    const Eigensystem es = hermitian_eigensystem(rho.matrix());
    const double cutoff = 1e-10 * rho.trace_real();
    std::vector<ComplexVector> vectors;
    for (std::size_t i = 0; i < es.eigenvalues.size(); ++i) {
        if (es.eigenvalues[i] <= cutoff) break;
        vectors.push_back(std::sqrt(es.eigenvalues[i]) *
                          es.eigenvectors.col(static_cast<Eigen::Index>(i)));
    }
    return vectors;
}

inline Ensemble ensemble_from_isometry(const DensityMatrix& rho,
                                       const std::vector<ComplexVector>& roots,
                                       const ComplexMatrix& isometry) {
    Ensemble ensemble;
    for (Eigen::Index j = 0; j < isometry.rows(); ++j) {
        ComplexVector member = ComplexVector::Zero(rho.dims().total_dim());
        for (std::size_t i = 0; i < roots.size(); ++i)
            member += isometry(j, static_cast<Eigen::Index>(i)) * roots[i];
        const double p = member.squaredNorm();
        if (p <= 1e-14) continue;
        member /= std::sqrt(p);
        ensemble.push_back(EnsembleMember{p, PureState(rho.dims(), std::move(member))});
    }
    return ensemble;
}

} // namespace detail

// The eigendecomposition ensemble itself (the trial-0 candidate of the
// roof search).
inline Ensemble eigenbasis_ensemble(const DensityMatrix& rho) {
    const auto roots = detail::principal_vectors(rho);
    const auto r = static_cast<Eigen::Index>(roots.size());
    return detail::ensemble_from_isometry(rho, roots,
                                          ComplexMatrix::Identity(r, r));
}

// Eigendecomposition ensemble mixed by a Haar-style random isometry of
// m x r rows, m cycling through r..2r with the trial index.
inline Ensemble random_isometry_ensemble(const DensityMatrix& rho, int trial,
                                         std::uint64_t seed) {
    const auto roots = detail::principal_vectors(rho);
    const auto r = static_cast<Eigen::Index>(roots.size());
    const Eigen::Index m = r + static_cast<Eigen::Index>((trial - 1) % (r + 1));
    std::mt19937_64 rng(detail::mix_seed(seed, static_cast<std::uint64_t>(trial)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix a(m, r);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < r; ++j) a(i, j) = cxd(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, r);
    return detail::ensemble_from_isometry(rho, roots, q);
}

// Upper estimate of the convex-roof concurrence: the running minimum of the
// ensemble-average pure concurrence over the eigenbasis ensemble and
// `trials` random isometry mixings. Deterministic per (rho, trials, seed)
// and non-increasing in `trials`.
inline double convex_roof_upper(const DensityMatrix& rho, int trials, std::uint64_t seed) {
    if (std::abs(rho.trace_real() - 1.0) > kNormTol)
        throw domain_error("convex_roof_upper: input trace != 1");
    const auto roots = detail::principal_vectors(rho);
    if (roots.size() > 16)
        throw domain_error("convex_roof_upper: rank " + std::to_string(roots.size()) +
                           " exceeds the supported maximum of 16");
    const auto r = static_cast<Eigen::Index>(roots.size());
    double best = ensemble_average_concurrence(
        detail::ensemble_from_isometry(rho, roots, ComplexMatrix::Identity(r, r)));
    for (int trial = 1; trial <= trials; ++trial) {
        const double value =
            ensemble_average_concurrence(random_isometry_ensemble(rho, trial, seed));
        best = std::min(best, value);
    }
    return best;
}

// min over i of C^2_{i|jk} - C^2_ij - C^2_ik for a normalized 3-qubit pure
// state; nonnegative by the monogamy of concurrence.
inline double monogamy_residual(const PureState& phi) {
    if (phi.dims().dims() != std::vector<int>{2, 2, 2})
        throw shape_error("monogamy_residual: state is not a 3-qubit state");
    if (!phi.is_normalized())
        throw domain_error("monogamy_residual: state not normalized");
    const DensityMatrix rho = to_density(phi);
    double pair_sq[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double c = concurrence_two_qubit(partial_trace(rho, {i, j}));
            pair_sq[i][j] = pair_sq[j][i] = c * c;
        }
    double residual = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const double purity =
            detail::subset_purity(phi.amplitudes(), phi.dims().dims(), 1u << i);
        const double one_vs_rest = 2.0 * (1.0 - purity);
        double r = one_vs_rest;
        for (int j = 0; j < 3; ++j)
            if (j != i) r -= pair_sq[i][j];
        residual = std::min(residual, r);
    }
    return residual;
}

// ---------------------------------------------------------------------------
// Projection / monogamy inequality suite. Each entry is the worst (minimum)
// margin over the sampled states; all margins must stay >= -1e-8.

struct InequalityMargins {
    double monogamy = 0.0;               // 3-qubit monogamy residual
    double tripartite_projection = 0.0;  // C3^2 vs summed 2x2x2 substates
    double bipartite_projection = 0.0;   // C^2 vs summed 2x2 substates
    double four_partite_projection = 0.0;  // C^2 vs summed sxsxsxs substates
};

namespace detail {

inline double projection_margin(const PureState& phi, int s, double denominator) {
    double substate_sum = 0.0;
    SelectionStream stream(phi.dims(), s);
    SubstateSelection sel;
    while (stream.next(sel))
        substate_sum += homogeneous_concurrence_pure(project_substate(phi, sel)).squared;
    return concurrence_pure(phi).squared - substate_sum / denominator;
}

inline double qubit_projection_denominator(const std::vector<int>& dims) {
    double denom = 1.0;
    for (int d : dims) denom *= static_cast<double>(d - 1);
    return denom;
}

} // namespace detail

inline double min_monogamy_margin(std::uint64_t seed, int samples) {
    double worst = std::numeric_limits<double>::infinity();
    const DimensionVector dims({2, 2, 2});
    for (int k = 0; k < samples; ++k)
        worst = std::min(worst,
                         monogamy_residual(random_pure(dims, detail::mix_seed(seed, k))));
    return worst;
}

inline double min_tripartite_projection_margin(std::uint64_t seed, int samples) {
    const std::vector<std::vector<int>> configs{{3, 3, 3}, {2, 3, 4}};
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const auto& dims = configs[static_cast<std::size_t>(k) % configs.size()];
        const PureState phi = random_pure(DimensionVector(dims), detail::mix_seed(seed, k));
        worst = std::min(worst, detail::projection_margin(
                                    phi, 2, detail::qubit_projection_denominator(dims)));
    }
    return worst;
}

inline double min_bipartite_projection_margin(std::uint64_t seed, int samples) {
    const std::vector<std::vector<int>> configs{{3, 4}, {4, 4}};
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const auto& dims = configs[static_cast<std::size_t>(k) % configs.size()];
        const PureState phi = random_pure(DimensionVector(dims), detail::mix_seed(seed, k));
        worst = std::min(worst, detail::projection_margin(
                                    phi, 2, detail::qubit_projection_denominator(dims)));
    }
    return worst;
}

inline double min_four_partite_projection_margin(std::uint64_t seed, int samples) {
    struct Config {
        std::vector<int> dims;  // ascending
        int s;
    };
    const std::vector<Config> configs{
        {{2, 2, 2, 3}, 2}, {{3, 3, 3, 3}, 2}, {{3, 3, 3, 3}, 3}};
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const auto& cfg = configs[static_cast<std::size_t>(k) % configs.size()];
        const PureState phi =
            random_pure(DimensionVector(cfg.dims), detail::mix_seed(seed, k));
        const double denominator =
            static_cast<double>(binomial(cfg.dims[0] - 2, cfg.s - 2)) *
            static_cast<double>(binomial(cfg.dims[1] - 2, cfg.s - 2)) *
            static_cast<double>(binomial(cfg.dims[2] - 1, cfg.s - 1)) *
            static_cast<double>(binomial(cfg.dims[3] - 1, cfg.s - 1));
        worst = std::min(worst, detail::projection_margin(phi, cfg.s, denominator));
    }
    return worst;
}

inline InequalityMargins inequality_suite(std::uint64_t seed, int samples) {
    InequalityMargins margins;
    margins.monogamy = min_monogamy_margin(seed, samples);
    margins.tripartite_projection = min_tripartite_projection_margin(seed, samples);
    margins.bipartite_projection = min_bipartite_projection_margin(seed, samples);
    margins.four_partite_projection = min_four_partite_projection_margin(seed, samples);
    return margins;
}

} // namespace mcb
