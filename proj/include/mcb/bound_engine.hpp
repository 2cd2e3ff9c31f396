// bound_engine.hpp
// Computable lower bounds of multipartite concurrence built from projected
// substates: a tripartite bound from three-qubit substates, a four-partite
// bound aggregating partitioned tripartite/bipartite pieces, an N-partite
// (N >= 5) qubit-substate bound, a four-partite s-dimensional substate
// bound with a pluggable per-substate evaluator, and their convex
// combination. Closed-form curves for the two example families are
// transcribed separately and never asserted as outputs of the evaluators.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mcb/errors.hpp"
#include "mcb/parallel.hpp"
#include "mcb/pure_concurrence.hpp"
#include "mcb/qstate.hpp"
#include "mcb/substate_enum.hpp"
#include "mcb/wootters.hpp"

namespace mcb {

// Which denominators the four-partite aggregation uses for merged blocks:
// `paper` keeps the printed (d_a + d_b - 1); `conservative` uses the
// derivation-safe (d_a * d_b - 1). Conservative denominators are larger,
// so that mode never claims more than the projection machinery supports.
enum class CoefficientMode { paper, conservative };

enum class SubEvaluator { pure_exact, thm2, zero };

inline const char* to_string(CoefficientMode mode) {
    return mode == CoefficientMode::paper ? "paper" : "conservative";
}

inline const char* to_string(SubEvaluator ev) {
    switch (ev) {
        case SubEvaluator::pure_exact: return "pure-exact";
        case SubEvaluator::thm2: return "thm2";
        case SubEvaluator::zero: return "zero";
    }
    return "?";
}

struct BoundReport {
    double bound = 0.0;
    double bound_squared = 0.0;
    std::string theorem;
    std::uint64_t substates_evaluated = 0;
    std::optional<CoefficientMode> coefficient_mode;
    std::optional<SubEvaluator> sub_evaluator;
    std::string notes;
};

namespace detail {

inline void require_unit_trace(const DensityMatrix& rho, const char* who) {
    const double tr = rho.trace_real();
    if (std::abs(tr - 1.0) > kNormTol)
        throw domain_error(std::string(who) + ": input trace " + std::to_string(tr) +
                           " != 1 (bounds are stated for normalized states)");
}

// Sum over party pairs of the squared two-qubit concurrence of the pair
// reductions; `sub` must be an (unnormalized) all-qubit state.
inline double pairwise_concurrence_squared_sum(const DensityMatrix& sub) {
    const int n = sub.party_count();
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double c = concurrence_two_qubit(partial_trace(sub, {i, j}));
            total += c * c;
        }
    return total;
}

// Sum over all two-qubit substates of the merged tripartite state of the
// pairwise squared concurrences (the computable relaxation of the
// tripartite substate concurrence).
inline double tripartite_pair_sum(const DensityMatrix& rho, ExecPolicy policy) {
    const auto selections = all_selections(rho.dims(), 2);
    return reduce_indexed(static_cast<std::int64_t>(selections.size()), policy,
                          [&](std::int64_t i) {
                              return pairwise_concurrence_squared_sum(project_substate(
                                  rho, selections[static_cast<std::size_t>(i)]));
                          });
}

} // namespace detail

// ---------------------------------------------------------------------------
// Tripartite bound from three-qubit substates.

inline BoundReport thm1_bound(const DensityMatrix& rho,
                              ExecPolicy policy = ExecPolicy::deterministic) {
    if (rho.party_count() != 3)
        throw shape_error("thm1_bound: state is not tripartite");
    detail::require_unit_trace(rho, "thm1_bound");
    const auto& dims = rho.dims().dims();

    const double total = detail::tripartite_pair_sum(rho, policy);
    double prefactor = 1.0;
    for (int d : dims) prefactor *= static_cast<double>(d - 1);

    BoundReport report;
    report.theorem = "thm1";
    report.bound_squared = total / prefactor;
    report.bound = std::sqrt(report.bound_squared);
    report.substates_evaluated = count_substates(rho.dims(), 2);
    report.notes = "pairwise two-qubit concurrences over all 2x2x2 substates";
    return report;
}

// ---------------------------------------------------------------------------
// Four-partite bound from partitioned substates.

// The nine partitions of four parties used by the aggregation, in fixed
// order: six tripartite (two singletons + one merged pair) then three
// bipartite (two merged pairs).
inline std::vector<Partition> thm2_partitions() {
    return {
        Partition(4, {{0}, {1}, {2, 3}}), Partition(4, {{0}, {2}, {1, 3}}),
        Partition(4, {{0}, {3}, {1, 2}}), Partition(4, {{0, 1}, {2}, {3}}),
        Partition(4, {{0, 2}, {1}, {3}}), Partition(4, {{0, 3}, {1}, {2}}),
        Partition(4, {{0, 1}, {2, 3}}),   Partition(4, {{0, 2}, {1, 3}}),
        Partition(4, {{0, 3}, {1, 2}}),
    };
}

// Weights for the nine partitions in thm2_partitions() order; the printed
// factor 2 on the tripartite rows is folded in.
inline std::vector<double> thm2_weights(const DimensionVector& dims, CoefficientMode mode) {
    if (dims.party_count() != 4) throw shape_error("thm2_weights: need 4 parties");
    auto merged = [&](int a, int b) {
        return mode == CoefficientMode::paper
                   ? static_cast<double>(dims.dim(a) + dims.dim(b) - 1)
                   : static_cast<double>(dims.dim(a) * dims.dim(b) - 1);
    };
    auto single = [&](int a) { return static_cast<double>(dims.dim(a) - 1); };
    return {
        2.0 / (single(0) * single(1) * merged(2, 3)),
        2.0 / (single(0) * single(2) * merged(1, 3)),
        2.0 / (single(0) * single(3) * merged(1, 2)),
        2.0 / (single(2) * single(3) * merged(0, 1)),
        2.0 / (single(1) * single(3) * merged(0, 2)),
        2.0 / (single(1) * single(2) * merged(0, 3)),
        1.0 / (merged(0, 1) * merged(2, 3)),
        1.0 / (merged(0, 2) * merged(1, 3)),
        1.0 / (merged(0, 3) * merged(1, 2)),
    };
}

inline BoundReport thm2_bound(const DensityMatrix& rho,
                              CoefficientMode mode = CoefficientMode::conservative,
                              ExecPolicy policy = ExecPolicy::deterministic) {
    if (rho.party_count() != 4)
        throw shape_error("thm2_bound: state is not four-partite");
    detail::require_unit_trace(rho, "thm2_bound");

    const auto partitions = thm2_partitions();
    const auto weights = thm2_weights(rho.dims(), mode);

    double total = 0.0;
    std::uint64_t substates = 0;
    for (std::size_t i = 0; i < partitions.size(); ++i) {
        const DensityMatrix merged = merge_parties(rho, partitions[i]);
        substates += count_substates(merged.dims(), 2);
        double inner;
        if (partitions[i].block_count() == 3) {
            inner = detail::tripartite_pair_sum(merged, policy);
        } else {
            const auto selections = all_selections(merged.dims(), 2);
            inner = reduce_indexed(
                static_cast<std::int64_t>(selections.size()), policy, [&](std::int64_t k) {
                    const double c = concurrence_two_qubit(TwoQubitState(
                        project_substate(merged, selections[static_cast<std::size_t>(k)])
                            .matrix()));
                    return c * c;
                });
        }
        total += weights[i] * inner;
    }

    BoundReport report;
    report.theorem = "thm2";
    report.bound_squared = total / 12.0;
    report.bound = std::sqrt(report.bound_squared);
    report.substates_evaluated = substates;
    report.coefficient_mode = mode;
    report.notes =
        "tripartite substate concurrences relaxed to pairwise two-qubit sums";
    return report;
}

// ---------------------------------------------------------------------------
// N-partite (N >= 5) bound from all-qubit substates.

inline BoundReport thm3_bound(const DensityMatrix& rho, bool allow_four_parties = false,
                              ExecPolicy policy = ExecPolicy::deterministic) {
    const int n = rho.party_count();
    if (n < 5 && !(allow_four_parties && n == 4))
        throw applicability_error(
            "thm3_bound: stated for N >= 5 parties (got N = " + std::to_string(n) +
            "); pass the N=4 override to extend");
    detail::require_unit_trace(rho, "thm3_bound");

    const auto selections = all_selections(rho.dims(), 2);
    const double total = reduce_indexed(
        static_cast<std::int64_t>(selections.size()), policy, [&](std::int64_t i) {
            return detail::pairwise_concurrence_squared_sum(
                project_substate(rho, selections[static_cast<std::size_t>(i)]));
        });

    double denom = std::ldexp(1.0, n - 2);  // 2^(N-2)
    for (int d : rho.dims().dims()) denom *= static_cast<double>(d - 1);

    BoundReport report;
    report.theorem = "thm3";
    report.bound_squared = static_cast<double>(n) / denom * total;
    report.bound = std::sqrt(report.bound_squared);
    report.substates_evaluated = selections.size();
    if (n == 4) report.notes = "N=4 override active (bound stated for N >= 5)";
    return report;
}

// ---------------------------------------------------------------------------
// Four-partite bound from s x s x s x s substates.

namespace detail {

inline double thm4_substate_squared(const DensityMatrix& sub, SubEvaluator evaluator,
                                    CoefficientMode mode, ExecPolicy policy) {
    const double t = sub.trace_real();
    if (t <= 1e-12) return 0.0;
    switch (evaluator) {
        case SubEvaluator::zero:
            return 0.0;
        case SubEvaluator::pure_exact: {
            const double purity = sub.purity();
            if (std::abs(purity - t * t) > 1e-9)
                throw numeric_error(
                    "thm4_bound[pure-exact]: substate is not pure (purity " +
                    std::to_string(purity) + " vs squared trace " + std::to_string(t * t) +
                    "); use the thm2 evaluator for mixed substates");
            Eigensystem es = hermitian_eigensystem(sub.matrix());
            PureState principal(sub.dims(), es.eigenvectors.col(0));
            return t * t * concurrence_pure(principal.normalized()).squared;
        }
        case SubEvaluator::thm2: {
            DensityMatrix normalized =
                DensityMatrix::unchecked(sub.dims(), sub.matrix() / t);
            const BoundReport inner = thm2_bound(normalized, mode, policy);
            return t * t * inner.bound_squared;
        }
    }
    throw domain_error("thm4_bound: unknown substate evaluator");
}

} // namespace detail

inline BoundReport thm4_bound(const DensityMatrix& rho, int s,
                              SubEvaluator evaluator = SubEvaluator::thm2,
                              CoefficientMode mode = CoefficientMode::conservative,
                              ExecPolicy policy = ExecPolicy::deterministic) {
    if (rho.party_count() != 4)
        throw shape_error("thm4_bound: state is not four-partite");
    detail::require_unit_trace(rho, "thm4_bound");

    // The counting denominator requires d1 <= d2 <= d3 <= d4; sort the
    // parties (stably) and work on the permuted state.
    std::vector<int> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return rho.dims().dim(a) < rho.dims().dim(b); });
    const bool permuted = order != std::vector<int>{0, 1, 2, 3};
    const DensityMatrix sorted = permuted ? permute_parties(rho, order) : rho;
    const auto& dims = sorted.dims().dims();

    if (s < 2 || s > dims[0])
        throw domain_error("thm4_bound: substate size s = " + std::to_string(s) +
                           " outside [2, " + std::to_string(dims[0]) + "]");

    const double denominator =
        static_cast<double>(binomial(dims[0] - 2, s - 2)) *
        static_cast<double>(binomial(dims[1] - 2, s - 2)) *
        static_cast<double>(binomial(dims[2] - 1, s - 1)) *
        static_cast<double>(binomial(dims[3] - 1, s - 1));

    const auto selections = all_selections(sorted.dims(), s);
    const double total = reduce_indexed(
        static_cast<std::int64_t>(selections.size()), policy, [&](std::int64_t i) {
            return detail::thm4_substate_squared(
                project_substate(sorted, selections[static_cast<std::size_t>(i)]), evaluator,
                mode, policy == ExecPolicy::parallel ? ExecPolicy::deterministic : policy);
        });

    BoundReport report;
    report.theorem = "thm4";
    report.bound_squared = total / denominator;
    report.bound = std::sqrt(report.bound_squared);
    report.substates_evaluated = selections.size();
    report.sub_evaluator = evaluator;
    if (evaluator == SubEvaluator::thm2) report.coefficient_mode = mode;
    report.notes = "s=" + std::to_string(s);
    if (permuted) {
        report.notes += "; parties reordered by dimension as [";
        for (std::size_t i = 0; i < order.size(); ++i)
            report.notes += (i ? "," : "") + std::to_string(order[i]);
        report.notes += "]";
    }
    return report;
}

// ---------------------------------------------------------------------------
// Convex combination over substate sizes.

// weights[i] is the weight of size s = 2 + i; weights must be nonnegative
// and sum to 1.
inline BoundReport corollary1_bound(const DensityMatrix& rho,
                                    const std::vector<double>& weights,
                                    SubEvaluator evaluator = SubEvaluator::thm2,
                                    CoefficientMode mode = CoefficientMode::conservative,
                                    ExecPolicy policy = ExecPolicy::deterministic) {
    if (rho.party_count() != 4)
        throw shape_error("corollary1_bound: state is not four-partite");
    if (weights.empty()) throw domain_error("corollary1_bound: no weights");
    const int min_dim = *std::min_element(rho.dims().dims().begin(), rho.dims().dims().end());
    if (static_cast<int>(weights.size()) > min_dim - 1)
        throw domain_error("corollary1_bound: weights reach s = " +
                           std::to_string(1 + static_cast<int>(weights.size())) +
                           " beyond the smallest party dimension " + std::to_string(min_dim));
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw domain_error("corollary1_bound: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw domain_error("corollary1_bound: weights sum to " + std::to_string(sum) +
                           ", expected 1");

    BoundReport report;
    report.theorem = "corollary1";
    report.sub_evaluator = evaluator;
    if (evaluator == SubEvaluator::thm2) report.coefficient_mode = mode;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] == 0.0) continue;
        const BoundReport part = thm4_bound(rho, 2 + static_cast<int>(i), evaluator, mode, policy);
        report.bound_squared += weights[i] * part.bound_squared;
        report.substates_evaluated += part.substates_evaluated;
    }
    report.bound = std::sqrt(report.bound_squared);
    return report;
}

// Convenience one-hot optimum: the best single-size bound over s = 2..m.
inline BoundReport corollary1_best(const DensityMatrix& rho, int max_s = 0,
                                   SubEvaluator evaluator = SubEvaluator::thm2,
                                   CoefficientMode mode = CoefficientMode::conservative,
                                   ExecPolicy policy = ExecPolicy::deterministic) {
    if (rho.party_count() != 4)
        throw shape_error("corollary1_best: state is not four-partite");
    const int min_dim = *std::min_element(rho.dims().dims().begin(), rho.dims().dims().end());
    if (max_s == 0) max_s = min_dim;
    if (max_s < 2 || max_s > min_dim)
        throw domain_error("corollary1_best: max s out of range");

    BoundReport best;
    best.theorem = "corollary1";
    best.sub_evaluator = evaluator;
    if (evaluator == SubEvaluator::thm2) best.coefficient_mode = mode;
    std::uint64_t substates = 0;
    int best_s = 2;
    for (int s = 2; s <= max_s; ++s) {
        const BoundReport part = thm4_bound(rho, s, evaluator, mode, policy);
        substates += part.substates_evaluated;
        if (part.bound_squared > best.bound_squared) {
            best.bound_squared = part.bound_squared;
            best_s = s;
        }
    }
    best.bound = std::sqrt(best.bound_squared);
    best.substates_evaluated = substates;
    best.notes = "best single size s=" + std::to_string(best_s);
    return best;
}

// ---------------------------------------------------------------------------
// Printed closed forms for the example families. Transcriptions for
// comparison output only; they are not produced by the evaluators above
// and may even be negative on part of the range.

struct ClosedForms {
    double example1_bound = 0.0;  // three-qutrit family curve
    double example2_bound = 0.0;  // 2x2x2x3 family curve
    double ref23_bound = 0.0;     // comparison line (3x-1)/2
};

inline ClosedForms paper_closed_forms(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw domain_error("paper_closed_forms: x = " + std::to_string(x) +
                           " outside [0,1]");
    ClosedForms out;
    out.example1_bound = 3.0 * std::sqrt(2.0) * (11.0 * x - 9.0) / (4.0 * (5.0 * x - 9.0));
    const double root = std::sqrt(3.0 * x + 1.0);
    const double plus = std::sqrt(x + 2.0 * x * root + 4.0 * x * x + 2.0);
    const double minus = std::sqrt(x - 2.0 * x * root + 4.0 * x * x + 2.0);
    out.example2_bound = std::sqrt(7.0) / 4.0 * (plus - minus) / (5.0 + 3.0 * x);
    out.ref23_bound = (3.0 * x - 1.0) / 2.0;
    return out;
}

} // namespace mcb
