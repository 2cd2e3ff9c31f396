// qstate.hpp
// Multipartite state model: pure amplitude tensors and density matrices
// tagged with a per-party dimension vector, partial trace, party
// merging/permutation, and the state-family generators used by the CLI
// and the test suites.
//
// Amplitude layout is fixed globally: row-major, last party fastest.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mcb/errors.hpp"
#include "mcb/indexing.hpp"
#include "mcb/linalg.hpp"

namespace mcb {

inline constexpr std::int64_t kDefaultDimCap = 4096;
inline constexpr double kNormTol = 1e-9;

// Product-dimension cap for constructed states. MCB_DIM_CAP overrides the
// default of 4096.
inline std::int64_t dim_cap() {
    static const std::int64_t cap = [] {
        const char* s = std::getenv("MCB_DIM_CAP");
        if (!s || !*s) return kDefaultDimCap;
        char* end = nullptr;
        const long long v = std::strtoll(s, &end, 10);
        if (!end || *end != '\0' || v < 2)
            throw domain_error(std::string("MCB_DIM_CAP is not a valid cap: ") + s);
        return static_cast<std::int64_t>(v);
    }();
    return cap;
}

// Per-party local dimensions d_i >= 2. d_i = 1 is rejected as degenerate.
class DimensionVector {
public:
    explicit DimensionVector(std::vector<int> dims) : dims_(std::move(dims)) {
        if (dims_.empty()) throw shape_error("DimensionVector: no parties");
        std::int64_t product = 1;
        for (int d : dims_) {
            if (d < 2)
                throw domain_error("DimensionVector: party dimension " + std::to_string(d) +
                                   " < 2 (degenerate parties are rejected)");
            product *= d;
            if (product > dim_cap())
                throw domain_error("DimensionVector: product dimension exceeds cap " +
                                   std::to_string(dim_cap()));
        }
        total_ = product;
    }

    int party_count() const { return static_cast<int>(dims_.size()); }
    int dim(int party) const { return dims_.at(static_cast<std::size_t>(party)); }
    const std::vector<int>& dims() const { return dims_; }
    std::int64_t total_dim() const { return total_; }

    bool operator==(const DimensionVector& other) const { return dims_ == other.dims_; }

private:
    std::vector<int> dims_;
    std::int64_t total_ = 0;
};

// Pure amplitude tensor. May be sub-normalized: projected substates are
// unnormalized, and the all-zero vector is a legal (zero) substate.
class PureState {
public:
    PureState(DimensionVector dims, ComplexVector amplitudes)
        : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
        if (amps_.size() != dims_.total_dim())
            throw shape_error("PureState: amplitude count " + std::to_string(amps_.size()) +
                              " != product dimension " + std::to_string(dims_.total_dim()));
        if (!all_finite(amps_)) throw numeric_error("PureState: non-finite amplitude");
        const double n2 = squared_norm();
        if (n2 > 1.0 + kNormTol)
            throw domain_error("PureState: squared norm " + std::to_string(n2) + " > 1");
    }

    const DimensionVector& dims() const { return dims_; }
    int party_count() const { return dims_.party_count(); }
    const ComplexVector& amplitudes() const { return amps_; }
    cxd amplitude(std::int64_t i) const { return amps_(i); }

    double squared_norm() const { return amps_.squaredNorm(); }
    bool is_normalized(double tol = kNormTol) const {
        return std::abs(squared_norm() - 1.0) <= tol;
    }

    PureState normalized() const {
        const double n2 = squared_norm();
        if (n2 <= 0.0) throw numeric_error("PureState::normalized: zero vector");
        return PureState(dims_, amps_ / std::sqrt(n2));
    }

private:
    DimensionVector dims_;
    ComplexVector amps_;
};

// Hermitian PSD operator with a dimension vector. Trace may be below 1:
// substates are unnormalized.
class DensityMatrix {
public:
    DensityMatrix(DimensionVector dims, ComplexMatrix matrix)
        : DensityMatrix(std::move(dims), std::move(matrix), true) {}

    // Invariant-preserving internal constructions (projection, partial
    // trace, merging) skip the eigensolver-backed PSD revalidation.
    static DensityMatrix unchecked(DimensionVector dims, ComplexMatrix matrix) {
        return DensityMatrix(std::move(dims), std::move(matrix), false);
    }

    const DimensionVector& dims() const { return dims_; }
    int party_count() const { return dims_.party_count(); }
    const ComplexMatrix& matrix() const { return m_; }

    double trace_real() const { return m_.trace().real(); }
    double purity() const { return (m_ * m_).trace().real(); }

private:
    DensityMatrix(DimensionVector dims, ComplexMatrix matrix, bool validate)
        : dims_(std::move(dims)), m_(std::move(matrix)) {
        if (m_.rows() != dims_.total_dim() || m_.cols() != dims_.total_dim())
            throw shape_error("DensityMatrix: matrix is " + std::to_string(m_.rows()) + "x" +
                              std::to_string(m_.cols()) + ", expected square of dimension " +
                              std::to_string(dims_.total_dim()));
        if (!all_finite(m_)) throw numeric_error("DensityMatrix: non-finite entry");
        const double tr = trace_real();
        if (tr > 1.0 + kNormTol)
            throw domain_error("DensityMatrix: trace " + std::to_string(tr) + " > 1");
        if (tr < -kNormTol)
            throw domain_error("DensityMatrix: negative trace " + std::to_string(tr));
        if (validate) {
            require_hermitian(m_, kHermTol);
            assert_psd(m_, kPsdTol);
        }
    }

    DimensionVector dims_;
    ComplexMatrix m_;
};

// Grouping of the parties {0..N-1} into disjoint nonempty blocks covering
// all of them. Block contents are kept sorted ascending.
class Partition {
public:
    Partition(int party_count, std::vector<std::vector<int>> blocks)
        : blocks_(std::move(blocks)) {
        if (blocks_.empty()) throw shape_error("Partition: no blocks");
        std::vector<bool> seen(static_cast<std::size_t>(party_count), false);
        for (auto& block : blocks_) {
            if (block.empty()) throw shape_error("Partition: empty block");
            std::sort(block.begin(), block.end());
            for (int p : block) {
                if (p < 0 || p >= party_count)
                    throw shape_error("Partition: party index " + std::to_string(p) +
                                      " out of range");
                if (seen[static_cast<std::size_t>(p)])
                    throw shape_error("Partition: party " + std::to_string(p) +
                                      " appears in two blocks");
                seen[static_cast<std::size_t>(p)] = true;
            }
        }
        for (int p = 0; p < party_count; ++p)
            if (!seen[static_cast<std::size_t>(p)])
                throw shape_error("Partition: party " + std::to_string(p) + " not covered");
    }

    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

    // Parties in block order; identity iff the partition is contiguous and
    // order-preserving.
    std::vector<int> party_order() const {
        std::vector<int> order;
        for (const auto& block : blocks_) order.insert(order.end(), block.begin(), block.end());
        return order;
    }

private:
    std::vector<std::vector<int>> blocks_;
};

inline Partition singleton_partition(int party_count) {
    std::vector<std::vector<int>> blocks;
    for (int p = 0; p < party_count; ++p) blocks.push_back({p});
    return Partition(party_count, std::move(blocks));
}

// ---------------------------------------------------------------------------
// Core operations

inline DensityMatrix to_density(const PureState& phi) {
    ComplexMatrix m = phi.amplitudes() * phi.amplitudes().adjoint();
    return DensityMatrix::unchecked(phi.dims(), std::move(m));
}

// Reduced matrix over `keep` (original relative party order preserved).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
    const int n = rho.party_count();
    if (keep.empty()) throw shape_error("partial_trace: empty keep set");
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw shape_error("partial_trace: duplicate party in keep set");
    if (keep.front() < 0 || keep.back() >= n)
        throw shape_error("partial_trace: party index out of range");

    const auto& dims = rho.dims().dims();
    const auto strides = detail::strides_of(dims);

    std::vector<int> kept_dims, traced;
    for (int p : keep) kept_dims.push_back(dims[static_cast<std::size_t>(p)]);
    for (int p = 0; p < n; ++p)
        if (!std::binary_search(keep.begin(), keep.end(), p)) traced.push_back(p);
    std::vector<int> traced_dims;
    for (int p : traced) traced_dims.push_back(dims[static_cast<std::size_t>(p)]);

    const auto kept_strides_local = detail::strides_of(kept_dims);
    const std::int64_t dim_keep = detail::total_dim(kept_dims);

    ComplexMatrix out = ComplexMatrix::Zero(dim_keep, dim_keep);
    std::vector<int> row_digits(keep.size(), 0), col_digits(keep.size(), 0),
        tr_digits(traced.size(), 0);
    for (std::int64_t r = 0; r < dim_keep; ++r) {
        detail::decompose(r, kept_strides_local, row_digits);
        std::int64_t row_base = 0;
        for (std::size_t q = 0; q < keep.size(); ++q)
            row_base += row_digits[q] * strides[static_cast<std::size_t>(keep[q])];
        for (std::int64_t c = 0; c < dim_keep; ++c) {
            detail::decompose(c, kept_strides_local, col_digits);
            std::int64_t col_base = 0;
            for (std::size_t q = 0; q < keep.size(); ++q)
                col_base += col_digits[q] * strides[static_cast<std::size_t>(keep[q])];
            cxd sum{0.0, 0.0};
            std::fill(tr_digits.begin(), tr_digits.end(), 0);
            if (traced.empty()) {
                sum = rho.matrix()(row_base, col_base);
            } else {
                do {
                    std::int64_t off = 0;
                    for (std::size_t q = 0; q < traced.size(); ++q)
                        off += tr_digits[q] * strides[static_cast<std::size_t>(traced[q])];
                    sum += rho.matrix()(row_base + off, col_base + off);
                } while (detail::next_digits(tr_digits, traced_dims));
            }
            out(r, c) = sum;
        }
    }
    return DensityMatrix::unchecked(DimensionVector(std::move(kept_dims)), std::move(out));
}

namespace detail {

// Global-index map realizing the party reordering that brings the
// partition's blocks next to each other: new_index[g_old] = g_new.
inline std::vector<std::int64_t> merge_index_map(const std::vector<int>& dims,
                                                 const std::vector<int>& order) {
    const auto old_strides = strides_of(dims);
    std::vector<int> new_dims;
    for (int p : order) new_dims.push_back(dims[static_cast<std::size_t>(p)]);
    const auto new_strides = strides_of(new_dims);

    const std::int64_t total = total_dim(dims);
    std::vector<std::int64_t> map(static_cast<std::size_t>(total));
    std::vector<int> digits(dims.size(), 0);
    for (std::int64_t g = 0; g < total; ++g) {
        decompose(g, old_strides, digits);
        std::int64_t g_new = 0;
        for (std::size_t q = 0; q < order.size(); ++q)
            g_new += digits[static_cast<std::size_t>(order[q])] * new_strides[q];
        map[static_cast<std::size_t>(g)] = g_new;
    }
    return map;
}

inline std::vector<int> merged_dims(const std::vector<int>& dims, const Partition& partition) {
    std::vector<int> out;
    for (const auto& block : partition.blocks()) {
        std::int64_t d = 1;
        for (int p : block) d *= dims[static_cast<std::size_t>(p)];
        out.push_back(static_cast<int>(d));
    }
    return out;
}

} // namespace detail

// Treat each block as a single party. For contiguous order-preserving
// partitions this is a pure reinterpretation of the index layout; blocks
// that interleave parties additionally permute the amplitudes into block
// order.
inline PureState merge_parties(const PureState& state, const Partition& partition) {
    const auto& dims = state.dims().dims();
    const auto order = partition.party_order();
    if (static_cast<int>(order.size()) != state.party_count())
        throw shape_error("merge_parties: partition does not cover the state");
    const auto map = detail::merge_index_map(dims, order);
    ComplexVector out(state.amplitudes().size());
    for (std::int64_t g = 0; g < state.amplitudes().size(); ++g)
        out(map[static_cast<std::size_t>(g)]) = state.amplitudes()(g);
    return PureState(DimensionVector(detail::merged_dims(dims, partition)), std::move(out));
}

inline DensityMatrix merge_parties(const DensityMatrix& rho, const Partition& partition) {
    const auto& dims = rho.dims().dims();
    const auto order = partition.party_order();
    if (static_cast<int>(order.size()) != rho.party_count())
        throw shape_error("merge_parties: partition does not cover the state");
    const auto map = detail::merge_index_map(dims, order);
    const std::int64_t total = rho.dims().total_dim();
    ComplexMatrix out(total, total);
    for (std::int64_t r = 0; r < total; ++r)
        for (std::int64_t c = 0; c < total; ++c)
            out(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) =
                rho.matrix()(r, c);
    return DensityMatrix::unchecked(DimensionVector(detail::merged_dims(dims, partition)),
                                    std::move(out));
}

// Reorder parties; dims follow the permutation. order[q] = original party
// placed at new position q.
inline PureState permute_parties(const PureState& state, const std::vector<int>& order) {
    std::vector<std::vector<int>> blocks;
    for (int p : order) blocks.push_back({p});
    return merge_parties(state, Partition(state.party_count(), std::move(blocks)));
}

inline DensityMatrix permute_parties(const DensityMatrix& rho, const std::vector<int>& order) {
    std::vector<std::vector<int>> blocks;
    for (int p : order) blocks.push_back({p});
    return merge_parties(rho, Partition(rho.party_count(), std::move(blocks)));
}

// ---------------------------------------------------------------------------
// State families and generators

// |0...0> + |1...1> + ... + |d-1,...,d-1> over N parties, amplitude 1/sqrt(d).
inline PureState ghz(int parties, int dim) {
    DimensionVector dims(std::vector<int>(static_cast<std::size_t>(parties), dim));
    const auto strides = detail::strides_of(dims.dims());
    ComplexVector amps = ComplexVector::Zero(dims.total_dim());
    const double a = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int i = 0; i < dim; ++i) {
        std::int64_t g = 0;
        for (auto s : strides) g += i * s;
        amps(g) = a;
    }
    return PureState(std::move(dims), std::move(amps));
}

// Single excitation shared uniformly over N qubits, amplitude 1/sqrt(N).
inline PureState w_state(int parties) {
    DimensionVector dims(std::vector<int>(static_cast<std::size_t>(parties), 2));
    const auto strides = detail::strides_of(dims.dims());
    ComplexVector amps = ComplexVector::Zero(dims.total_dim());
    const double a = 1.0 / std::sqrt(static_cast<double>(parties));
    for (int p = 0; p < parties; ++p) amps(strides[static_cast<std::size_t>(p)]) = a;
    return PureState(std::move(dims), std::move(amps));
}

// Three-qutrit family (x/27) I_27 + (1-x) |GGHZ><GGHZ|.
inline DensityMatrix ggz_family(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw domain_error("ggz_family: x = " + std::to_string(x) + " outside [0,1]");
    const PureState g = ghz(3, 3);
    ComplexMatrix m = (x / 27.0) * ComplexMatrix::Identity(27, 27);
    m += (1.0 - x) * (g.amplitudes() * g.amplitudes().adjoint());
    return DensityMatrix(g.dims(), std::move(m));
}

enum class Example2Support {
    full24,      // identity term spread over the whole 2x2x2x3 space
    embedded16,  // identity on the 2x2x2x2 subspace with 4th-party indices {0,2}
};

// (|0000> + |0012> + |1100> + |1112>) / 2 on dims [2,2,2,3].
inline PureState example2_pure() {
    DimensionVector dims({2, 2, 2, 3});
    const auto strides = detail::strides_of(dims.dims());
    ComplexVector amps = ComplexVector::Zero(dims.total_dim());
    auto at = [&](int i, int j, int k, int r) {
        return i * strides[0] + j * strides[1] + k * strides[2] + r * strides[3];
    };
    amps(at(0, 0, 0, 0)) = 0.5;
    amps(at(0, 0, 1, 2)) = 0.5;
    amps(at(1, 1, 0, 0)) = 0.5;
    amps(at(1, 1, 1, 2)) = 0.5;
    return PureState(std::move(dims), std::move(amps));
}

// Four-partite family mixing example2_pure with an identity term. The
// printed source writes a 16-dimensional identity on a 24-dimensional
// system; both readings are generated, full24 being the default.
inline DensityMatrix example2_family(double x,
                                     Example2Support support = Example2Support::full24) {
    if (!(x >= 0.0 && x <= 1.0))
        throw domain_error("example2_family: x = " + std::to_string(x) + " outside [0,1]");
    const PureState psi = example2_pure();
    const std::int64_t total = psi.dims().total_dim();
    ComplexMatrix m = ComplexMatrix::Zero(total, total);
    if (support == Example2Support::full24) {
        m = ((1.0 - x) / static_cast<double>(total)) *
            ComplexMatrix::Identity(total, total);
    } else {
        const auto strides = detail::strides_of(psi.dims().dims());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int r : {0, 2}) {
                        const std::int64_t g =
                            i * strides[0] + j * strides[1] + k * strides[2] + r * strides[3];
                        m(g, g) = (1.0 - x) / 16.0;
                    }
    }
    m += x * (psi.amplitudes() * psi.amplitudes().adjoint());
    return DensityMatrix(psi.dims(), std::move(m));
}

// Haar-uniform pure state: normalized complex Gaussian vector,
// deterministic per (dims, seed).
inline PureState random_pure(const DimensionVector& dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector amps(dims.total_dim());
    for (std::int64_t i = 0; i < amps.size(); ++i) amps(i) = cxd(gauss(rng), gauss(rng));
    const double n = amps.norm();
    if (n <= 0.0) throw numeric_error("random_pure: degenerate draw");
    amps /= n;
    return PureState(dims, std::move(amps));
}

// Hilbert-Schmidt-style random density matrix G G^dag / tr, deterministic
// per (dims, seed). rank 0 means full rank; smaller ranks draw a
// rectangular G so low-rank mixed states can be generated directly.
inline DensityMatrix random_density(const DimensionVector& dims, std::uint64_t seed,
                                    int rank = 0) {
    const std::int64_t total = dims.total_dim();
    if (rank < 0 || rank > total)
        throw domain_error("random_density: rank " + std::to_string(rank) + " out of range");
    const std::int64_t r = rank == 0 ? total : rank;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(total, r);
    for (std::int64_t i = 0; i < total; ++i)
        for (std::int64_t j = 0; j < r; ++j) g(i, j) = cxd(gauss(rng), gauss(rng));
    ComplexMatrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix::unchecked(dims, std::move(m));
}

} // namespace mcb
