// wootters.hpp
// Two-qubit concurrence kernel for unnormalized PSD 4x4 operators,
// positively homogeneous of degree 1. Evaluated through the Hermitian route
// sqrt(rho) rho_tilde sqrt(rho) so only a self-adjoint solver is needed.

#pragma once

#include <algorithm>
#include <cmath>

#include "mcb/errors.hpp"
#include "mcb/linalg.hpp"
#include "mcb/qstate.hpp"

namespace mcb {

// 4x4 Hermitian PSD operator; trace in [0, 1]. The zero matrix is allowed
// (zero substates are yielded, not skipped).
class TwoQubitState {
public:
    explicit TwoQubitState(ComplexMatrix matrix) : m_(std::move(matrix)) {
        if (m_.rows() != 4 || m_.cols() != 4)
            throw shape_error("TwoQubitState: matrix is not 4x4");
        if (!all_finite(m_)) throw numeric_error("TwoQubitState: non-finite entry");
        require_hermitian(m_, kHermTol);
        const double tr = m_.trace().real();
        if (tr > 1.0 + kNormTol || tr < -kNormTol)
            throw domain_error("TwoQubitState: trace " + std::to_string(tr) +
                               " outside [0, 1]");
    }

    explicit TwoQubitState(const DensityMatrix& rho) : TwoQubitState(rho.matrix()) {
        if (rho.dims().dims() != std::vector<int>{2, 2})
            throw shape_error("TwoQubitState: dims are not [2,2]");
    }

    const ComplexMatrix& matrix() const { return m_; }
    double trace_real() const { return m_.trace().real(); }

private:
    ComplexMatrix m_;
};

// rho_tilde = (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y).
// Involution, trace preserving.
inline TwoQubitState spin_flip(const TwoQubitState& rho) {
    // sigma_y x sigma_y is the antidiagonal (-1, 1, 1, -1); conjugating by
    // it reverses both indices and flips the sign on mixed blocks.
    static constexpr double sign[4] = {-1.0, 1.0, 1.0, -1.0};
    ComplexMatrix out(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out(i, j) = sign[i] * sign[j] * std::conj(rho.matrix()(3 - i, 3 - j));
    return TwoQubitState(std::move(out));
}

// max(0, l1 - l2 - l3 - l4) with l_i the descending square roots of the
// eigenvalues of rho rho_tilde, evaluated through the Hermitian route:
// with A = sqrt(rho) sqrt(rho_tilde), A A^dag = sqrt(rho) rho_tilde
// sqrt(rho), so the singular values of A are exactly those square roots.
// Taking singular values directly keeps the small l_i at roundoff size
// instead of sqrt(roundoff). C(c rho) = c C(rho) for c >= 0.
inline double concurrence_two_qubit(const TwoQubitState& rho) {
    const double tr = rho.trace_real();
    if (tr <= 0.0) return 0.0;

    // Eigenvalue noise in the square roots would otherwise surface as
    // sqrt(eps)-sized singular values.
    const double zero_clamp = 1e2 * std::numeric_limits<double>::epsilon() * tr;
    const ComplexMatrix root = hermitian_sqrt(rho.matrix(), kPsdTol, zero_clamp);
    const ComplexMatrix flipped_root =
        hermitian_sqrt(spin_flip(rho).matrix(), kPsdTol, zero_clamp);
    const ComplexMatrix a = root * flipped_root;

    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const auto& sigma = svd.singularValues();  // descending, nonnegative
    return std::max(0.0, sigma(0) - sigma(1) - sigma(2) - sigma(3));
}

inline double concurrence_two_qubit(const DensityMatrix& rho) {
    return concurrence_two_qubit(TwoQubitState(rho));
}

} // namespace mcb
