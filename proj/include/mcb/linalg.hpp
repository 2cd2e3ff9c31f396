// linalg.hpp
// Dense complex linear algebra used everywhere else: products, adjoints,
// traces, Hermitian spectra, PSD validation. Matrices are row-major and
// sized for this library's workloads (dimension products <= a few thousand).
// Eigen's self-adjoint solver does the heavy lifting.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mcb/errors.hpp"

namespace mcb {

using cxd = std::complex<double>;

// Row-major so that the multipartite index layout (last party fastest)
// matches the raw entry order.
using ComplexMatrix =
    Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-9;  // max |h - h^dag| entry deviation
inline constexpr double kPsdTol = 1e-8;   // relative eigenvalue clamp

// Real eigenvalues of a Hermitian matrix, sorted descending.
struct Spectrum {
    std::vector<double> eigenvalues;

    double min() const { return eigenvalues.back(); }
    double max() const { return eigenvalues.front(); }
};

// Eigenvalues (descending) together with the matching eigenvector columns.
struct Eigensystem {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;  // column i pairs with eigenvalues[i]
};

inline bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

inline bool all_finite(const ComplexVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag()))
            return false;
    return true;
}

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw shape_error("multiply: inner dimensions differ (" +
                          std::to_string(a.cols()) + " vs " +
                          std::to_string(b.rows()) + ")");
    return a * b;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

inline cxd trace(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw shape_error("trace: matrix not square");
    return m.trace();
}

// Largest entrywise deviation from Hermiticity.
inline double hermiticity_defect(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw shape_error("hermiticity_defect: matrix not square");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = i; j < h.cols(); ++j)
            worst = std::max(worst, std::abs(h(i, j) - std::conj(h(j, i))));
    return worst;
}

inline void require_hermitian(const ComplexMatrix& h, double tol = kHermTol) {
    const double defect = hermiticity_defect(h);
    if (defect > tol)
        throw numeric_error("matrix is not Hermitian within tolerance (defect " +
                            std::to_string(defect) + ", tol " + std::to_string(tol) + ")");
}

inline Eigensystem hermitian_eigensystem(const ComplexMatrix& h, double tol = kHermTol) {
    require_hermitian(h, tol);
    // Symmetrize so roundoff in the input cannot leak into the solver.
    ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw numeric_error("hermitian eigensolver did not converge");
    const Eigen::Index n = h.rows();
    Eigensystem out;
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    out.eigenvectors.resize(n, n);
    // Eigen sorts ascending; flip to descending.
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues[static_cast<std::size_t>(i)] = solver.eigenvalues()(n - 1 - i);
        out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return out;
}

inline Spectrum hermitian_spectrum(const ComplexMatrix& h, double tol = kHermTol) {
    Eigensystem es = hermitian_eigensystem(h, tol);
    return Spectrum{std::move(es.eigenvalues)};
}

// Passes iff min eigenvalue >= -tol * max(1, trace).
inline void assert_psd(const ComplexMatrix& rho, double tol = kPsdTol) {
    Spectrum spec = hermitian_spectrum(rho);
    const double tr = trace(rho).real();
    const double floor = -tol * std::max(1.0, tr);
    if (spec.min() < floor)
        throw numeric_error("matrix is not PSD: eigenvalue " + std::to_string(spec.min()) +
                            " below " + std::to_string(floor));
}

// Hermitian PSD square root by spectral decomposition. Eigenvalues that are
// slightly negative from roundoff (within the PSD clamp) are set to zero.
// `zero_clamp` additionally zeroes positive eigenvalues at roundoff scale;
// sqrt turns eigenvalue noise of size eps into sqrt(eps)-sized entries, so
// callers that subtract near-degenerate results want those dropped.
inline ComplexMatrix hermitian_sqrt(const ComplexMatrix& rho, double psd_tol = kPsdTol,
                                    double zero_clamp = 0.0) {
    Eigensystem es = hermitian_eigensystem(rho);
    const double tr = trace(rho).real();
    const double floor = -psd_tol * std::max(1.0, tr);
    const Eigen::Index n = rho.rows();
    ComplexMatrix result = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = es.eigenvalues[static_cast<std::size_t>(i)];
        if (lam < floor)
            throw numeric_error("hermitian_sqrt: matrix is not PSD (eigenvalue " +
                                std::to_string(lam) + ")");
        if (lam <= zero_clamp) continue;
        result += std::sqrt(lam) * es.eigenvectors.col(i) * es.eigenvectors.col(i).adjoint();
    }
    return result;
}

} // namespace mcb
