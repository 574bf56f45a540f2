#pragma once

#include "metro/common.hpp"

#include <Eigen/Eigenvalues>

#include <string>
#include <utility>
#include <vector>

namespace metro {

namespace detail {

inline void require_square(const CMat& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
}

inline double hermiticity_defect(const CMat& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace detail

// Normalized complex amplitude vector in a declared basis.
class StateVector {
  public:
    StateVector(CVec amplitudes, std::string basis_label = {})
        : amplitudes_(std::move(amplitudes)), basis_label_(std::move(basis_label)) {
        if (amplitudes_.size() == 0) throw std::invalid_argument("StateVector: empty amplitude vector");
        const double norm2 = amplitudes_.squaredNorm();
        if (std::abs(norm2 - 1.0) > tol::matrix)
            throw std::invalid_argument("StateVector: amplitudes not normalized");
    }

    const CVec& amplitudes() const { return amplitudes_; }
    const std::string& basis_label() const { return basis_label_; }
    Eigen::Index dim() const { return amplitudes_.size(); }

    Complex overlap(const StateVector& other) const { return amplitudes_.dot(other.amplitudes_); }

  private:
    CVec amplitudes_;
    std::string basis_label_;
};

// Hermitian matrix in a declared basis; hosts observables, POVM elements
// and logarithmic derivatives.
class HermitianOperator {
  public:
    HermitianOperator(CMat matrix, std::string basis_label = {})
        : matrix_(std::move(matrix)), basis_label_(std::move(basis_label)) {
        detail::require_square(matrix_, "HermitianOperator");
        if (detail::hermiticity_defect(matrix_) > tol::matrix)
            throw std::invalid_argument("HermitianOperator: matrix not Hermitian");
        matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
    }

    const CMat& matrix() const { return matrix_; }
    const std::string& basis_label() const { return basis_label_; }
    Eigen::Index dim() const { return matrix_.rows(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<CMat> es(matrix_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

  private:
    CMat matrix_;
    std::string basis_label_;
};

// Hermitian, PSD, unit-trace matrix. Eigenvalues within tolerance of zero
// are clamped to zero by the accessor used in spectral computations.
class DensityOperator {
  public:
    DensityOperator(CMat matrix, std::string basis_label = {})
        : matrix_(std::move(matrix)), basis_label_(std::move(basis_label)) {
        detail::require_square(matrix_, "DensityOperator");
        if (detail::hermiticity_defect(matrix_) > tol::matrix)
            throw std::invalid_argument("DensityOperator: matrix not Hermitian");
        matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
        if (std::abs(matrix_.trace().real() - 1.0) > tol::matrix ||
            std::abs(matrix_.trace().imag()) > tol::matrix)
            throw std::invalid_argument("DensityOperator: trace must be 1");
        Eigen::SelfAdjointEigenSolver<CMat> es(matrix_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol::matrix)
            throw std::invalid_argument("DensityOperator: matrix not positive semidefinite");
    }

    // Rank-one projector |psi><psi|; provably PSD, so the spectral check
    // is skipped (matters for large grid representations).
    static DensityOperator pure(const StateVector& psi) {
        DensityOperator rho;
        rho.matrix_ = psi.amplitudes() * psi.amplitudes().adjoint();
        rho.basis_label_ = psi.basis_label();
        return rho;
    }

    const CMat& matrix() const { return matrix_; }
    const std::string& basis_label() const { return basis_label_; }
    Eigen::Index dim() const { return matrix_.rows(); }

    // Spectral decomposition with tiny eigenvalues clamped to zero.
    std::pair<RealVec, CMat> eigensystem() const {
        Eigen::SelfAdjointEigenSolver<CMat> es(matrix_);
        RealVec vals = es.eigenvalues();
        for (Eigen::Index i = 0; i < vals.size(); ++i)
            if (std::abs(vals[i]) < tol::eigen_clamp) vals[i] = 0.0;
        return {vals, es.eigenvectors()};
    }

  private:
    DensityOperator() = default;
    CMat matrix_;
    std::string basis_label_;
};

inline double real_trace(const CMat& m) { return m.trace().real(); }

inline void check_same_basis(const std::string& a, const std::string& b, const char* where) {
    if (!a.empty() && !b.empty() && a != b)
        throw UsageError(std::string(where) + ": basis labels disagree (" + a + " vs " + b + ")");
}

}  // namespace metro
