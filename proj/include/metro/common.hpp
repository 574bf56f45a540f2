#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace metro {

using Complex = std::complex<double>;
using RealVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Raised for malformed requests (bad quantity names, bad grids, violated
// call preconditions). The CLI maps this to exit code 1.
class UsageError : public std::runtime_error {
  public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Raised for numerical failures: truncation too small, non-finite
// integrands, singular models, convergence loss. CLI exit code 2.
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

namespace tol {
// Construction-time invariants (norms, hermiticity, trace, PSD).
inline constexpr double matrix = 1e-10;
// Pairwise orthonormality of projective eigenbases.
inline constexpr double orthonormal = 1e-9;
// POVM completeness sum against the identity.
inline constexpr double completeness = 1e-8;
// Joint normalization of (measure, density) pairs.
inline constexpr double normalization = 1e-6;
// Nodes with joint density below this contribute nothing to FI integrands.
inline constexpr double probability_floor = 1e-15;
// ...unless the derivative there exceeds this, which is a support shift.
inline constexpr double derivative_floor = 1e-12;
// Eigenvalue-pair threshold for the SLD construction.
inline constexpr double sld_support = 1e-12;
// Eigenvalues within this of zero are clamped to zero.
inline constexpr double eigen_clamp = 1e-10;
}  // namespace tol

inline constexpr double kDefaultFdStep = 1e-6;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool close(double a, double b, double rel, double abs = 0.0) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs;
}

}  // namespace metro
