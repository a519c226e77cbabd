#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace walign {

using Scalar = double;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Raised when an algorithm fails numerically (no convergence, singular
/// factor, ill-conditioned basis) as opposed to being called with invalid
/// arguments.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shared numerical acceptance thresholds. Every module checks against these
/// constants rather than redefining its own.
namespace tol {
inline constexpr double eig_residual = 1e-9;        // ||A v - l v|| <= tol * ||A||
inline constexpr double svd_reconstruction = 1e-9;  // relative Frobenius
inline constexpr double orthonormal = 1e-10;        // ||Q^T Q - I|| max norm
inline constexpr double expm_semigroup = 1e-8;      // relative
inline constexpr double ill_conditioned_basis = 1e8;  // eigenbasis cond switch
}  // namespace tol

}  // namespace walign
