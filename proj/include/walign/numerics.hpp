#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "walign/types.hpp"

namespace walign::numerics {

template <typename ScalarT>
using DenseMatrix = Eigen::Matrix<ScalarT, Eigen::Dynamic, Eigen::Dynamic>;
template <typename ScalarT>
using DenseVector = Eigen::Matrix<ScalarT, Eigen::Dynamic, 1>;
template <typename ScalarT>
using ComplexMatrix =
    Eigen::Matrix<std::complex<ScalarT>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename ScalarT>
using ComplexVector = Eigen::Matrix<std::complex<ScalarT>, Eigen::Dynamic, 1>;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
  }
}

/// Largest singular value. Matrices here are small, so the exact norm is
/// cheap and preferred over Frobenius bounds.
template <typename Derived>
typename Derived::RealScalar spectral_norm(
    const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return typename Derived::RealScalar(0);
  Eigen::JacobiSVD<typename Derived::PlainObject> svd(m);
  return svd.singularValues()(0);
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::RealScalar rel = 1e-12) {
  if (m.rows() != m.cols()) return false;
  using Real = typename Derived::RealScalar;
  const Real scale = std::max<Real>(Real(1), m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel * scale;
}

/// Rotate each column so its first non-negligible component lies on the
/// positive real axis. Makes eigenvector and mode comparisons deterministic.
template <typename ScalarT>
void canonicalize_columns(ComplexMatrix<ScalarT>& m) {
  using Real = ScalarT;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const Real col_scale = m.col(c).norm();
    if (col_scale == Real(0)) continue;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const Real mag = std::abs(m(r, c));
      if (mag > Real(1e-12) * col_scale) {
        m.col(c) *= std::conj(m(r, c)) / mag;
        break;
      }
    }
  }
}

template <typename ScalarT>
void canonicalize_columns(DenseMatrix<ScalarT>& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const ScalarT col_scale = m.col(c).norm();
    if (col_scale == ScalarT(0)) continue;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (std::abs(m(r, c)) > ScalarT(1e-12) * col_scale) {
        if (m(r, c) < ScalarT(0)) m.col(c) = -m.col(c);
        break;
      }
    }
  }
}

/// Eigenpairs sorted by descending real part (ties broken by descending
/// imaginary part). Columns are unit 2-norm with the first non-negligible
/// component rotated onto the positive real axis.
template <typename ScalarT>
struct EigenDecompositionT {
  ComplexVector<ScalarT> eigenvalues;
  ComplexMatrix<ScalarT> eigenvectors;
  bool is_real = false;

  DenseVector<ScalarT> real_values() const {
    if (!is_real) throw NumericalError("eig: eigenvalues are complex");
    return eigenvalues.real();
  }
  DenseMatrix<ScalarT> real_vectors() const {
    if (!is_real) throw NumericalError("eig: eigenvectors are complex");
    return eigenvectors.real();
  }
};

using EigenDecomposition = EigenDecompositionT<Scalar>;

template <typename ScalarT>
struct SvdDecompositionT {
  DenseMatrix<ScalarT> u;               // orthonormal columns
  DenseVector<ScalarT> singular_values;  // nonincreasing, nonnegative
  DenseMatrix<ScalarT> vt;              // orthonormal rows
};

using SvdDecomposition = SvdDecompositionT<Scalar>;

namespace detail {

template <typename ScalarT>
void sort_eigenpairs(ComplexVector<ScalarT>& values,
                     ComplexMatrix<ScalarT>& vectors) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     if (values(a).real() != values(b).real())
                       return values(a).real() > values(b).real();
                     return values(a).imag() > values(b).imag();
                   });
  ComplexVector<ScalarT> sorted_values(values.size());
  ComplexMatrix<ScalarT> sorted_vectors(vectors.rows(), vectors.cols());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    sorted_values(i) = values(order[static_cast<std::size_t>(i)]);
    sorted_vectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

}  // namespace detail

/// Eigendecomposition A V = V diag(l). Symmetric inputs take the
/// self-adjoint route and always come back real with mutually orthogonal
/// eigenvectors.
template <typename Derived>
EigenDecompositionT<typename Derived::Scalar> eig(
    const Eigen::MatrixBase<Derived>& a_expr) {
  using ScalarT = typename Derived::Scalar;
  static_assert(std::is_floating_point_v<ScalarT>,
                "eig expects a real floating-point matrix");
  DenseMatrix<ScalarT> a = a_expr;
  if (a.rows() != a.cols())
    throw std::invalid_argument("eig: matrix must be square");
  if (a.rows() == 0) throw std::invalid_argument("eig: empty matrix");
  require_finite(a, "eig");

  EigenDecompositionT<ScalarT> dec;
  if (is_symmetric(a)) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix<ScalarT>> solver(a);
    if (solver.info() != Eigen::Success) {
      throw NumericalError(
          "eig: self-adjoint solver hit its internal iteration cap without "
          "converging");
    }
    dec.eigenvalues = solver.eigenvalues().template cast<std::complex<ScalarT>>();
    dec.eigenvectors =
        solver.eigenvectors().template cast<std::complex<ScalarT>>();
    dec.is_real = true;
  } else {
    Eigen::EigenSolver<DenseMatrix<ScalarT>> solver(a);
    if (solver.info() != Eigen::Success) {
      throw NumericalError(
          "eig: Schur iteration hit its internal iteration cap without "
          "converging");
    }
    dec.eigenvalues = solver.eigenvalues();
    dec.eigenvectors = solver.eigenvectors();
  }

  for (Eigen::Index c = 0; c < dec.eigenvectors.cols(); ++c) {
    const ScalarT n = dec.eigenvectors.col(c).norm();
    if (n > ScalarT(0)) dec.eigenvectors.col(c) /= n;
  }
  detail::sort_eigenpairs(dec.eigenvalues, dec.eigenvectors);
  canonicalize_columns(dec.eigenvectors);

  if (!dec.is_real) {
    const ScalarT value_scale =
        std::max<ScalarT>(ScalarT(1), dec.eigenvalues.cwiseAbs().maxCoeff());
    const bool values_real =
        dec.eigenvalues.imag().cwiseAbs().maxCoeff() <=
        ScalarT(1e-12) * value_scale;
    const bool vectors_real =
        dec.eigenvectors.imag().cwiseAbs().maxCoeff() <= ScalarT(1e-12);
    if (values_real && vectors_real) {
      dec.eigenvalues = dec.eigenvalues.real().template cast<std::complex<ScalarT>>();
      dec.eigenvectors =
          dec.eigenvectors.real().template cast<std::complex<ScalarT>>();
      dec.is_real = true;
    }
  }

  const ScalarT a_norm = spectral_norm(a);
  const ScalarT residual_cap =
      ScalarT(tol::eig_residual) * std::max<ScalarT>(a_norm, ScalarT(1e-300));
  ComplexMatrix<ScalarT> ac = a.template cast<std::complex<ScalarT>>();
  for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
    const ScalarT residual =
        (ac * dec.eigenvectors.col(i) -
         dec.eigenvalues(i) * dec.eigenvectors.col(i))
            .norm();
    if (residual > residual_cap) {
      throw NumericalError(
          "eig: eigenpair residual " + std::to_string(residual) +
          " exceeds " + std::to_string(residual_cap) +
          " (matrix too close to defective)");
    }
  }
  return dec;
}

/// Thin SVD X = U diag(s) Vt with s sorted descending.
template <typename Derived>
SvdDecompositionT<typename Derived::Scalar> svd(
    const Eigen::MatrixBase<Derived>& x_expr) {
  using ScalarT = typename Derived::Scalar;
  static_assert(std::is_floating_point_v<ScalarT>,
                "svd expects a real floating-point matrix");
  DenseMatrix<ScalarT> x = x_expr;
  if (x.size() == 0) throw std::invalid_argument("svd: empty matrix");
  require_finite(x, "svd");
  Eigen::JacobiSVD<DenseMatrix<ScalarT>> solver(
      x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("svd: Jacobi sweeps failed to converge");
  }
  SvdDecompositionT<ScalarT> dec;
  dec.u = solver.matrixU();
  dec.singular_values = solver.singularValues();
  dec.vt = solver.matrixV().transpose();
  return dec;
}

/// State transition matrix e^{dt A}. The primary route diagonalizes A and
/// exponentiates the spectrum; when the eigenbasis is ill-conditioned
/// (cond > tol::ill_conditioned_basis) or the decomposition fails, a
/// scaling-and-squaring exponential takes over.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> expm_dt(
    const Eigen::MatrixBase<Derived>& a_expr, double dt_seconds) {
  using ScalarT = typename Derived::Scalar;
  static_assert(std::is_floating_point_v<ScalarT>,
                "expm_dt expects a real floating-point matrix");
  DenseMatrix<ScalarT> a = a_expr;
  if (a.rows() != a.cols())
    throw std::invalid_argument("expm_dt: matrix must be square");
  if (a.rows() == 0) throw std::invalid_argument("expm_dt: empty matrix");
  require_finite(a, "expm_dt");
  if (!(dt_seconds > 0))
    throw std::invalid_argument("expm_dt: dt must be positive");
  const ScalarT dt = static_cast<ScalarT>(dt_seconds);

  try {
    const auto dec = eig(a);
    Eigen::JacobiSVD<ComplexMatrix<ScalarT>> basis_svd(dec.eigenvectors);
    const auto& sigma = basis_svd.singularValues();
    const ScalarT smin = sigma(sigma.size() - 1);
    if (smin > ScalarT(0) &&
        sigma(0) / smin <= ScalarT(tol::ill_conditioned_basis)) {
      ComplexVector<ScalarT> scaled =
          (dt * dec.eigenvalues.array()).exp().matrix();
      ComplexMatrix<ScalarT> inverse_basis =
          dec.eigenvectors.fullPivLu()
              .solve(ComplexMatrix<ScalarT>::Identity(a.rows(), a.cols()));
      ComplexMatrix<ScalarT> phi =
          dec.eigenvectors * scaled.asDiagonal() * inverse_basis;
      DenseMatrix<ScalarT> result = phi.real();
      if (result.allFinite()) return result;
    }
  } catch (const NumericalError&) {
    // fall through to the scaling route
  }

  DenseMatrix<ScalarT> phi = (dt * a).exp();
  if (!phi.allFinite()) {
    throw NumericalError(
        "expm_dt: eigenbasis is singular and the scaling fallback "
        "produced non-finite entries");
  }
  return phi;
}

}  // namespace walign::numerics
