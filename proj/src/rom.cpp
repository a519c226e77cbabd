#include "walign/rom.hpp"

#include <iostream>
#include <stdexcept>
#include <string>

#include "walign/numerics.hpp"

namespace walign::rom {

Mat Subspace::lift_map() const {
  if (orthonormal) return basis.transpose();
  return basis.completeOrthogonalDecomposition().pseudoInverse();
}

void Subspace::validate() const {
  numerics::require_finite(basis, "subspace basis");
  if (basis.rows() < 1 || basis.cols() < 1) {
    throw std::invalid_argument("subspace: empty basis");
  }
  for (Index c = 0; c < basis.cols(); ++c) {
    if (std::abs(basis.col(c).norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("subspace: column " + std::to_string(c) +
                                  " is not unit norm");
    }
  }
  if (orthonormal) {
    const Mat gram = basis.transpose() * basis;
    const double defect =
        (gram - Mat::Identity(dim(), dim())).cwiseAbs().maxCoeff();
    if (defect > tol::orthonormal) {
      throw std::invalid_argument(
          "subspace: flagged orthonormal but Gram defect is " +
          std::to_string(defect));
    }
  }
  if (eigenvalues && eigenvalues->size() != dim()) {
    throw std::invalid_argument("subspace: eigenvalue count != mode count");
  }
}

CenteredFrame center(const TimeSeriesFrame& frame) {
  frame.validate();
  CenteredFrame out;
  out.means = frame.values.colwise().mean();
  out.data = frame;
  out.data.values.rowwise() -= out.means.transpose();
  return out;
}

Subspace pod(const CenteredFrame& centered, Index d) {
  const Mat& data = centered.data.values;
  if (d < 1 || d > data.cols()) {
    throw std::invalid_argument("pod: d must be in [1, channel count]");
  }
  const auto dec = numerics::svd(data);
  const double leading = dec.singular_values(0);
  if (d <= dec.singular_values.size() && leading > 0 &&
      dec.singular_values(d - 1) <= 1e-12 * leading) {
    std::cerr << "pod: warning: requested " << d
              << " modes but numerical rank is lower; trailing modes are "
                 "noise directions\n";
  }
  Subspace sub;
  sub.basis = dec.vt.topRows(d).transpose();
  numerics::canonicalize_columns(sub.basis);
  sub.orthonormal = true;
  sub.origin = SubspaceOrigin::pod;
  sub.validate();
  return sub;
}

Subspace dmd(const CenteredFrame& centered, Index d) {
  const Mat& data = centered.data.values;
  if (data.rows() < 2) {
    throw std::invalid_argument("dmd: needs at least two rows");
  }
  if (d < 1 || d > data.cols()) {
    throw std::invalid_argument("dmd: d must be in [1, channel count]");
  }
  // Snapshot pairs as columns: x1 holds steps 0..z-2, x2 holds 1..z-1.
  const Index pairs = data.rows() - 1;
  const Mat x1 = data.topRows(pairs).transpose();
  const Mat x2 = data.bottomRows(pairs).transpose();

  Eigen::JacobiSVD<Mat> svd(x1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index rank = std::min<Index>(d, svd.singularValues().size());
  if (svd.singularValues()(rank - 1) <=
      1e-13 * std::max(svd.singularValues()(0), 1e-300)) {
    throw NumericalError("dmd: snapshot matrix rank below requested d");
  }
  const Mat u = svd.matrixU().leftCols(rank);
  const Mat v = svd.matrixV().leftCols(rank);
  const Vec sigma_inv =
      svd.singularValues().head(rank).cwiseInverse();

  const Mat reduced =
      u.transpose() * x2 * v * sigma_inv.asDiagonal();
  const auto dec = numerics::eig(reduced);
  if (!dec.is_real) {
    throw NumericalError(
        "dmd: reduced operator has complex eigenvalue pairs; use POD for "
        "this dataset");
  }

  // Exact DMD modes, projected back through the snapshot data.
  Mat modes = x2 * v * sigma_inv.asDiagonal() * dec.real_vectors();
  for (Index c = 0; c < modes.cols(); ++c) {
    const double n = modes.col(c).norm();
    if (n <= 0) throw NumericalError("dmd: degenerate zero mode");
    modes.col(c) /= n;
  }
  numerics::canonicalize_columns(modes);

  Subspace sub;
  sub.basis = std::move(modes);
  sub.eigenvalues = dec.eigenvalues;
  sub.orthonormal = false;
  sub.origin = SubspaceOrigin::dmd;
  sub.validate();
  return sub;
}

Mat embed(const Mat& centered_values, const Subspace& subspace) {
  if (centered_values.cols() != subspace.states()) {
    throw std::invalid_argument("embed: channel count != basis rows");
  }
  return centered_values * subspace.basis;
}

Mat embed(const CenteredFrame& centered, const Subspace& subspace) {
  return embed(centered.data.values, subspace);
}

TimeSeriesFrame lift(const Mat& embedded, const Subspace& subspace,
                     const Vec& means, const FrameMeta& meta) {
  if (embedded.cols() != subspace.dim()) {
    throw std::invalid_argument("lift: column count != subspace dimension");
  }
  if (means.size() != subspace.states()) {
    throw std::invalid_argument("lift: means length != channel count");
  }
  Mat values = embedded * subspace.lift_map();
  values.rowwise() += means.transpose();
  return make_frame(meta, std::move(values));
}

}  // namespace walign::rom
