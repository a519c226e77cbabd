#pragma once

#include "walign/subspace.hpp"
#include "walign/timeseries.hpp"
#include "walign/types.hpp"

namespace walign::rom {

/// A frame with its per-channel means removed and remembered, so embedded
/// data can be lifted back to physical units later.
struct CenteredFrame {
  TimeSeriesFrame data;  // zero channel means
  Vec means;
};

CenteredFrame center(const TimeSeriesFrame& frame);

/// POD basis: the leading d right singular vectors of the centered data
/// matrix (rows are timesteps). Always orthonormal.
Subspace pod(const CenteredFrame& centered, Index d);

/// Exact DMD of rank d: reduced one-step operator from time-shifted
/// snapshot pairs, eigendecomposed; returns unit-normalized (generally
/// non-orthogonal) modes and the discrete spectrum. Complex eigenvalue
/// pairs are refused.
Subspace dmd(const CenteredFrame& centered, Index d);

/// Coordinates of each row in the subspace: X~ = Xc * basis.
Mat embed(const Mat& centered_values, const Subspace& subspace);
Mat embed(const CenteredFrame& centered, const Subspace& subspace);

/// Back to channel space: X = X~ * lift_map + means.
TimeSeriesFrame lift(const Mat& embedded, const Subspace& subspace,
                     const Vec& means, const FrameMeta& meta);

}  // namespace walign::rom
