#pragma once

#include <optional>

#include "walign/types.hpp"

namespace walign::rom {

enum class SubspaceOrigin { physics, pod, dmd };

/// A set of basis columns spanning a (possibly oblique) subspace of the
/// channel space, plus the spectrum that produced it when one exists:
/// continuous-time eigenvalues for a physics basis, discrete-time for DMD.
struct Subspace {
  Mat basis;  // states x modes, unit 2-norm columns
  std::optional<CVec> eigenvalues;
  bool orthonormal = false;
  SubspaceOrigin origin = SubspaceOrigin::pod;

  Index states() const { return basis.rows(); }
  Index dim() const { return basis.cols(); }

  /// Right-multiplier taking embedded coordinates back to channel space:
  /// basis transpose for orthonormal bases, pseudoinverse otherwise.
  Mat lift_map() const;

  void validate() const;
};

}  // namespace walign::rom
