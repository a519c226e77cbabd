#pragma once

#include <string>
#include <vector>

#include "walign/rom.hpp"
#include "walign/subspace.hpp"
#include "walign/timeseries.hpp"
#include "walign/types.hpp"

namespace walign::portrait {

enum class OperatorSource { physics, dmd };

/// Sampling request for a two-state phase portrait: a rectangular grid of
/// field arrows plus decay trajectories from chosen initial states.
struct PortraitRequest {
  OperatorSource source = OperatorSource::physics;
  bool side_by_side = false;  // emit physics and DMD panels together
  double x_min = -12.0, x_max = 12.0;
  double y_min = -12.0, y_max = 12.0;
  Index resolution = 15;  // grid points per axis
  std::vector<Eigen::Vector2d> initial_states;  // defaults to box boundary
  Index steps = 300;

  void validate() const;
  std::vector<Eigen::Vector2d> trajectory_seeds() const;
};

struct PortraitData {
  std::string label;
  Mat field;  // grid points x 4: x, y, vx, vy (degC per hour)
  std::vector<Mat> trajectories;  // each steps x 2
};

/// Autonomous field of a continuous operator, v = A x, with trajectories
/// advanced by e^{dt A}.
PortraitData sample_continuous(const Mat& a, double dt_seconds,
                               const PortraitRequest& request,
                               std::string label);

/// Autonomous field of a discrete operator, v = (Phi - I) x / dt, with
/// trajectories iterated through Phi.
PortraitData sample_discrete(const Mat& phi, double dt_seconds,
                             const PortraitRequest& request,
                             std::string label);

/// One-step operator implied by a DMD subspace: V diag(lambda) pinv(V).
Mat dmd_operator(const rom::Subspace& modes);

/// CSV-compatible frames (step/hours indexing, re-ingestable).
TimeSeriesFrame field_frame(const PortraitData& data, double dt_seconds);
TimeSeriesFrame trajectory_frame(const PortraitData& data, double dt_seconds);

std::string render_svg(const std::vector<PortraitData>& panels,
                       const PortraitRequest& request);

}  // namespace walign::portrait
