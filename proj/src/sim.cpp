#include "walign/sim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "walign/numerics.hpp"

namespace walign::sim {

void WeatherSpec::validate() const {
  if (!(ar1_coefficient >= 0.0 && ar1_coefficient < 1.0)) {
    throw std::invalid_argument(
        "weather: ar1_coefficient must lie in [0, 1) for stationarity");
  }
  if (ar1_noise_sd < 0) {
    throw std::invalid_argument("weather: ar1_noise_sd must be >= 0");
  }
  if (diurnal_amplitude < 0 || annual_amplitude < 0) {
    throw std::invalid_argument("weather: amplitudes must be >= 0");
  }
}

TimeSeriesFrame generate_weather(const WeatherSpec& spec, Index steps,
                                 double dt) {
  spec.validate();
  if (steps < 1) throw std::invalid_argument("weather: steps must be >= 1");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  constexpr double two_pi = 2.0 * std::numbers::pi;
  Mat values(steps, 1);
  double residual = 0.0;
  for (Index t = 0; t < steps; ++t) {
    residual = spec.ar1_coefficient * residual +
               spec.ar1_noise_sd * gauss(rng);
    const double step = static_cast<double>(t);
    values(t, 0) = spec.mean_c +
                   spec.diurnal_amplitude *
                       std::sin(two_pi * step / 24.0 + spec.diurnal_phase) +
                   spec.annual_amplitude * std::sin(two_pi * step / 8760.0) +
                   residual;
  }
  return make_frame({dt, 0, {"T_ext"}}, std::move(values));
}

TimeSeriesFrame rollout(const thermal::DiscreteSsm& ssm, const Vec& x0,
                        const TimeSeriesFrame& inputs) {
  inputs.validate();
  const Index n = ssm.state_count();
  const Index p = ssm.input_count();
  if (inputs.channel_count() != p) {
    throw std::invalid_argument("rollout: input frame has " +
                                std::to_string(inputs.channel_count()) +
                                " channels, model expects " +
                                std::to_string(p));
  }
  if (x0.size() != n) {
    throw std::invalid_argument("rollout: x0 length != state count");
  }

  const Index z = inputs.steps();
  const Index q = ssm.c.rows();
  Mat values(z, n + q);
  Vec x = x0;
  values.row(0).head(n) = x.transpose();
  for (Index t = 1; t < z; ++t) {
    const Vec u = inputs.values.row(t - 1).transpose();
    x = ssm.phi * x + ssm.gamma * u;
    values.row(t).head(n) = x.transpose();
    values.row(t).tail(q) =
        (ssm.c * values.row(t - 1).head(n).transpose() + ssm.d * u)
            .transpose();
  }
  // No predecessor exists for the first row; evaluate the output map there.
  values.row(0).tail(q) =
      (ssm.c * x0 + ssm.d * inputs.values.row(0).transpose()).transpose();

  FrameMeta meta = inputs.meta();
  meta.channels = ssm.state_names;
  for (const auto& name : ssm.output_names) {
    meta.channels.push_back("y_" + name);
  }
  return make_frame(meta, std::move(values));
}

Vec steady_state(const thermal::DiscreteSsm& ssm, const Vec& u) {
  const Index n = ssm.state_count();
  if (u.size() != ssm.input_count()) {
    throw std::invalid_argument("steady_state: input length mismatch");
  }
  Eigen::FullPivLU<Mat> lu(Mat::Identity(n, n) - ssm.phi);
  if (!lu.isInvertible()) {
    throw NumericalError("steady_state: I - Phi is singular");
  }
  return lu.solve(ssm.gamma * u);
}

void FdWallConfig::validate() const {
  wall.validate();
  if (cells < 3) throw std::invalid_argument("fd: needs at least 3 cells");
  if (sensor_depths.empty() || sensor_depths.size() != sensor_names.size()) {
    throw std::invalid_argument("fd: sensor depths/names mismatch");
  }
  for (double depth : sensor_depths) {
    if (!(depth > 0.0 && depth < 1.0)) {
      throw std::invalid_argument("fd: sensor depths must lie in (0, 1)");
    }
  }
}

FdWall::FdWall(const FdWallConfig& config, double dt_seconds)
    : config_(config), dt_(dt_seconds) {
  config_.validate();
  if (!(dt_ > 0)) throw std::invalid_argument("fd: dt must be positive");

  const auto& wall = config_.wall;
  const int n = config_.cells;
  dx_ = wall.thickness / n;
  const double k = wall.material.conductivity;
  cell_capacity_ = wall.material.density * wall.material.specific_heat * dx_;
  const double g = k / dx_;  // cell-to-cell conductance per area

  // Film and half-cell conduction act in series at each exposed face.
  auto boundary_u = [&](double h) {
    return h > 0 ? 1.0 / (1.0 / h + dx_ / (2.0 * k)) : 0.0;
  };
  u_boundary_out_ = boundary_u(wall.h_out);
  u_boundary_in_ = wall.indoor_branch ? boundary_u(wall.h_in) : 0.0;

  Mat system = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    if (i > 0) {
      system(i, i - 1) = -dt_ * g / cell_capacity_;
      diag += g;
    }
    if (i < n - 1) {
      system(i, i + 1) = -dt_ * g / cell_capacity_;
      diag += g;
    }
    if (i == 0) diag += u_boundary_out_;
    if (i == n - 1) diag += u_boundary_in_;
    system(i, i) = 1.0 + dt_ * diag / cell_capacity_;
  }
  solver_.compute(system);
  profile_ = Vec::Zero(n);
}

void FdWall::set_uniform(double temperature_c) {
  profile_.setConstant(temperature_c);
}

void FdWall::set_profile(const Vec& profile) {
  if (profile.size() != profile_.size()) {
    throw std::invalid_argument("fd: profile length != cell count");
  }
  numerics::require_finite(profile, "fd profile");
  profile_ = profile;
}

double FdWall::step(double t_ext, std::optional<double> t_int) {
  const int n = cells();
  Vec rhs = profile_;
  rhs(0) += dt_ * u_boundary_out_ * t_ext / cell_capacity_;
  if (u_boundary_in_ > 0) {
    if (!t_int) {
      throw std::invalid_argument(
          "fd: indoor branch is enabled but no T_int was supplied");
    }
    rhs(n - 1) += dt_ * u_boundary_in_ * (*t_int) / cell_capacity_;
  }
  profile_ = solver_.solve(rhs);
  if (!profile_.allFinite()) {
    throw NumericalError("fd: implicit solve produced non-finite profile");
  }
  double energy_in = dt_ * u_boundary_out_ * (t_ext - profile_(0));
  if (u_boundary_in_ > 0) {
    energy_in += dt_ * u_boundary_in_ * (*t_int - profile_(n - 1));
  }
  return energy_in;
}

double FdWall::stored_energy() const {
  return cell_capacity_ * profile_.sum();
}

double FdWall::sample(double depth_fraction) const {
  if (!(depth_fraction > 0.0 && depth_fraction < 1.0)) {
    throw std::invalid_argument("fd: sample depth must lie in (0, 1)");
  }
  const int n = cells();
  // Depth is measured from the interior face; the grid runs from the
  // exterior face, so flip the coordinate.
  const double position = (1.0 - depth_fraction) * n - 0.5;  // cell units
  if (position <= 0.0) return profile_(0);
  if (position >= n - 1) return profile_(n - 1);
  const int lower = static_cast<int>(position);
  const double w = position - lower;
  return (1.0 - w) * profile_(lower) + w * profile_(lower + 1);
}

TimeSeriesFrame fd_simulate(const FdWallConfig& config,
                            const TimeSeriesFrame& inputs,
                            const Vec& initial_profile) {
  config.validate();
  inputs.validate();
  if (!inputs.has_channel("T_ext")) {
    throw std::invalid_argument("fd: inputs must contain a T_ext channel");
  }
  const bool indoor = config.wall.indoor_branch;
  if (indoor && !inputs.has_channel("T_int")) {
    throw std::invalid_argument(
        "fd: indoor branch is enabled but inputs have no T_int channel");
  }

  FdWall wall(config, inputs.dt);
  wall.set_profile(initial_profile);

  const Index z = inputs.steps();
  const Index sensors = static_cast<Index>(config.sensor_depths.size());
  const Vec t_ext = inputs.channel("T_ext");
  Vec t_int;
  if (indoor) t_int = inputs.channel("T_int");

  Mat values(z, sensors);
  for (Index s = 0; s < sensors; ++s) {
    values(0, s) = wall.sample(config.sensor_depths[s]);
  }
  for (Index t = 1; t < z; ++t) {
    wall.step(t_ext(t - 1),
              indoor ? std::optional<double>(t_int(t - 1)) : std::nullopt);
    for (Index s = 0; s < sensors; ++s) {
      values(t, s) = wall.sample(config.sensor_depths[s]);
    }
  }

  FrameMeta meta = inputs.meta();
  meta.channels = config.sensor_names;
  return make_frame(meta, std::move(values));
}

TimeSeriesFrame fd_simulate(const FdWallConfig& config,
                            const TimeSeriesFrame& inputs,
                            double uniform_initial_c) {
  return fd_simulate(config, inputs,
                     Vec::Constant(config.cells, uniform_initial_c));
}

TimeSeriesFrame add_noise(const TimeSeriesFrame& frame, double mean, double sd,
                          std::uint64_t seed) {
  frame.validate();
  if (sd < 0) throw std::invalid_argument("add_noise: sd must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TimeSeriesFrame out = frame;
  for (Index r = 0; r < out.values.rows(); ++r) {
    for (Index c = 0; c < out.values.cols(); ++c) {
      out.values(r, c) += mean + sd * gauss(rng);
    }
  }
  return out;
}

}  // namespace walign::sim
