#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "walign/thermal.hpp"
#include "walign/timeseries.hpp"
#include "walign/types.hpp"

namespace walign::sim {

/// Synthetic ambient-temperature drive: mean + diurnal and annual sines +
/// an AR(1) residual. Fully determined by the seed.
struct WeatherSpec {
  double mean_c = 10.0;
  double diurnal_amplitude = 3.0;
  double diurnal_phase = 0.0;  // rad
  double annual_amplitude = 1.0;
  double ar1_coefficient = 0.985;  // in [0, 1); ~3-day synoptic persistence
  double ar1_noise_sd = 0.5;       // degC
  std::uint64_t seed = 17;

  void validate() const;
};

TimeSeriesFrame generate_weather(const WeatherSpec& spec, Index steps,
                                 double dt = 3600.0);

/// Discrete rollout x(t) = Phi x(t-1) + Gamma u(t-1). Returns the state
/// channels plus the model outputs as extra `y_`-prefixed channels.
TimeSeriesFrame rollout(const thermal::DiscreteSsm& ssm, const Vec& x0,
                        const TimeSeriesFrame& inputs);

/// Steady state (I - Phi)^{-1} Gamma u for a constant input.
Vec steady_state(const thermal::DiscreteSsm& ssm, const Vec& u);

/// Fine-grid measurement stand-in: 1-D conduction through the wall on
/// `cells` finite-volume nodes, implicit Euler in time, Robin exterior
/// boundary and (by default) adiabatic interior. Sensors are placed at
/// fractional depths measured from the interior face and reported as the
/// named channels.
struct FdWallConfig {
  int cells = 20;
  thermal::WallSpec wall;
  std::vector<double> sensor_depths{0.25, 0.75};  // fraction of w, interior face = 0
  std::vector<std::string> sensor_names{"T_ext1", "T_ext2"};

  void validate() const;
};

/// Prefactored implicit-Euler stepper for the wall slab. Grid cell 0 sits
/// at the exterior face, cell N-1 at the interior face. All energies are
/// per square meter of wall face.
class FdWall {
 public:
  FdWall(const FdWallConfig& config, double dt_seconds);

  int cells() const { return static_cast<int>(profile_.size()); }
  const Vec& profile() const { return profile_; }
  void set_uniform(double temperature_c);
  void set_profile(const Vec& profile);

  /// Advances one step holding the boundary drive constant; returns the
  /// energy (J/m^2) that entered through the boundaries during the step.
  double step(double t_ext, std::optional<double> t_int = std::nullopt);

  /// Heat content relative to 0 degC, J/m^2.
  double stored_energy() const;

  /// Linear interpolation at a fractional depth from the interior face.
  double sample(double depth_fraction) const;

 private:
  FdWallConfig config_;
  double dt_;
  double dx_;
  double cell_capacity_;   // J/(K m^2)
  double u_boundary_out_;  // W/(K m^2), film + half-cell conduction
  double u_boundary_in_;   // W/(K m^2), 0 when the indoor branch is off
  Vec profile_;
  Eigen::PartialPivLU<Mat> solver_;
};

/// Runs the FD wall over the T_ext (and optional T_int) input channels and
/// samples the sensors each step. Row t of the result corresponds to row t
/// of the inputs; row 0 is the initial profile.
TimeSeriesFrame fd_simulate(const FdWallConfig& config,
                            const TimeSeriesFrame& inputs,
                            const Vec& initial_profile);
TimeSeriesFrame fd_simulate(const FdWallConfig& config,
                            const TimeSeriesFrame& inputs,
                            double uniform_initial_c);

/// Elementwise Gaussian perturbation, deterministic per seed.
TimeSeriesFrame add_noise(const TimeSeriesFrame& frame, double mean, double sd,
                          std::uint64_t seed);

}  // namespace walign::sim
