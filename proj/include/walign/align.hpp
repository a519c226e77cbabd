#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "walign/metrics.hpp"
#include "walign/rom.hpp"
#include "walign/sim.hpp"
#include "walign/subspace.hpp"
#include "walign/thermal.hpp"
#include "walign/timeseries.hpp"
#include "walign/types.hpp"

namespace walign::align {

enum class Method { bergman, procrustes };
enum class RomMethod { pod, dmd };
enum class TargetKind { fd, rollout };

std::string method_name(Method m);
std::string rom_method_name(RomMethod m);

/// Similarity fit between two embedded datasets of equal shape: the
/// orthogonal map and positive scale minimizing ||target - s * source * r||_F.
struct SimilarityFit {
  Mat rotation;  // d x d, orthogonal (reflections allowed)
  double scale = 0.0;
};

SimilarityFit fit_similarity(const Mat& source_embedded,
                             const Mat& target_embedded);

/// A fitted subspace-alignment transform, ready to map source-model frames
/// into the target measurement space. Exactly the fields of the chosen
/// method are populated.
struct AlignmentModel {
  Method method = Method::procrustes;
  rom::Subspace source_basis;  // V_s
  rom::Subspace target_basis;  // V_t
  Mat bergman_map;             // M, bergman only
  Mat rotation;                // r, procrustes only
  double scale = 0.0;          // s, procrustes only
  Vec translation;             // t, procrustes only; zero under centering
  Vec source_mean;             // training means, source channels
  Vec target_mean;             // training means, target channels
  FrameMeta source_meta;
  FrameMeta target_meta;

  /// Target-aligned source basis V_a = V_s * M (bergman).
  Mat target_aligned_basis() const;

  void validate() const;
};

AlignmentModel fit_bergman(const TimeSeriesFrame& source_train,
                           const TimeSeriesFrame& target_train,
                           const rom::Subspace& source_basis,
                           const rom::Subspace& target_basis);

AlignmentModel fit_procrustes(const TimeSeriesFrame& source_train,
                              const TimeSeriesFrame& target_train,
                              const rom::Subspace& source_basis,
                              const rom::Subspace& target_basis);

/// Centers with the fitted source means, embeds, transforms, lifts with the
/// target basis and re-adds the fitted target means.
TimeSeriesFrame apply(const AlignmentModel& model,
                      const TimeSeriesFrame& source_frame);

struct NoiseSpec {
  double mean = 0.0;
  double sd = 0.0;
  std::uint64_t seed = 1;
};

/// One transfer experiment: a physics source model, a measured (simulated)
/// target wall, a shared weather drive and the train/forecast split.
struct TransferScenario {
  std::optional<thermal::WallSpec> source_wall;
  std::optional<thermal::StateSpaceModel> source_system;  // explicit matrices
  thermal::WallSpec target_wall;
  TargetKind target_kind = TargetKind::fd;
  sim::WeatherSpec weather;
  std::optional<TimeSeriesFrame> weather_series;  // overrides weather when set
  double dt = 3600.0;
  Index train_hours = 2000;
  RomMethod rom_method = RomMethod::pod;
  Method alignment = Method::procrustes;
  std::optional<NoiseSpec> noise;  // applied to the target measurement
  int fd_cells = 20;

  thermal::StateSpaceModel source_model() const;
  void validate() const;
};

/// All simulated material for one scenario over a full window: the shared
/// weather drive, the source rollout (states plus outputs) and the target
/// measurement with its clean twin when noise is on.
struct ScenarioData {
  TimeSeriesFrame weather;
  TimeSeriesFrame source;  // rollout: state channels + y_ outputs
  TimeSeriesFrame target;  // sensor channels, noisy when configured
  std::optional<TimeSeriesFrame> target_clean;
};

ScenarioData simulate_scenario(const TransferScenario& scenario,
                               Index total_hours);

struct ForecastResult {
  TimeSeriesFrame aligned;        // forecast window, target space
  TimeSeriesFrame pre_aligned;    // raw source-model forecast window
  TimeSeriesFrame target;         // measurement over the forecast window
  TimeSeriesFrame errors;         // error_prealigned / error_postaligned
  TimeSeriesFrame aligned_train;  // training-window reconstruction
  std::optional<TimeSeriesFrame> target_clean;  // set when noise was added
  metrics::MetricsReport pre_train;
  metrics::MetricsReport post_train;
  metrics::MetricsReport pre_forecast;
  metrics::MetricsReport post_forecast;
  double embedded_rms_train = 0.0;  // residual before lifting
  double lifted_rms_train = 0.0;    // residual after lifting
  AlignmentModel model;
};

/// Simulates source and target over train + forecast, fits on the training
/// window and forecasts the remaining hours. Everything downstream of the
/// scenario seed is deterministic.
ForecastResult forecast_pipeline(const TransferScenario& scenario,
                                 Index forecast_hours);

}  // namespace walign::align
