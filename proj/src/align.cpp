#include "walign/align.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "walign/numerics.hpp"

namespace walign::align {

namespace {

constexpr const char* kOutputChannel = "T_ext1";

void check_pairwise(const TimeSeriesFrame& source,
                    const TimeSeriesFrame& target) {
  source.validate();
  target.validate();
  if (source.steps() != target.steps()) {
    throw std::invalid_argument(
        "fit: source and target training windows must have pairwise row "
        "correspondence (equal lengths)");
  }
}

void check_bases(const rom::Subspace& vs, const rom::Subspace& vt,
                 const TimeSeriesFrame& source, const TimeSeriesFrame& target) {
  vs.validate();
  vt.validate();
  if (vs.states() != source.channel_count() ||
      vt.states() != target.channel_count()) {
    throw std::invalid_argument("fit: basis rows must match frame channels");
  }
  if (vs.dim() != vt.dim()) {
    throw std::invalid_argument("fit: source and target bases disagree on d");
  }
}

double rms(const Mat& m) {
  return std::sqrt(m.squaredNorm() / static_cast<double>(m.size()));
}

}  // namespace

std::string method_name(Method m) {
  return m == Method::bergman ? "bergman" : "procrustes";
}

std::string rom_method_name(RomMethod m) {
  return m == RomMethod::pod ? "pod" : "dmd";
}

SimilarityFit fit_similarity(const Mat& source_embedded,
                             const Mat& target_embedded) {
  if (source_embedded.rows() != target_embedded.rows() ||
      source_embedded.cols() != target_embedded.cols()) {
    throw std::invalid_argument("fit_similarity: shapes must match");
  }
  numerics::require_finite(source_embedded, "fit_similarity source");
  numerics::require_finite(target_embedded, "fit_similarity target");

  const double source_energy = source_embedded.squaredNorm();
  if (source_energy <= 0) {
    throw std::invalid_argument(
        "fit_similarity: source window has zero energy, scale undefined");
  }
  const auto dec =
      numerics::svd(source_embedded.transpose() * target_embedded);
  SimilarityFit fit;
  fit.rotation = dec.u * dec.vt;
  fit.scale = dec.singular_values.sum() / source_energy;
  if (!(fit.scale > 0)) {
    throw NumericalError(
        "fit_similarity: optimal scale is not positive (embedded datasets "
        "are uncorrelated)");
  }
  return fit;
}

Mat AlignmentModel::target_aligned_basis() const {
  if (method != Method::bergman) {
    throw std::invalid_argument(
        "target_aligned_basis: only defined for the bergman method");
  }
  return source_basis.basis * bergman_map;
}

void AlignmentModel::validate() const {
  source_basis.validate();
  target_basis.validate();
  if (method == Method::bergman) {
    if (bergman_map.rows() != source_basis.dim() ||
        bergman_map.cols() != target_basis.dim()) {
      throw std::invalid_argument("model: bergman map shape mismatch");
    }
    if (rotation.size() != 0 || scale != 0.0) {
      throw std::invalid_argument(
          "model: procrustes fields populated on a bergman model");
    }
  } else {
    if (bergman_map.size() != 0) {
      throw std::invalid_argument(
          "model: bergman map populated on a procrustes model");
    }
    const Index d = rotation.rows();
    if (d != source_basis.dim() || rotation.cols() != d) {
      throw std::invalid_argument("model: rotation shape mismatch");
    }
    const double defect =
        (rotation.transpose() * rotation - Mat::Identity(d, d))
            .cwiseAbs()
            .maxCoeff();
    if (defect > tol::orthonormal) {
      throw std::invalid_argument("model: rotation is not orthogonal");
    }
    if (!(scale > 0)) {
      throw std::invalid_argument("model: scale must be positive");
    }
    if (translation.size() != d) {
      throw std::invalid_argument("model: translation length mismatch");
    }
  }
  if (source_mean.size() != source_basis.states() ||
      target_mean.size() != target_basis.states()) {
    throw std::invalid_argument("model: mean lengths mismatch");
  }
}

namespace {

AlignmentModel fit_common(const TimeSeriesFrame& source_train,
                          const TimeSeriesFrame& target_train,
                          const rom::Subspace& vs, const rom::Subspace& vt) {
  check_pairwise(source_train, target_train);
  check_bases(vs, vt, source_train, target_train);
  AlignmentModel model;
  model.source_basis = vs;
  model.target_basis = vt;
  const auto source_centered = rom::center(source_train);
  const auto target_centered = rom::center(target_train);
  model.source_mean = source_centered.means;
  model.target_mean = target_centered.means;
  model.source_meta = source_train.meta();
  model.target_meta = target_train.meta();
  return model;
}

}  // namespace

AlignmentModel fit_bergman(const TimeSeriesFrame& source_train,
                           const TimeSeriesFrame& target_train,
                           const rom::Subspace& source_basis,
                           const rom::Subspace& target_basis) {
  AlignmentModel model =
      fit_common(source_train, target_train, source_basis, target_basis);
  model.method = Method::bergman;
  // Closed-form minimizer of ||V_s M - V_t||_F over M for orthonormal V_s.
  model.bergman_map = source_basis.basis.transpose() * target_basis.basis;
  model.validate();
  return model;
}

AlignmentModel fit_procrustes(const TimeSeriesFrame& source_train,
                              const TimeSeriesFrame& target_train,
                              const rom::Subspace& source_basis,
                              const rom::Subspace& target_basis) {
  AlignmentModel model =
      fit_common(source_train, target_train, source_basis, target_basis);
  model.method = Method::procrustes;

  const Mat source_embedded =
      rom::embed(rom::center(source_train), source_basis);
  const Mat target_embedded =
      rom::embed(rom::center(target_train), target_basis);
  const SimilarityFit fit = fit_similarity(source_embedded, target_embedded);
  model.rotation = fit.rotation;
  model.scale = fit.scale;
  model.translation = Vec::Zero(source_basis.dim());
  model.validate();
  return model;
}

TimeSeriesFrame apply(const AlignmentModel& model,
                      const TimeSeriesFrame& source_frame) {
  model.validate();
  source_frame.validate();
  if (source_frame.channels != model.source_meta.channels) {
    throw std::invalid_argument(
        "apply: frame channels do not match the fitted source layout");
  }

  Mat centered = source_frame.values;
  centered.rowwise() -= model.source_mean.transpose();

  Mat aligned_embedded;
  if (model.method == Method::bergman) {
    aligned_embedded = centered * model.target_aligned_basis();
  } else {
    aligned_embedded =
        model.scale * (centered * model.source_basis.basis) * model.rotation;
    aligned_embedded.rowwise() += model.translation.transpose();
  }

  FrameMeta meta = model.target_meta;
  meta.dt = source_frame.dt;
  meta.start_index = source_frame.start_index;
  return rom::lift(aligned_embedded, model.target_basis, model.target_mean,
                   meta);
}

thermal::StateSpaceModel TransferScenario::source_model() const {
  if (source_system) return *source_system;
  if (source_wall) return thermal::wall_ssm(*source_wall);
  throw std::invalid_argument(
      "scenario: needs either a source wall or explicit source matrices");
}

void TransferScenario::validate() const {
  const auto model = source_model();
  if (train_hours < 2 * model.state_count()) {
    throw std::invalid_argument(
        "scenario: train_hours must be at least twice the state count");
  }
  target_wall.validate();
  if (!weather_series) weather.validate();
  if (noise && noise->sd < 0) {
    throw std::invalid_argument("scenario: noise sd must be >= 0");
  }
  if (!(dt > 0)) throw std::invalid_argument("scenario: dt must be positive");
}

ScenarioData simulate_scenario(const TransferScenario& scenario,
                               Index total_hours) {
  scenario.validate();
  if (total_hours < 1) {
    throw std::invalid_argument("scenario: total_hours must be >= 1");
  }

  ScenarioData data;
  data.weather =
      scenario.weather_series
          ? scenario.weather_series->select({"T_ext"})
          : sim::generate_weather(scenario.weather, total_hours, scenario.dt);
  if (data.weather.steps() < total_hours) {
    throw std::invalid_argument(
        "scenario: weather series shorter than the requested window");
  }
  if (data.weather.steps() > total_hours) {
    data.weather = data.weather.slice(0, total_hours);
  }

  // Source: discrete rollout of the physics model from its steady state.
  const auto model = scenario.source_model();
  const auto discrete = thermal::discretize(model, scenario.dt);
  const Vec u0 = data.weather.values.row(0).transpose();
  const Vec x0 = sim::steady_state(discrete, u0);
  data.source = sim::rollout(discrete, x0, data.weather);

  // Target: fine-grid measurement stand-in (or a clone of the source
  // dynamics for self-transfer checks), plus optional sensor noise.
  if (scenario.target_kind == TargetKind::rollout) {
    const auto target_model = thermal::wall_ssm(scenario.target_wall);
    const auto target_discrete = thermal::discretize(target_model, scenario.dt);
    const Vec tx0 = sim::steady_state(target_discrete, u0);
    data.target = sim::rollout(target_discrete, tx0, data.weather)
                      .select(target_model.state_names);
  } else {
    sim::FdWallConfig fd;
    fd.cells = scenario.fd_cells;
    fd.wall = scenario.target_wall;
    data.target = sim::fd_simulate(fd, data.weather, u0(0));
  }

  if (scenario.noise) {
    data.target_clean = data.target;
    data.target = sim::add_noise(data.target, scenario.noise->mean,
                                 scenario.noise->sd, scenario.noise->seed);
  }
  return data;
}

ForecastResult forecast_pipeline(const TransferScenario& scenario,
                                 Index forecast_hours) {
  scenario.validate();
  if (forecast_hours < 1) {
    throw std::invalid_argument("pipeline: forecast_hours must be >= 1");
  }

  const Index total = scenario.train_hours + forecast_hours;
  const auto model = scenario.source_model();
  ScenarioData data = simulate_scenario(scenario, total);
  const TimeSeriesFrame source_full = data.source.select(model.state_names);
  const TimeSeriesFrame& target_full = data.target;
  const std::optional<TimeSeriesFrame>& clean = data.target_clean;

  const TimeSeriesFrame source_train =
      source_full.slice(0, scenario.train_hours);
  const TimeSeriesFrame target_train =
      target_full.slice(0, scenario.train_hours);
  const TimeSeriesFrame source_fc =
      source_full.slice(scenario.train_hours, forecast_hours);
  const TimeSeriesFrame target_fc =
      target_full.slice(scenario.train_hours, forecast_hours);

  // Bases: physics spectrum on the source side, data-driven on the target.
  const rom::Subspace vs = thermal::source_subspace(model);
  const auto target_centered = rom::center(target_train);
  const Index d = vs.dim();
  const rom::Subspace vt = scenario.rom_method == RomMethod::pod
                               ? rom::pod(target_centered, d)
                               : rom::dmd(target_centered, d);

  ForecastResult result;
  result.model = scenario.alignment == Method::bergman
                     ? fit_bergman(source_train, target_train, vs, vt)
                     : fit_procrustes(source_train, target_train, vs, vt);

  result.aligned_train = apply(result.model, source_train);
  result.aligned = apply(result.model, source_fc);
  result.pre_aligned = source_fc;
  result.target = target_fc;
  if (clean) result.target_clean = clean->slice(scenario.train_hours,
                                                forecast_hours);

  // Residuals before and after lifting, over the training window.
  {
    Mat aligned_embedded;
    Mat source_centered = source_train.values;
    source_centered.rowwise() -= result.model.source_mean.transpose();
    if (result.model.method == Method::bergman) {
      aligned_embedded = source_centered * result.model.target_aligned_basis();
    } else {
      aligned_embedded = result.model.scale *
                         (source_centered * vs.basis) * result.model.rotation;
    }
    const Mat target_embedded = rom::embed(target_centered, vt);
    result.embedded_rms_train = rms(aligned_embedded - target_embedded);
    result.lifted_rms_train =
        rms(result.aligned_train.values - target_train.values);
  }

  const auto truth_train = target_train.channel(kOutputChannel);
  const auto truth_fc = target_fc.channel(kOutputChannel);
  result.pre_train =
      metrics::report(truth_train, source_train.channel(kOutputChannel),
                      kOutputChannel, metrics::Window::train);
  result.post_train =
      metrics::report(truth_train, result.aligned_train.channel(kOutputChannel),
                      kOutputChannel, metrics::Window::train);
  result.pre_forecast =
      metrics::report(truth_fc, source_fc.channel(kOutputChannel),
                      kOutputChannel, metrics::Window::forecast);
  result.post_forecast =
      metrics::report(truth_fc, result.aligned.channel(kOutputChannel),
                      kOutputChannel, metrics::Window::forecast);

  TimeSeriesFrame errors;
  errors.dt = target_fc.dt;
  errors.start_index = target_fc.start_index;
  errors.channels = {"error_prealigned", "error_postaligned"};
  errors.values.resize(target_fc.steps(), 2);
  errors.values.col(0) = source_fc.channel(kOutputChannel) - truth_fc;
  errors.values.col(1) = result.aligned.channel(kOutputChannel) - truth_fc;
  errors.validate();
  result.errors = std::move(errors);

  return result;
}

}  // namespace walign::align
