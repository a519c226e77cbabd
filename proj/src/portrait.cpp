#include "walign/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "walign/numerics.hpp"

namespace walign::portrait {

void PortraitRequest::validate() const {
  if (resolution < 2) {
    throw std::invalid_argument("portrait: resolution must be >= 2 per axis");
  }
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw std::invalid_argument("portrait: empty grid bounds");
  }
  if (steps < 1) throw std::invalid_argument("portrait: steps must be >= 1");
}

std::vector<Eigen::Vector2d> PortraitRequest::trajectory_seeds() const {
  if (!initial_states.empty()) return initial_states;
  // Default: eight points on the bounding box, a ring of decay curves.
  const double xm = 0.5 * (x_min + x_max);
  const double ym = 0.5 * (y_min + y_max);
  return {
      {x_min, y_min}, {x_min, ym},    {x_min, y_max}, {xm, y_max},
      {x_max, y_max}, {x_max, ym},    {x_max, y_min}, {xm, y_min},
  };
}

namespace {

PortraitData sample(const Mat& one_step, const Mat& rate, double /*dt*/,
                    const PortraitRequest& request, std::string label) {
  request.validate();
  if (one_step.rows() != 2 || one_step.cols() != 2) {
    throw std::invalid_argument("portrait: operator must be 2x2");
  }

  PortraitData data;
  data.label = std::move(label);
  const Index res = request.resolution;
  data.field.resize(res * res, 4);
  Index row = 0;
  for (Index i = 0; i < res; ++i) {
    const double x = request.x_min +
                     (request.x_max - request.x_min) * double(i) / (res - 1);
    for (Index j = 0; j < res; ++j) {
      const double y = request.y_min +
                       (request.y_max - request.y_min) * double(j) / (res - 1);
      const Eigen::Vector2d v = rate * Eigen::Vector2d(x, y);
      data.field.row(row++) << x, y, v(0), v(1);
    }
  }

  for (const auto& seed : request.trajectory_seeds()) {
    Mat path(request.steps, 2);
    Eigen::Vector2d state = seed;
    for (Index t = 0; t < request.steps; ++t) {
      path.row(t) = state.transpose();
      state = one_step * state;
    }
    data.trajectories.push_back(std::move(path));
  }
  return data;
}

}  // namespace

PortraitData sample_continuous(const Mat& a, double dt_seconds,
                               const PortraitRequest& request,
                               std::string label) {
  numerics::require_finite(a, "portrait A");
  const Mat one_step = numerics::expm_dt(a, dt_seconds);
  const Mat rate = a * 3600.0;  // degC per hour
  return sample(one_step, rate, dt_seconds, request, std::move(label));
}

PortraitData sample_discrete(const Mat& phi, double dt_seconds,
                             const PortraitRequest& request,
                             std::string label) {
  numerics::require_finite(phi, "portrait Phi");
  if (!(dt_seconds > 0)) {
    throw std::invalid_argument("portrait: dt must be positive");
  }
  const Mat rate =
      (phi - Mat::Identity(phi.rows(), phi.cols())) * (3600.0 / dt_seconds);
  return sample(phi, rate, dt_seconds, request, std::move(label));
}

Mat dmd_operator(const rom::Subspace& modes) {
  modes.validate();
  if (!modes.eigenvalues) {
    throw std::invalid_argument("portrait: subspace carries no spectrum");
  }
  if (modes.eigenvalues->imag().cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("portrait: DMD spectrum must be real");
  }
  const Mat pinv =
      modes.basis.completeOrthogonalDecomposition().pseudoInverse();
  return modes.basis * modes.eigenvalues->real().asDiagonal() * pinv;
}

TimeSeriesFrame field_frame(const PortraitData& data, double dt_seconds) {
  return make_frame({dt_seconds, 0, {"x", "y", "vx", "vy"}}, data.field);
}

TimeSeriesFrame trajectory_frame(const PortraitData& data, double dt_seconds) {
  if (data.trajectories.empty()) {
    throw std::invalid_argument("portrait: no trajectories sampled");
  }
  const Index steps = data.trajectories.front().rows();
  Mat values(steps, 2 * static_cast<Index>(data.trajectories.size()));
  std::vector<std::string> channels;
  for (std::size_t k = 0; k < data.trajectories.size(); ++k) {
    values.col(2 * k) = data.trajectories[k].col(0);
    values.col(2 * k + 1) = data.trajectories[k].col(1);
    channels.push_back("traj" + std::to_string(k + 1) + "_x");
    channels.push_back("traj" + std::to_string(k + 1) + "_y");
  }
  return make_frame({dt_seconds, 0, channels}, std::move(values));
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

class SvgPanel {
 public:
  SvgPanel(double x_min, double x_max, double y_min, double y_max,
           double offset_x, double size)
      : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max),
        offset_x_(offset_x), size_(size) {}

  double px(double x) const {
    return offset_x_ + margin_ +
           (x - x_min_) / (x_max_ - x_min_) * (size_ - 2 * margin_);
  }
  double py(double y) const {
    return margin_ + (y_max_ - y) / (y_max_ - y_min_) * (size_ - 2 * margin_);
  }

  void line(std::string& out, double x1, double y1, double x2, double y2,
            const char* stroke, double width) const {
    out += "<line x1=\"" + fmt(px(x1)) + "\" y1=\"" + fmt(py(y1)) +
           "\" x2=\"" + fmt(px(x2)) + "\" y2=\"" + fmt(py(y2)) +
           "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) +
           "\"/>\n";
  }

  void frame_and_label(std::string& out, const std::string& label) const {
    out += "<rect x=\"" + fmt(offset_x_ + margin_) + "\" y=\"" + fmt(margin_) +
           "\" width=\"" + fmt(size_ - 2 * margin_) + "\" height=\"" +
           fmt(size_ - 2 * margin_) +
           "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + fmt(offset_x_ + size_ / 2) + "\" y=\"" +
           fmt(margin_ - 8) + "\" text-anchor=\"middle\" font-size=\"14\" "
           "font-family=\"sans-serif\">" + label + "</text>\n";
  }

  double scale_px() const { return (size_ - 2 * margin_); }

 private:
  double x_min_, x_max_, y_min_, y_max_;
  double offset_x_, size_;
  static constexpr double margin_ = 40.0;
};

}  // namespace

std::string render_svg(const std::vector<PortraitData>& panels,
                       const PortraitRequest& request) {
  if (panels.empty()) {
    throw std::invalid_argument("portrait: nothing to render");
  }
  constexpr double panel_size = 480.0;
  const double width = panel_size * static_cast<double>(panels.size());
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    fmt(width) + "\" height=\"" + fmt(panel_size) + "\">\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& data = panels[p];
    SvgPanel panel(request.x_min, request.x_max, request.y_min, request.y_max,
                   panel_size * static_cast<double>(p), panel_size);
    panel.frame_and_label(out, data.label);

    // Arrow length is normalized per panel so layout survives unit changes.
    double max_speed = 0.0;
    for (Index r = 0; r < data.field.rows(); ++r) {
      max_speed = std::max(max_speed, std::hypot(data.field(r, 2),
                                                 data.field(r, 3)));
    }
    const double cell = (request.x_max - request.x_min) /
                        static_cast<double>(request.resolution - 1);
    for (Index r = 0; r < data.field.rows(); ++r) {
      const double x = data.field(r, 0);
      const double y = data.field(r, 1);
      double vx = data.field(r, 2);
      double vy = data.field(r, 3);
      const double speed = std::hypot(vx, vy);
      if (max_speed > 0 && speed > 0) {
        const double len = 0.8 * cell * speed / max_speed;
        vx *= len / speed;
        vy *= len / speed;
        panel.line(out, x, y, x + vx, y + vy, "#7a9cc6", 1.0);
        // arrow head: short back-strokes at the tip
        const double hx = -0.25 * vx;
        const double hy = -0.25 * vy;
        panel.line(out, x + vx, y + vy, x + vx + hx - 0.5 * hy,
                   y + vy + hy + 0.5 * hx, "#7a9cc6", 1.0);
        panel.line(out, x + vx, y + vy, x + vx + hx + 0.5 * hy,
                   y + vy + hy - 0.5 * hx, "#7a9cc6", 1.0);
      }
    }

    for (const auto& path : data.trajectories) {
      out += "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" "
             "points=\"";
      for (Index t = 0; t < path.rows(); ++t) {
        const double x = std::clamp(path(t, 0), request.x_min, request.x_max);
        const double y = std::clamp(path(t, 1), request.y_min, request.y_max);
        out += fmt(panel.px(x)) + "," + fmt(panel.py(y)) + " ";
      }
      out += "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace walign::portrait
