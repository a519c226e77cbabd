#include "walign/thermal.hpp"

#include <stdexcept>
#include <string>

#include "walign/numerics.hpp"

namespace walign::thermal {

void MaterialSpec::validate() const {
  if (!(conductivity > 0) || !(density > 0) || !(specific_heat > 0)) {
    throw std::invalid_argument(
        "material: conductivity, density and specific heat must be positive");
  }
}

void WallSpec::validate() const {
  material.validate();
  if (!(thickness > 0)) {
    throw std::invalid_argument("wall: thickness must be positive");
  }
  if (!(layer_volume > 0)) {
    throw std::invalid_argument("wall: layer volume must be positive");
  }
  if (h_out < 0 || h_in < 0) {
    throw std::invalid_argument("wall: film coefficients must be >= 0");
  }
}

WallSpec WallSpec::brick(double thickness_m, double face_area_m2,
                         double h_out) {
  WallSpec spec;
  spec.thickness = thickness_m;
  spec.layer_volume = face_area_m2 * thickness_m;
  spec.material = kRedBrick;
  spec.h_out = h_out;
  spec.validate();
  return spec;
}

void RcParameters::validate() const {
  if (!(c_ext1 > 0) || !(c_ext2 > 0)) {
    throw std::invalid_argument("rc: capacitances must be positive");
  }
  if (!(u_cond > 0)) {
    throw std::invalid_argument("rc: conduction U-value must be positive");
  }
  if (u_out < 0 || (u_in && *u_in < 0)) {
    throw std::invalid_argument("rc: film U-values must be >= 0");
  }
}

void StateSpaceModel::validate() const {
  const Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("ssm: A must be square");
  if (b.rows() != n) throw std::invalid_argument("ssm: B row mismatch");
  if (c.cols() != n) throw std::invalid_argument("ssm: C column mismatch");
  if (d.rows() != c.rows() || d.cols() != b.cols()) {
    throw std::invalid_argument("ssm: D shape mismatch");
  }
  if (static_cast<Index>(state_names.size()) != n ||
      static_cast<Index>(input_names.size()) != b.cols() ||
      static_cast<Index>(output_names.size()) != c.rows()) {
    throw std::invalid_argument("ssm: name lists do not match dimensions");
  }
  numerics::require_finite(a, "ssm A");
  numerics::require_finite(b, "ssm B");
  numerics::require_finite(c, "ssm C");
  numerics::require_finite(d, "ssm D");
}

RcParameters derive_rc(const WallSpec& spec) {
  spec.validate();
  const double area = spec.face_area();
  RcParameters rc;
  rc.c_ext1 = spec.material.specific_heat * spec.material.density *
              spec.layer_volume;
  rc.c_ext2 = rc.c_ext1;
  rc.u_cond = spec.material.conductivity * area / spec.thickness;
  rc.u_out = spec.h_out * area;
  if (spec.indoor_branch) rc.u_in = spec.h_in * area;
  rc.validate();
  return rc;
}

StateSpaceModel build_ssm(const RcParameters& rc) {
  rc.validate();
  StateSpaceModel ssm;
  const Index inputs = rc.u_in ? 2 : 1;
  ssm.a.setZero(2, 2);
  ssm.a(0, 0) = -rc.u_cond / rc.c_ext1;
  ssm.a(0, 1) = rc.u_cond / rc.c_ext1;
  ssm.a(1, 0) = rc.u_cond / rc.c_ext2;
  ssm.a(1, 1) = -(rc.u_cond + rc.u_out) / rc.c_ext2;
  ssm.b.setZero(2, inputs);
  ssm.b(1, 0) = rc.u_out / rc.c_ext2;
  if (rc.u_in) {
    ssm.a(0, 0) -= *rc.u_in / rc.c_ext1;
    ssm.b(0, 1) = *rc.u_in / rc.c_ext1;
  }
  ssm.c.setZero(1, 2);
  ssm.c(0, 0) = 1.0;
  ssm.d.setZero(1, inputs);
  ssm.state_names = {"T_ext1", "T_ext2"};
  ssm.input_names = rc.u_in ? std::vector<std::string>{"T_ext", "T_int"}
                            : std::vector<std::string>{"T_ext"};
  ssm.output_names = {"T_ext1"};
  ssm.validate();
  return ssm;
}

StateSpaceModel wall_ssm(const WallSpec& spec) {
  return build_ssm(derive_rc(spec));
}

StateSpaceModel explicit_ssm(Mat a, Mat b) {
  StateSpaceModel ssm;
  const Index n = a.rows();
  const Index p = b.cols();
  ssm.a = std::move(a);
  ssm.b = std::move(b);
  ssm.c.setZero(1, n);
  ssm.c(0, 0) = 1.0;
  ssm.d.setZero(1, p);
  if (n == 2 && p == 1) {
    ssm.state_names = {"T_ext1", "T_ext2"};
    ssm.input_names = {"T_ext"};
    ssm.output_names = {"T_ext1"};
  } else {
    for (Index i = 0; i < n; ++i)
      ssm.state_names.push_back("x" + std::to_string(i + 1));
    for (Index i = 0; i < p; ++i)
      ssm.input_names.push_back("u" + std::to_string(i + 1));
    ssm.output_names = {ssm.state_names.empty() ? std::string("y1")
                                                : ssm.state_names.front()};
  }
  ssm.validate();
  return ssm;
}

DiscreteSsm discretize(const StateSpaceModel& ssm, double dt_seconds) {
  ssm.validate();
  if (!(dt_seconds > 0)) {
    throw std::invalid_argument("discretize: dt must be positive");
  }
  DiscreteSsm out;
  out.phi = numerics::expm_dt(ssm.a, dt_seconds);
  Eigen::FullPivLU<Mat> lu(ssm.a);
  if (!lu.isInvertible()) {
    throw NumericalError(
        "discretize: A is singular (non-dissipative wall); zero-order hold "
        "needs an invertible state matrix");
  }
  const Index n = ssm.state_count();
  out.gamma = lu.solve((out.phi - Mat::Identity(n, n)) * ssm.b);
  out.c = ssm.c;
  out.d = ssm.d;
  out.dt = dt_seconds;
  out.state_names = ssm.state_names;
  out.input_names = ssm.input_names;
  out.output_names = ssm.output_names;
  return out;
}

rom::Subspace source_subspace(const StateSpaceModel& ssm) {
  ssm.validate();
  const bool symmetric = numerics::is_symmetric(ssm.a);
  const auto dec = numerics::eig(ssm.a);
  if (!dec.is_real) {
    throw NumericalError(
        "source_subspace: A has complex eigenvectors; only real modal bases "
        "are usable as alignment subspaces");
  }
  rom::Subspace sub;
  sub.basis = dec.real_vectors();
  sub.eigenvalues = dec.eigenvalues;
  sub.orthonormal = symmetric;
  sub.origin = rom::SubspaceOrigin::physics;
  sub.validate();
  return sub;
}

}  // namespace walign::thermal
