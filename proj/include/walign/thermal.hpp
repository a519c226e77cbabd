#pragma once

#include <optional>
#include <string>
#include <vector>

#include "walign/subspace.hpp"
#include "walign/types.hpp"

namespace walign::thermal {

struct MaterialSpec {
  double conductivity;   // W/(m K)
  double density;        // kg/m^3
  double specific_heat;  // J/(kg K)

  void validate() const;
};

inline constexpr MaterialSpec kRedBrick{0.72, 1920.0, 780.0};
inline constexpr MaterialSpec kConcrete{1.3, 2240.0, 840.0};

/// Geometry and surface films of a single homogeneous wall layer. The face
/// area is derived, A = V / w.
struct WallSpec {
  double thickness;     // m
  double layer_volume;  // m^3
  MaterialSpec material = kRedBrick;
  double h_out = 25.0;  // W/(m^2 K), exterior film
  double h_in = 8.0;    // W/(m^2 K), interior film (indoor branch only)
  bool indoor_branch = false;

  double face_area() const { return layer_volume / thickness; }
  void validate() const;

  static WallSpec brick(double thickness_m, double face_area_m2 = 9.0,
                        double h_out = 25.0);
};

/// Two-node RC parameters: conductances stored as U = 1/R.
struct RcParameters {
  double c_ext1;  // J/K, interior node capacitance
  double c_ext2;  // J/K, exterior node capacitance
  double u_cond;  // W/K, node-to-node conduction
  double u_out;   // W/K, exterior film; 0 means adiabatic exterior
  std::optional<double> u_in;  // W/K, interior film when the branch is wired

  double r_cond() const { return 1.0 / u_cond; }
  double r_out() const { return 1.0 / u_out; }
  void validate() const;
};

struct StateSpaceModel {
  Mat a;  // n x n, 1/s
  Mat b;  // n x p, 1/s
  Mat c;  // q x n
  Mat d;  // q x p
  std::vector<std::string> state_names;
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;

  Index state_count() const { return a.rows(); }
  Index input_count() const { return b.cols(); }
  Index output_count() const { return c.rows(); }
  void validate() const;
};

struct DiscreteSsm {
  Mat phi;    // n x n state transition
  Mat gamma;  // n x p discrete input map
  Mat c;
  Mat d;
  double dt;  // seconds
  std::vector<std::string> state_names;
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;

  Index state_count() const { return phi.rows(); }
  Index input_count() const { return gamma.cols(); }
};

/// First-principles RC parameters: C = Cp rho V at each node,
/// U_cond = k A / w, U_out = h_out A, and U_in = h_in A when the indoor
/// branch is enabled.
RcParameters derive_rc(const WallSpec& spec);

/// Heat-balance state matrices over states (T_ext1, T_ext2) with input
/// T_ext and output T_ext1. With the indoor branch enabled the model gains
/// a second input T_int.
StateSpaceModel build_ssm(const RcParameters& rc);

StateSpaceModel wall_ssm(const WallSpec& spec);

/// Explicitly supplied state matrices, bypassing the RC derivation. C and D
/// default to reading the first state.
StateSpaceModel explicit_ssm(Mat a, Mat b);

/// Zero-order-hold discretization: Phi = e^{dt A},
/// Gamma = A^{-1} (Phi - I) B.
DiscreteSsm discretize(const StateSpaceModel& ssm, double dt_seconds);

/// Physics source basis: the eigenvectors of A, with the continuous-time
/// spectrum attached. Orthonormal whenever A is symmetric.
rom::Subspace source_subspace(const StateSpaceModel& ssm);

}  // namespace walign::thermal
