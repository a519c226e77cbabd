#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "walign/numerics.hpp"
#include "walign/thermal.hpp"

using namespace walign;
using namespace walign::testing;

namespace {

thermal::WallSpec table_wall() { return thermal::WallSpec::brick(0.2); }

}  // namespace

TEST_CASE("derive_rc: tabulated brick wall") {
  const auto rc = thermal::derive_rc(table_wall());
  CHECK(rc.c_ext1 == doctest::Approx(780.0 * 1920.0 * 1.8).epsilon(1e-12));
  CHECK(rc.c_ext2 == doctest::Approx(2'695'680.0).epsilon(1e-12));
  CHECK(rc.u_cond == doctest::Approx(0.72 * 9.0 / 0.2).epsilon(1e-12));
  CHECK(rc.u_out == doctest::Approx(225.0).epsilon(1e-12));
  CHECK(!rc.u_in.has_value());
  CHECK(rc.r_cond() == doctest::Approx(1.0 / 32.4).epsilon(1e-12));
}

TEST_CASE("derive_rc: indoor branch wires the interior film") {
  auto spec = table_wall();
  spec.indoor_branch = true;
  const auto rc = thermal::derive_rc(spec);
  REQUIRE(rc.u_in.has_value());
  CHECK(*rc.u_in == doctest::Approx(8.0 * 9.0).epsilon(1e-12));
}

TEST_CASE("derive_rc: rejects non-positive parameters") {
  auto bad = table_wall();
  bad.thickness = 0.0;
  CHECK_THROWS_AS(thermal::derive_rc(bad), std::invalid_argument);
  bad = table_wall();
  bad.material.density = -1.0;
  CHECK_THROWS_AS(thermal::derive_rc(bad), std::invalid_argument);
}

TEST_CASE("build_ssm: reproduces the published conduction entries") {
  const auto ssm = thermal::build_ssm(thermal::derive_rc(table_wall()));
  CHECK(ssm.a(0, 0) == doctest::Approx(-1.2019e-05).epsilon(0.005));
  CHECK(ssm.a(0, 1) == doctest::Approx(1.2019e-05).epsilon(0.005));
  CHECK(ssm.a(1, 0) == doctest::Approx(1.2019e-05).epsilon(0.005));
  // Exterior entry derived from the tabulated h = 25; the published value
  // (-7.879e-05) corresponds to h = 20 and is intentionally not matched.
  CHECK(ssm.a(1, 1) ==
        doctest::Approx(-(32.4 + 225.0) / 2'695'680.0).epsilon(1e-12));
  CHECK(ssm.b(0, 0) == 0.0);
  CHECK(ssm.b(1, 0) == doctest::Approx(225.0 / 2'695'680.0).epsilon(1e-12));
  CHECK(ssm.c.rows() == 1);
  CHECK(ssm.c(0, 0) == 1.0);
  CHECK(ssm.c(0, 1) == 0.0);
  CHECK(ssm.d(0, 0) == 0.0);
  CHECK(ssm.state_names == std::vector<std::string>{"T_ext1", "T_ext2"});
}

TEST_CASE("build_ssm: A is symmetric when capacitances match") {
  const auto ssm = thermal::build_ssm(thermal::derive_rc(table_wall()));
  CHECK(numerics::is_symmetric(ssm.a));
}

TEST_CASE("build_ssm: adiabatic exterior conserves the state mean") {
  thermal::RcParameters rc;
  rc.c_ext1 = rc.c_ext2 = 1000.0;
  rc.u_cond = 5.0;
  rc.u_out = 0.0;
  const auto ssm = thermal::build_ssm(rc);
  CHECK(ssm.b.cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(ssm.a.row(0).sum()) <= 1e-18);
  CHECK(std::abs(ssm.a.row(1).sum()) <= 1e-18);
}

TEST_CASE("build_ssm: doubling both capacitances halves A and B") {
  auto rc = thermal::derive_rc(table_wall());
  const auto base = thermal::build_ssm(rc);
  rc.c_ext1 *= 2.0;
  rc.c_ext2 *= 2.0;
  const auto doubled = thermal::build_ssm(rc);
  CHECK((doubled.a - 0.5 * base.a).cwiseAbs().maxCoeff() <= 1e-20);
  CHECK((doubled.b - 0.5 * base.b).cwiseAbs().maxCoeff() <= 1e-20);
}

TEST_CASE("build_ssm: indoor branch adds an input column") {
  auto spec = table_wall();
  spec.indoor_branch = true;
  const auto ssm = thermal::wall_ssm(spec);
  CHECK(ssm.input_count() == 2);
  CHECK(ssm.input_names == std::vector<std::string>{"T_ext", "T_int"});
  const double u_in = 8.0 * 9.0;
  CHECK(ssm.a(0, 0) ==
        doctest::Approx(-(32.4 + u_in) / 2'695'680.0).epsilon(1e-12));
  CHECK(ssm.b(0, 1) == doctest::Approx(u_in / 2'695'680.0).epsilon(1e-12));
}

TEST_CASE("discretize: hourly transition magnitudes match the published matrix") {
  const auto ssm = thermal::explicit_ssm(reference_wall_a(),
                                         (Mat(2, 1) << 0.0, 6.6771e-05).finished());
  const auto discrete = thermal::discretize(ssm, 3600.0);
  CHECK((discrete.phi.cwiseAbs() - reference_wall_phi_abs())
            .cwiseAbs()
            .maxCoeff() <= 2e-4);
  CHECK(discrete.dt == 3600.0);
}

TEST_CASE("discretize: dt -> 0 limit") {
  const auto ssm = thermal::wall_ssm(table_wall());
  const auto discrete = thermal::discretize(ssm, 1e-6);
  CHECK((discrete.phi - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(discrete.gamma.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("discretize: dissipative wall keeps Phi inside the unit box") {
  const auto ssm = thermal::wall_ssm(table_wall());
  const auto discrete = thermal::discretize(ssm, 3600.0);
  for (Index r = 0; r < 2; ++r) {
    for (Index c = 0; c < 2; ++c) {
      CHECK(discrete.phi(r, c) >= 0.0);
      CHECK(discrete.phi(r, c) < 1.0);
    }
    CHECK(discrete.phi.row(r).sum() < 1.0);
  }
  // Brute-force series oracle agrees.
  CHECK((discrete.phi - taylor_expm(3600.0 * ssm.a)).cwiseAbs().maxCoeff() <=
        1e-12);
}

TEST_CASE("discretize: singular A is reported") {
  thermal::RcParameters rc;
  rc.c_ext1 = rc.c_ext2 = 1000.0;
  rc.u_cond = 5.0;
  rc.u_out = 0.0;  // adiabatic: A singular, no zero-order hold
  const auto ssm = thermal::build_ssm(rc);
  CHECK_THROWS_AS(thermal::discretize(ssm, 3600.0), NumericalError);
}

TEST_CASE("discretize: spectral radius below one and eig commutation") {
  std::mt19937_64 rng(31);
  const double dts[] = {600.0, 3600.0, 7200.0};
  for (double dt : dts) {
    const auto ssm = thermal::wall_ssm(table_wall());
    const auto discrete = thermal::discretize(ssm, dt);
    const auto a_dec = numerics::eig(ssm.a);
    const auto phi_dec = numerics::eig(discrete.phi);
    for (Index i = 0; i < 2; ++i) {
      const double expected = std::exp(dt * a_dec.real_values()(i));
      CHECK(phi_dec.real_values()(i) ==
            doctest::Approx(expected).epsilon(1e-9));
      CHECK(phi_dec.real_values()(i) < 1.0);
    }
  }
  (void)rng;
}

TEST_CASE("source_subspace: published source eigenvector tables") {
  SUBCASE("0.2 m wall, explicit reference matrix") {
    const auto ssm = thermal::explicit_ssm(
        reference_wall_a(), (Mat(2, 1) << 0.0, 6.6771e-05).finished());
    const auto sub = thermal::source_subspace(ssm);
    Mat expected(2, 2);
    expected << 0.985, -0.172, 0.172, 0.985;
    CHECK(matches_up_to_sign_and_order(sub.basis, expected, 1e-3));
    CHECK(sub.orthonormal);
    CHECK(sub.origin == rom::SubspaceOrigin::physics);
  }
  SUBCASE("0.6 m wall built with the implied film coefficient") {
    const auto ssm =
        thermal::wall_ssm(thermal::WallSpec::brick(0.6, 9.0, reference_h_out));
    const auto sub = thermal::source_subspace(ssm);
    Mat expected(2, 2);
    expected << 0.998, -0.060, 0.060, 0.998;
    CHECK(matches_up_to_sign_and_order(sub.basis, expected, 2e-3));
  }
  SUBCASE("0.8 m wall built with the implied film coefficient") {
    const auto ssm =
        thermal::wall_ssm(thermal::WallSpec::brick(0.8, 9.0, reference_h_out));
    const auto sub = thermal::source_subspace(ssm);
    Mat expected(2, 2);
    expected << 0.999, -0.045, 0.045, 0.999;
    CHECK(matches_up_to_sign_and_order(sub.basis, expected, 2e-3));
  }
}

TEST_CASE("source_subspace: diagonal A gives the identity basis") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = -1e-5;
  a(1, 1) = -2e-5;
  const auto ssm = thermal::explicit_ssm(a, (Mat(2, 1) << 0.0, 1e-5).finished());
  const auto sub = thermal::source_subspace(ssm);
  CHECK(matches_up_to_sign_and_order(sub.basis, Mat::Identity(2, 2), 1e-12));
}

TEST_CASE("source_subspace: orthonormal basis and stable spectrum") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> thickness(0.1, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ssm =
        thermal::wall_ssm(thermal::WallSpec::brick(thickness(rng)));
    const auto sub = thermal::source_subspace(ssm);
    CHECK(sub.orthonormal);
    CHECK((sub.basis.transpose() * sub.basis - Mat::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= tol::orthonormal);
    REQUIRE(sub.eigenvalues.has_value());
    CHECK(sub.eigenvalues->real().maxCoeff() < 0.0);
  }
}

TEST_CASE("source_subspace: complex modal bases are refused") {
  Mat a(2, 2);
  a << 0.0, 1.0, -1.0, 0.0;
  const auto ssm = thermal::explicit_ssm(a, (Mat(2, 1) << 0.0, 1.0).finished());
  CHECK_THROWS_AS(thermal::source_subspace(ssm), NumericalError);
}
