#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "walign/cli.hpp"
#include "walign/csv.hpp"
#include "walign/numerics.hpp"
#include "walign/thermal.hpp"

using namespace walign;

namespace fs = std::filesystem;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"walign"};
  for (const auto& arg : args) argv.push_back(arg.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "walign_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto path = dir / "scenario.cfg";
  std::ofstream stream(path);
  stream << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream stream(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

const char* kSmallScenario =
    "[source]\nthickness = 0.2\n"
    "[target]\nthickness = 0.2\n"
    "[run]\ntrain_hours = 300\nforecast_hours = 100\n";

}  // namespace

TEST_CASE("cli: missing subcommand is a usage error") {
  CHECK(run_cli({}) == 1);
}

TEST_CASE("cli: unknown grid lists the valid ones") {
  CHECK(run_cli({"reproduce", "--grid", "bogus"}) == 1);
}

TEST_CASE("cli: simulate writes deterministic CSVs") {
  const auto dir = fresh_dir("simulate");
  const auto config = write_config(dir, kSmallScenario);
  const auto out_a = dir / "a";
  const auto out_b = dir / "b";
  REQUIRE(run_cli({"simulate", "--config", config.string(), "--out",
                   out_a.string()}) == 0);
  REQUIRE(run_cli({"simulate", "--config", config.string(), "--out",
                   out_b.string()}) == 0);
  for (const auto* name : {"weather.csv", "source.csv", "target.csv"}) {
    CHECK(fs::exists(out_a / name));
    CHECK(slurp(out_a / name) == slurp(out_b / name));
  }
  // Emitted CSVs are re-ingestable.
  const auto source = csv::read_frame(out_a / "source.csv");
  CHECK(source.steps() == 400);
  CHECK(source.has_channel("T_ext1"));
  CHECK(source.has_channel("y_T_ext1"));
}

TEST_CASE("cli: seed flag changes the generated data") {
  const auto dir = fresh_dir("seeded");
  const auto config = write_config(dir, kSmallScenario);
  const auto out_a = dir / "a";
  const auto out_b = dir / "b";
  REQUIRE(run_cli({"simulate", "--config", config.string(), "--out",
                   out_a.string(), "--seed", "1"}) == 0);
  REQUIRE(run_cli({"simulate", "--config", config.string(), "--out",
                   out_b.string(), "--seed", "2"}) == 0);
  CHECK(slurp(out_a / "weather.csv") != slurp(out_b / "weather.csv"));
}

TEST_CASE("cli: transfer emits reports, model and error channels") {
  const auto dir = fresh_dir("transfer");
  const auto config = write_config(dir, kSmallScenario);
  const auto out = dir / "out";
  REQUIRE(run_cli({"transfer", "--config", config.string(), "--out",
                   out.string()}) == 0);
  for (const auto* name :
       {"aligned.csv", "aligned_train.csv", "pre_aligned.csv", "target.csv",
        "errors.csv", "model.txt", "metrics.txt", "metrics.json"}) {
    CHECK(fs::exists(out / name));
  }
  const auto errors = csv::read_frame(out / "errors.csv");
  CHECK(errors.has_channel("error_prealigned"));
  CHECK(errors.has_channel("error_postaligned"));
  CHECK(errors.steps() == 100);
  const auto aligned = csv::read_frame(out / "aligned.csv");
  CHECK(aligned.steps() == 100);
  CHECK(aligned.start_index == 300);  // forecast window starts after training
  const std::string json = slurp(out / "metrics.json");
  CHECK(json.find("\"cv_rmse_pct\"") != std::string::npos);
  CHECK(json.find("\"improved\"") != std::string::npos);
}

TEST_CASE("cli: transfer annotates the bergman full-rank identity") {
  const auto dir = fresh_dir("bergman");
  const auto config = write_config(
      dir, std::string(kSmallScenario) + "alignment = bergman\n");
  const auto out = dir / "out";
  REQUIRE(run_cli({"transfer", "--config", config.string(), "--out",
                   out.string()}) == 0);
  const std::string report = slurp(out / "metrics.txt");
  CHECK(report.find("identity") != std::string::npos);
}

TEST_CASE("cli: config typos name the offending key and fail validation") {
  const auto dir = fresh_dir("typo");
  const auto config = write_config(
      dir, std::string(kSmallScenario) + "trian_hours = 100\n");
  CHECK(run_cli({"transfer", "--config", config.string(), "--out",
                 (dir / "out").string()}) == 1);
}

TEST_CASE("cli: numerical failures exit with code 2") {
  // DMD on driven measurement data has a complex spectrum and is refused.
  const auto dir = fresh_dir("numfail");
  const auto config = write_config(
      dir, std::string(kSmallScenario) + "rom = dmd\n");
  CHECK(run_cli({"transfer", "--config", config.string(), "--out",
                 (dir / "out").string()}) == 2);
}

TEST_CASE("cli: portrait writes field, trajectories and svg") {
  const auto dir = fresh_dir("portrait");
  const auto config = write_config(
      dir,
      "[source]\nthickness = 0.2\n"
      "[portrait]\nresolution = 7\nsteps = 50\n"
      "trajectories = 10.73 10.82; -7 9\n");
  const auto out = dir / "out";
  REQUIRE(run_cli({"portrait", "--config", config.string(), "--out",
                   out.string()}) == 0);
  CHECK(fs::exists(out / "portrait.svg"));
  const auto field = csv::read_frame(out / "portrait_field_physics.csv");
  CHECK(field.steps() == 49);
  CHECK(field.channels ==
        std::vector<std::string>({"x", "y", "vx", "vy"}));
  const auto traj = csv::read_frame(out / "portrait_traj_physics.csv");
  CHECK(traj.steps() == 50);
  // First trajectory starts at the requested state and decays toward 0.
  CHECK(traj.values(0, 0) == doctest::Approx(10.73));
  CHECK(traj.values(0, 1) == doctest::Approx(10.82));
  CHECK(std::abs(traj.values(49, 0)) < 10.73);
  const std::string svg = slurp(out / "portrait.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("cli: portrait grid validation") {
  const auto dir = fresh_dir("portrait_bad");
  const auto config = write_config(
      dir,
      "[source]\nthickness = 0.2\n[portrait]\nresolution = 1\n");
  CHECK(run_cli({"portrait", "--config", config.string(), "--out",
                 (dir / "out").string()}) == 1);
}

TEST_CASE("cli: side-by-side portrait includes the data-derived panel") {
  const auto dir = fresh_dir("portrait2");
  const auto config = write_config(
      dir, std::string(kSmallScenario) +
               "[portrait]\nside_by_side = true\nresolution = 5\nsteps = 20\n");
  const auto out = dir / "out";
  REQUIRE(run_cli({"portrait", "--config", config.string(), "--out",
                   out.string()}) == 0);
  CHECK(fs::exists(out / "portrait_field_physics.csv"));
  CHECK(fs::exists(out / "portrait_field_dmd.csv"));
  CHECK(fs::exists(out / "portrait_traj_dmd.csv"));
}

TEST_CASE("cli: portraits of thin and thick walls differ by a visible rotation") {
  // The principal directions of the two operators are several degrees
  // apart, which is what the side-by-side export is meant to show.
  const auto thin = thermal::source_subspace(
      thermal::wall_ssm(thermal::WallSpec::brick(0.2)));
  const auto thick = thermal::source_subspace(
      thermal::wall_ssm(thermal::WallSpec::brick(0.6)));
  const double cosine =
      std::abs(thin.basis.col(0).dot(thick.basis.col(0)));
  const double angle_deg = std::acos(std::min(1.0, cosine)) * 180.0 / M_PI;
  CHECK(angle_deg > 5.0);
}

TEST_CASE("cli: a 7000 hour simulate run stays under 10 seconds") {
  const auto dir = fresh_dir("runtime");
  const auto config = write_config(
      dir,
      "[source]\nthickness = 0.2\n[target]\nthickness = 0.2\n"
      "[run]\ntrain_hours = 6000\nforecast_hours = 1000\n");
  const auto start = std::chrono::steady_clock::now();
  REQUIRE(run_cli({"simulate", "--config", config.string(), "--out",
                   (dir / "out").string()}) == 0);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  CHECK(seconds < 10.0);
  const auto target = csv::read_frame(dir / "out" / "target.csv");
  CHECK(target.steps() == 7000);
}

TEST_CASE("cli: reproduce runs the training-size grid") {
  const auto dir = fresh_dir("reproduce");
  REQUIRE(run_cli({"reproduce", "--grid", "training-size", "--out",
                   dir.string()}) == 0);
  const std::string table = slurp(dir / "reproduce_training-size.txt");
  CHECK(table.find("ref_pre%") != std::string::npos);
  CHECK(table.find("2000") != std::string::npos);
  CHECK(table.find("6000") != std::string::npos);
  CHECK(table.find("training") != std::string::npos);  // footnote present
}
