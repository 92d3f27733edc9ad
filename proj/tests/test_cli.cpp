#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "bdgeo/cli.hpp"

using namespace bdgeo;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

struct CommandResult {
  int exit_code;
  std::string out;
  std::string err;
};

template <typename Fn>
CommandResult run(Fn&& fn) {
  std::ostringstream out, err;
  const int code = fn(out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("state spec parsing") {
  const cli::StateSpec p_spec = cli::parse_state_spec("{\"p\":[0,0,0,1]}");
  REQUIRE(p_spec.p.has_value());
  REQUIRE_FALSE(p_spec.t.has_value());

  const cli::StateSpec t_spec = cli::parse_state_spec("{\"t\":[0.1,-0.2,0.3]}");
  REQUIRE(t_spec.t.has_value());

  REQUIRE_THROWS_AS(cli::parse_state_spec("{\"p\":[0.3,0.3,0.4]}"),
                    cli::SpecError);  // three probabilities
  REQUIRE_THROWS_AS(cli::parse_state_spec("{\"p\":[0,0,0,1],\"t\":[0,0,0]}"),
                    cli::SpecError);
  REQUIRE_THROWS_AS(cli::parse_state_spec("{}"), cli::SpecError);
  REQUIRE_THROWS_AS(cli::parse_state_spec("{\"q\":[1,0,0,0]}"), cli::SpecError);
  REQUIRE_THROWS_AS(cli::parse_state_spec("not json"), cli::SpecError);
  REQUIRE_THROWS_AS(cli::parse_state_spec("{\"t\":[0,0,\"x\"]}"),
                    cli::SpecError);
}

TEST_CASE("measures command on the singlet") {
  const auto result = run([&](auto& out, auto& err) {
    return cli::cmd_measures(cli::parse_state_spec("{\"p\":[0,0,0,1]}"), out, err);
  });
  REQUIRE(result.exit_code == cli::kExitOk);

  const json doc = json::parse(result.out);
  REQUIRE(doc["region"] == "entangled");
  REQUIRE(doc["bell_vertex"] == 4);
  REQUIRE(doc["concurrence"].get<double>() == 1.0);
  REQUIRE(doc["robustness"].get<double>() == 1.0);
  REQUIRE(doc["random_robustness"].get<double>() == 2.0);
  REQUIRE(doc["level"].get<double>() == 3.0);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(doc["t"][i].get<double>() == -1.0);
    REQUIRE(doc["t_prime"][i].get<double>() ==
            Catch::Approx(-1.0 / 3).margin(1e-15));
    REQUIRE(doc["t_double_prime"][i].get<double>() ==
            Catch::Approx(1.0 / 3).margin(1e-15));
  }
}

TEST_CASE("measures command on the maximally mixed state") {
  const auto result = run([&](auto& out, auto& err) {
    return cli::cmd_measures(cli::parse_state_spec("{\"t\":[0,0,0]}"), out, err);
  });
  REQUIRE(result.exit_code == cli::kExitOk);
  const json doc = json::parse(result.out);
  REQUIRE(doc["region"] == "separable");
  REQUIRE(doc["bell_vertex"].is_null());
  REQUIRE(doc["concurrence"].get<double>() == 0.0);
  REQUIRE(doc["robustness"].get<double>() == 0.0);
  REQUIRE(doc["random_robustness"].get<double>() == 0.0);
}

TEST_CASE("measures command rejects invalid states") {
  const auto result = run([&](auto& out, auto& err) {
    return cli::cmd_measures(cli::parse_state_spec("{\"p\":[0.5,0.5,0.5,-0.5]}"),
                             out, err);
  });
  REQUIRE(result.exit_code == cli::kExitInputError);
  REQUIRE(result.out.empty());
  REQUIRE_FALSE(result.err.empty());
}

TEST_CASE("verify command certifies the singlet") {
  const auto result = run([&](auto& out, auto& err) {
    return cli::cmd_verify(cli::parse_state_spec("{\"p\":[0,0,0,1]}"),
                           /*n_random=*/100, /*grid_n=*/11, /*seed=*/5,
                           /*tol=*/1e-7, out, err);
  });
  REQUIRE(result.exit_code == cli::kExitOk);

  const json doc = json::parse(result.out);
  REQUIRE(doc["all_valid"] == true);
  REQUIRE(doc["reports"].size() == 2);
  REQUIRE(doc["reports"][0]["name"] == "random_robustness");
  REQUIRE(std::abs(doc["reports"][0]["gap"].get<double>()) < 1e-6);
  REQUIRE(doc["reports"][1]["name"] == "absolute_robustness_search");
  REQUIRE(doc["reports"][1]["gap"].get<double>() >= -1e-9);
  REQUIRE(doc["reports"][1]["witness"]["kind"] == "bd_point");
}

TEST_CASE("verify command on a separable state is trivial") {
  const auto result = run([&](auto& out, auto& err) {
    return cli::cmd_verify(cli::parse_state_spec("{\"t\":[0.2,-0.1,0.3]}"), 50,
                           11, 3, 1e-7, out, err);
  });
  REQUIRE(result.exit_code == cli::kExitOk);
  const json doc = json::parse(result.out);
  REQUIRE(doc["reports"].size() == 1);
  REQUIRE(doc["reports"][0]["numeric_value"].get<double>() == 0.0);
}

TEST_CASE("verify command validates the tolerance") {
  const auto result = run([&](auto& out, auto& err) {
    return cli::cmd_verify(cli::parse_state_spec("{\"p\":[0,0,0,1]}"), 50, 11,
                           3, 0.0, out, err);
  });
  REQUIRE(result.exit_code == cli::kExitInputError);
}

TEST_CASE("verify command is deterministic") {
  const auto once = run([&](auto& out, auto& err) {
    return cli::cmd_verify(cli::parse_state_spec("{\"t\":[-0.5,-0.5,-0.6]}"),
                           200, 11, 42, 1e-7, out, err);
  });
  const auto twice = run([&](auto& out, auto& err) {
    return cli::cmd_verify(cli::parse_state_spec("{\"t\":[-0.5,-0.5,-0.6]}"),
                           200, 11, 42, 1e-7, out, err);
  });
  REQUIRE(once.exit_code == cli::kExitOk);
  REQUIRE(once.out == twice.out);
}

TEST_CASE("geometry command emits the bare bundle") {
  const auto csv_path = temp_file("bdgeo_test_geometry.csv");
  std::ostringstream err;
  REQUIRE(cli::cmd_geometry(std::nullopt, "csv", csv_path.string(), err) ==
          cli::kExitOk);
  const std::string csv = slurp(csv_path);

  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  REQUIRE(line == "label,x,y,z");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  REQUIRE(rows == 4 + 6 + 8);
  REQUIRE(csv.find("tetra_vertex_1,1,-1,1") != std::string::npos);
  REQUIRE(csv.find("octa_vertex_1,1,0,0") != std::string::npos);
  std::filesystem::remove(csv_path);
}

TEST_CASE("geometry command emits the singlet segment") {
  const auto json_path = temp_file("bdgeo_test_geometry.json");
  std::ostringstream err;
  const cli::StateSpec spec = cli::parse_state_spec("{\"p\":[0,0,0,1]}");
  REQUIRE(cli::cmd_geometry(spec, "json", json_path.string(), err) ==
          cli::kExitOk);
  const json doc = json::parse(slurp(json_path));

  REQUIRE(doc["tetra_vertices"].size() == 4);
  REQUIRE(doc["octa_vertices"].size() == 6);
  REQUIRE(doc["face_planes"].size() == 8);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(doc["state"]["t"][i].get<double>() == -1.0);
    REQUIRE(doc["state"]["t_prime"][i].get<double>() ==
            Catch::Approx(-1.0 / 3).margin(1e-15));
    REQUIRE(doc["state"]["t_double_prime"][i].get<double>() ==
            Catch::Approx(1.0 / 3).margin(1e-15));
  }

  // byte-stable across runs
  const auto again_path = temp_file("bdgeo_test_geometry_again.json");
  REQUIRE(cli::cmd_geometry(spec, "json", again_path.string(), err) ==
          cli::kExitOk);
  REQUIRE(slurp(json_path) == slurp(again_path));
  std::filesystem::remove(json_path);
  std::filesystem::remove(again_path);
}

TEST_CASE("geometry command reports unwritable paths") {
  std::ostringstream err;
  REQUIRE(cli::cmd_geometry(std::nullopt, "csv",
                            "/nonexistent_dir_bdgeo/out.csv",
                            err) == cli::kExitInputError);
  REQUIRE_FALSE(err.str().empty());
}

TEST_CASE("batch command passes on seeded samples") {
  const auto result = run([&](auto& out, auto& err) {
    return cli::cmd_batch(/*n=*/300, /*seed=*/7, /*tol=*/1e-9, out, err);
  });
  REQUIRE(result.exit_code == cli::kExitOk);
  const json doc = json::parse(result.out);
  REQUIRE(doc["states_passed"] == 300);
  REQUIRE(doc["states_failed"] == 0);
  REQUIRE(doc["counterexamples"].empty());

  const auto again = run([&](auto& out, auto& err) {
    return cli::cmd_batch(300, 7, 1e-9, out, err);
  });
  REQUIRE(again.out == result.out);
}

TEST_CASE("batch command validates arguments") {
  REQUIRE(run([&](auto& out, auto& err) {
            return cli::cmd_batch(0, 7, 1e-9, out, err);
          }).exit_code == cli::kExitInputError);
  REQUIRE(run([&](auto& out, auto& err) {
            return cli::cmd_batch(10, 7, 0.0, out, err);
          }).exit_code == cli::kExitInputError);
}

TEST_CASE("sample command emits a parseable deterministic spec") {
  const auto result = run([&](auto& out, auto& err) {
    return cli::cmd_sample(/*seed=*/99, out, err);
  });
  REQUIRE(result.exit_code == cli::kExitOk);

  const cli::StateSpec spec = cli::parse_state_spec(result.out);
  REQUIRE(spec.t.has_value());
  REQUIRE_NOTHROW(cli::make_state(spec));

  const auto again = run([&](auto& out, auto& err) {
    return cli::cmd_sample(99, out, err);
  });
  REQUIRE(again.out == result.out);

  const auto different = run([&](auto& out, auto& err) {
    return cli::cmd_sample(100, out, err);
  });
  REQUIRE(different.out != result.out);
}
