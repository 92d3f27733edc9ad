#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "bdgeo/cli.hpp"

namespace {

using bdgeo::cli::kExitInputError;

/// Reads a state spec document from a file path, or from stdin for "-".
std::string read_spec_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw bdgeo::cli::SpecError("cannot read state file \"" + path + "\"");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

std::optional<bdgeo::cli::StateSpec> load_spec(const std::string& path) {
  return bdgeo::cli::parse_state_spec(read_spec_text(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Geometry, entanglement measures and numerical certification for "
      "Bell-decomposable two-qubit states"};
  app.require_subcommand(1);

  std::string state_path;
  std::string format;
  std::string out_path;
  long n_random = 1000;
  long grid_n = 21;
  long batch_n = 0;
  std::uint64_t seed = 0;
  double tol = 1e-7;
  double batch_tol = 1e-9;

  CLI::App* measures = app.add_subcommand(
      "measures", "Closed-form measures report for one state");
  measures->add_option("--state", state_path, "state spec file, or - for stdin")
      ->required();

  CLI::App* verify = app.add_subcommand(
      "verify", "Certify the closed forms numerically for one state");
  verify->add_option("--state", state_path, "state spec file, or - for stdin")
      ->required();
  verify->add_option("--samples", n_random, "random separable mixers to try");
  verify->add_option("--grid", grid_n, "BD mixer grid resolution per axis");
  verify->add_option("--seed", seed, "random mixer seed");
  verify->add_option("--tol", tol, "bisection tolerance");

  CLI::App* geometry = app.add_subcommand(
      "geometry", "Emit tetrahedron/octahedron geometry data");
  geometry->add_option("--state", state_path,
                       "optional state spec file, or - for stdin");
  geometry->add_option("--format", format, "csv or json")->required();
  geometry->add_option("--out", out_path, "output file path")->required();

  CLI::App* batch = app.add_subcommand(
      "batch", "Run the invariant suite over seeded random states");
  batch->add_option("--n", batch_n, "number of states")->required();
  batch->add_option("--seed", seed, "sampling seed")->required();
  batch->add_option("--tol", batch_tol,
                    "eigenvalue window for boundary saturation");

  CLI::App* sample =
      app.add_subcommand("sample", "Emit one random BD state spec");
  sample->add_option("--seed", seed, "sampling seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (measures->parsed())
      return bdgeo::cli::cmd_measures(*load_spec(state_path), std::cout,
                                      std::cerr);
    if (verify->parsed())
      return bdgeo::cli::cmd_verify(*load_spec(state_path), n_random, grid_n,
                                    seed, tol, std::cout, std::cerr);
    if (geometry->parsed()) {
      std::optional<bdgeo::cli::StateSpec> spec;
      if (!state_path.empty()) spec = load_spec(state_path);
      return bdgeo::cli::cmd_geometry(spec, format, out_path, std::cerr);
    }
    if (batch->parsed())
      return bdgeo::cli::cmd_batch(batch_n, seed, batch_tol, std::cout,
                                   std::cerr);
    if (sample->parsed())
      return bdgeo::cli::cmd_sample(seed, std::cout, std::cerr);
  } catch (const bdgeo::cli::SpecError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
