#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "bdgeo/bd.hpp"
#include "bdgeo/format.hpp"
#include "bdgeo/geometry.hpp"
#include "bdgeo/linalg.hpp"
#include "bdgeo/measures.hpp"
#include "bdgeo/oracle.hpp"
#include "bdgeo/rng.hpp"

/// Command layer. Each cmd_* function does the work of one CLI subcommand
/// against explicit streams and returns the process exit code, so the whole
/// surface is exercisable in tests without spawning a binary.
///
/// Exit code contract: 0 success, 1 input error, 2 numerical or
/// certification failure.
namespace bdgeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNumericalError = 2;

struct SpecError : std::invalid_argument {
  explicit SpecError(const std::string& what) : std::invalid_argument(what) {}
};

/// A state given either as Bell probabilities p or correlation coordinates
/// t; exactly one of the two is present.
struct StateSpec {
  std::optional<std::array<double, 4>> p;
  std::optional<std::array<double, 3>> t;
};

namespace detail {

template <std::size_t N>
std::array<double, N> number_array(const nlohmann::json& node,
                                   const std::string& key) {
  if (!node.is_array() || node.size() != N)
    throw SpecError("\"" + key + "\" must be an array of " +
                    std::to_string(N) + " numbers");
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    if (!node[i].is_number())
      throw SpecError("\"" + key + "\" entries must be numbers");
    out[i] = node[i].get<double>();
  }
  return out;
}

}  // namespace detail

/// Parses a state spec document: a JSON object carrying exactly one of
/// "p" (four probabilities) or "t" (three correlation coordinates).
inline StateSpec parse_state_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("state spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("state spec must be a JSON object");

  const bool has_p = doc.contains("p");
  const bool has_t = doc.contains("t");
  if (has_p == has_t)
    throw SpecError("state spec must carry exactly one of \"p\" or \"t\"");
  for (const auto& item : doc.items())
    if (item.key() != "p" && item.key() != "t")
      throw SpecError("unknown state spec key \"" + item.key() + "\"");

  StateSpec spec;
  if (has_p)
    spec.p = detail::number_array<4>(doc["p"], "p");
  else
    spec.t = detail::number_array<3>(doc["t"], "t");
  return spec;
}

inline bd::BDState make_state(const StateSpec& spec) {
  return spec.p.has_value() ? bd::from_probs(*spec.p) : bd::from_tvec(*spec.t);
}

namespace detail {

inline std::string region_json_fields(const bd::Region& region) {
  if (region.is_separable()) return "\"region\":\"separable\",\"bell_vertex\":null";
  return "\"region\":\"entangled\",\"bell_vertex\":" +
         std::to_string(region.vertex());
}

inline std::string state_json(const bd::BDState& s) {
  return "{\"p\":" + format_array(s.p().values()) +
         ",\"t\":" + format_array(s.t().values()) + "}";
}

inline std::string witness_json(const std::optional<oracle::SeparableMixer>& w) {
  if (!w.has_value()) return "null";
  if (w->kind() == oracle::SeparableMixer::Kind::BDPoint)
    return "{\"kind\":\"bd_point\",\"t\":" + format_array(w->t().values()) + "}";
  std::string out = "{\"kind\":\"product_mixture\",\"terms\":[";
  bool first = true;
  for (const oracle::ProductTerm& term : w->terms()) {
    if (!first) out += ",";
    first = false;
    const auto amp = [](const linalg::Complex& z) {
      return "[" + format_double(z.real()) + "," + format_double(z.imag()) + "]";
    };
    out += "{\"weight\":" + format_double(term.weight) + ",\"state_a\":[" +
           amp(term.state_a[0]) + "," + amp(term.state_a[1]) +
           "],\"state_b\":[" + amp(term.state_b[0]) + "," +
           amp(term.state_b[1]) + "]}";
  }
  return out + "]}";
}

inline std::string report_json(const std::string& name,
                               const oracle::OracleReport& report) {
  std::string out = "{\"name\":" + json_string(name);
  out += ",\"claim\":";
  out += report.claim == oracle::OracleReport::Claim::Equality
             ? "\"equality\""
             : "\"lower_bound\"";
  out += ",\"closed_form\":" + format_double(report.closed_form);
  out += ",\"numeric_value\":" + format_double(report.numeric_value);
  out += ",\"gap\":" + format_double(report.gap);
  out += ",\"samples_tried\":" + std::to_string(report.samples_tried);
  out += ",\"tolerance\":" + format_double(report.tolerance);
  if (report.grid_gap.has_value()) {
    out += ",\"grid_gap\":" + format_double(*report.grid_gap);
    out += ",\"grid_bound\":" + format_double(*report.grid_bound);
  }
  out += ",\"witness\":" + witness_json(report.witness);
  out += std::string(",\"valid\":") + (report.valid() ? "true" : "false");
  return out + "}";
}

}  // namespace detail

/// `measures`: closed-form report for one state.
inline int cmd_measures(const StateSpec& spec, std::ostream& out,
                        std::ostream& err) {
  std::optional<bd::BDState> state;
  try {
    state = make_state(spec);
  } catch (const std::invalid_argument& e) {
    err << "invalid state spec: " << e.what() << "\n";
    return kExitInputError;
  }
  try {
    const measures::RobustnessCertificate cert = measures::robustness(*state);
    out << "{\"p\":" << format_array(state->p().values())
        << ",\"t\":" << format_array(state->t().values()) << ","
        << detail::region_json_fields(cert.region)
        << ",\"level\":" << format_double(cert.level)
        << ",\"concurrence\":" << format_double(measures::concurrence(*state))
        << ",\"robustness\":" << format_double(cert.s)
        << ",\"t_prime\":" << format_array(cert.t_prime.values())
        << ",\"t_double_prime\":" << format_array(cert.t_double_prime.values())
        << ",\"random_robustness\":"
        << format_double(measures::random_robustness(*state)) << "}\n";
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalError;
  }
  return kExitOk;
}

/// `verify`: oracle certification of the closed forms for one state.
inline int cmd_verify(const StateSpec& spec, long n_random, long grid_n,
                      std::uint64_t seed, double tol, std::ostream& out,
                      std::ostream& err) {
  if (!(tol > 0.0)) {
    err << "invalid tolerance: must be > 0\n";
    return kExitInputError;
  }
  if (n_random < 0 || grid_n < 2) {
    err << "invalid search parameters: need samples >= 0 and grid >= 2\n";
    return kExitInputError;
  }
  std::optional<bd::BDState> state;
  try {
    state = make_state(spec);
  } catch (const std::invalid_argument& e) {
    err << "invalid state spec: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    std::vector<std::string> reports;
    bool all_valid = true;

    const oracle::OracleReport random_report =
        oracle::random_robustness_numeric(*state, tol);
    reports.push_back(detail::report_json("random_robustness", random_report));
    all_valid = all_valid && random_report.valid();

    if (bd::classify(*state).is_entangled()) {
      const oracle::OracleReport search_report =
          oracle::absolute_robustness_search(*state, n_random, grid_n, seed, tol);
      reports.push_back(
          detail::report_json("absolute_robustness_search", search_report));
      all_valid = all_valid && search_report.valid();
    }

    out << "{\"state\":" << detail::state_json(*state) << ",\"reports\":[";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i != 0) out << ",";
      out << reports[i];
    }
    out << "],\"all_valid\":" << (all_valid ? "true" : "false") << "}\n";
    return all_valid ? kExitOk : kExitNumericalError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalError;
  }
}

/// `geometry`: emit the state-space geometry as CSV or JSON.
inline int cmd_geometry(const std::optional<StateSpec>& spec,
                        const std::string& format,
                        const std::string& out_path, std::ostream& err) {
  if (format != "csv" && format != "json") {
    err << "invalid format \"" << format << "\": expected csv or json\n";
    return kExitInputError;
  }
  std::optional<bd::BDState> state;
  if (spec.has_value()) {
    try {
      state = make_state(*spec);
    } catch (const std::invalid_argument& e) {
      err << "invalid state spec: " << e.what() << "\n";
      return kExitInputError;
    }
  }
  const GeometryBundle bundle = make_geometry_bundle(state);
  const std::string payload =
      format == "csv" ? geometry_csv(bundle) : geometry_json(bundle);

  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "cannot open output path \"" << out_path << "\"\n";
    return kExitInputError;
  }
  file << payload;
  file.flush();
  if (!file) {
    err << "failed writing output path \"" << out_path << "\"\n";
    return kExitInputError;
  }
  return kExitOk;
}

namespace detail {

/// Per-state invariant suite for `batch`. Returns the names of failed
/// checks; empty means the state passed.
inline std::vector<std::string> run_invariant_suite(const bd::BDState& s,
                                                    double eigen_window) {
  std::vector<std::string> failed;
  try {
    const measures::RobustnessCertificate cert = measures::robustness(s);
    const double concurrence = measures::concurrence(s);
    const linalg::DensityMatrix rho = bd::density_matrix(s);
    const double level = bd::l1_norm(s.t());

    if (cert.s != concurrence ||
        measures::random_robustness(s) != 2.0 * cert.s)
      failed.push_back("measures_equalities");

    if (std::abs(measures::concurrence_wootters(rho) - concurrence) > 1e-8)
      failed.push_back("wootters_agreement");

    if (std::abs(level - 1.0) > 1e-8 &&
        bd::classify(s).is_separable() !=
            oracle::is_ppt(rho, oracle::kPsdDecisionTol))
      failed.push_back("ppt_equivalence");

    {
      std::array<double, 3> twirled = bd::twirl(rho).t().values();
      double defect = 0.0;
      for (std::size_t i = 0; i < 3; ++i)
        defect = std::max(defect, std::abs(twirled[i] - s.t()[i]));
      if (defect > 1e-13) failed.push_back("twirl_roundtrip");
    }

    if (cert.region.is_entangled()) {
      const auto [rho_prime, rho_double_prime] =
          measures::optimal_separable_matrices(s);
      const linalg::Matrix4 residual =
          (1.0 + cert.s) * rho_prime.matrix() - rho.matrix() -
          cert.s * rho_double_prime.matrix();
      if (residual.max_abs() > 1e-12) failed.push_back("mixing_identity");

      // rho' saturates a partial-transpose facet of the separable set,
      // rho'' a positivity facet; both must stay PPT.
      const double pt_prime =
          oracle::detail::min_pt_eigenvalue(rho_prime.matrix());
      const double pt_double_prime =
          oracle::detail::min_pt_eigenvalue(rho_double_prime.matrix());
      const double rank_margin =
          linalg::hermitian_eigenvalues(rho_double_prime.matrix(), 1e-12)[0];
      if (std::abs(bd::l1_norm(cert.t_prime) - 1.0) > 1e-12 ||
          std::abs(bd::l1_norm(cert.t_double_prime) - 1.0) > 1e-12 ||
          std::abs(pt_prime) > eigen_window ||
          pt_double_prime < -eigen_window ||
          std::abs(rank_margin) > eigen_window)
        failed.push_back("boundary_saturation");
    }
  } catch (const std::exception&) {
    failed.push_back("numerical_exception");
  }
  return failed;
}

}  // namespace detail

/// `batch`: run the invariant suite over n seeded tetrahedron samples.
inline int cmd_batch(long n, std::uint64_t seed, double tol, std::ostream& out,
                     std::ostream& err) {
  if (n < 1) {
    err << "invalid sample count: need n >= 1\n";
    return kExitInputError;
  }
  if (!(tol > 0.0)) {
    err << "invalid tolerance: must be > 0\n";
    return kExitInputError;
  }

  static const std::vector<std::string> kChecks = {
      "measures_equalities", "wootters_agreement",  "ppt_equivalence",
      "twirl_roundtrip",     "mixing_identity",     "boundary_saturation",
      "numerical_exception"};

  rng::Engine gen(seed);
  std::map<std::string, long> check_failures;
  for (const std::string& name : kChecks) check_failures[name] = 0;

  long passed = 0;
  std::vector<std::string> counterexamples;
  for (long i = 0; i < n; ++i) {
    const bd::BDState s = bd::sample_tetrahedron(gen);
    const std::vector<std::string> failed = detail::run_invariant_suite(s, tol);
    if (failed.empty()) {
      ++passed;
      continue;
    }
    for (const std::string& name : failed) ++check_failures[name];
    if (counterexamples.size() < 10) {
      std::string entry = "{\"t\":" + format_array(s.t().values()) +
                          ",\"failed_checks\":[";
      for (std::size_t k = 0; k < failed.size(); ++k) {
        if (k != 0) entry += ",";
        entry += json_string(failed[k]);
      }
      counterexamples.push_back(entry + "]}");
    }
  }

  const long failed_states = n - passed;
  out << "{\"n\":" << n << ",\"seed\":" << seed
      << ",\"tol\":" << format_double(tol) << ",\"states_passed\":" << passed
      << ",\"states_failed\":" << failed_states << ",\"check_failures\":{";
  bool first = true;
  for (const std::string& name : kChecks) {
    if (!first) out << ",";
    first = false;
    out << json_string(name) << ":" << check_failures[name];
  }
  out << "},\"counterexamples\":[";
  for (std::size_t k = 0; k < counterexamples.size(); ++k) {
    if (k != 0) out << ",";
    out << counterexamples[k];
  }
  out << "]}\n";
  return failed_states == 0 ? kExitOk : kExitNumericalError;
}

/// `sample`: emit one uniform tetrahedron state as a spec document.
inline int cmd_sample(std::uint64_t seed, std::ostream& out, std::ostream&) {
  rng::Engine gen(seed);
  const bd::BDState s = bd::sample_tetrahedron(gen);
  out << "{\"t\":" << format_array(s.t().values()) << "}\n";
  return kExitOk;
}

}  // namespace bdgeo::cli
