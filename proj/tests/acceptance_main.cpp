// Acceptance suite: one line per criterion, exit code = number of failures.
// Everything runs on fixed seeds; tolerances are pinned in the checks.

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "bdgeo/bd.hpp"
#include "bdgeo/cli.hpp"
#include "bdgeo/linalg.hpp"
#include "bdgeo/measures.hpp"
#include "bdgeo/oracle.hpp"
#include "bdgeo/rng.hpp"
#include "test_support.hpp"

using namespace bdgeo;
using linalg::Matrix4;

namespace {

struct Acceptance {
  int failures = 0;

  void report(int index, const std::string& description, bool ok) {
    std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", index,
                description.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

double min_pt_eigenvalue(const Matrix4& m) {
  return linalg::hermitian_eigenvalues(linalg::partial_transpose(m), 1e-12)[0];
}

}  // namespace

int main() {
  Acceptance acceptance;

  // 1. Singlet closed forms, exact to 1e-12.
  {
    const bd::BDState singlet = bd::from_probs({0, 0, 0, 1});
    const measures::RobustnessCertificate cert = measures::robustness(singlet);
    bool ok = near(cert.s, 1.0, 1e-12) &&
              near(measures::random_robustness(singlet), 2.0, 1e-12);
    for (std::size_t i = 0; i < 3; ++i)
      ok = ok && near(cert.t_prime[i], -1.0 / 3.0, 1e-12) &&
           near(cert.t_double_prime[i], 1.0 / 3.0, 1e-12);
    acceptance.report(1, "singlet closed forms s=1, s0=2, t'=-t''=t/3", ok);
  }

  // 2. The separable pair matches the printed region-4 matrices entrywise.
  {
    rng::Engine gen(201);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
      const bd::BDState s = testing::random_entangled_in_region(gen, 4);
      const auto [rho_prime, rho_double_prime] =
          measures::optimal_separable_matrices(s);
      const auto& t = s.t().values();
      ok = ok &&
           (rho_prime.matrix() - testing::printed_rho_prime(t[0], t[1], t[2]))
                   .max_abs() <= 1e-12 &&
           (rho_double_prime.matrix() -
            testing::printed_rho_double_prime(t[0], t[1], t[2]))
                   .max_abs() <= 1e-12;
    }
    acceptance.report(2, "printed region-4 separable pair, 100 states to 1e-12",
                      ok);
  }

  // 3 & 4. Mixing identity and boundary saturation over 1,000 entangled
  // states drawn from all four regions.
  {
    rng::Engine gen(301);
    std::array<int, 4> region_count{};
    bool mixing_ok = true;
    bool boundary_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
      const bd::BDState s = testing::random_entangled(gen);
      const measures::RobustnessCertificate cert = measures::robustness(s);
      ++region_count[static_cast<std::size_t>(cert.region.vertex() - 1)];

      const auto [rho_prime, rho_double_prime] =
          measures::optimal_separable_matrices(s);
      const Matrix4 residual = (1.0 + cert.s) * rho_prime.matrix() -
                               bd::density_matrix(s).matrix() -
                               cert.s * rho_double_prime.matrix();
      mixing_ok = mixing_ok && residual.max_abs() <= 1e-12;

      // Both members lie on the separable boundary: rho' on a
      // partial-transpose facet (its min PT eigenvalue vanishes, which is
      // also the minimum PT eigenvalue across the pair), rho'' on a
      // positivity facet (rank-deficient, PT strictly positive).
      const double pt_prime = min_pt_eigenvalue(rho_prime.matrix());
      const double pt_double_prime =
          min_pt_eigenvalue(rho_double_prime.matrix());
      const double pair_min_pt = std::min(pt_prime, pt_double_prime);
      const double rank_margin =
          linalg::hermitian_eigenvalues(rho_double_prime.matrix(), 1e-12)[0];
      boundary_ok = boundary_ok &&
                    near(bd::l1_norm(cert.t_prime), 1.0, 1e-12) &&
                    near(bd::l1_norm(cert.t_double_prime), 1.0, 1e-12) &&
                    std::abs(pair_min_pt) <= 1e-9 &&
                    std::abs(pt_prime) <= 1e-9 && pt_double_prime >= -1e-9 &&
                    std::abs(rank_margin) <= 1e-9;
    }
    for (int count : region_count) mixing_ok = mixing_ok && count > 0;
    acceptance.report(3, "mixing identity (1+s)rho' = rho + s rho'' to 1e-12",
                      mixing_ok);
    acceptance.report(
        4, "separable pair sits on the boundary (l1 = 1, PT eigenvalue ~ 0)",
        boundary_ok);
  }

  // 5. Robustness equals concurrence exactly; Wootters agrees to 1e-8.
  {
    rng::Engine gen(501);
    bool ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
      const bd::BDState s = bd::sample_tetrahedron(gen);
      const double closed = measures::concurrence(s);
      ok = ok && measures::robustness(s).s == closed &&
           near(measures::concurrence_wootters(bd::density_matrix(s)), closed,
                1e-8);
    }
    acceptance.report(5, "robustness = concurrence, Wootters route to 1e-8",
                      ok);
  }

  // 6. Random robustness: bisection vs 2C on 200 entangled states, plus the
  // Werner family values.
  {
    rng::Engine gen(601);
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
      const bd::BDState s = testing::random_entangled(gen);
      const oracle::OracleReport report =
          oracle::random_robustness_numeric(s, 1e-7);
      ok = ok && report.valid() && std::abs(report.gap) <= 1e-6;
    }
    const std::array<double, 3> xs{0.4, 0.7, 1.0};
    const std::array<double, 3> s0{0.2, 1.1, 2.0};
    const std::array<double, 3> s1{0.1, 0.55, 1.0};
    for (std::size_t k = 0; k < 3; ++k) {
      const bd::BDState werner = bd::from_tvec({-xs[k], -xs[k], -xs[k]});
      ok = ok && near(measures::random_robustness(werner), s0[k], 1e-8) &&
           near(measures::robustness(werner).s, s1[k], 1e-12);
    }
    acceptance.report(6, "random robustness bisection = 2C; Werner family",
                      ok);
  }

  // 7. Absolute robustness search: the closed form is a certified lower
  // bound and the BD grid attains it at grid resolution.
  {
    rng::Engine gen(701);
    bool ok = true;
    std::vector<bd::BDState> spot_states;
    for (int trial = 0; trial < 100; ++trial) {
      const bd::BDState s = testing::random_entangled(gen);
      if (spot_states.size() < 10) spot_states.push_back(s);
      const oracle::OracleReport report =
          oracle::absolute_robustness_search(s, 1000, 21, 7070, 1e-6);
      ok = ok && report.valid() && report.gap >= -1e-9 &&
           report.grid_gap.value() <= 0.05;
    }
    for (const bd::BDState& s : spot_states) {
      const oracle::OracleReport report =
          oracle::absolute_robustness_search(s, 0, 101, 7070, 1e-6);
      ok = ok && report.gap >= -1e-9 && report.grid_gap.value() <= 0.01;
    }
    acceptance.report(
        7, "search minimum >= closed form; grid attains it (0.05 / 0.01)", ok);
  }

  // 8. Octahedron classification agrees with the PT test away from the
  // boundary shell.
  {
    rng::Engine gen(801);
    bool ok = true;
    int checked = 0;
    while (checked < 10000) {
      const bd::BDState s = bd::sample_tetrahedron(gen);
      if (std::abs(bd::l1_norm(s.t()) - 1.0) <= 1e-8) continue;
      ++checked;
      ok = ok && bd::classify(s).is_separable() ==
                     oracle::is_ppt(bd::density_matrix(s),
                                    oracle::kPsdDecisionTol);
    }
    acceptance.report(8, "l1 separability = PPT on 10,000 states", ok);
  }

  // 9. Batch and verify runs are byte-identical for fixed seeds.
  {
    const auto run_batch = [] {
      std::ostringstream out, err;
      const int code = cli::cmd_batch(1000, 7, 1e-9, out, err);
      return std::pair<int, std::string>(code, out.str());
    };
    const auto run_verify = [] {
      std::ostringstream out, err;
      const int code =
          cli::cmd_verify(cli::parse_state_spec("{\"t\":[-0.5,-0.5,-0.6]}"),
                          300, 11, 42, 1e-7, out, err);
      return std::pair<int, std::string>(code, out.str());
    };
    const auto batch_a = run_batch();
    const auto batch_b = run_batch();
    const auto verify_a = run_verify();
    const auto verify_b = run_verify();
    const bool ok = batch_a.first == 0 && batch_b.first == 0 &&
                    verify_a.first == 0 && verify_b.first == 0 &&
                    batch_a.second == batch_b.second &&
                    verify_a.second == verify_b.second &&
                    !batch_a.second.empty() && !verify_a.second.empty();
    acceptance.report(9, "batch and verify output is byte-identical", ok);
  }

  if (acceptance.failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", acceptance.failures);
  return acceptance.failures;
}
