#include <doctest.h>

#include <cmath>

#include "decision_gate/errors.hpp"
#include "decision_gate/hypothesis.hpp"
#include "decision_gate/normal.hpp"
#include "decision_gate/random.hpp"

using namespace dgate;

namespace {

MetricReadout readout(double estimate, double se) {
  MetricReadout r;
  r.estimate = estimate;
  r.std_error = se;
  r.n_treatment = 1000;
  r.n_control = 1000;
  return r;
}

TestSpec spec(TestKind kind, double alpha, double nim = 0.0) {
  TestSpec s;
  s.kind = kind;
  s.significance_level = alpha;
  if (nim > 0.0) s.nim = nim;
  return s;
}

}  // namespace

TEST_CASE("superiority examples") {
  auto null_boundary = run_superiority(readout(0.0, 1.0), spec(TestKind::Superiority, 0.05));
  CHECK(null_boundary.z_statistic == 0.0);
  CHECK(null_boundary.p_value == doctest::Approx(0.5));
  CHECK_FALSE(null_boundary.rejected);

  auto strong = run_superiority(readout(2.0, 1.0), spec(TestKind::Superiority, 0.05));
  CHECK(strong.p_value == doctest::Approx(0.0227501).epsilon(1e-5));  // 1 - Phi(2)
  CHECK(strong.rejected);
  CHECK(strong.ci_lower == doctest::Approx(2.0 - 1.6448536 * 1.0).epsilon(1e-6));
  CHECK(strong.ci_lower > 0.0);

  auto borderline = run_superiority(readout(1.6, 1.0), spec(TestKind::Superiority, 0.05));
  CHECK(borderline.p_value == doctest::Approx(0.0547993).epsilon(1e-5));  // 1 - Phi(1.6)
  CHECK_FALSE(borderline.rejected);
  CHECK(borderline.ci_lower < 0.0);
}

TEST_CASE("non-inferiority examples") {
  auto at_null = run_noninferiority(readout(-2.0, 1.0), spec(TestKind::NonInferiority, 0.05, 2.0));
  CHECK(at_null.z_statistic == 0.0);
  CHECK(at_null.p_value == doctest::Approx(0.5));
  CHECK_FALSE(at_null.rejected);

  // NIM calibrated for 80% power at delta = 0: z_{0.95} + z_{0.8}
  const double nim = std_normal_quantile(0.95) + std_normal_quantile(0.8);
  auto powered = run_noninferiority(readout(0.0, 1.0), spec(TestKind::NonInferiority, 0.05, nim));
  CHECK(powered.z_statistic == doctest::Approx(2.4865).epsilon(1e-4));
  CHECK(powered.rejected);
  CHECK(powered.ci_lower > -nim);

  auto inferior = run_noninferiority(readout(-3.0, 1.0), spec(TestKind::NonInferiority, 0.05, 1.0));
  CHECK(inferior.z_statistic == doctest::Approx(-2.0));
  CHECK(inferior.p_value == doctest::Approx(0.9772499).epsilon(1e-6));
  CHECK_FALSE(inferior.rejected);
  CHECK(inferior.ci_lower < -1.0);

  CHECK_THROWS_AS(run_noninferiority(readout(0.0, 1.0), spec(TestKind::NonInferiority, 0.05)),
                  config_error);
}

TEST_CASE("inferiority examples") {
  auto at_null = run_inferiority(readout(0.0, 1.0), spec(TestKind::Inferiority, 0.01));
  CHECK(at_null.p_value == doctest::Approx(0.5));
  CHECK_FALSE(at_null.rejected);

  auto bad = run_inferiority(readout(-3.0, 1.0), spec(TestKind::Inferiority, 0.01));
  CHECK(bad.p_value == doctest::Approx(0.0013499).epsilon(1e-4));  // Phi(-3)
  CHECK(bad.rejected);

  auto good = run_inferiority(readout(3.0, 1.0), spec(TestKind::Inferiority, 0.01));
  CHECK(good.p_value == doctest::Approx(0.9986501).epsilon(1e-6));
  CHECK_FALSE(good.rejected);
}

TEST_CASE("mirror identity: superiority and inferiority p-values sum to one") {
  RandomStream stream(31, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto r = readout(4.0 * (stream.next_uniform() - 0.5), 0.1 + stream.next_uniform());
    const double p_sup = run_superiority(r, spec(TestKind::Superiority, 0.05)).p_value;
    const double p_inf = run_inferiority(r, spec(TestKind::Inferiority, 0.05)).p_value;
    CHECK(p_sup + p_inf == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("non-overlap of superiority and inferiority rejections (alpha_minus <= 1-alpha)") {
  RandomStream stream(32, 0);
  const double alpha = 0.05;
  const double alpha_minus = 0.95;  // extreme boundary case
  int both = 0;
  for (int i = 0; i < 100000; ++i) {
    const auto r = readout(8.0 * (stream.next_uniform() - 0.5), 0.05 + 2.0 * stream.next_uniform());
    const bool sup = run_superiority(r, spec(TestKind::Superiority, alpha)).rejected;
    const bool inf = run_inferiority(r, spec(TestKind::Inferiority, alpha_minus)).rejected;
    if (sup && inf) ++both;
  }
  CHECK(both == 0);
}

TEST_CASE("non-overlap of non-inferiority and inferiority at calibrated NIM (alpha_minus <= beta)") {
  RandomStream stream(33, 0);
  for (double alpha : {0.01, 0.05, 0.1}) {
    for (double beta : {0.05, 0.2}) {
      for (double alpha_minus : {beta, beta / 2.0}) {
        const double se = 1.0;
        const double nim = se * (std_normal_quantile(1.0 - alpha) + std_normal_quantile(1.0 - beta));
        int both = 0;
        for (int i = 0; i < 10000; ++i) {
          const auto r = readout(12.0 * (stream.next_uniform() - 0.5), se);
          const bool ni =
              run_noninferiority(r, spec(TestKind::NonInferiority, alpha, nim)).rejected;
          const bool inf = run_inferiority(r, spec(TestKind::Inferiority, alpha_minus)).rejected;
          if (ni && inf) ++both;
        }
        CHECK(both == 0);
      }
    }
  }
}

TEST_CASE("empirical size at the null boundary") {
  RandomStream stream(34, 0);
  const int n = 100000;
  const double alpha = 0.05;
  int rej_sup = 0, rej_inf = 0, rej_ni = 0;
  for (int i = 0; i < n; ++i) {
    const double z = stream.next_normal();
    if (run_superiority(readout(z, 1.0), spec(TestKind::Superiority, alpha)).rejected) ++rej_sup;
    if (run_inferiority(readout(z, 1.0), spec(TestKind::Inferiority, alpha)).rejected) ++rej_inf;
    if (run_noninferiority(readout(z - 1.5, 1.0), spec(TestKind::NonInferiority, alpha, 1.5))
            .rejected)
      ++rej_ni;
  }
  const double tol = 4.0 * std::sqrt(alpha * (1.0 - alpha) / n);
  CHECK(std::fabs(rej_sup / double(n) - alpha) <= tol);
  CHECK(std::fabs(rej_inf / double(n) - alpha) <= tol);
  CHECK(std::fabs(rej_ni / double(n) - alpha) <= tol);
}

TEST_CASE("srm examples") {
  auto balanced = run_srm(5000, 5000, 1.0, kSrmDefaultAlpha);
  CHECK(balanced.z_statistic == 0.0);
  CHECK(balanced.p_value == doctest::Approx(1.0));
  CHECK_FALSE(balanced.rejected);

  auto mild = run_srm(5100, 4900, 1.0, 0.05);
  CHECK(mild.z_statistic * mild.z_statistic == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(mild.p_value == doctest::Approx(0.0455).epsilon(1e-3));

  auto broken = run_srm(6000, 4000, 1.0, kSrmDefaultAlpha);
  CHECK(broken.z_statistic * broken.z_statistic == doctest::Approx(400.0).epsilon(1e-12));
  CHECK(broken.rejected);

  // Unbalanced planned ratio: observed exactly at a 2:1 plan
  auto planned = run_srm(6000, 3000, 2.0, 0.05);
  CHECK(planned.p_value == doctest::Approx(1.0));

  CHECK_THROWS_AS(run_srm(0, 0, 1.0, 0.05), std::domain_error);
}

TEST_CASE("required sample size") {
  CHECK(required_sample_size(1.0, 0.2, 0.05, 0.2) == 310);
  CHECK(required_sample_size(1.0, 100.0, 0.05, 0.2) == 1);
  CHECK_THROWS_AS(required_sample_size(1.0, 0.0, 0.05, 0.2), planning_error);

  // Doubling the variance doubles the pre-ceiling value exactly: compare
  // against the closed form rather than the ceiled integer.
  const double z = std_normal_quantile(0.95) + std_normal_quantile(0.8);
  const double raw = 2.0 * 1.0 * z * z / (0.2 * 0.2);
  CHECK(required_sample_size(2.0, 0.2, 0.05, 0.2) == static_cast<int64_t>(std::ceil(2.0 * raw)));
}

TEST_CASE("achieved power") {
  CHECK(achieved_power(1.0, 0.0, 100, 0.05) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(achieved_power(1.0, 0.2, 310, 0.05) >= 0.80);
  CHECK(achieved_power(1.0, 0.5, 4000000, 0.05) == doctest::Approx(1.0).epsilon(1e-9));

  // Monotone in n and effect
  CHECK(achieved_power(1.0, 0.2, 400, 0.05) > achieved_power(1.0, 0.2, 310, 0.05));
  CHECK(achieved_power(1.0, 0.3, 310, 0.05) > achieved_power(1.0, 0.2, 310, 0.05));
}

TEST_CASE("required n and achieved power are mutually consistent") {
  RandomStream stream(35, 0);
  const double variance = 1.0;
  const double alpha = 0.05;
  const double beta = 0.2;
  for (int i = 0; i < 500; ++i) {
    const double effect = 0.01 + 0.99 * stream.next_uniform();
    const auto n = required_sample_size(variance, effect, alpha, beta);
    const double power = achieved_power(variance, effect, n, alpha);
    CHECK(power >= 1.0 - beta);
    CHECK(power <= 1.0 - beta + 0.02);
  }
}
