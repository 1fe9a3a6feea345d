#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "decision_gate/normal.hpp"
#include "decision_gate/random.hpp"
#include "decision_gate/sequential.hpp"

using namespace dgate;

namespace {

// Independent two-look oracle: with Cov(Z1,Z2) = sqrt(t1/t2), evaluate
// P(Z1 >= c1) and P(Z1 < c1, Z2 >= c2) by direct quadrature over Z1.
double two_look_second_crossing(double c1, double c2, double t1, double t2) {
  const double rho = std::sqrt(t1 / t2);
  const double s = std::sqrt(1.0 - rho * rho);
  const int n = 40000;
  const double lo = -9.0;
  const double hi = c1;
  const double h = (hi - lo) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double z = lo + h * i;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * std_normal_pdf(z) * (1.0 - std_normal_cdf((c2 - rho * z) / s));
  }
  return acc * h;
}

double simulated_crossing_rate(const BoundarySchedule& schedule, double drift, int64_t reps,
                               uint64_t seed) {
  const int k = static_cast<int>(schedule.critical_z.size());
  int64_t crossed = 0;
  std::vector<double> path(k);
  for (int64_t rep = 0; rep < reps; ++rep) {
    RandomStream stream(seed, static_cast<uint64_t>(rep));
    double brownian = 0.0;
    for (int i = 0; i < k; ++i) {
      const double t = schedule.information_fractions[i];
      const double t_prev = i == 0 ? 0.0 : schedule.information_fractions[i - 1];
      brownian += std::sqrt(t - t_prev) * stream.next_normal();
      path[i] = brownian / std::sqrt(t) + drift * std::sqrt(t);
    }
    if (evaluate_sequential(path, schedule).has_value()) ++crossed;
  }
  return static_cast<double>(crossed) / static_cast<double>(reps);
}

}  // namespace

TEST_CASE("single look reduces to the fixed-horizon critical value") {
  for (SpendingKind kind : {SpendingKind::OBrienFlemingType, SpendingKind::LinearType}) {
    const auto schedule = compute_boundaries(SpendingPlan::equally_spaced(0.05, 1, kind));
    REQUIRE(schedule.critical_z.size() == 1);
    CHECK(schedule.critical_z[0] == doctest::Approx(1.644854).epsilon(1e-5));
    CHECK(schedule.incremental_alpha[0] == doctest::Approx(0.05).epsilon(1e-12));
  }
}

TEST_CASE("two-look OBF-type boundaries match the published values") {
  const auto schedule = compute_boundaries(
      SpendingPlan::equally_spaced(0.025, 2, SpendingKind::OBrienFlemingType));
  REQUIRE(schedule.critical_z.size() == 2);
  CHECK(std::fabs(schedule.critical_z[0] - 2.963) <= 0.005);
  CHECK(std::fabs(schedule.critical_z[1] - 1.969) <= 0.005);

  // Independent quadrature oracle for the same spending targets.
  const double e1 = schedule.incremental_alpha[0];
  const double e2 = schedule.incremental_alpha[1];
  CHECK(1.0 - std_normal_cdf(schedule.critical_z[0]) == doctest::Approx(e1).epsilon(1e-6));
  CHECK(two_look_second_crossing(schedule.critical_z[0], schedule.critical_z[1], 0.5, 1.0) ==
        doctest::Approx(e2).epsilon(1e-4));
}

TEST_CASE("spend accounting") {
  for (SpendingKind kind : {SpendingKind::OBrienFlemingType, SpendingKind::LinearType}) {
    for (int k : {2, 5, 10}) {
      const auto schedule = compute_boundaries(SpendingPlan::equally_spaced(0.05, k, kind));
      const double total = std::accumulate(schedule.incremental_alpha.begin(),
                                           schedule.incremental_alpha.end(), 0.0);
      CHECK(total == doctest::Approx(0.05).epsilon(1e-8));
    }
  }
}

TEST_CASE("OBF-type boundaries are nonincreasing at equal fractions") {
  const auto schedule = compute_boundaries(
      SpendingPlan::equally_spaced(0.05, 10, SpendingKind::OBrienFlemingType));
  for (size_t k = 1; k < schedule.critical_z.size(); ++k) {
    CHECK(schedule.critical_z[k] <= schedule.critical_z[k - 1] + 1e-9);
  }
}

TEST_CASE("invalid plans are rejected") {
  SpendingPlan bad = SpendingPlan::equally_spaced(0.05, 3);
  bad.information_fractions = {0.5, 0.4, 1.0};
  CHECK_THROWS_AS(compute_boundaries(bad), std::domain_error);
  bad.information_fractions = {0.2, 0.5, 0.9};
  CHECK_THROWS_AS(compute_boundaries(bad), std::domain_error);
}

TEST_CASE("evaluate_sequential basics") {
  const auto schedule = compute_boundaries(SpendingPlan::equally_spaced(0.05, 5));
  std::vector<double> flat(5, 0.0);
  CHECK_FALSE(evaluate_sequential(flat, schedule).has_value());

  std::vector<double> immediate{-schedule.critical_z[0] - 0.01};
  auto hit = evaluate_sequential(immediate, schedule);
  REQUIRE(hit.has_value());
  CHECK(*hit == 1);

  // Prefix monotonicity: adding later values never changes an earlier crossing.
  std::vector<double> longer{-schedule.critical_z[0] - 0.01, 5.0, 5.0};
  auto hit2 = evaluate_sequential(longer, schedule);
  REQUIRE(hit2.has_value());
  CHECK(*hit2 == 1);

  std::vector<double> too_long(6, 0.0);
  CHECK_THROWS_AS(evaluate_sequential(too_long, schedule), std::domain_error);
}

TEST_CASE("one-look schedule matches the fixed-horizon inferiority decision") {
  const auto schedule = compute_boundaries(SpendingPlan::equally_spaced(0.05, 1));
  RandomStream stream(404, 0);
  for (int i = 0; i < 10000; ++i) {
    const double z = 6.0 * (stream.next_uniform() - 0.5);
    const bool fixed_horizon = std_normal_cdf(z) < 0.05;
    const bool sequential = evaluate_sequential(std::vector<double>{z}, schedule).has_value();
    REQUIRE(fixed_horizon == sequential);
  }
}

TEST_CASE("zero-drift size across looks and levels") {
  const int64_t reps = 100000;
  for (double alpha : {0.0036, 0.05}) {
    for (int k : {1, 10}) {
      const auto& schedule = cached_boundaries(alpha, k, SpendingKind::LinearType);
      const double rate = simulated_crossing_rate(schedule, 0.0, reps, 1234);
      const double se = std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(reps));
      CHECK(std::fabs(rate - alpha) <= 3.0 * se);
    }
  }
  // OBF path at the paper's quality-test level
  const auto& obf = cached_boundaries(0.05 / 14.0, 10, SpendingKind::OBrienFlemingType);
  const double rate = simulated_crossing_rate(obf, 0.0, reps, 99);
  const double a = 0.05 / 14.0;
  CHECK(std::fabs(rate - a) <= 3.0 * std::sqrt(a * (1.0 - a) / static_cast<double>(reps)));
}

TEST_CASE("more looks cost power at fixed drift") {
  const double alpha = 0.05;
  const double drift = -(std_normal_quantile(0.95) + std_normal_quantile(0.8));
  const int64_t reps = 60000;
  double prev = 1.0;
  for (int k : {1, 10, 100}) {
    const auto& schedule = cached_boundaries(alpha, k, SpendingKind::LinearType);
    const double power = simulated_crossing_rate(schedule, drift, reps, 7);
    CHECK(power < prev + 0.01);
    prev = power;
  }
  // 100-look deterioration power sits near the reference 0.72853, well below
  // the 80% fixed-horizon design.
  const auto& schedule = cached_boundaries(alpha, 100, SpendingKind::LinearType);
  const double power = simulated_crossing_rate(schedule, drift, reps, 7);
  CHECK(std::fabs(power - 0.72853) <= 0.01);
}
