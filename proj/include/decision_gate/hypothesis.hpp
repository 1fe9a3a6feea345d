#ifndef DECISION_GATE_HYPOTHESIS_HPP
#define DECISION_GATE_HYPOTHESIS_HPP

#include <cstdint>
#include <optional>

namespace dgate {

// One-sided fixed-horizon z-tests. All metrics are standardized so that an
// increase is an improvement before they reach these functions.
//
//   Superiority     H0: delta <= 0     vs  HA: delta > 0
//   NonInferiority  H0: delta <= -NIM  vs  HA: delta > -NIM
//   Inferiority     H0: delta >= 0     vs  HA: delta < 0
//   QualitySrm      chi-square(1) goodness of fit on the group split
enum class TestKind { Superiority, NonInferiority, Inferiority, QualitySrm };

// Default platform-level gate for a standalone SRM check; inside Decision
// Rule 2 the SRM instead receives the corrected quality-test level.
inline constexpr double kSrmDefaultAlpha = 1e-4;

struct TestSpec {
  TestKind kind = TestKind::Superiority;
  double significance_level = 0.05;
  // Required iff kind == NonInferiority (metric units, > 0).
  std::optional<double> nim;
};

struct MetricReadout {
  double estimate = 0.0;   // treatment minus control, metric units
  double std_error = 1.0;  // > 0
  int64_t n_treatment = 1;
  int64_t n_control = 1;
};

struct TestOutcome {
  double z_statistic = 0.0;
  double p_value = 1.0;
  bool rejected = false;
  // One-sided lower confidence bound at level 1 - alpha (metric units).
  // NaN for the SRM test, which has no effect estimate.
  double ci_lower = 0.0;
};

TestOutcome run_superiority(const MetricReadout& readout, const TestSpec& spec);
TestOutcome run_noninferiority(const MetricReadout& readout, const TestSpec& spec);
TestOutcome run_inferiority(const MetricReadout& readout, const TestSpec& spec);

// Sample ratio mismatch: one-degree-of-freedom chi-square goodness-of-fit
// test of the observed group sizes against the planned treatment:control
// ratio. Throws std::domain_error when both counts are zero.
TestOutcome run_srm(int64_t observed_treatment, int64_t observed_control, double planned_ratio,
                    double alpha);

// ceil( 2*variance*(z_{1-alpha} + z_{1-beta})^2 / effect^2 ), per group.
// Throws planning_error when effect <= 0.
int64_t required_sample_size(double variance, double effect, double alpha, double beta);

// 1 - Phi( z_{1-alpha} - effect / sqrt(2*variance/n) ).
double achieved_power(double variance, double effect, int64_t n_per_group, double alpha);

}  // namespace dgate

#endif
