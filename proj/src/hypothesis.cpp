#include "decision_gate/hypothesis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "decision_gate/chi_square.hpp"
#include "decision_gate/errors.hpp"
#include "decision_gate/normal.hpp"

namespace dgate {

namespace {

void check_readout(const MetricReadout& r) {
  if (!(r.std_error > 0.0)) throw std::domain_error("readout: std_error must be > 0");
  if (r.n_treatment < 1 || r.n_control < 1) {
    throw std::domain_error("readout: sample sizes must be >= 1");
  }
}

void check_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("significance level must lie in (0,1)");
  }
}

}  // namespace

TestOutcome run_superiority(const MetricReadout& readout, const TestSpec& spec) {
  check_readout(readout);
  check_level(spec.significance_level);
  TestOutcome out;
  out.z_statistic = readout.estimate / readout.std_error;
  out.p_value = 1.0 - std_normal_cdf(out.z_statistic);
  out.rejected = out.p_value < spec.significance_level;
  out.ci_lower = readout.estimate -
                 std_normal_quantile(1.0 - spec.significance_level) * readout.std_error;
  return out;
}

TestOutcome run_noninferiority(const MetricReadout& readout, const TestSpec& spec) {
  check_readout(readout);
  check_level(spec.significance_level);
  if (!spec.nim || !(*spec.nim > 0.0)) {
    throw config_error("non-inferiority test requires a positive NIM");
  }
  TestOutcome out;
  out.z_statistic = (readout.estimate + *spec.nim) / readout.std_error;
  out.p_value = 1.0 - std_normal_cdf(out.z_statistic);
  out.rejected = out.p_value < spec.significance_level;
  // Same lower bound as superiority; rejection is equivalent to ci_lower > -NIM.
  out.ci_lower = readout.estimate -
                 std_normal_quantile(1.0 - spec.significance_level) * readout.std_error;
  return out;
}

TestOutcome run_inferiority(const MetricReadout& readout, const TestSpec& spec) {
  check_readout(readout);
  check_level(spec.significance_level);
  TestOutcome out;
  out.z_statistic = readout.estimate / readout.std_error;
  out.p_value = std_normal_cdf(out.z_statistic);
  out.rejected = out.p_value < spec.significance_level;
  out.ci_lower = readout.estimate -
                 std_normal_quantile(1.0 - spec.significance_level) * readout.std_error;
  return out;
}

TestOutcome run_srm(int64_t observed_treatment, int64_t observed_control, double planned_ratio,
                    double alpha) {
  if (observed_treatment < 0 || observed_control < 0) {
    throw std::domain_error("run_srm: counts must be non-negative");
  }
  const double total = static_cast<double>(observed_treatment + observed_control);
  if (total <= 0.0) throw std::domain_error("run_srm: total count must be > 0");
  if (!(planned_ratio > 0.0)) throw std::domain_error("run_srm: planned_ratio must be > 0");
  check_level(alpha);

  const double share_t = planned_ratio / (1.0 + planned_ratio);
  const double exp_t = total * share_t;
  const double exp_c = total - exp_t;
  const double dt = observed_treatment - exp_t;
  const double dc = observed_control - exp_c;
  const double statistic = dt * dt / exp_t + dc * dc / exp_c;

  TestOutcome out;
  out.z_statistic = std::copysign(std::sqrt(statistic), dt);
  out.p_value = chi_square_sf(statistic, 1);
  out.rejected = out.p_value < alpha;
  out.ci_lower = std::numeric_limits<double>::quiet_NaN();
  return out;
}

int64_t required_sample_size(double variance, double effect, double alpha, double beta) {
  if (!(variance > 0.0)) throw std::domain_error("required_sample_size: variance must be > 0");
  check_level(alpha);
  check_level(beta);
  if (!(effect > 0.0)) {
    throw planning_error("required_sample_size: effect must be > 0 (infeasible design)");
  }
  const double z_sum = std_normal_quantile(1.0 - alpha) + std_normal_quantile(1.0 - beta);
  const double n = 2.0 * variance * z_sum * z_sum / (effect * effect);
  return static_cast<int64_t>(std::ceil(n));
}

double achieved_power(double variance, double effect, int64_t n_per_group, double alpha) {
  if (!(variance > 0.0)) throw std::domain_error("achieved_power: variance must be > 0");
  if (n_per_group < 1) throw std::domain_error("achieved_power: n must be >= 1");
  check_level(alpha);
  const double se = std::sqrt(2.0 * variance / static_cast<double>(n_per_group));
  return 1.0 - std_normal_cdf(std_normal_quantile(1.0 - alpha) - effect / se);
}

}  // namespace dgate
