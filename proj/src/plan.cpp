#include "decision_gate/plan.hpp"

#include <algorithm>

#include "decision_gate/errors.hpp"

namespace dgate {

namespace {

bool has_role(const MetricSpec& m, MetricRole role) { return m.roles.count(role) > 0; }

bool deterioration_tested(const MetricSpec& m, bool auto_deterioration) {
  if (has_role(m, MetricRole::Deterioration)) return true;
  return auto_deterioration &&
         (has_role(m, MetricRole::Success) || has_role(m, MetricRole::Guardrail));
}

void check_metric(const MetricSpec& m) {
  if (m.id.empty()) throw planning_error("metric with empty id");
  if (m.roles.empty()) throw planning_error("metric '" + m.id + "' has no roles");
  if (has_role(m, MetricRole::Success) && !(m.mde && *m.mde > 0.0)) {
    throw planning_error("success metric '" + m.id + "' requires a positive mde");
  }
  if (has_role(m, MetricRole::Guardrail) && !(m.nim && *m.nim > 0.0)) {
    throw planning_error("guardrail metric '" + m.id + "' requires a positive nim");
  }
  const bool needs_variance = has_role(m, MetricRole::Success) ||
                              has_role(m, MetricRole::Guardrail) ||
                              has_role(m, MetricRole::Deterioration);
  if (needs_variance && !(m.variance > 0.0)) {
    throw planning_error("metric '" + m.id + "' requires a positive variance");
  }
}

}  // namespace

MetricCounts derive_counts(const std::vector<MetricSpec>& metrics, bool auto_deterioration) {
  MetricCounts counts;
  for (const auto& m : metrics) {
    const bool success = has_role(m, MetricRole::Success);
    const bool guardrail = has_role(m, MetricRole::Guardrail);
    if (success) ++counts.success;
    if (guardrail) ++counts.guardrail;
    if (!success && !guardrail && has_role(m, MetricRole::Deterioration)) {
      ++counts.extra_deterioration;
    }
    if (has_role(m, MetricRole::Quality)) ++counts.quality;
  }
  (void)auto_deterioration;  // enrollment affects test rosters, not the counts
  return counts;
}

std::string test_kind_name(TestKind kind) {
  switch (kind) {
    case TestKind::Superiority: return "superiority";
    case TestKind::NonInferiority: return "non_inferiority";
    case TestKind::Inferiority: return "inferiority";
    case TestKind::QualitySrm: return "quality";
  }
  return "unknown";
}

std::string make_test_id(const std::string& metric_id, TestKind kind) {
  return metric_id + ":" + test_kind_name(kind);
}

DesignPlan build_design_plan(const std::vector<MetricSpec>& metrics, const RiskBudget& budget,
                             const CorrectionPolicy& policy,
                             const std::optional<CorrelationMatrix>& corr_success,
                             const std::optional<CorrelationMatrix>& corr_guardrail,
                             bool auto_deterioration) {
  if (metrics.empty()) throw planning_error("no metrics configured");
  std::set<std::string> seen;
  for (const auto& m : metrics) {
    check_metric(m);
    if (!seen.insert(m.id).second) throw planning_error("duplicate metric id '" + m.id + "'");
  }

  DesignPlan plan;
  plan.counts = derive_counts(metrics, auto_deterioration);
  plan.budget = budget;
  plan.policy = policy;
  plan.auto_deterioration = auto_deterioration;
  plan.levels = resolve_levels(policy, plan.counts, budget, corr_success, corr_guardrail);

  int64_t required_n = 1;
  for (const auto& m : metrics) {
    if (has_role(m, MetricRole::Success)) {
      const double level = *plan.levels.alpha_success;
      plan.tests.push_back({make_test_id(m.id, TestKind::Superiority), m.id,
                            TestKind::Superiority, level});
      plan.power_targets[m.id] = 1.0 - plan.levels.beta_star;
      required_n = std::max(required_n, required_sample_size(m.variance, *m.mde, level,
                                                             plan.levels.beta_star));
    }
    if (has_role(m, MetricRole::Guardrail)) {
      const double level = plan.levels.alpha_guardrail;
      plan.tests.push_back({make_test_id(m.id, TestKind::NonInferiority), m.id,
                            TestKind::NonInferiority, level});
      plan.power_targets[m.id] = 1.0 - plan.levels.beta_star;
      required_n = std::max(required_n, required_sample_size(m.variance, *m.nim, level,
                                                             plan.levels.beta_star));
    }
    if (deterioration_tested(m, auto_deterioration)) {
      plan.tests.push_back({make_test_id(m.id, TestKind::Inferiority), m.id,
                            TestKind::Inferiority, plan.levels.alpha_minus_star});
    }
    if (has_role(m, MetricRole::Quality)) {
      plan.tests.push_back({make_test_id(m.id, TestKind::QualitySrm), m.id,
                            TestKind::QualitySrm, plan.levels.alpha_minus_star});
    }
  }
  plan.required_n_per_group = required_n;

  // Canonical roster order: independent of the configured metric order.
  std::sort(plan.tests.begin(), plan.tests.end(),
            [](const PlannedTest& a, const PlannedTest& b) { return a.test_id < b.test_id; });
  return plan;
}

}  // namespace dgate
