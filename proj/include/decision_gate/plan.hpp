#ifndef DECISION_GATE_PLAN_HPP
#define DECISION_GATE_PLAN_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "decision_gate/corrections.hpp"
#include "decision_gate/hypothesis.hpp"

namespace dgate {

enum class MetricRole { Success, Guardrail, Deterioration, Quality };

// Ingestion normalizes every metric so that an increase is good; the engine
// and the tests never branch on direction.
enum class Direction { IncreaseIsGood, DecreaseIsGood };

struct MetricSpec {
  std::string id;
  std::set<MetricRole> roles;
  Direction direction = Direction::IncreaseIsGood;
  double variance = 1.0;
  std::optional<double> mde;  // required for success metrics
  std::optional<double> nim;  // required for guardrail metrics
};

// Success and guardrail metrics are enrolled in deterioration testing unless
// auto_deterioration is explicitly switched off.
MetricCounts derive_counts(const std::vector<MetricSpec>& metrics, bool auto_deterioration);

struct PlannedTest {
  std::string test_id;  // "<metric_id>:<kind>"
  std::string metric_id;
  TestKind kind = TestKind::Superiority;
  double level = 0.05;
};

struct DesignPlan {
  std::vector<PlannedTest> tests;               // deterministic order
  std::map<std::string, double> power_targets;  // success and guardrail metrics
  int64_t required_n_per_group = 1;
  CorrectedLevels levels;
  MetricCounts counts;
  RiskBudget budget;
  CorrectionPolicy policy;
  bool auto_deterioration = true;
};

std::string test_kind_name(TestKind kind);
std::string make_test_id(const std::string& metric_id, TestKind kind);

// Assigns every test its significance level and every powered metric its
// power target under the chosen correction, and sizes the experiment as the
// max required n across powered tests. Throws planning_error for missing
// MDE/NIM or infeasible budgets, independent of metric ordering.
DesignPlan build_design_plan(const std::vector<MetricSpec>& metrics, const RiskBudget& budget,
                             const CorrectionPolicy& policy,
                             const std::optional<CorrelationMatrix>& corr_success = std::nullopt,
                             const std::optional<CorrelationMatrix>& corr_guardrail = std::nullopt,
                             bool auto_deterioration = true);

}  // namespace dgate

#endif
