#ifndef DECISION_GATE_CONFIG_IO_HPP
#define DECISION_GATE_CONFIG_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "decision_gate/decision.hpp"
#include "decision_gate/plan.hpp"
#include "decision_gate/sequential.hpp"
#include "decision_gate/simulation.hpp"

namespace dgate {

// Parsed experiment configuration file. Schema (JSON):
//   metrics:    [{id, roles, direction, variance, mde?, nim?}]
//   budget:     {alpha, alpha_minus, beta}
//   policy:     {correction, nyholt, auto_deterioration?}
//   sequential: {k_looks, spending}
struct ExperimentConfig {
  std::vector<MetricSpec> metrics;
  RiskBudget budget;
  CorrectionPolicy policy;
  bool auto_deterioration = true;
  int k_looks = 10;
  SpendingKind spending = SpendingKind::LinearType;
};

// Observed results file. Schema (JSON):
//   metrics: [{id, estimate, std_error, n_treatment, n_control}]
//   quality: {srm? {treatment_count, control_count, planned_ratio},
//             external_quality_pvalues?: [..]}
struct SrmCounts {
  int64_t treatment_count = 0;
  int64_t control_count = 0;
  double planned_ratio = 1.0;
};

struct ResultsData {
  std::vector<std::pair<std::string, MetricReadout>> metrics;
  std::optional<SrmCounts> srm;
  std::vector<double> external_quality_pvalues;
};

// Throw config_error carrying the JSON field path of the offending value.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ResultsData parse_results(const std::string& json_text);

std::string read_file(const std::string& path);  // config_error when unreadable
void write_file(const std::string& path, const std::string& content);

std::string plan_to_json(const DesignPlan& plan);
std::string plan_to_table(const DesignPlan& plan);

// Stable decision record: verdict, the four clause booleans, blocking test
// ids, plus per-test evidence.
std::string decision_to_json(const Decision& decision, const ExperimentOutcome& outcomes);
std::string decision_to_table(const Decision& decision, const ExperimentOutcome& outcomes);

std::string reports_to_json(const std::vector<RejectionReport>& reports);

}  // namespace dgate

#endif
