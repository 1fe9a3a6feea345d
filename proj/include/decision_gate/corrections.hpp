#ifndef DECISION_GATE_CORRECTIONS_HPP
#define DECISION_GATE_CORRECTIONS_HPP

#include <optional>

#include "decision_gate/matrix.hpp"

namespace dgate {

// Metric counts entering the corrections. `extra_deterioration` counts only
// metrics that are deterioration-tested without being a success or guardrail
// metric (success and guardrail metrics carry their own deterioration tests
// on top of these counts).
struct MetricCounts {
  int success = 0;
  int guardrail = 0;
  int extra_deterioration = 0;
  int quality = 0;

  int total() const { return success + guardrail + extra_deterioration + quality; }
};

// Decision-level risk targets. alpha_minus is the total significance budget
// shared by all deterioration and quality tests; the corrections require
// alpha_minus < beta and alpha_minus <= 1 - alpha. Violations raise
// planning_error rather than being clamped.
struct RiskBudget {
  double alpha = 0.05;
  double alpha_minus = 0.05;
  double beta = 0.2;
};

void validate_budget(const RiskBudget& budget);

enum class Correction {
  None,                 // every test at its nominal uncorrected level
  OnlyAlpha,            // the alpha part of the full correction, beta untouched
  Prop33,               // success/guardrail only (no deterioration/quality budget)
  Prop41,               // full correction for Decision Rule 2
  Prop41Improved,       // non-overlapping-rejection-region refinement
  Prop41ImprovedRemark  // refinement with the approximate phi* adjustment
};

struct CorrectionPolicy {
  Correction correction = Correction::Prop41;
  bool nyholt = false;
};

// Per-test levels and the per-test type II target implied by a correction.
// alpha_success is absent for designs without success metrics.
struct CorrectedLevels {
  std::optional<double> alpha_success;
  double alpha_guardrail = 0.05;
  double alpha_minus_star = 0.05;  // each deterioration and quality test
  double beta_star = 0.2;          // each superiority / non-inferiority test
};

// alpha/S for success, alpha for guardrails, beta/(G+1) (beta/G when S=0).
// Requires no deterioration/quality budget (D = Q = 0).
CorrectedLevels correct_prop33(const MetricCounts& counts, const RiskBudget& budget);

// Adds the deterioration/quality budget: alpha_minus/(S+G+D+Q) per test and
// beta_star = (beta - alpha_minus) / ((1 - alpha_minus)(G+1)).
CorrectedLevels correct_prop41(const MetricCounts& counts, const RiskBudget& budget);

// Non-overlapping rejection regions allow a slightly larger alpha_success
// and replace alpha_minus by phi = (D+S+Q-1)/(S+G+D+Q) * alpha_minus in the
// beta correction (phi* = (D+Q)/(S+G+D+Q) * alpha_minus with use_remark).
// With guardrails_may_be_overpowered, phi = (S-1+G+D)/(S+G+D) * alpha_minus:
// the variant for designs whose guardrail type II error may drop below
// alpha_minus, making guardrail deterioration rejections possible again.
CorrectedLevels correct_prop41_improved(const MetricCounts& counts, const RiskBudget& budget,
                                        bool use_remark,
                                        bool guardrails_may_be_overpowered = false);

// Effective number of independent tests: M_E = 1 + (M-1)(1 - V_lambda/M),
// V_lambda the sample variance (denominator M-1) of the eigenvalues of the
// correlation matrix. Clamped to [1, M].
double nyholt_effective_tests(const CorrelationMatrix& corr);

// Dispatch on the policy; when policy.nyholt is set, the success and
// guardrail counts are replaced by their Nyholt effective numbers in every
// count denominator of the selected correction (alpha, alpha_minus, phi and
// beta divisions alike).
CorrectedLevels resolve_levels(const CorrectionPolicy& policy, const MetricCounts& counts,
                               const RiskBudget& budget,
                               const std::optional<CorrelationMatrix>& corr_success,
                               const std::optional<CorrelationMatrix>& corr_guardrail);

enum class RuleStructure { Independent, PerfectlyCorrelated };

struct Rule1Rates {
  double type1 = 0.0;
  double power = 0.0;
};

// Closed-form Decision Rule 1 error rates for the boundary dependence
// structures, with and without the Prop. 3.3 corrections. Requires D = Q = 0
// and S + G >= 1.
Rule1Rates analytic_rule1_error_rates(const MetricCounts& counts, const RiskBudget& budget,
                                      RuleStructure structure, bool corrected);

// Probability that any of the S-1 not-necessarily-superior success metrics
// shows significant deterioration under the global alternative:
// (S-1) * Phi( z_{alpha_minus/S} - z_{1-alpha_plus/S} - z_{1-beta} ).
double deterioration_prob_under_alternative(int s, double alpha_plus, double alpha_minus,
                                            double beta);

}  // namespace dgate

#endif
