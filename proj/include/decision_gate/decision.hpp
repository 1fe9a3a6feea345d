#ifndef DECISION_GATE_DECISION_HPP
#define DECISION_GATE_DECISION_HPP

#include <string>
#include <vector>

#include "decision_gate/hypothesis.hpp"
#include "decision_gate/plan.hpp"

namespace dgate {

struct TestResult {
  std::string test_id;
  std::string metric_id;
  TestKind kind = TestKind::Superiority;
  TestOutcome outcome;
};

// One result per planned test; the roster must match the plan exactly.
struct ExperimentOutcome {
  std::vector<TestResult> results;
};

enum class Verdict { Ship, NoShip };

struct Decision {
  Verdict verdict = Verdict::NoShip;
  // Clause evidence. Vacuous clauses (e.g. no success metrics configured,
  // guardrail-only mode) are reported as satisfied.
  bool any_success_superior = false;
  bool all_guardrails_noninferior = false;
  bool no_deterioration = false;
  bool no_quality_failure = false;
  std::vector<std::string> blocking_tests;
};

// Decision Rule 1: ship iff at least one success metric is significantly
// superior and every guardrail is significantly non-inferior. In a
// guardrail-only roster the success clause is absent.
Decision evaluate_rule1(const ExperimentOutcome& outcomes);

// Decision Rule 2: Rule 1 plus no significant deterioration anywhere and no
// quality-test rejection.
Decision evaluate_rule2(const ExperimentOutcome& outcomes);

// Shared clause logic so the Monte Carlo harness and the engine cannot drift
// apart. `has_success_tests` selects the guardrail-only branch.
bool ship_rule1_clauses(bool has_success_tests, bool any_success_superior,
                        bool all_guardrails_noninferior);
bool ship_rule2_clauses(bool has_success_tests, bool any_success_superior,
                        bool all_guardrails_noninferior, bool any_deterioration,
                        bool any_quality_failure);

struct ExplainEntry {
  std::string category;  // "quality" | "deterioration" | "guardrail" | "success"
  std::string test_id;
};

// Blocking evidence in fixed severity order: quality failures first, then
// deteriorations, then guardrail failures, then the missing-success clause.
std::vector<ExplainEntry> explain(const Decision& decision);

}  // namespace dgate

#endif
