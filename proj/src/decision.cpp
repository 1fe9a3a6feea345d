#include "decision_gate/decision.hpp"

#include <algorithm>
#include <map>

#include "decision_gate/errors.hpp"

namespace dgate {

namespace {

struct ClauseScan {
  bool has_success = false;
  bool has_guardrail = false;
  bool any_success = false;
  bool all_guardrails = true;
  bool any_deterioration = false;
  bool any_quality = false;
  std::vector<std::string> failed_success;
  std::vector<std::string> failed_guardrail;
  std::vector<std::string> failed_deterioration;
  std::vector<std::string> failed_quality;
};

ClauseScan scan(const ExperimentOutcome& outcomes) {
  if (outcomes.results.empty()) throw evaluation_error("empty outcome roster");
  ClauseScan s;
  for (const auto& r : outcomes.results) {
    switch (r.kind) {
      case TestKind::Superiority:
        s.has_success = true;
        if (r.outcome.rejected) s.any_success = true;
        else s.failed_success.push_back(r.test_id);
        break;
      case TestKind::NonInferiority:
        s.has_guardrail = true;
        if (!r.outcome.rejected) {
          s.all_guardrails = false;
          s.failed_guardrail.push_back(r.test_id);
        }
        break;
      case TestKind::Inferiority:
        if (r.outcome.rejected) {
          s.any_deterioration = true;
          s.failed_deterioration.push_back(r.test_id);
        }
        break;
      case TestKind::QualitySrm:
        if (r.outcome.rejected) {
          s.any_quality = true;
          s.failed_quality.push_back(r.test_id);
        }
        break;
    }
  }
  return s;
}

Decision assemble(const ClauseScan& s, bool rule2) {
  Decision d;
  d.any_success_superior = !s.has_success || s.any_success;
  d.all_guardrails_noninferior = s.all_guardrails;
  d.no_deterioration = !s.any_deterioration;
  d.no_quality_failure = !s.any_quality;

  const bool ship = rule2 ? ship_rule2_clauses(s.has_success, s.any_success, s.all_guardrails,
                                               s.any_deterioration, s.any_quality)
                          : ship_rule1_clauses(s.has_success, s.any_success, s.all_guardrails);
  d.verdict = ship ? Verdict::Ship : Verdict::NoShip;

  if (!ship) {
    // Severity order mirrors explain(): quality, deterioration, guardrail, success.
    if (rule2) {
      d.blocking_tests.insert(d.blocking_tests.end(), s.failed_quality.begin(),
                              s.failed_quality.end());
      d.blocking_tests.insert(d.blocking_tests.end(), s.failed_deterioration.begin(),
                              s.failed_deterioration.end());
    }
    if (!s.all_guardrails) {
      d.blocking_tests.insert(d.blocking_tests.end(), s.failed_guardrail.begin(),
                              s.failed_guardrail.end());
    }
    if (s.has_success && !s.any_success) {
      d.blocking_tests.insert(d.blocking_tests.end(), s.failed_success.begin(),
                              s.failed_success.end());
    }
  }
  return d;
}

std::string category_of(const std::string& test_id) {
  const auto pos = test_id.rfind(':');
  const std::string kind = pos == std::string::npos ? "" : test_id.substr(pos + 1);
  if (kind == "quality") return "quality";
  if (kind == "inferiority") return "deterioration";
  if (kind == "non_inferiority") return "guardrail";
  return "success";
}

}  // namespace

bool ship_rule1_clauses(bool has_success_tests, bool any_success_superior,
                        bool all_guardrails_noninferior) {
  const bool success_clause = !has_success_tests || any_success_superior;
  return success_clause && all_guardrails_noninferior;
}

bool ship_rule2_clauses(bool has_success_tests, bool any_success_superior,
                        bool all_guardrails_noninferior, bool any_deterioration,
                        bool any_quality_failure) {
  return ship_rule1_clauses(has_success_tests, any_success_superior,
                            all_guardrails_noninferior) &&
         !any_deterioration && !any_quality_failure;
}

Decision evaluate_rule1(const ExperimentOutcome& outcomes) {
  return assemble(scan(outcomes), /*rule2=*/false);
}

Decision evaluate_rule2(const ExperimentOutcome& outcomes) {
  return assemble(scan(outcomes), /*rule2=*/true);
}

std::vector<ExplainEntry> explain(const Decision& decision) {
  static const std::map<std::string, int> rank = {
      {"quality", 0}, {"deterioration", 1}, {"guardrail", 2}, {"success", 3}};
  std::vector<ExplainEntry> entries;
  entries.reserve(decision.blocking_tests.size());
  for (const auto& id : decision.blocking_tests) entries.push_back({category_of(id), id});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ExplainEntry& a, const ExplainEntry& b) {
                     const int ra = rank.at(a.category);
                     const int rb = rank.at(b.category);
                     if (ra != rb) return ra < rb;
                     return a.test_id < b.test_id;
                   });
  return entries;
}

}  // namespace dgate
