#include "decision_gate/corrections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "decision_gate/errors.hpp"
#include "decision_gate/normal.hpp"

namespace dgate {

namespace {

void check_counts(const MetricCounts& counts) {
  if (counts.success < 0 || counts.guardrail < 0 || counts.extra_deterioration < 0 ||
      counts.quality < 0) {
    throw planning_error("metric counts must be non-negative");
  }
  if (counts.total() < 1) throw planning_error("at least one metric is required");
}

void check_powered(const MetricCounts& counts) {
  if (counts.success + counts.guardrail < 1) {
    throw planning_error("decision-rule planning requires at least one success or guardrail metric");
  }
}

// beta_star = (beta - reduction) / ((1 - reduction) * (G+1)), dividing by G
// instead when there is no success clause.
double beta_star_for(double beta, double reduction, double effective_guardrails,
                     bool has_success) {
  const double divisor = has_success ? effective_guardrails + 1.0 : effective_guardrails;
  return (beta - reduction) / ((1.0 - reduction) * divisor);
}

}  // namespace

void validate_budget(const RiskBudget& budget) {
  if (!(budget.alpha > 0.0 && budget.alpha < 1.0)) {
    throw planning_error("alpha must lie in (0,1)");
  }
  if (!(budget.beta > 0.0 && budget.beta < 1.0)) {
    throw planning_error("beta must lie in (0,1)");
  }
  if (!(budget.alpha_minus >= 0.0 && budget.alpha_minus < 1.0)) {
    throw planning_error("alpha_minus must lie in [0,1)");
  }
  if (!(budget.alpha_minus < budget.beta)) {
    throw planning_error("alpha_minus must be < beta");
  }
  if (!(budget.alpha_minus <= 1.0 - budget.alpha)) {
    throw planning_error("alpha_minus must be <= 1 - alpha");
  }
}

CorrectedLevels correct_prop33(const MetricCounts& counts, const RiskBudget& budget) {
  check_counts(counts);
  check_powered(counts);
  validate_budget(budget);
  if (counts.extra_deterioration != 0 || counts.quality != 0) {
    throw planning_error("correct_prop33 requires D = Q = 0");
  }
  CorrectedLevels out;
  const bool has_success = counts.success > 0;
  if (has_success) out.alpha_success = budget.alpha / counts.success;
  out.alpha_guardrail = budget.alpha;
  out.beta_star = beta_star_for(budget.beta, 0.0, counts.guardrail, has_success);
  out.alpha_minus_star = budget.alpha_minus / counts.total();
  return out;
}

CorrectedLevels correct_prop41(const MetricCounts& counts, const RiskBudget& budget) {
  check_counts(counts);
  check_powered(counts);
  validate_budget(budget);
  if (!(budget.alpha_minus < budget.beta)) {
    throw planning_error("beta budget exhausted by deterioration/quality tests");
  }
  CorrectedLevels out;
  const bool has_success = counts.success > 0;
  if (has_success) out.alpha_success = budget.alpha / counts.success;
  out.alpha_guardrail = budget.alpha;
  out.alpha_minus_star = budget.alpha_minus / counts.total();
  out.beta_star = beta_star_for(budget.beta, budget.alpha_minus, counts.guardrail, has_success);
  return out;
}

CorrectedLevels correct_prop41_improved(const MetricCounts& counts, const RiskBudget& budget,
                                        bool use_remark, bool guardrails_may_be_overpowered) {
  check_counts(counts);
  check_powered(counts);
  validate_budget(budget);

  const double n_total = counts.total();
  const int s = counts.success;
  const int g = counts.guardrail;
  const int d = counts.extra_deterioration;
  const int q = counts.quality;

  double phi;
  if (guardrails_may_be_overpowered) {
    phi = (s + g + d) > 0
              ? static_cast<double>(s - 1 + g + d) / (s + g + d) * budget.alpha_minus
              : 0.0;
  } else if (use_remark) {
    phi = static_cast<double>(d + q) / n_total * budget.alpha_minus;
  } else {
    phi = static_cast<double>(d + s + q - 1) / n_total * budget.alpha_minus;
  }
  phi = std::max(phi, 0.0);
  if (!(phi < budget.beta)) {
    throw planning_error("beta budget exhausted by deterioration/quality tests");
  }

  CorrectedLevels out;
  out.alpha_minus_star = budget.alpha_minus / n_total;
  const bool has_success = s > 0;
  if (has_success) {
    out.alpha_success = (s + d >= 2)
                            ? budget.alpha / ((1.0 - out.alpha_minus_star) * s)
                            : budget.alpha / s;
  }
  out.alpha_guardrail = budget.alpha;
  out.beta_star = beta_star_for(budget.beta, phi, g, has_success);
  return out;
}

double nyholt_effective_tests(const CorrelationMatrix& corr) {
  const int m = corr.dim();
  if (m == 1) return 1.0;
  const std::vector<double> eig = symmetric_eigenvalues(corr);
  double mean = 0.0;
  for (double e : eig) mean += e;
  mean /= m;
  double var = 0.0;
  for (double e : eig) var += (e - mean) * (e - mean);
  var /= (m - 1);  // sample variance, matching the method's convention
  const double me = 1.0 + (m - 1) * (1.0 - var / m);
  return std::clamp(me, 1.0, static_cast<double>(m));
}

CorrectedLevels resolve_levels(const CorrectionPolicy& policy, const MetricCounts& counts,
                               const RiskBudget& budget,
                               const std::optional<CorrelationMatrix>& corr_success,
                               const std::optional<CorrelationMatrix>& corr_guardrail) {
  check_counts(counts);
  check_powered(counts);
  validate_budget(budget);

  if (policy.correction == Correction::None) {
    CorrectedLevels out;
    if (counts.success > 0) out.alpha_success = budget.alpha;
    out.alpha_guardrail = budget.alpha;
    out.alpha_minus_star = budget.alpha_minus;
    out.beta_star = budget.beta;
    return out;
  }

  double eff_success = counts.success;
  double eff_guardrail = counts.guardrail;
  if (policy.nyholt) {
    if (counts.success > 0 && corr_success) {
      if (corr_success->dim() != counts.success) {
        throw planning_error("nyholt: success correlation matrix dimension mismatch");
      }
      eff_success = nyholt_effective_tests(*corr_success);
    }
    if (counts.guardrail > 0 && corr_guardrail) {
      if (corr_guardrail->dim() != counts.guardrail) {
        throw planning_error("nyholt: guardrail correlation matrix dimension mismatch");
      }
      eff_guardrail = nyholt_effective_tests(*corr_guardrail);
    }
  }
  const double n_eff = eff_success + eff_guardrail + counts.extra_deterioration + counts.quality;
  const bool has_success = counts.success > 0;
  const int d = counts.extra_deterioration;
  const int q = counts.quality;

  CorrectedLevels out;
  out.alpha_guardrail = budget.alpha;

  switch (policy.correction) {
    case Correction::OnlyAlpha:
      if (has_success) out.alpha_success = budget.alpha / eff_success;
      out.alpha_minus_star = budget.alpha_minus / n_eff;
      out.beta_star = budget.beta;
      break;
    case Correction::Prop33:
      if (d != 0 || q != 0) throw planning_error("prop33 requires D = Q = 0");
      if (has_success) out.alpha_success = budget.alpha / eff_success;
      out.alpha_minus_star = budget.alpha_minus / n_eff;
      out.beta_star = beta_star_for(budget.beta, 0.0, eff_guardrail, has_success);
      break;
    case Correction::Prop41:
      if (!(budget.alpha_minus < budget.beta)) {
        throw planning_error("beta budget exhausted by deterioration/quality tests");
      }
      if (has_success) out.alpha_success = budget.alpha / eff_success;
      out.alpha_minus_star = budget.alpha_minus / n_eff;
      out.beta_star = beta_star_for(budget.beta, budget.alpha_minus, eff_guardrail, has_success);
      break;
    case Correction::Prop41Improved:
    case Correction::Prop41ImprovedRemark: {
      const bool use_remark = policy.correction == Correction::Prop41ImprovedRemark;
      out.alpha_minus_star = budget.alpha_minus / n_eff;
      double phi = use_remark ? (d + q) / n_eff * budget.alpha_minus
                              : (d + eff_success + q - 1.0) / n_eff * budget.alpha_minus;
      phi = std::max(phi, 0.0);
      if (!(phi < budget.beta)) {
        throw planning_error("beta budget exhausted by deterioration/quality tests");
      }
      if (has_success) {
        out.alpha_success = (counts.success + d >= 2)
                                ? budget.alpha / ((1.0 - out.alpha_minus_star) * eff_success)
                                : budget.alpha / eff_success;
      }
      out.beta_star = beta_star_for(budget.beta, phi, eff_guardrail, has_success);
      break;
    }
    case Correction::None:
      break;  // handled above
  }
  return out;
}

Rule1Rates analytic_rule1_error_rates(const MetricCounts& counts, const RiskBudget& budget,
                                      RuleStructure structure, bool corrected) {
  if (counts.extra_deterioration != 0 || counts.quality != 0) {
    throw std::domain_error("analytic_rule1_error_rates requires D = Q = 0");
  }
  const int s = counts.success;
  const int g = counts.guardrail;
  if (s < 0 || g < 0 || s + g < 1) {
    throw std::domain_error("analytic_rule1_error_rates: unsupported configuration");
  }
  const double alpha = budget.alpha;
  const double beta = budget.beta;
  const bool indep = structure == RuleStructure::Independent;

  Rule1Rates out;
  if (s == 0) {
    // Guardrails only: the IU test needs no alpha correction.
    out.type1 = indep ? std::pow(alpha, g) : alpha;
    const double b = corrected ? beta / g : beta;
    out.power = indep ? std::pow(1.0 - b, g) : 1.0 - b;
  } else if (g == 0) {
    // Success only: the UI test needs no beta correction.
    const double a = corrected ? alpha / s : alpha;
    out.type1 = indep ? 1.0 - std::pow(1.0 - a, s) : a;
    out.power = indep ? 1.0 - std::pow(beta, s) : 1.0 - beta;
  } else {
    const double a = corrected ? alpha / s : alpha;
    const double b = corrected ? beta / (g + 1) : beta;
    if (indep) {
      out.type1 = std::pow(alpha, g) * (1.0 - std::pow(1.0 - a, s));
      out.power = std::pow(1.0 - b, g) * (1.0 - std::pow(b, s));
    } else {
      out.type1 = a;
      out.power = 1.0 - b;
    }
  }
  return out;
}

double deterioration_prob_under_alternative(int s, double alpha_plus, double alpha_minus,
                                            double beta) {
  if (s < 2) throw std::domain_error("deterioration_prob_under_alternative requires S >= 2");
  const double arg = std_normal_quantile(alpha_minus / s) -
                     std_normal_quantile(1.0 - alpha_plus / s) -
                     std_normal_quantile(1.0 - beta);
  return (s - 1) * std_normal_cdf(arg);
}

}  // namespace dgate
