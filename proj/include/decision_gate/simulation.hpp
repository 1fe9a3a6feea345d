#ifndef DECISION_GATE_SIMULATION_HPP
#define DECISION_GATE_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decision_gate/corrections.hpp"
#include "decision_gate/matrix.hpp"
#include "decision_gate/sequential.hpp"

namespace dgate {

// True-effect scenarios. GlobalH0 puts every guardrail at its
// non-inferiority null (-NIM) and success metrics at zero; StatusQuo puts
// every effect at zero; GlobalH1 puts success metrics at their design
// alternative and guardrails at zero.
enum class Scenario { GlobalH0, StatusQuo, GlobalH1 };

enum class CovarianceKind { Independent, Dependent, Block1, Block2, Explicit };

// Correlation across the success+guardrail block. Dependent: all pairwise
// 0.99. Block1: success block 0.99, guardrails independent. Block2:
// guardrail block 0.99, success independent. Extra deterioration and
// quality metrics are always independent of everything.
struct CovarianceStructure {
  CovarianceKind kind = CovarianceKind::Independent;
  std::optional<CorrelationMatrix> matrix;  // Explicit only; dim = S+G

  static CovarianceStructure independent() { return {CovarianceKind::Independent, {}}; }
  static CovarianceStructure dependent() { return {CovarianceKind::Dependent, {}}; }
  static CovarianceStructure block1() { return {CovarianceKind::Block1, {}}; }
  static CovarianceStructure block2() { return {CovarianceKind::Block2, {}}; }
  static CovarianceStructure explicit_matrix(CorrelationMatrix m) {
    return {CovarianceKind::Explicit, std::move(m)};
  }
};

struct SimulationConfig {
  MetricCounts counts{5, 5, 2, 2};
  RiskBudget budget{0.05, 0.05, 0.2};
  CorrectionPolicy policy{Correction::Prop41, false};
  Scenario scenario = Scenario::StatusQuo;
  CovarianceStructure structure = CovarianceStructure::independent();
  int64_t replications = 20000;
  int k_looks = 10;
  uint64_t seed = 0;
  uint64_t substream_base = 0;  // offset so grid cells own disjoint substreams
  int threads = 1;
  bool auto_deterioration = true;  // deterioration overlay on success/guardrail metrics
  SpendingKind spending = SpendingKind::LinearType;
};

struct RateWithSe {
  double rate = 0.0;
  double se = 0.0;
};

struct RejectionReport {
  Scenario scenario = Scenario::StatusQuo;
  CovarianceKind structure = CovarianceKind::Independent;
  CorrectionPolicy policy;
  int64_t replications = 0;
  RateWithSe r_success;      // at least one success superiority rejection
  RateWithSe r_guardrail;    // all guardrail non-inferiority rejections
  RateWithSe r_det_sg;       // any deterioration among success/guardrail metrics
  RateWithSe r_det_quality;  // any extra deterioration or quality rejection
  RateWithSe decision;       // Decision Rule 2 ship rate
};

// Simulates the full design/test/decide pipeline at the standardized-
// statistic level: correlated Gaussian increment paths per metric,
// group-sequential deterioration/quality tests across k_looks, fixed-horizon
// superiority/non-inferiority at the final look, Decision Rule 2 per
// replication. Deterministic given (seed, substream_base) at any thread
// count. Throws planning_error when the configured design is infeasible.
RejectionReport run_simulation(const SimulationConfig& config);

// One report per cell; cells draw from disjoint substream blocks.
std::vector<RejectionReport> run_table(std::vector<SimulationConfig> grid);

// Scenario x {Independent,Dependent,Block1,Block2} x {None,OnlyAlpha,Prop41}
// grid; with_nyholt appends the improved-correction-plus-Nyholt rows.
std::vector<SimulationConfig> paper_tables_grid(int64_t replications, uint64_t seed,
                                                bool with_nyholt, int threads);

enum class SequentialMetricKind { Success, Guardrail };

struct SequentialOverlayRates {
  int64_t replications = 0;
  double sig_decision = 0.0;       // final test rejected and no crossing
  double sig_deteriorating = 0.0;  // deterioration boundary crossed at any look
  double sig_final = 0.0;          // final superiority / non-inferiority rejection
  double sig_both = 0.0;           // crossed and final rejection in one replication
};

// Single-metric deterioration overlay study: a k-look sequential
// deterioration test at total level alpha over a fixed-horizon test designed
// for power 1-beta.
SequentialOverlayRates run_appendix_c(SequentialMetricKind kind, bool under_alternative,
                                      int k_looks, double alpha, double beta,
                                      int64_t replications, uint64_t seed, int threads = 1,
                                      SpendingKind spending = SpendingKind::LinearType);

std::string scenario_name(Scenario s);
std::string structure_name(CovarianceKind k);
std::string correction_name(const CorrectionPolicy& p);

// Delimiter-separated table, one row per report: scenario, structure,
// correction, R_S, R_G, R_DSDG, R_DQ, decision_rate, se_decision.
std::string render_reports_tsv(const std::vector<RejectionReport>& reports);

}  // namespace dgate

#endif
