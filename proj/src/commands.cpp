#include "decision_gate/commands.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "decision_gate/config_io.hpp"
#include "decision_gate/errors.hpp"
#include "decision_gate/normal.hpp"

namespace dgate {

namespace {

DesignPlan plan_from_config(const ExperimentConfig& config) {
  return build_design_plan(config.metrics, config.budget, config.policy, std::nullopt,
                           std::nullopt, config.auto_deterioration);
}

// Assemble per-test outcomes for the planned roster from the results file.
// Direction normalization happens here: decrease_good estimates flip sign.
ExperimentOutcome run_planned_tests(const ExperimentConfig& config, const DesignPlan& plan,
                                    const ResultsData& results) {
  std::map<std::string, const MetricSpec*> specs;
  for (const auto& m : config.metrics) specs[m.id] = &m;

  std::map<std::string, MetricReadout> readouts;
  for (const auto& [id, readout] : results.metrics) {
    if (!specs.count(id)) throw evaluation_error("results contain unplanned metric '" + id + "'");
    if (readouts.count(id)) throw evaluation_error("duplicate result for metric '" + id + "'");
    MetricReadout r = readout;
    if (specs.at(id)->direction == Direction::DecreaseIsGood) r.estimate = -r.estimate;
    readouts[id] = r;
  }

  // Quality roster: the metric with id "srm" consumes the srm count block;
  // every other quality metric consumes external p-values in declared order.
  std::vector<std::string> external_quality_ids;
  bool wants_srm = false;
  for (const auto& m : config.metrics) {
    if (m.roles.count(MetricRole::Quality)) {
      if (m.id == "srm") wants_srm = true;
      else external_quality_ids.push_back(m.id);
    }
  }
  if (wants_srm && !results.srm) {
    throw evaluation_error("config declares an srm quality metric but results lack quality.srm");
  }
  if (external_quality_ids.size() != results.external_quality_pvalues.size()) {
    throw evaluation_error("expected " + std::to_string(external_quality_ids.size()) +
                           " external quality p-values, got " +
                           std::to_string(results.external_quality_pvalues.size()));
  }
  std::map<std::string, double> external_pvalues;
  for (size_t i = 0; i < external_quality_ids.size(); ++i) {
    external_pvalues[external_quality_ids[i]] = results.external_quality_pvalues[i];
  }

  ExperimentOutcome outcome;
  for (const auto& test : plan.tests) {
    TestResult result;
    result.test_id = test.test_id;
    result.metric_id = test.metric_id;
    result.kind = test.kind;

    if (test.kind == TestKind::QualitySrm) {
      if (test.metric_id == "srm") {
        const SrmCounts& srm = *results.srm;
        result.outcome = run_srm(srm.treatment_count, srm.control_count, srm.planned_ratio,
                                 test.level);
      } else {
        const double p = external_pvalues.at(test.metric_id);
        result.outcome.p_value = p;
        result.outcome.z_statistic =
            p <= 0.0 ? 1e9 : (p >= 1.0 ? -1e9 : std_normal_quantile(1.0 - p));
        result.outcome.rejected = p < test.level;
        result.outcome.ci_lower = std::numeric_limits<double>::quiet_NaN();
      }
      outcome.results.push_back(std::move(result));
      continue;
    }

    auto it = readouts.find(test.metric_id);
    if (it == readouts.end()) {
      throw evaluation_error("missing result for metric '" + test.metric_id + "'");
    }
    TestSpec spec;
    spec.significance_level = test.level;
    switch (test.kind) {
      case TestKind::Superiority:
        spec.kind = TestKind::Superiority;
        result.outcome = run_superiority(it->second, spec);
        break;
      case TestKind::NonInferiority:
        spec.kind = TestKind::NonInferiority;
        spec.nim = specs.at(test.metric_id)->nim;
        result.outcome = run_noninferiority(it->second, spec);
        break;
      case TestKind::Inferiority:
        spec.kind = TestKind::Inferiority;
        result.outcome = run_inferiority(it->second, spec);
        break;
      case TestKind::QualitySrm:
        break;  // handled above
    }
    outcome.results.push_back(std::move(result));
  }

  // Every supplied readout must belong to a planned test.
  std::set<std::string> planned_metrics;
  for (const auto& t : plan.tests) planned_metrics.insert(t.metric_id);
  for (const auto& [id, r] : readouts) {
    (void)r;
    if (!planned_metrics.count(id)) {
      throw evaluation_error("results contain unplanned metric '" + id + "'");
    }
  }
  return outcome;
}

}  // namespace

int cmd_design(const std::string& config_path, const std::string& format, std::ostream& out,
               std::ostream& err) {
  try {
    const ExperimentConfig config = parse_experiment_config(read_file(config_path));
    const DesignPlan plan = plan_from_config(config);
    out << (format == "json" ? plan_to_json(plan) : plan_to_table(plan));
    return kExitShip;
  } catch (const planning_error& e) {
    err << "infeasible design: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_evaluate(const std::string& config_path, const std::string& results_path,
                 const std::string& format, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig config = parse_experiment_config(read_file(config_path));
    const DesignPlan plan = plan_from_config(config);
    const ResultsData results = parse_results(read_file(results_path));
    const ExperimentOutcome outcomes = run_planned_tests(config, plan, results);
    const Decision decision = evaluate_rule2(outcomes);
    out << (format == "json" ? decision_to_json(decision, outcomes)
                             : decision_to_table(decision, outcomes));
    return decision.verdict == Verdict::Ship ? kExitShip : kExitNoShip;
  } catch (const planning_error& e) {
    err << "infeasible design: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const evaluation_error& e) {
    err << "evaluation error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    SpendingKind spending;
    if (args.spending == "obf") spending = SpendingKind::OBrienFlemingType;
    else if (args.spending == "linear") spending = SpendingKind::LinearType;
    else throw config_error("spending: expected obf or linear");

    std::vector<RejectionReport> reports;
    if (args.paper_tables) {
      auto grid = paper_tables_grid(args.replications, args.seed, args.nyholt, args.threads);
      for (auto& cell : grid) {
        cell.k_looks = args.looks;
        cell.spending = spending;
      }
      reports = run_table(std::move(grid));
    } else {
      SimulationConfig config;
      if (args.scenario == "global_h0") config.scenario = Scenario::GlobalH0;
      else if (args.scenario == "status_quo") config.scenario = Scenario::StatusQuo;
      else if (args.scenario == "global_h1") config.scenario = Scenario::GlobalH1;
      else throw config_error("scenario: expected global_h0, status_quo or global_h1");

      if (args.structure == "independent") config.structure = CovarianceStructure::independent();
      else if (args.structure == "dependent") config.structure = CovarianceStructure::dependent();
      else if (args.structure == "block1") config.structure = CovarianceStructure::block1();
      else if (args.structure == "block2") config.structure = CovarianceStructure::block2();
      else throw config_error("structure: expected independent, dependent, block1 or block2");

      if (args.correction == "none") config.policy.correction = Correction::None;
      else if (args.correction == "only_alpha") config.policy.correction = Correction::OnlyAlpha;
      else if (args.correction == "prop33") config.policy.correction = Correction::Prop33;
      else if (args.correction == "prop41") config.policy.correction = Correction::Prop41;
      else if (args.correction == "prop41_improved")
        config.policy.correction = Correction::Prop41Improved;
      else if (args.correction == "prop41_improved_remark")
        config.policy.correction = Correction::Prop41ImprovedRemark;
      else
        throw config_error(
            "correction: expected none, only_alpha, prop33, prop41, prop41_improved or "
            "prop41_improved_remark");
      config.policy.nyholt = args.nyholt;

      if (args.replications < 1) throw config_error("reps: must be >= 1");
      if (args.looks < 1) throw config_error("looks: must be >= 1");
      config.counts = {args.success_count, args.guardrail_count, args.deterioration_count,
                       args.quality_count};
      config.budget = {args.alpha, args.alpha_minus, args.beta};
      config.replications = args.replications;
      config.seed = args.seed;
      config.k_looks = args.looks;
      config.threads = args.threads;
      config.spending = spending;
      reports.push_back(run_simulation(config));
    }

    const std::string rendered =
        args.format == "json" ? reports_to_json(reports) : render_reports_tsv(reports);
    if (args.out_path.empty()) out << rendered;
    else write_file(args.out_path, rendered);
    return kExitShip;
  } catch (const planning_error& e) {
    err << "infeasible design: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace dgate
