#include "decision_gate/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "decision_gate/errors.hpp"

namespace dgate {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw config_error(path + ": " + what);
}

const json& require_field(const json& j, const std::string& path, const char* field) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(field);
  if (it == j.end()) fail(path + "." + field, "missing required field");
  return *it;
}

double require_number(const json& j, const std::string& path, const char* field) {
  const json& v = require_field(j, path, field);
  if (!v.is_number()) fail(path + "." + field, "expected a number");
  return v.get<double>();
}

int64_t require_integer(const json& j, const std::string& path, const char* field) {
  const json& v = require_field(j, path, field);
  if (!v.is_number_integer()) fail(path + "." + field, "expected an integer");
  return v.get<int64_t>();
}

std::string require_string(const json& j, const std::string& path, const char* field) {
  const json& v = require_field(j, path, field);
  if (!v.is_string()) fail(path + "." + field, "expected a string");
  return v.get<std::string>();
}

MetricRole parse_role(const std::string& s, const std::string& path) {
  if (s == "success") return MetricRole::Success;
  if (s == "guardrail") return MetricRole::Guardrail;
  if (s == "deterioration") return MetricRole::Deterioration;
  if (s == "quality") return MetricRole::Quality;
  fail(path, "unknown role '" + s + "'");
}

Correction parse_correction(const std::string& s, const std::string& path) {
  if (s == "none") return Correction::None;
  if (s == "only_alpha") return Correction::OnlyAlpha;
  if (s == "prop33") return Correction::Prop33;
  if (s == "prop41") return Correction::Prop41;
  if (s == "prop41_improved") return Correction::Prop41Improved;
  if (s == "prop41_improved_remark") return Correction::Prop41ImprovedRemark;
  fail(path, "unknown correction '" + s + "'");
}

json parse_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw config_error("invalid JSON");
  return j;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json root = parse_json_text(json_text);
  ExperimentConfig config;

  const json& metrics = require_field(root, "", "metrics");
  if (!metrics.is_array() || metrics.empty()) fail("metrics", "expected a non-empty array");
  for (size_t i = 0; i < metrics.size(); ++i) {
    const std::string path = "metrics[" + std::to_string(i) + "]";
    const json& m = metrics[i];
    MetricSpec spec;
    spec.id = require_string(m, path, "id");
    const json& roles = require_field(m, path, "roles");
    if (!roles.is_array() || roles.empty()) fail(path + ".roles", "expected a non-empty array");
    for (const auto& r : roles) {
      if (!r.is_string()) fail(path + ".roles", "expected strings");
      spec.roles.insert(parse_role(r.get<std::string>(), path + ".roles"));
    }
    const std::string direction = require_string(m, path, "direction");
    if (direction == "increase_good") spec.direction = Direction::IncreaseIsGood;
    else if (direction == "decrease_good") spec.direction = Direction::DecreaseIsGood;
    else fail(path + ".direction", "expected increase_good or decrease_good");

    const bool pure_quality =
        spec.roles.size() == 1 && spec.roles.count(MetricRole::Quality) == 1;
    if (m.contains("variance")) {
      spec.variance = require_number(m, path, "variance");
      if (!(spec.variance > 0.0)) fail(path + ".variance", "must be > 0");
    } else if (!pure_quality) {
      fail(path + ".variance", "missing required field");
    }
    if (m.contains("mde")) {
      spec.mde = require_number(m, path, "mde");
      if (!(*spec.mde > 0.0)) fail(path + ".mde", "must be > 0");
    }
    if (m.contains("nim")) {
      spec.nim = require_number(m, path, "nim");
      if (!(*spec.nim > 0.0)) fail(path + ".nim", "must be > 0");
    }
    if (spec.roles.count(MetricRole::Success) && !spec.mde) {
      fail(path + ".mde", "required for success metrics");
    }
    if (spec.roles.count(MetricRole::Guardrail) && !spec.nim) {
      fail(path + ".nim", "required for guardrail metrics");
    }
    config.metrics.push_back(std::move(spec));
  }

  const json& budget = require_field(root, "", "budget");
  config.budget.alpha = require_number(budget, "budget", "alpha");
  config.budget.alpha_minus = require_number(budget, "budget", "alpha_minus");
  config.budget.beta = require_number(budget, "budget", "beta");
  for (const char* field : {"alpha", "alpha_minus", "beta"}) {
    const double v = budget.at(field).get<double>();
    if (!(v >= 0.0 && v < 1.0)) fail(std::string("budget.") + field, "must lie in [0,1)");
  }

  const json& policy = require_field(root, "", "policy");
  config.policy.correction =
      parse_correction(require_string(policy, "policy", "correction"), "policy.correction");
  if (policy.contains("nyholt")) {
    if (!policy["nyholt"].is_boolean()) fail("policy.nyholt", "expected a boolean");
    config.policy.nyholt = policy["nyholt"].get<bool>();
  }
  if (policy.contains("auto_deterioration")) {
    if (!policy["auto_deterioration"].is_boolean()) {
      fail("policy.auto_deterioration", "expected a boolean");
    }
    config.auto_deterioration = policy["auto_deterioration"].get<bool>();
  }

  if (root.contains("sequential")) {
    const json& seq = root["sequential"];
    config.k_looks = static_cast<int>(require_integer(seq, "sequential", "k_looks"));
    if (config.k_looks < 1) fail("sequential.k_looks", "must be >= 1");
    const std::string spending = require_string(seq, "sequential", "spending");
    if (spending == "obf") config.spending = SpendingKind::OBrienFlemingType;
    else if (spending == "linear") config.spending = SpendingKind::LinearType;
    else fail("sequential.spending", "expected obf or linear");
  }
  return config;
}

ResultsData parse_results(const std::string& json_text) {
  const json root = parse_json_text(json_text);
  ResultsData data;

  const json& metrics = require_field(root, "", "metrics");
  if (!metrics.is_array()) fail("metrics", "expected an array");
  for (size_t i = 0; i < metrics.size(); ++i) {
    const std::string path = "metrics[" + std::to_string(i) + "]";
    const json& m = metrics[i];
    MetricReadout readout;
    const std::string id = require_string(m, path, "id");
    readout.estimate = require_number(m, path, "estimate");
    readout.std_error = require_number(m, path, "std_error");
    if (!(readout.std_error > 0.0)) fail(path + ".std_error", "must be > 0");
    readout.n_treatment = require_integer(m, path, "n_treatment");
    readout.n_control = require_integer(m, path, "n_control");
    if (readout.n_treatment < 1 || readout.n_control < 1) {
      fail(path + ".n_treatment", "sample sizes must be >= 1");
    }
    data.metrics.emplace_back(id, readout);
  }

  if (root.contains("quality")) {
    const json& quality = root["quality"];
    if (!quality.is_object()) fail("quality", "expected an object");
    if (quality.contains("srm")) {
      const json& srm = quality["srm"];
      SrmCounts counts;
      counts.treatment_count = require_integer(srm, "quality.srm", "treatment_count");
      counts.control_count = require_integer(srm, "quality.srm", "control_count");
      counts.planned_ratio = require_number(srm, "quality.srm", "planned_ratio");
      if (counts.treatment_count < 0 || counts.control_count < 0) {
        fail("quality.srm", "counts must be non-negative");
      }
      if (!(counts.planned_ratio > 0.0)) fail("quality.srm.planned_ratio", "must be > 0");
      data.srm = counts;
    }
    if (quality.contains("external_quality_pvalues")) {
      const json& ps = quality["external_quality_pvalues"];
      if (!ps.is_array()) fail("quality.external_quality_pvalues", "expected an array");
      for (const auto& p : ps) {
        if (!p.is_number()) fail("quality.external_quality_pvalues", "expected numbers");
        const double v = p.get<double>();
        if (!(v >= 0.0 && v <= 1.0)) {
          fail("quality.external_quality_pvalues", "p-values must lie in [0,1]");
        }
        data.external_quality_pvalues.push_back(v);
      }
    }
  }
  return data;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write file '" + path + "'");
  out << content;
}

std::string plan_to_json(const DesignPlan& plan) {
  json j;
  j["tests"] = json::array();
  for (const auto& t : plan.tests) {
    j["tests"].push_back({{"test_id", t.test_id},
                          {"metric_id", t.metric_id},
                          {"kind", test_kind_name(t.kind)},
                          {"level", t.level}});
  }
  j["power_targets"] = json::object();
  for (const auto& [id, power] : plan.power_targets) j["power_targets"][id] = power;
  j["required_n_per_group"] = plan.required_n_per_group;
  j["beta_star"] = plan.levels.beta_star;
  j["alpha_minus_star"] = plan.levels.alpha_minus_star;
  if (plan.levels.alpha_success) j["alpha_success"] = *plan.levels.alpha_success;
  j["alpha_guardrail"] = plan.levels.alpha_guardrail;
  j["counts"] = {{"success", plan.counts.success},
                 {"guardrail", plan.counts.guardrail},
                 {"extra_deterioration", plan.counts.extra_deterioration},
                 {"quality", plan.counts.quality}};
  j["budget"] = {{"alpha", plan.budget.alpha},
                 {"alpha_minus", plan.budget.alpha_minus},
                 {"beta", plan.budget.beta}};
  j["policy"] = {{"correction", correction_name({plan.policy.correction, false})},
                 {"nyholt", plan.policy.nyholt}};
  j["auto_deterioration"] = plan.auto_deterioration;
  return j.dump(2) + "\n";
}

std::string plan_to_table(const DesignPlan& plan) {
  std::ostringstream out;
  out << "test_id\tkind\tlevel\n";
  for (const auto& t : plan.tests) {
    out << t.test_id << "\t" << test_kind_name(t.kind) << "\t" << format_double(t.level) << "\n";
  }
  out << "\npower targets (1 - beta_star = " << format_double(1.0 - plan.levels.beta_star)
      << "):\n";
  for (const auto& [id, power] : plan.power_targets) {
    out << "  " << id << "\t" << format_double(power) << "\n";
  }
  out << "\nrequired n per group: " << plan.required_n_per_group << "\n";
  return out.str();
}

namespace {

json outcome_to_json(const TestResult& r) {
  json t{{"test_id", r.test_id},
         {"metric_id", r.metric_id},
         {"kind", test_kind_name(r.kind)},
         {"z", r.outcome.z_statistic},
         {"p_value", r.outcome.p_value},
         {"rejected", r.outcome.rejected}};
  if (std::isfinite(r.outcome.ci_lower)) t["ci_lower"] = r.outcome.ci_lower;
  else t["ci_lower"] = nullptr;
  return t;
}

}  // namespace

std::string decision_to_json(const Decision& decision, const ExperimentOutcome& outcomes) {
  json j;
  j["verdict"] = decision.verdict == Verdict::Ship ? "ship" : "no_ship";
  j["clauses"] = {{"any_success_superior", decision.any_success_superior},
                  {"all_guardrails_noninferior", decision.all_guardrails_noninferior},
                  {"no_deterioration", decision.no_deterioration},
                  {"no_quality_failure", decision.no_quality_failure}};
  j["blocking_tests"] = decision.blocking_tests;
  j["tests"] = json::array();
  for (const auto& r : outcomes.results) j["tests"].push_back(outcome_to_json(r));
  return j.dump(2) + "\n";
}

std::string decision_to_table(const Decision& decision, const ExperimentOutcome& outcomes) {
  std::ostringstream out;
  out << "verdict: " << (decision.verdict == Verdict::Ship ? "SHIP" : "NO SHIP") << "\n\n";
  out << "clauses:\n";
  out << "  any success superior:       " << (decision.any_success_superior ? "yes" : "no") << "\n";
  out << "  all guardrails noninferior: " << (decision.all_guardrails_noninferior ? "yes" : "no")
      << "\n";
  out << "  no deterioration:           " << (decision.no_deterioration ? "yes" : "no") << "\n";
  out << "  no quality failure:         " << (decision.no_quality_failure ? "yes" : "no") << "\n";
  out << "\ntests:\n";
  out << "test_id\tz\tp_value\trejected\tci_lower\n";
  for (const auto& r : outcomes.results) {
    out << r.test_id << "\t" << format_double(r.outcome.z_statistic) << "\t"
        << format_double(r.outcome.p_value) << "\t" << (r.outcome.rejected ? "yes" : "no") << "\t"
        << (std::isfinite(r.outcome.ci_lower) ? format_double(r.outcome.ci_lower) : "n/a") << "\n";
  }
  const auto entries = explain(decision);
  if (!entries.empty()) {
    out << "\nblocking:\n";
    for (const auto& e : entries) out << "  [" << e.category << "] " << e.test_id << "\n";
  }
  return out.str();
}

std::string reports_to_json(const std::vector<RejectionReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    const auto rate = [](const RateWithSe& v) {
      return json{{"rate", v.rate}, {"se", v.se}};
    };
    arr.push_back({{"scenario", scenario_name(r.scenario)},
                   {"structure", structure_name(r.structure)},
                   {"correction", correction_name(r.policy)},
                   {"replications", r.replications},
                   {"R_S", rate(r.r_success)},
                   {"R_G", rate(r.r_guardrail)},
                   {"R_DSDG", rate(r.r_det_sg)},
                   {"R_DQ", rate(r.r_det_quality)},
                   {"decision", rate(r.decision)}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace dgate
