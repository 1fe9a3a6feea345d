#include "decision_gate/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "decision_gate/decision.hpp"
#include "decision_gate/errors.hpp"
#include "decision_gate/normal.hpp"
#include "decision_gate/random.hpp"

namespace dgate {

namespace {

CorrelationMatrix build_sg_correlation(const CovarianceStructure& structure, int s, int g) {
  const int dim = s + g;
  switch (structure.kind) {
    case CovarianceKind::Independent:
      return CorrelationMatrix::identity(dim);
    case CovarianceKind::Dependent:
      return CorrelationMatrix::equicorrelated(dim, 0.99);
    case CovarianceKind::Block1:
    case CovarianceKind::Block2: {
      std::vector<double> e(static_cast<size_t>(dim) * dim, 0.0);
      for (int i = 0; i < dim; ++i) e[static_cast<size_t>(i) * dim + i] = 1.0;
      const int lo = structure.kind == CovarianceKind::Block1 ? 0 : s;
      const int hi = structure.kind == CovarianceKind::Block1 ? s : dim;
      for (int i = lo; i < hi; ++i) {
        for (int j = lo; j < hi; ++j) {
          if (i != j) e[static_cast<size_t>(i) * dim + j] = 0.99;
        }
      }
      return CorrelationMatrix::from_entries(dim, std::move(e));
    }
    case CovarianceKind::Explicit:
      if (!structure.matrix || structure.matrix->dim() != dim) {
        throw planning_error("explicit covariance structure must have dim S+G");
      }
      return *structure.matrix;
  }
  throw planning_error("unknown covariance structure");
}

CorrelationMatrix diagonal_block(const CorrelationMatrix& m, int offset, int size) {
  std::vector<double> e(static_cast<size_t>(size) * size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      e[static_cast<size_t>(i) * size + j] = m.at(offset + i, offset + j);
    }
  }
  return CorrelationMatrix::from_entries(size, std::move(e));
}

struct EventCounts {
  int64_t any_success = 0;
  int64_t all_guardrails = 0;
  int64_t any_det_sg = 0;
  int64_t any_det_quality = 0;
  int64_t ship = 0;

  EventCounts& operator+=(const EventCounts& o) {
    any_success += o.any_success;
    all_guardrails += o.all_guardrails;
    any_det_sg += o.any_det_sg;
    any_det_quality += o.any_det_quality;
    ship += o.ship;
    return *this;
  }
};

RateWithSe make_rate(int64_t count, int64_t reps) {
  RateWithSe r;
  r.rate = static_cast<double>(count) / static_cast<double>(reps);
  r.se = std::sqrt(r.rate * (1.0 - r.rate) / static_cast<double>(reps));
  return r;
}

}  // namespace

RejectionReport run_simulation(const SimulationConfig& config) {
  if (config.replications < 1) throw planning_error("replications must be >= 1");
  if (config.k_looks < 1) throw planning_error("k_looks must be >= 1");
  const int s = config.counts.success;
  const int g = config.counts.guardrail;
  const int d = config.counts.extra_deterioration;
  const int q = config.counts.quality;
  const int n_metrics = config.counts.total();
  const int k_looks = config.k_looks;

  const CorrelationMatrix sg_corr = build_sg_correlation(config.structure, s, g);
  std::optional<CorrelationMatrix> corr_success;
  std::optional<CorrelationMatrix> corr_guardrail;
  if (config.policy.nyholt) {
    if (s > 0) corr_success = diagonal_block(sg_corr, 0, s);
    if (g > 0) corr_guardrail = diagonal_block(sg_corr, s, g);
  }
  const CorrectedLevels levels =
      resolve_levels(config.policy, config.counts, config.budget, corr_success, corr_guardrail);

  const double thr_success =
      s > 0 ? std_normal_quantile(1.0 - *levels.alpha_success) : 0.0;
  const double thr_guardrail =
      g > 0 ? std_normal_quantile(1.0 - levels.alpha_guardrail) : 0.0;
  const double z_power = std_normal_quantile(1.0 - levels.beta_star);
  // Design drifts on the standardized scale: the alternative a success test
  // is powered for, and the NIM expressed in standard errors.
  const double drift_success = s > 0 ? thr_success + z_power : 0.0;
  const double shift_guardrail = g > 0 ? thr_guardrail + z_power : 0.0;

  double theta_success = 0.0;
  double theta_guardrail = 0.0;
  if (config.scenario == Scenario::GlobalH1) theta_success = drift_success;
  if (config.scenario == Scenario::GlobalH0) theta_guardrail = -shift_guardrail;

  const bool any_sequential = config.auto_deterioration || d > 0 || q > 0;
  const BoundarySchedule* schedule = nullptr;
  if (any_sequential) {
    schedule = &cached_boundaries(levels.alpha_minus_star, k_looks, config.spending);
  }
  const LowerTriangular chol = cholesky_lower(sg_corr);

  std::vector<double> theta(n_metrics, 0.0);
  for (int m = 0; m < s; ++m) theta[m] = theta_success;
  for (int m = s; m < s + g; ++m) theta[m] = theta_guardrail;

  std::vector<double> t_frac(k_looks), sqrt_t(k_looks);
  for (int k = 0; k < k_looks; ++k) {
    t_frac[k] = static_cast<double>(k + 1) / k_looks;
    sqrt_t[k] = std::sqrt(t_frac[k]);
  }
  const double look_sd = std::sqrt(1.0 / k_looks);

  const auto worker = [&](int64_t rep_begin, int64_t rep_end, EventCounts& out) {
    const int sg = s + g;
    std::vector<double> z(sg), y(sg), brownian(n_metrics);
    EventCounts local;
    for (int64_t rep = rep_begin; rep < rep_end; ++rep) {
      RandomStream stream(config.seed, config.substream_base + static_cast<uint64_t>(rep));
      std::fill(brownian.begin(), brownian.end(), 0.0);
      bool det_sg = false;
      bool det_dq = false;

      for (int k = 0; k < k_looks; ++k) {
        for (int i = 0; i < sg; ++i) z[i] = stream.next_normal();
        for (int i = 0; i < sg; ++i) {
          double acc = 0.0;
          for (int j = 0; j <= i; ++j) acc += chol.at(i, j) * z[j];
          y[i] = acc;
        }
        for (int i = 0; i < sg; ++i) brownian[i] += look_sd * y[i];
        for (int i = sg; i < n_metrics; ++i) brownian[i] += look_sd * stream.next_normal();

        if (schedule != nullptr) {
          // z_k < -c_k on the z scale, checked on the Brownian scale:
          // B_k + theta*t_k < -c_k*sqrt(t_k)
          const double bound = -schedule->critical_z[k] * sqrt_t[k];
          if (config.auto_deterioration && !det_sg) {
            for (int i = 0; i < sg; ++i) {
              if (brownian[i] + theta[i] * t_frac[k] < bound) {
                det_sg = true;
                break;
              }
            }
          }
          if (!det_dq) {
            for (int i = sg; i < n_metrics; ++i) {
              if (brownian[i] < bound) {
                det_dq = true;
                break;
              }
            }
          }
        }
      }

      bool any_success = false;
      for (int m = 0; m < s && !any_success; ++m) {
        any_success = brownian[m] + theta[m] > thr_success;
      }
      bool all_guardrails = true;
      for (int m = s; m < s + g && all_guardrails; ++m) {
        all_guardrails = brownian[m] + theta[m] + shift_guardrail > thr_guardrail;
      }

      if (any_success) ++local.any_success;
      if (all_guardrails) ++local.all_guardrails;
      if (det_sg) ++local.any_det_sg;
      if (det_dq) ++local.any_det_quality;
      if (ship_rule2_clauses(s > 0, any_success, all_guardrails, det_sg, det_dq)) ++local.ship;
    }
    out = local;
  };

  const int threads = std::max(1, config.threads);
  EventCounts total;
  if (threads == 1 || config.replications < 2 * threads) {
    worker(0, config.replications, total);
  } else {
    std::vector<EventCounts> partial(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int64_t chunk = (config.replications + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const int64_t begin = w * chunk;
      const int64_t end = std::min<int64_t>(begin + chunk, config.replications);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end, std::ref(partial[w]));
    }
    for (auto& th : pool) th.join();
    for (const auto& p : partial) total += p;
  }

  RejectionReport report;
  report.scenario = config.scenario;
  report.structure = config.structure.kind;
  report.policy = config.policy;
  report.replications = config.replications;
  report.r_success = make_rate(total.any_success, config.replications);
  report.r_guardrail = make_rate(total.all_guardrails, config.replications);
  report.r_det_sg = make_rate(total.any_det_sg, config.replications);
  report.r_det_quality = make_rate(total.any_det_quality, config.replications);
  report.decision = make_rate(total.ship, config.replications);
  return report;
}

std::vector<RejectionReport> run_table(std::vector<SimulationConfig> grid) {
  std::vector<RejectionReport> reports;
  reports.reserve(grid.size());
  uint64_t cell = 0;
  for (auto& config : grid) {
    config.substream_base = cell << 40;  // disjoint substream block per cell
    reports.push_back(run_simulation(config));
    ++cell;
  }
  return reports;
}

std::vector<SimulationConfig> paper_tables_grid(int64_t replications, uint64_t seed,
                                                bool with_nyholt, int threads) {
  std::vector<SimulationConfig> grid;
  const std::vector<Scenario> scenarios = {Scenario::GlobalH0, Scenario::StatusQuo,
                                           Scenario::GlobalH1};
  const std::vector<CovarianceStructure> structures = {
      CovarianceStructure::independent(), CovarianceStructure::dependent(),
      CovarianceStructure::block1(), CovarianceStructure::block2()};
  std::vector<CorrectionPolicy> policies = {{Correction::None, false},
                                            {Correction::OnlyAlpha, false},
                                            {Correction::Prop41, false}};
  if (with_nyholt) policies.push_back({Correction::Prop41Improved, true});

  for (Scenario scenario : scenarios) {
    for (const auto& structure : structures) {
      for (const auto& policy : policies) {
        SimulationConfig config;
        config.scenario = scenario;
        config.structure = structure;
        config.policy = policy;
        config.replications = replications;
        config.seed = seed;
        config.threads = threads;
        grid.push_back(config);
      }
    }
  }
  return grid;
}

SequentialOverlayRates run_appendix_c(SequentialMetricKind kind, bool under_alternative,
                                      int k_looks, double alpha, double beta,
                                      int64_t replications, uint64_t seed, int threads,
                                      SpendingKind spending) {
  if (k_looks < 1 || k_looks > 100) throw planning_error("k_looks must lie in 1..100");
  if (replications < 1) throw planning_error("replications must be >= 1");

  const double thr = std_normal_quantile(1.0 - alpha);
  const double design = thr + std_normal_quantile(1.0 - beta);
  // Success: drift 0 under H0, `design` under H1. Guardrail: raw drift -NIM/se
  // under H0, zero under H1; the final statistic is shifted by NIM/se.
  double theta = 0.0;
  double shift = 0.0;
  if (kind == SequentialMetricKind::Success) {
    if (under_alternative) theta = design;
  } else {
    shift = design;
    if (!under_alternative) theta = -design;
  }

  const BoundarySchedule& schedule = cached_boundaries(alpha, k_looks, spending);

  struct Counts {
    int64_t crossed = 0, final_rejected = 0, both = 0, decision = 0;
  };
  const auto worker = [&](int64_t begin, int64_t end, Counts& out) {
    Counts local;
    const double tick = std::sqrt(1.0 / k_looks);
    for (int64_t rep = begin; rep < end; ++rep) {
      RandomStream stream(seed, static_cast<uint64_t>(rep));
      double brownian = 0.0;
      bool crossed = false;
      for (int k = 0; k < k_looks; ++k) {
        brownian += tick * stream.next_normal();
        if (!crossed) {
          const double t = static_cast<double>(k + 1) / k_looks;
          const double z = brownian / std::sqrt(t) + theta * std::sqrt(t);
          if (z < -schedule.critical_z[k]) crossed = true;
        }
      }
      const bool final_rejected = brownian + theta + shift > thr;
      if (crossed) ++local.crossed;
      if (final_rejected) ++local.final_rejected;
      if (crossed && final_rejected) ++local.both;
      if (final_rejected && !crossed) ++local.decision;
    }
    out = local;
  };

  const int n_threads = std::max(1, threads);
  Counts total;
  if (n_threads == 1) {
    worker(0, replications, total);
  } else {
    std::vector<Counts> partial(n_threads);
    std::vector<std::thread> pool;
    const int64_t chunk = (replications + n_threads - 1) / n_threads;
    for (int w = 0; w < n_threads; ++w) {
      const int64_t begin = w * chunk;
      const int64_t end = std::min<int64_t>(begin + chunk, replications);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end, std::ref(partial[w]));
    }
    for (auto& th : pool) th.join();
    for (const auto& p : partial) {
      total.crossed += p.crossed;
      total.final_rejected += p.final_rejected;
      total.both += p.both;
      total.decision += p.decision;
    }
  }

  SequentialOverlayRates rates;
  rates.replications = replications;
  const double n = static_cast<double>(replications);
  rates.sig_decision = total.decision / n;
  rates.sig_deteriorating = total.crossed / n;
  rates.sig_final = total.final_rejected / n;
  rates.sig_both = total.both / n;
  return rates;
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::GlobalH0: return "global_h0";
    case Scenario::StatusQuo: return "status_quo";
    case Scenario::GlobalH1: return "global_h1";
  }
  return "unknown";
}

std::string structure_name(CovarianceKind k) {
  switch (k) {
    case CovarianceKind::Independent: return "independent";
    case CovarianceKind::Dependent: return "dependent";
    case CovarianceKind::Block1: return "block1";
    case CovarianceKind::Block2: return "block2";
    case CovarianceKind::Explicit: return "explicit";
  }
  return "unknown";
}

std::string correction_name(const CorrectionPolicy& p) {
  std::string name;
  switch (p.correction) {
    case Correction::None: name = "none"; break;
    case Correction::OnlyAlpha: name = "only_alpha"; break;
    case Correction::Prop33: name = "prop33"; break;
    case Correction::Prop41: name = "prop41"; break;
    case Correction::Prop41Improved: name = "prop41_improved"; break;
    case Correction::Prop41ImprovedRemark: name = "prop41_improved_remark"; break;
  }
  if (p.nyholt) name += "+nyholt";
  return name;
}

std::string render_reports_tsv(const std::vector<RejectionReport>& reports) {
  std::string out =
      "scenario\tstructure\tcorrection\tR_S\tR_G\tR_DSDG\tR_DQ\tdecision_rate\tse_decision\n";
  char line[512];
  for (const auto& r : reports) {
    std::snprintf(line, sizeof(line), "%s\t%s\t%s\t%.6g\t%.6g\t%.6g\t%.6g\t%.6g\t%.6g\n",
                  scenario_name(r.scenario).c_str(), structure_name(r.structure).c_str(),
                  correction_name(r.policy).c_str(), r.r_success.rate, r.r_guardrail.rate,
                  r.r_det_sg.rate, r.r_det_quality.rate, r.decision.rate, r.decision.se);
    out += line;
  }
  return out;
}

}  // namespace dgate
