#include "decision_gate/sequential.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "decision_gate/normal.hpp"

namespace dgate {

namespace {

// Boundaries beyond this are unreachable at double precision; looks whose
// incremental spend is negligible get capped here instead of a root solve.
constexpr double kBoundaryCap = 8.2;
constexpr double kGridSpanSds = 7.5;

double cumulative_spend(SpendingKind kind, double alpha, double t) {
  switch (kind) {
    case SpendingKind::OBrienFlemingType:
      return 2.0 * (1.0 - std_normal_cdf(std_normal_quantile(1.0 - alpha / 2.0) / std::sqrt(t)));
    case SpendingKind::LinearType:
      return alpha * t;
  }
  return alpha * t;
}

// One pass of the first-crossing recursion on a grid of `nodes` points.
// Works on the Brownian scale B_k = Z_k * sqrt(t_k); the sub-density of
// (B_k, no crossing through k) lives on [-span*sd_k, boundary_k].
std::vector<double> recursion_boundaries(const std::vector<double>& t,
                                         const std::vector<double>& spend_increment,
                                         double total_alpha, int nodes) {
  const int k_total = static_cast<int>(t.size());
  std::vector<double> critical(k_total);

  critical[0] = spend_increment[0] > 1e-15 * total_alpha
                    ? std::min(std_normal_quantile(1.0 - spend_increment[0]), kBoundaryCap)
                    : kBoundaryCap;
  if (k_total == 1) return critical;

  const double sd1 = std::sqrt(t[0]);
  double upper = critical[0] * sd1;
  std::vector<double> grid(nodes), density(nodes), weight(nodes);
  {
    const double lo = -kGridSpanSds * sd1;
    const double h = (upper - lo) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) {
      grid[i] = lo + h * i;
      density[i] = std_normal_pdf(grid[i] / sd1) / sd1;
      weight[i] = h;
    }
    weight[0] *= 0.5;
    weight[nodes - 1] *= 0.5;
  }

  for (int k = 1; k < k_total; ++k) {
    const double dt = t[k] - t[k - 1];
    const double sd = std::sqrt(dt);

    const auto crossing_prob = [&](double u) {
      double acc = 0.0;
      for (int i = 0; i < nodes; ++i) {
        acc += weight[i] * density[i] * (1.0 - std_normal_cdf((u - grid[i]) / sd));
      }
      return acc;
    };

    double u_k;
    if (spend_increment[k] > 1e-15 * total_alpha) {
      double lo = grid[0];
      double hi = kBoundaryCap * std::sqrt(t[k]);
      for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (crossing_prob(mid) > spend_increment[k]) lo = mid;
        else hi = mid;
      }
      u_k = 0.5 * (lo + hi);
    } else {
      u_k = kBoundaryCap * std::sqrt(t[k]);
    }
    critical[k] = std::min(u_k / std::sqrt(t[k]), kBoundaryCap);
    u_k = critical[k] * std::sqrt(t[k]);

    if (k + 1 == k_total) break;  // density update not needed after the last look

    const double lo_k = -kGridSpanSds * std::sqrt(t[k]);
    const double h = (u_k - lo_k) / (nodes - 1);
    std::vector<double> new_grid(nodes), new_density(nodes), new_weight(nodes, h);
    for (int j = 0; j < nodes; ++j) {
      const double y = lo_k + h * j;
      double acc = 0.0;
      for (int i = 0; i < nodes; ++i) {
        acc += weight[i] * density[i] * std_normal_pdf((y - grid[i]) / sd);
      }
      new_grid[j] = y;
      new_density[j] = acc / sd;
    }
    new_weight[0] *= 0.5;
    new_weight[nodes - 1] *= 0.5;
    grid.swap(new_grid);
    density.swap(new_density);
    weight.swap(new_weight);
  }
  return critical;
}

}  // namespace

SpendingPlan SpendingPlan::equally_spaced(double total_alpha, int k_analyses, SpendingKind kind) {
  SpendingPlan plan;
  plan.total_alpha = total_alpha;
  plan.k_analyses = k_analyses;
  plan.spending_kind = kind;
  plan.information_fractions.resize(k_analyses);
  for (int k = 0; k < k_analyses; ++k) {
    plan.information_fractions[k] = static_cast<double>(k + 1) / k_analyses;
  }
  return plan;
}

BoundarySchedule compute_boundaries(const SpendingPlan& plan) {
  if (plan.k_analyses < 1) throw std::domain_error("compute_boundaries: k_analyses must be >= 1");
  if (!(plan.total_alpha > 0.0 && plan.total_alpha < 1.0)) {
    throw std::domain_error("compute_boundaries: total_alpha must lie in (0,1)");
  }
  const auto& t = plan.information_fractions;
  if (static_cast<int>(t.size()) != plan.k_analyses) {
    throw std::domain_error("compute_boundaries: fraction count does not match k_analyses");
  }
  double prev = 0.0;
  for (double frac : t) {
    if (!(frac > prev)) throw std::domain_error("compute_boundaries: fractions must be strictly increasing");
    prev = frac;
  }
  if (std::fabs(t.back() - 1.0) > 1e-12) {
    throw std::domain_error("compute_boundaries: last fraction must be 1");
  }

  BoundarySchedule schedule;
  schedule.total_alpha = plan.total_alpha;
  schedule.information_fractions = t;
  schedule.incremental_alpha.resize(plan.k_analyses);
  double spent = 0.0;
  for (int k = 0; k < plan.k_analyses; ++k) {
    const double target = (k + 1 == plan.k_analyses)
                              ? plan.total_alpha
                              : cumulative_spend(plan.spending_kind, plan.total_alpha, t[k]);
    schedule.incremental_alpha[k] = std::max(target - spent, 0.0);
    spent = target;
  }

  if (plan.k_analyses == 1) {
    schedule.critical_z = {std_normal_quantile(1.0 - plan.total_alpha)};
    return schedule;
  }

  int nodes = 512;
  std::vector<double> current =
      recursion_boundaries(t, schedule.incremental_alpha, plan.total_alpha, nodes);
  for (int refinement = 0; refinement < 4; ++refinement) {
    nodes *= 2;
    std::vector<double> refined =
        recursion_boundaries(t, schedule.incremental_alpha, plan.total_alpha, nodes);
    double drift = 0.0;
    for (size_t k = 0; k < refined.size(); ++k) {
      drift = std::max(drift, std::fabs(refined[k] - current[k]));
    }
    current.swap(refined);
    if (drift < 1e-5) break;
  }
  schedule.critical_z = std::move(current);
  return schedule;
}

const BoundarySchedule& cached_boundaries(double total_alpha, int k_analyses, SpendingKind kind) {
  using Key = std::tuple<double, int, int>;
  static std::map<Key, BoundarySchedule> cache;
  static std::mutex mutex;
  const Key key{total_alpha, k_analyses, static_cast<int>(kind)};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, compute_boundaries(SpendingPlan::equally_spaced(
                                total_alpha, k_analyses, kind)))
             .first;
  }
  return it->second;
}

std::optional<int> evaluate_sequential(std::span<const double> stat_path,
                                       const BoundarySchedule& schedule) {
  if (stat_path.size() > schedule.critical_z.size()) {
    throw std::domain_error("evaluate_sequential: path longer than the schedule");
  }
  for (size_t k = 0; k < stat_path.size(); ++k) {
    if (stat_path[k] < -schedule.critical_z[k]) return static_cast<int>(k) + 1;
  }
  return std::nullopt;
}

}  // namespace dgate
