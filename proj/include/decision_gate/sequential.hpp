#ifndef DECISION_GATE_SEQUENTIAL_HPP
#define DECISION_GATE_SEQUENTIAL_HPP

#include <optional>
#include <span>
#include <vector>

namespace dgate {

// Error-spending shapes for the one-sided group-sequential boundaries.
//   OBrienFlemingType: a(t) = 2*(1 - Phi(z_{1-alpha/2}/sqrt(t))) — conserves
//     nearly all alpha for late looks.
//   LinearType: a(t) = alpha*t — spends evenly across looks (the shape that
//     reproduces the reference deterioration-test operating characteristics).
enum class SpendingKind { OBrienFlemingType, LinearType };

struct SpendingPlan {
  double total_alpha = 0.05;
  int k_analyses = 1;
  std::vector<double> information_fractions;  // strictly increasing, last = 1
  SpendingKind spending_kind = SpendingKind::LinearType;

  static SpendingPlan equally_spaced(double total_alpha, int k_analyses,
                                     SpendingKind kind = SpendingKind::LinearType);
};

// Boundaries on the z scale. A deterioration test rejects at the first
// analysis k with observed z < -critical_z[k] (lower tail); the same
// magnitudes apply to upper-tail crossing by symmetry.
struct BoundarySchedule {
  double total_alpha = 0.05;
  std::vector<double> information_fractions;
  std::vector<double> critical_z;
  std::vector<double> incremental_alpha;  // sums to total_alpha
};

// Lan–DeMets construction: at each analysis the boundary is chosen so the
// first-crossing probability under zero drift equals the incremental spend,
// integrating the joint Gaussian sequence with Cov(Z_j,Z_k) = sqrt(t_j/t_k)
// over a trapezoidal grid, refined by grid doubling until the boundaries
// move by less than 1e-5.
BoundarySchedule compute_boundaries(const SpendingPlan& plan);

// Memoized equally-spaced schedules (simulation hot path).
const BoundarySchedule& cached_boundaries(double total_alpha, int k_analyses,
                                          SpendingKind kind = SpendingKind::LinearType);

// First analysis (1-based) whose statistic crosses the deterioration
// boundary, or nullopt. Prefix-monotone: later values cannot undo a crossing.
std::optional<int> evaluate_sequential(std::span<const double> stat_path,
                                       const BoundarySchedule& schedule);

}  // namespace dgate

#endif
