#ifndef DECISION_GATE_NORMAL_HPP
#define DECISION_GATE_NORMAL_HPP

namespace dgate {

// Standard normal density.
double std_normal_pdf(double z);

// Phi(z). Absolute error below 1e-14 over the full double range.
// Throws std::domain_error on non-finite input.
double std_normal_cdf(double z);

// Inverse of std_normal_cdf on (0,1): rational initial guess plus one
// Halley refinement against the erfc-based CDF, giving |Phi(q(p)) - p|
// at machine-precision level. Throws std::domain_error for p outside (0,1).
double std_normal_quantile(double p);

}  // namespace dgate

#endif
