#ifndef DECISION_GATE_CHI_SQUARE_HPP
#define DECISION_GATE_CHI_SQUARE_HPP

namespace dgate {

// Survival function P(X > x) of the chi-square distribution with df degrees
// of freedom, via the regularized incomplete gamma function Q(df/2, x/2).
// Throws std::domain_error for x < 0 or df < 1.
double chi_square_sf(double x, int df);

}  // namespace dgate

#endif
