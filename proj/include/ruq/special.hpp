#pragma once

namespace ruq::special {

// Standard normal CDF Φ(x).
double normal_cdf(double x);

// Φ⁻¹(p) for 0 < p < 1. Acklam's rational approximation (relative error < 1.2e-9)
// polished with one Halley step against erfc. Throws DomainError outside (0, 1).
double inverse_normal_cdf(double p);

// Regularized incomplete beta I_x(a, b), a, b > 0, 0 ≤ x ≤ 1.
// Modified Lentz continued fraction, converged to 1e-12 relative.
double incomplete_beta(double a, double b, double x);

// CDF of the standard Student-t distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

// ψ(x) = d/dx ln Γ(x) for x > 0.
double digamma(double x);

}  // namespace ruq::special
