#pragma once

#include <vector>

#include "qpencil/problem.hpp"

namespace qpencil {

struct BoundedProblem {
  Coefficients coeffs;
  Bounded geometry;
};

struct Eigenvalue {
  double lambda;
  int multiplicity;
};

/// z phi_alpha(z, b) cos(beta) - phi_alpha'(z, b) sin(beta), with phi_alpha(a) = sin(alpha),
/// phi_alpha'(a) = z cos(alpha).
cplx characteristic(const BoundedProblem& p, cplx z);

/// characteristic(z) / z^k with k = kernel_dim_zero(alpha, beta), evaluated without division.
/// Its zeros are exactly the nonzero eigenvalues and it does not vanish at zero.
cplx reduced_characteristic(const BoundedProblem& p, cplx z);

/// Eigenvalues in [lo, hi] in ascending order. Zero is reported with the multiplicity of
/// kernel_dim_zero when it lies in the window; every other eigenvalue is simple.
std::vector<Eigenvalue> eigenvalues_bounded(const BoundedProblem& p, double lo, double hi,
                                            double tol = 1e-10);

/// psi_beta(x v s) phi_alpha(x ^ s) / W(psi_beta, phi_alpha). Throws SingularParameterError
/// if z is an eigenvalue.
cplx greens_value(const BoundedProblem& p, cplx z, double x, double s);

/// 2 sinh((b - x v s)/2) sinh((x ^ s - a)/2) / sinh((b - a)/2) on [a, b).
double k0_kernel(double a, double b, double x, double s);

/// Weyl-Titchmarsh function from the solution psi_beta satisfying the condition at b.
cplx weyl_m_bounded(const BoundedProblem& p, cplx z);

/// The same function written through theta_alpha, phi_alpha at b.
cplx weyl_m_bounded_fundamental(const BoundedProblem& p, cplx z);

/// coth((b - a)/2) for beta = 0 and tanh((b - a)/2) otherwise.
double lambda_beta(double a, double b, double beta);

/// Dimension of the kernel of T_{alpha,beta}: number of vanishing angles.
int kernel_dim_zero(double alpha, double beta);

}  // namespace qpencil
