#pragma once

#include <Eigen/Core>
#include <vector>

#include "qpencil/problem.hpp"

namespace qpencil {

/// Galerkin matrices of the pencil I - z Omega - z^2 Upsilon in the basis of resolvent kernels
/// centred at the atom sites.
struct PencilMatrices {
  std::vector<double> nodes;
  Eigen::MatrixXd M_I;
  Eigen::MatrixXd M_Omega;
  Eigen::MatrixXd M_Upsilon;
  /// True when density pieces were lumped into point masses.
  bool approximate = false;
};

/// Resolvent kernel at zero: K0 on [a, b) (Dirichlet at both ends, angles ignored), K+- on a
/// semi-axis (Dirichlet at c), exp(-|x - s|/2) on the whole line.
double resolvent_kernel(const Geometry& geometry, double x, double s);

/// Exact for Dirac combs. Density pieces throw ValidationError unless `lump_densities` is set, in
/// which case each piece is replaced by point masses on a grid of spacing at most 1/8.
PencilMatrices assemble_pencil(const Coefficients& coeffs, const Geometry& geometry,
                               bool lump_densities = false);

/// Finite roots of det(M_I - z M_Omega - z^2 M_Upsilon), ordered by real part. Uses the
/// companion form in 1/z so that a singular M_Upsilon only produces discarded infinite roots.
std::vector<cplx> pencil_spectrum(const PencilMatrices& m);

/// Real parts of pencil_spectrum after checking the roots are real to 1e-8 relative.
std::vector<double> pencil_real_spectrum(const PencilMatrices& m);

/// |(M_I - z M_Omega - z^2 M_Upsilon) v| / |v|.
double pencil_residual(const PencilMatrices& m, cplx z, const Eigen::VectorXcd& v);

}  // namespace qpencil
