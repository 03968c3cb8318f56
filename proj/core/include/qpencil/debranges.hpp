#pragma once

#include "qpencil/line_spectrum.hpp"

namespace qpencil {

/// `closed` uses phi'(z, c) = phi'(z, c-); `open` uses phi'(z, c+).
enum class Variant { closed, open };

/// E(z, c) = z phi(z, c) - i phi'(z, c) with phi = weyl_solution(+).
cplx structure_E(const Coefficients& coeffs, cplx z, double c, Variant variant = Variant::closed);

/// Reproducing kernel of B(c) from the quotient
///   [E(z) E(zeta)* - E(zeta*) E(z*)*] / (2i (zeta* - z)).
/// Falls back to kernel_K_integral when zeta* == z.
cplx kernel_K(const Coefficients& coeffs, cplx zeta, cplx z, double c,
              Variant variant = Variant::closed);

/// The same kernel as 1/4 int phi_z phi_w + int phi_z' phi_w' + z w int phi_z phi_w dupsilon over
/// [c, inf) (over (c, inf) for the upsilon term in the open variant), w = zeta*.
cplx kernel_K_integral(const Coefficients& coeffs, cplx zeta, cplx z, double c,
                       Variant variant = Variant::closed);

/// True if c lies in the topological support of |omega| + upsilon.
bool in_support(const Coefficients& coeffs, double c);

/// |sum_i K(zeta1, l_i) K(zeta2, l_i)* mu_i - K(zeta1, zeta2) + e^c K(zeta1, 0) K(zeta2, 0)*|.
/// Requires Dirac-comb coefficients and c in the support (PreconditionError otherwise).
double embedding_residual(const Coefficients& coeffs, cplx zeta1, cplx zeta2, double c);

/// sup |F(0)|^2 over F in span{K(zeta_j, ., c)} with unit L^2(mu) norm, for 2n + 2 points zeta_j on
/// the unit circle (n = number of atom sites).
double base_point_estimate(const Coefficients& coeffs, double c);

}  // namespace qpencil
