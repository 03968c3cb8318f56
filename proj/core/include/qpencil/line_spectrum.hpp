#pragma once

#include <utility>
#include <vector>

#include "qpencil/bounded_spectrum.hpp"
#include "qpencil/piecewise.hpp"
#include "qpencil/problem.hpp"

namespace qpencil {

/// Solution equal to exp(-x/2) right of the support (side plus) or exp(x/2) left of it
/// (side minus).
PiecewiseSolution weyl_solution(const Coefficients& coeffs, cplx z, Side side);

/// Weyl-Titchmarsh function of the semi-axis problem. Throws SingularParameterError at z = 0
/// and at eigenvalues.
cplx weyl_m_halfline(const Coefficients& coeffs, cplx z, const HalfLine& geometry);

/// Eigenvalues of the semi-axis problem in [lo, hi]; zero (simple) is included when gamma = 0.
std::vector<Eigenvalue> eigenvalues_halfline(const Coefficients& coeffs, const HalfLine& geometry,
                                             double lo, double hi, double tol = 1e-10);

/// psi_minus = A exp(x/2) + B exp(-x/2) right of the support.
struct ConnectionCoefficients {
  cplx A;
  cplx B;
};
ConnectionCoefficients connection_coefficients(const Coefficients& coeffs, cplx z);

/// Singular Weyl function M = W(psi_minus, theta) / W(phi, psi_minus) = B / A for the fundamental
/// system phi = exp(-x/2), theta = exp(x/2) right of the support.
cplx singular_M(const Coefficients& coeffs, cplx z);

/// Whole-line eigenvalues in [lo, hi] (zeros of A), ascending.
std::vector<double> eigenvalues_line(const Coefficients& coeffs, double lo, double hi,
                                     double tol = 1e-10);

/// Symmetric window [-r, r] with r one more than the spectral radius of the Galerkin pencil
/// (density pieces are lumped for this estimate).
std::pair<double, double> default_window(const Coefficients& coeffs);

struct SpectralDatum {
  double lambda;
  double mass;
};

/// mu({lambda0}) = 1 / (1/4 int phi^2 + int phi'^2 + lambda0^2 int phi^2 dupsilon).
/// Throws PreconditionError if lambda0 is not an eigenvalue.
double norming_constant(const Coefficients& coeffs, double lambda0);

std::vector<SpectralDatum> spectral_measure(const Coefficients& coeffs, double lo, double hi);

/// -Res(M(z)/z, lambda) by trapezoidal circle quadrature.
double residue_mass(const Coefficients& coeffs, double lambda, double radius, int points = 64);

/// Relative deviation |mass + Res| / mass for each datum, with radius min(1e-3, gap/4).
std::vector<double> residue_check(const Coefficients& coeffs,
                                  const std::vector<SpectralDatum>& data);

/// Element (f1, f2) of H^1(R) x L^2(R; upsilon). f1 solves -f'' + f/4 = 0 between consecutive
/// nodes, takes the given nodal values and decays like exp(-|x - end|/2) outside the nodes.
/// f2 is given by its values at atoms of upsilon.
class HilbertElement final : public PiecewiseExp {
 public:
  HilbertElement(std::vector<double> nodes, std::vector<cplx> values,
                 std::vector<std::pair<double, cplx>> second = {});

  cplx value(double x) const override;
  cplx derivative(double x) const override;
  std::pair<double, double> core() const override { return {nodes_.front(), nodes_.back()}; }
  ExpTail left_tail() const override;
  ExpTail right_tail() const override;
  const std::vector<double>& breakpoints() const override { return nodes_; }
  double rate() const override { return 0.5; }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<cplx>& values() const { return values_; }
  const std::vector<std::pair<double, cplx>>& second() const { return second_; }
  cplx second_at(double x) const;

  HilbertElement conjugate() const;

 private:
  std::vector<double> nodes_;
  std::vector<cplx> values_;
  std::vector<std::pair<double, cplx>> second_;
};

/// delta_c = (exp(-|x - c|/2), 0), the representer of f -> f1(c).
HilbertElement delta_element(double c);

/// <f, g> = 1/4 int f1 g1* + int f1' g1'* + int f2 g2* dupsilon.
cplx inner_product(const Coefficients& coeffs, const HilbertElement& f, const HilbertElement& g);

/// f^(lambda) = 1/4 int phi f1 + int phi' f1' + lambda int phi f2 dupsilon, phi = weyl_solution(+).
cplx transform_hat(const Coefficients& coeffs, const HilbertElement& f, cplx lambda);

/// |P f|^2 for the projection onto the closed domain span{delta_c : c in Sigma} x L^2(upsilon).
/// Requires Dirac-comb coefficients.
double projection_norm(const Coefficients& coeffs, const HilbertElement& f);

struct ParsevalResult {
  double lhs;
  double rhs;
};

/// lhs = sum |f^(lambda_i)|^2 mu_i over the default window, rhs = projection_norm(f).
ParsevalResult parseval_check(const Coefficients& coeffs, const HilbertElement& f);

}  // namespace qpencil
