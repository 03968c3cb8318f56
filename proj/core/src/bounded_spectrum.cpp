#include "qpencil/bounded_spectrum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qpencil/errors.hpp"
#include "roots.hpp"

namespace qpencil {

namespace {

void check_angle(double angle, const char* name) {
  if (!std::isfinite(angle) || angle < 0.0 || angle >= std::numbers::pi) {
    std::ostringstream msg;
    msg << name << " = " << angle << " is outside [0, pi)";
    throw ValidationError(msg.str());
  }
}

void check_point(const Bounded& g, double x) {
  if (!(x >= g.a && x < g.b)) {
    std::ostringstream msg;
    msg << "point " << x << " is outside [" << g.a << ", " << g.b << ")";
    throw ValidationError(msg.str());
  }
}

State phi_at_b(const BoundedProblem& p, cplx z) {
  const auto& g = p.geometry;
  return advance(p.coeffs, z, g.a, g.b, {std::sin(g.alpha), z * std::cos(g.alpha)});
}

/// psi_beta(a) and psi_beta'(a) from psi(b) = sin(beta), psi'(b) = z cos(beta).
State psi_at_a(const BoundedProblem& p, cplx z) {
  const auto& g = p.geometry;
  return advance(p.coeffs, z, g.b, g.a, {std::sin(g.beta), z * std::cos(g.beta)});
}

}  // namespace

void validate(const Bounded& g) {
  if (!std::isfinite(g.a) || !std::isfinite(g.b) || !(g.a < g.b)) {
    throw ValidationError("bounded geometry requires finite a < b");
  }
  check_angle(g.alpha, "alpha");
  check_angle(g.beta, "beta");
}

void validate(const HalfLine& g) {
  if (!std::isfinite(g.c)) throw ValidationError("half-line base point must be finite");
  check_angle(g.gamma, "gamma");
}

cplx characteristic(const BoundedProblem& p, cplx z) {
  validate(p.geometry);
  const State s = phi_at_b(p, z);
  const double beta = p.geometry.beta;
  return z * s.f * std::cos(beta) - s.df * std::sin(beta);
}

cplx reduced_characteristic(const BoundedProblem& p, cplx z) {
  const auto& g = p.geometry;
  const State init = g.alpha == 0.0 ? State{0.0, 1.0} : State{std::sin(g.alpha), z * std::cos(g.alpha)};
  const State s = advance(p.coeffs, z, g.a, g.b, init);
  if (g.beta == 0.0) return s.f;
  return z * s.f * std::cos(g.beta) - s.df * std::sin(g.beta);
}

std::vector<Eigenvalue> eigenvalues_bounded(const BoundedProblem& p, double lo, double hi,
                                            double tol) {
  validate(p.geometry);
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("eigenvalue window must be finite with lo < hi");
  }
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const auto n = p.coeffs.omega().atoms().size() + p.coeffs.upsilon().atoms().size() +
                 p.coeffs.omega().pieces().size() + p.coeffs.upsilon().pieces().size();
  const auto roots = detail::real_zeros([&](cplx z) { return reduced_characteristic(p, z); }, lo,
                                        hi, detail::scan_density(n), tol);
  std::vector<Eigenvalue> out;
  const int k = kernel_dim_zero(p.geometry.alpha, p.geometry.beta);
  bool zero_done = !(k > 0 && lo <= 0.0 && 0.0 <= hi);
  for (double r : roots) {
    if (!zero_done && r > 0.0) {
      out.push_back({0.0, k});
      zero_done = true;
    }
    out.push_back({r, 1});
  }
  if (!zero_done) out.push_back({0.0, k});
  return out;
}

cplx greens_value(const BoundedProblem& p, cplx z, double x, double s) {
  validate(p.geometry);
  const auto& g = p.geometry;
  check_point(g, x);
  check_point(g, s);
  const double hi = std::max(x, s);
  const double lo = std::min(x, s);
  const double phi_pts[] = {lo};
  const double psi_pts[] = {hi, g.a};
  const auto phi = solve_ivp(p.coeffs, z, g.a, std::sin(g.alpha), z * std::cos(g.alpha), phi_pts);
  const auto psi = solve_ivp(p.coeffs, z, g.b, std::sin(g.beta), z * std::cos(g.beta), psi_pts);
  const cplx w = psi[1].f * z * std::cos(g.alpha) - psi[1].df_left * std::sin(g.alpha);
  const double scale = std::abs(psi[1].f * z) + std::abs(psi[1].df_left);
  if (std::abs(w) <= 1e-14 * scale || w == 0.0) {
    throw SingularParameterError("greens_value: z is an eigenvalue of the bounded problem");
  }
  return psi[0].f * phi[0].f / w;
}

double k0_kernel(double a, double b, double x, double s) {
  if (!(a < b)) throw ValidationError("k0_kernel requires a < b");
  if (!(x >= a && x < b) || !(s >= a && s < b)) {
    throw ValidationError("k0_kernel arguments must lie in [a, b)");
  }
  return 2.0 * std::sinh(0.5 * (b - std::max(x, s))) * std::sinh(0.5 * (std::min(x, s) - a)) /
         std::sinh(0.5 * (b - a));
}

cplx weyl_m_bounded(const BoundedProblem& p, cplx z) {
  validate(p.geometry);
  if (z == 0.0) throw SingularParameterError("weyl_m_bounded is not defined at z = 0");
  const auto& g = p.geometry;
  const State s = psi_at_a(p, z);
  const cplx num = z * s.f * std::sin(g.alpha) + s.df * std::cos(g.alpha);
  const cplx den = z * s.f * std::cos(g.alpha) - s.df * std::sin(g.alpha);
  if (den == 0.0 || std::abs(den) <= 1e-15 * (std::abs(z * s.f) + std::abs(s.df))) {
    throw SingularParameterError("weyl_m_bounded: z is an eigenvalue");
  }
  return num / den;
}

cplx weyl_m_bounded_fundamental(const BoundedProblem& p, cplx z) {
  validate(p.geometry);
  if (z == 0.0) throw SingularParameterError("weyl_m_bounded is not defined at z = 0");
  const auto& g = p.geometry;
  const State th = advance(p.coeffs, z, g.a, g.b, {std::cos(g.alpha), -z * std::sin(g.alpha)});
  const State ph = phi_at_b(p, z);
  const double cb = std::cos(g.beta);
  const double sb = std::sin(g.beta);
  const cplx den = z * ph.f * cb - ph.df * sb;
  if (den == 0.0) throw SingularParameterError("weyl_m_bounded: z is an eigenvalue");
  return -(z * th.f * cb - th.df * sb) / den;
}

double lambda_beta(double a, double b, double beta) {
  if (!(a < b)) throw ValidationError("lambda_beta requires a < b");
  check_angle(beta, "beta");
  const double t = std::tanh(0.5 * (b - a));
  return beta == 0.0 ? 1.0 / t : t;
}

int kernel_dim_zero(double alpha, double beta) {
  check_angle(alpha, "alpha");
  check_angle(beta, "beta");
  return (alpha == 0.0 ? 1 : 0) + (beta == 0.0 ? 1 : 0);
}

}  // namespace qpencil
