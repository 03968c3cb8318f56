#include "qpencil/debranges.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qpencil/errors.hpp"

namespace qpencil {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const cplx kI{0.0, 1.0};

void require_embedding_setting(const Coefficients& coeffs, double c) {
  if (!coeffs.is_dirac_comb()) {
    throw PreconditionError("de Branges embedding checks require Dirac-comb coefficients");
  }
  if (!in_support(coeffs, c)) {
    std::ostringstream msg;
    msg << "c = " << c << " is not in the support of |omega| + upsilon";
    throw PreconditionError(msg.str());
  }
}

}  // namespace

cplx structure_E(const Coefficients& coeffs, cplx z, double c, Variant variant) {
  const auto phi = weyl_solution(coeffs, z, Side::plus);
  const SolutionFrame fr = phi.frame(c);
  return z * fr.f - kI * (variant == Variant::closed ? fr.df_left : fr.df_right);
}

cplx kernel_K(const Coefficients& coeffs, cplx zeta, cplx z, double c, Variant variant) {
  const cplx den = 2.0 * kI * (std::conj(zeta) - z);
  if (std::abs(std::conj(zeta) - z) <= 1e-8 * std::max(1.0, std::abs(z))) {
    return kernel_K_integral(coeffs, zeta, z, c, variant);
  }
  const cplx ez = structure_E(coeffs, z, c, variant);
  const cplx ezeta = structure_E(coeffs, zeta, c, variant);
  const cplx ezeta_c = structure_E(coeffs, std::conj(zeta), c, variant);
  const cplx ez_c = structure_E(coeffs, std::conj(z), c, variant);
  return (ez * std::conj(ezeta) - ezeta_c * std::conj(ez_c)) / den;
}

cplx kernel_K_integral(const Coefficients& coeffs, cplx zeta, cplx z, double c, Variant variant) {
  const cplx w = std::conj(zeta);
  const auto pz = weyl_solution(coeffs, z, Side::plus);
  const auto pw = weyl_solution(coeffs, w, Side::plus);
  cplx ups = measure_pair(coeffs.upsilon(), pz, pw, c, kInf);
  if (variant == Variant::open) ups -= coeffs.upsilon_mass(c) * pz.value(c) * pw.value(c);
  return h1_pair(pz, pw, c, kInf) + z * w * ups;
}

bool in_support(const Coefficients& coeffs, double c) {
  for (double x : coeffs.atom_sites()) {
    if (x == c) return true;
  }
  for (const auto* m : {&coeffs.omega(), &coeffs.upsilon()}) {
    for (const auto& p : m->pieces()) {
      if (p.density != 0.0 && p.left <= c && c <= p.right) return true;
    }
  }
  return false;
}

double embedding_residual(const Coefficients& coeffs, cplx zeta1, cplx zeta2, double c) {
  require_embedding_setting(coeffs, c);
  const auto [lo, hi] = default_window(coeffs);
  cplx lhs = 0.0;
  for (const auto& d : spectral_measure(coeffs, lo, hi)) {
    lhs += kernel_K(coeffs, zeta1, d.lambda, c) * std::conj(kernel_K(coeffs, zeta2, d.lambda, c)) *
           d.mass;
  }
  const cplx rhs = kernel_K(coeffs, zeta1, zeta2, c) -
                   std::exp(c) * kernel_K(coeffs, zeta1, 0.0, c) *
                       std::conj(kernel_K(coeffs, zeta2, 0.0, c));
  return std::abs(lhs - rhs);
}

double base_point_estimate(const Coefficients& coeffs, double c) {
  require_embedding_setting(coeffs, c);
  const auto [lo, hi] = default_window(coeffs);
  const auto data = spectral_measure(coeffs, lo, hi);
  const auto m = static_cast<Eigen::Index>(2 * coeffs.atom_sites().size() + 2);
  const auto rows = static_cast<Eigen::Index>(data.size());
  for (int attempt = 0; attempt < 6; ++attempt) {
    const double offset = 0.5 + 0.137 * attempt;
    Eigen::MatrixXcd A(rows, m);
    Eigen::VectorXcd u(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const cplx zeta = std::polar(1.0, 2.0 * std::numbers::pi * (j + offset) / double(m));
      u(j) = kernel_K(coeffs, zeta, 0.0, c);
      for (Eigen::Index i = 0; i < rows; ++i) {
        A(i, j) = std::sqrt(data[i].mass) * kernel_K(coeffs, zeta, data[i].lambda, c);
      }
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Eigen::VectorXcd proj = svd.matrixV().transpose() * u;
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    double sup = 0.0;
    bool degenerate = false;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double s = k < sv.size() ? sv(k) : 0.0;
      if (s > 1e-9 * smax) {
        sup += std::norm(proj(k)) / (s * s);
      } else if (std::abs(proj(k)) > 1e-6 * u.norm()) {
        degenerate = true;
      }
    }
    if (!degenerate) return sup;
  }
  throw ConvergenceError("base_point_estimate: kernel samples stayed degenerate after resampling");
}

}  // namespace qpencil
