#include "qpencil/pencil.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>

#include "qpencil/errors.hpp"

namespace qpencil {

namespace {

bool in_domain(const Geometry& geometry, double x) {
  if (const auto* b = std::get_if<Bounded>(&geometry)) return x > b->a && x < b->b;
  if (const auto* h = std::get_if<HalfLine>(&geometry)) {
    return h->side == Side::plus ? x > h->c : x < h->c;
  }
  return true;
}

/// Point masses (omega, upsilon) at every node used by the Galerkin basis.
std::map<double, std::pair<double, double>> lumped_masses(const Coefficients& coeffs, bool lump,
                                                          bool& approximate) {
  std::map<double, std::pair<double, double>> out;
  for (const auto& a : coeffs.omega().atoms()) out[a.position].first += a.mass;
  for (const auto& a : coeffs.upsilon().atoms()) out[a.position].second += a.mass;
  const auto add_pieces = [&](const CoefficientMeasure& m, bool is_omega) {
    for (const auto& p : m.pieces()) {
      if (!lump) {
        throw ValidationError(
            "pencil assembly is exact only for Dirac combs; enable lumping for density pieces");
      }
      approximate = true;
      const int cells = std::max(1, static_cast<int>(std::ceil(8.0 * (p.right - p.left))));
      const double h = (p.right - p.left) / cells;
      for (int k = 0; k < cells; ++k) {
        auto& slot = out[p.left + (k + 0.5) * h];
        (is_omega ? slot.first : slot.second) += p.density * h;
      }
    }
  };
  add_pieces(coeffs.omega(), true);
  add_pieces(coeffs.upsilon(), false);
  return out;
}

}  // namespace

double resolvent_kernel(const Geometry& geometry, double x, double s) {
  const double lo = std::min(x, s);
  const double hi = std::max(x, s);
  if (const auto* b = std::get_if<Bounded>(&geometry)) {
    if (!(lo >= b->a && hi < b->b)) throw ValidationError("kernel arguments must lie in [a, b)");
    return 2.0 * std::sinh(0.5 * (b->b - hi)) * std::sinh(0.5 * (lo - b->a)) /
           std::sinh(0.5 * (b->b - b->a));
  }
  if (const auto* h = std::get_if<HalfLine>(&geometry)) {
    if (h->side == Side::plus) {
      if (lo < h->c) throw ValidationError("kernel arguments must lie in [c, inf)");
      return 2.0 * std::exp(-0.5 * (hi - h->c)) * std::sinh(0.5 * (lo - h->c));
    }
    if (hi >= h->c) throw ValidationError("kernel arguments must lie in (-inf, c)");
    return 2.0 * std::exp(0.5 * (lo - h->c)) * std::sinh(0.5 * (h->c - hi));
  }
  return std::exp(-0.5 * (hi - lo));
}

PencilMatrices assemble_pencil(const Coefficients& coeffs, const Geometry& geometry,
                               bool lump_densities) {
  if (const auto* b = std::get_if<Bounded>(&geometry)) validate(*b);
  if (const auto* h = std::get_if<HalfLine>(&geometry)) validate(*h);
  PencilMatrices m;
  const auto masses = lumped_masses(coeffs, lump_densities, m.approximate);
  std::vector<double> w, v;
  for (const auto& [x, mv] : masses) {
    if (!in_domain(geometry, x) || (mv.first == 0.0 && mv.second == 0.0)) continue;
    m.nodes.push_back(x);
    w.push_back(mv.first);
    v.push_back(mv.second);
  }
  const auto n = static_cast<Eigen::Index>(m.nodes.size());
  m.M_I.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m.M_I(i, j) = resolvent_kernel(geometry, m.nodes[i], m.nodes[j]);
    }
  }
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), n);
  const Eigen::Map<const Eigen::VectorXd> vv(v.data(), n);
  m.M_Omega = m.M_I * wv.asDiagonal() * m.M_I;
  m.M_Upsilon = m.M_I * vv.asDiagonal() * m.M_I;
  return m;
}

std::vector<cplx> pencil_spectrum(const PencilMatrices& m) {
  const auto n = m.M_I.rows();
  if (n == 0) return {};
  const Eigen::LLT<Eigen::MatrixXd> llt(m.M_I);
  if (llt.info() != Eigen::Success) throw NumericalError("pencil_spectrum: M_I is not positive definite");
  // nu = 1/z solves nu^2 M_I u = (nu M_Omega + M_Upsilon) u.
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  comp.topRightCorner(n, n).setIdentity();
  comp.bottomLeftCorner(n, n) = llt.solve(m.M_Upsilon);
  comp.bottomRightCorner(n, n) = llt.solve(m.M_Omega);
  const Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericalError("pencil_spectrum: eigensolver failed");
  std::vector<cplx> out;
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    const cplx nu = es.eigenvalues()[k];
    if (std::abs(nu) < 1e-12) continue;
    out.push_back(1.0 / nu);
  }
  std::sort(out.begin(), out.end(), [](cplx l, cplx r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return out;
}

std::vector<double> pencil_real_spectrum(const PencilMatrices& m) {
  std::vector<double> out;
  for (cplx z : pencil_spectrum(m)) {
    if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z))) {
      throw NumericalError("pencil_real_spectrum: non-real root of a self-adjoint pencil");
    }
    out.push_back(z.real());
  }
  return out;
}

double pencil_residual(const PencilMatrices& m, cplx z, const Eigen::VectorXcd& v) {
  const Eigen::MatrixXcd L = m.M_I.cast<cplx>() - z * m.M_Omega.cast<cplx>() -
                             z * z * m.M_Upsilon.cast<cplx>();
  return (L * v).norm() / v.norm();
}

}  // namespace qpencil
