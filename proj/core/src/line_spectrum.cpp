#include "qpencil/line_spectrum.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qpencil/errors.hpp"
#include "qpencil/pencil.hpp"
#include "roots.hpp"

namespace qpencil {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t component_count(const Coefficients& coeffs) {
  return coeffs.omega().atoms().size() + coeffs.upsilon().atoms().size() +
         coeffs.omega().pieces().size() + coeffs.upsilon().pieces().size();
}

/// psi_plus or psi_minus at c, scaled to be O(1) at a point just outside the support.
State weyl_state_at(const Coefficients& coeffs, cplx z, double c, Side side) {
  const auto hull = coeffs.hull();
  if (side == Side::plus) {
    const double x0 = (hull ? std::max(hull->second, c) : c) + 1.0;
    return advance(coeffs, z, x0, c, {1.0, -0.5});
  }
  const double x0 = (hull ? std::min(hull->first, c) : c) - 1.0;
  return advance(coeffs, z, x0, c, {1.0, 0.5});
}

cplx reduced_halfline(const Coefficients& coeffs, cplx z, const HalfLine& g) {
  const State s = weyl_state_at(coeffs, z, g.c, g.side);
  if (g.gamma == 0.0) return s.f;
  return z * s.f * std::cos(g.gamma) - s.df * std::sin(g.gamma);
}

double finite_difference(const std::function<double(double)>& f, double x) {
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

PiecewiseSolution weyl_solution(const Coefficients& coeffs, cplx z, Side side) {
  if (side == Side::plus) return PiecewiseSolution::from_tail(coeffs, z, +1, {0.0, 1.0});
  return PiecewiseSolution::from_tail(coeffs, z, -1, {1.0, 0.0});
}

cplx weyl_m_halfline(const Coefficients& coeffs, cplx z, const HalfLine& g) {
  validate(g);
  if (z == 0.0) throw SingularParameterError("weyl_m_halfline is not defined at z = 0");
  const State s = weyl_state_at(coeffs, z, g.c, g.side);
  const double cg = std::cos(g.gamma);
  const double sg = std::sin(g.gamma);
  const cplx num = z * s.f * sg + s.df * cg;
  const cplx den = z * s.f * cg - s.df * sg;
  if (den == 0.0 || std::abs(den) <= 1e-15 * (std::abs(z * s.f) + std::abs(s.df))) {
    throw SingularParameterError("weyl_m_halfline: z is an eigenvalue");
  }
  const cplx m = num / den;
  return g.side == Side::plus ? m : -m;
}

std::vector<Eigenvalue> eigenvalues_halfline(const Coefficients& coeffs, const HalfLine& g,
                                             double lo, double hi, double tol) {
  validate(g);
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("eigenvalue window must be finite with lo < hi");
  }
  const auto roots = detail::real_zeros([&](cplx z) { return reduced_halfline(coeffs, z, g); },
                                        lo, hi, detail::scan_density(component_count(coeffs)), tol);
  std::vector<Eigenvalue> out;
  for (double r : roots) out.push_back({r, 1});
  if (g.gamma == 0.0 && lo <= 0.0 && 0.0 <= hi) {
    const auto it = std::lower_bound(out.begin(), out.end(), 0.0,
                                     [](const Eigenvalue& e, double v) { return e.lambda < v; });
    out.insert(it, {0.0, 1});
  }
  return out;
}

ConnectionCoefficients connection_coefficients(const Coefficients& coeffs, cplx z) {
  const auto hull = coeffs.hull();
  if (!hull) return {1.0, 0.0};
  const double x0 = hull->first - 1.0;
  const double x1 = hull->second + 1.0;
  const State s = advance(coeffs, z, x0, x1, {std::exp(0.5 * x0), 0.5 * std::exp(0.5 * x0)});
  const ExpTail t = ExpTail::from_state(x1, s.f, s.df);
  return {t.p, t.q};
}

cplx singular_M(const Coefficients& coeffs, cplx z) {
  const auto ab = connection_coefficients(coeffs, z);
  if (ab.A == 0.0 || std::abs(ab.A) <= 1e-15 * std::abs(ab.B)) {
    throw SingularParameterError("singular_M: z is an eigenvalue of the whole-line problem");
  }
  if (z == 0.0) return 0.0;
  return ab.B / ab.A;
}

std::vector<double> eigenvalues_line(const Coefficients& coeffs, double lo, double hi,
                                     double tol) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("eigenvalue window must be finite with lo < hi");
  }
  if (coeffs.is_zero()) return {};
  return detail::real_zeros([&](cplx z) { return connection_coefficients(coeffs, z).A; }, lo, hi,
                            detail::scan_density(component_count(coeffs)), tol);
}

std::pair<double, double> default_window(const Coefficients& coeffs) {
  double r = 0.0;
  for (cplx z : pencil_spectrum(assemble_pencil(coeffs, WholeLine{}, true))) {
    r = std::max(r, std::abs(z));
  }
  return {-(r + 1.0), r + 1.0};
}

double norming_constant(const Coefficients& coeffs, double lambda0) {
  const auto A = [&](double x) { return connection_coefficients(coeffs, x).A.real(); };
  const double a = A(lambda0);
  const double da = finite_difference(A, lambda0);
  if (coeffs.is_zero() || !(std::abs(a) <= 1e-6 * std::max(1.0, std::abs(lambda0)) * std::abs(da))) {
    std::ostringstream msg;
    msg << "norming_constant: " << lambda0 << " is not a whole-line eigenvalue";
    throw PreconditionError(msg.str());
  }
  const auto phi = weyl_solution(coeffs, lambda0, Side::plus);
  const cplx norm = h1_pair(phi, phi, -kInf, kInf) +
                    lambda0 * lambda0 * measure_pair(coeffs.upsilon(), phi, phi, -kInf, kInf);
  return 1.0 / norm.real();
}

std::vector<SpectralDatum> spectral_measure(const Coefficients& coeffs, double lo, double hi) {
  std::vector<SpectralDatum> out;
  for (double l : eigenvalues_line(coeffs, lo, hi)) out.push_back({l, norming_constant(coeffs, l)});
  return out;
}

double residue_mass(const Coefficients& coeffs, double lambda, double radius, int points) {
  const cplx res = detail::circle_residue(
      [&](cplx z) { return singular_M(coeffs, z) / z; }, lambda, radius, points);
  return -res.real();
}

std::vector<double> residue_check(const Coefficients& coeffs,
                                  const std::vector<SpectralDatum>& data) {
  std::vector<double> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double gap = std::abs(data[i].lambda);
    if (i > 0) gap = std::min(gap, data[i].lambda - data[i - 1].lambda);
    if (i + 1 < data.size()) gap = std::min(gap, data[i + 1].lambda - data[i].lambda);
    const double radius = std::min(1e-3, gap / 4.0);
    const double m = residue_mass(coeffs, data[i].lambda, radius);
    out.push_back(std::abs(m - data[i].mass) / data[i].mass);
  }
  return out;
}

HilbertElement::HilbertElement(std::vector<double> nodes, std::vector<cplx> values,
                               std::vector<std::pair<double, cplx>> second)
    : nodes_(std::move(nodes)), values_(std::move(values)), second_(std::move(second)) {
  if (nodes_.empty() || nodes_.size() != values_.size()) {
    throw ValidationError("HilbertElement needs one value per node and at least one node");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i])) throw ValidationError("HilbertElement: non-finite node");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw ValidationError("HilbertElement: nodes must be strictly increasing");
    }
  }
  std::sort(second_.begin(), second_.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
}

cplx HilbertElement::value(double x) const {
  if (x <= nodes_.front()) return values_.front() * std::exp(0.5 * (x - nodes_.front()));
  if (x >= nodes_.back()) return values_.back() * std::exp(-0.5 * (x - nodes_.back()));
  const auto i = static_cast<std::size_t>(
      std::upper_bound(nodes_.begin(), nodes_.end(), x) - nodes_.begin() - 1);
  const double l = nodes_[i];
  const double r = nodes_[i + 1];
  return (values_[i] * std::sinh(0.5 * (r - x)) + values_[i + 1] * std::sinh(0.5 * (x - l))) /
         std::sinh(0.5 * (r - l));
}

cplx HilbertElement::derivative(double x) const {
  if (x <= nodes_.front()) return 0.5 * value(x);
  if (x > nodes_.back()) return -0.5 * value(x);
  const auto i = static_cast<std::size_t>(
      std::lower_bound(nodes_.begin(), nodes_.end(), x) - nodes_.begin() - 1);
  const double l = nodes_[i];
  const double r = nodes_[i + 1];
  return (-values_[i] * std::cosh(0.5 * (r - x)) + values_[i + 1] * std::cosh(0.5 * (x - l))) /
         (2.0 * std::sinh(0.5 * (r - l)));
}

ExpTail HilbertElement::left_tail() const {
  return {values_.front() * std::exp(-0.5 * nodes_.front()), 0.0};
}

ExpTail HilbertElement::right_tail() const {
  return {0.0, values_.back() * std::exp(0.5 * nodes_.back())};
}

cplx HilbertElement::second_at(double x) const {
  for (const auto& [p, v] : second_) {
    if (p == x) return v;
  }
  return 0.0;
}

HilbertElement HilbertElement::conjugate() const {
  std::vector<cplx> vals;
  for (cplx v : values_) vals.push_back(std::conj(v));
  std::vector<std::pair<double, cplx>> sec;
  for (const auto& [p, v] : second_) sec.emplace_back(p, std::conj(v));
  return HilbertElement(nodes_, std::move(vals), std::move(sec));
}

HilbertElement delta_element(double c) { return HilbertElement({c}, {1.0}); }

cplx inner_product(const Coefficients& coeffs, const HilbertElement& f, const HilbertElement& g) {
  cplx total = h1_pair(f, g.conjugate(), -kInf, kInf);
  for (const auto& a : coeffs.upsilon().atoms()) {
    total += a.mass * f.second_at(a.position) * std::conj(g.second_at(a.position));
  }
  return total;
}

cplx transform_hat(const Coefficients& coeffs, const HilbertElement& f, cplx lambda) {
  const auto phi = weyl_solution(coeffs, lambda, Side::plus);
  cplx total = h1_pair(phi, f, -kInf, kInf);
  for (const auto& a : coeffs.upsilon().atoms()) {
    total += lambda * a.mass * phi.value(a.position) * f.second_at(a.position);
  }
  return total;
}

double projection_norm(const Coefficients& coeffs, const HilbertElement& f) {
  if (!coeffs.is_dirac_comb()) {
    throw ValidationError("projection_norm requires Dirac-comb coefficients");
  }
  const auto sites = coeffs.atom_sites();
  double total = 0.0;
  if (!sites.empty()) {
    const auto n = static_cast<Eigen::Index>(sites.size());
    Eigen::MatrixXd G(n, n);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v(i) = f.value(sites[i]);
      for (Eigen::Index j = 0; j < n; ++j) G(i, j) = std::exp(-0.5 * std::abs(sites[i] - sites[j]));
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    const Eigen::VectorXcd y = ldlt.solve(v.real()).cast<cplx>() +
                               cplx(0.0, 1.0) * ldlt.solve(v.imag()).cast<cplx>();
    total += v.dot(y).real();
  }
  for (const auto& a : coeffs.upsilon().atoms()) total += a.mass * std::norm(f.second_at(a.position));
  return total;
}

ParsevalResult parseval_check(const Coefficients& coeffs, const HilbertElement& f) {
  const auto [lo, hi] = default_window(coeffs);
  double lhs = 0.0;
  for (const auto& d : spectral_measure(coeffs, lo, hi)) {
    lhs += std::norm(transform_hat(coeffs, f, d.lambda)) * d.mass;
  }
  return {lhs, projection_norm(coeffs, f)};
}

}  // namespace qpencil
