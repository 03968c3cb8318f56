#include "qpencil/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpencil/errors.hpp"
#include "quadrature.hpp"

namespace qpencil {

namespace {

template <class T>
bool is_finite_value(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(v);
  } else {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
}

}  // namespace

template <class T>
BasicMeasure<T>::BasicMeasure(std::vector<Atom<T>> atoms, std::vector<Piece<T>> pieces,
                              bool is_signed)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)), signed_(is_signed) {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (!std::isfinite(a.position) || !is_finite_value(a.mass)) {
      throw ValidationError("atom " + std::to_string(i) + ": non-finite position or mass");
    }
    if constexpr (std::is_same_v<T, double>) {
      if (!signed_ && a.mass < 0.0) {
        throw ValidationError("atom " + std::to_string(i) + " at x=" + std::to_string(a.position) +
                              ": negative mass " + std::to_string(a.mass) +
                              " in a non-negative measure");
      }
    }
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!std::isfinite(p.left) || !std::isfinite(p.right) || !is_finite_value(p.density)) {
      throw ValidationError("piece " + std::to_string(i) + ": non-finite entry");
    }
    if (!(p.left < p.right)) {
      throw ValidationError("piece " + std::to_string(i) + ": left endpoint must be < right");
    }
    if constexpr (std::is_same_v<T, double>) {
      if (!signed_ && p.density < 0.0) {
        throw ValidationError("piece " + std::to_string(i) + ": negative density " +
                              std::to_string(p.density) + " in a non-negative measure");
      }
    }
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const auto& l, const auto& r) { return l.position < r.position; });
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    if (atoms_[i].position == atoms_[i - 1].position) {
      throw ValidationError("duplicate atom position x=" + std::to_string(atoms_[i].position));
    }
  }
  std::sort(pieces_.begin(), pieces_.end(),
            [](const auto& l, const auto& r) { return l.left < r.left; });
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (pieces_[i].left < pieces_[i - 1].right) {
      throw ValidationError("overlapping pieces [" + std::to_string(pieces_[i - 1].left) + ", " +
                            std::to_string(pieces_[i - 1].right) + ") and [" +
                            std::to_string(pieces_[i].left) + ", " +
                            std::to_string(pieces_[i].right) + ")");
    }
  }
}

template <class T>
std::optional<std::pair<double, double>> BasicMeasure<T>::support_hull() const {
  if (empty()) return std::nullopt;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& a : atoms_) {
    lo = std::min(lo, a.position);
    hi = std::max(hi, a.position);
  }
  for (const auto& p : pieces_) {
    lo = std::min(lo, p.left);
    hi = std::max(hi, p.right);
  }
  return std::make_pair(lo, hi);
}

template <class T>
T BasicMeasure<T>::mass_at(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom<T>& a, double v) { return a.position < v; });
  if (it != atoms_.end() && it->position == x) return it->mass;
  return T{};
}

template <class T>
T BasicMeasure<T>::density_at(double x) const {
  for (const auto& p : pieces_) {
    if (p.left <= x && x < p.right) return p.density;
  }
  return T{};
}

template <class T>
cplx integrate_oriented(const BasicMeasure<T>& mu, const std::function<cplx(double)>& g, double x,
                        double y, std::span<const double> breakpoints) {
  if (x == y) return 0.0;
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  cplx total = 0.0;
  for (const auto& a : mu.atoms()) {
    if (a.position >= lo && a.position < hi) total += cplx(a.mass) * g(a.position);
  }
  std::vector<double> cuts;
  for (const auto& p : mu.pieces()) {
    const double l = std::max(p.left, lo);
    const double r = std::min(p.right, hi);
    if (!(l < r)) continue;
    cuts.assign({l, r});
    for (double b : breakpoints) {
      if (b > l && b < r) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double len = cuts[i + 1] - cuts[i];
      if (len <= 0.0) continue;
      const int panels = std::max(1, static_cast<int>(std::ceil(len / 0.5)));
      total += cplx(p.density) * detail::integrate_panels(g, cuts[i], cuts[i + 1], panels);
    }
  }
  return y > x ? total : -total;
}

template class BasicMeasure<double>;
template class BasicMeasure<cplx>;
template cplx integrate_oriented(const BasicMeasure<double>&, const std::function<cplx(double)>&,
                                 double, double, std::span<const double>);
template cplx integrate_oriented(const BasicMeasure<cplx>&, const std::function<cplx(double)>&,
                                 double, double, std::span<const double>);

double integration_by_parts_residual(const CoefficientMeasure& mu, const CoefficientMeasure& nu,
                                     double x, double y) {
  std::vector<double> mu_atoms;
  std::vector<double> nu_atoms;
  for (const auto& a : mu.atoms()) mu_atoms.push_back(a.position);
  for (const auto& a : nu.atoms()) nu_atoms.push_back(a.position);
  for (const auto& p : mu.pieces()) {
    mu_atoms.push_back(p.left);
    mu_atoms.push_back(p.right);
  }
  for (const auto& p : nu.pieces()) {
    nu_atoms.push_back(p.left);
    nu_atoms.push_back(p.right);
  }

  const auto one = [](double) { return cplx(1.0); };
  // Distribution functions anchored at x; the identity is invariant under shifting either.
  const auto F = [&](double s) { return integrate_oriented<double>(mu, one, x, s); };
  const auto G = [&](double s) { return integrate_oriented<double>(nu, one, x, s); };
  const auto G_right = [&](double s) { return G(s) + nu.mass_at(s); };

  const cplx lhs = integrate_oriented<double>(nu, F, x, y, mu_atoms);
  const cplx rhs = F(y) * G(y) - F(x) * G(x) - integrate_oriented<double>(mu, G_right, x, y, nu_atoms);
  return std::abs(lhs - rhs);
}

Mesh support_mesh(const CoefficientMeasure& omega, const CoefficientMeasure& upsilon,
                  std::span<const double> extra) {
  Mesh mesh;
  for (const auto* m : {&omega, &upsilon}) {
    for (const auto& a : m->atoms()) mesh.points.push_back(a.position);
    for (const auto& p : m->pieces()) {
      mesh.points.push_back(p.left);
      mesh.points.push_back(p.right);
    }
  }
  mesh.points.insert(mesh.points.end(), extra.begin(), extra.end());
  std::sort(mesh.points.begin(), mesh.points.end());
  mesh.points.erase(std::unique(mesh.points.begin(), mesh.points.end()), mesh.points.end());
  return mesh;
}

}  // namespace qpencil
