#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace qpencil::detail {

inline constexpr int kGaussPoints = 20;

/// 20-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::array<double, kGaussPoints> nodes;
  std::array<double, kGaussPoints> weights;
};

const GaussRule& gauss_legendre();

/// Sum over `panels` equal panels of [a, b]; `f` is called with points strictly inside.
template <class F>
auto integrate_panels(F&& f, double a, double b, int panels) {
  const auto& rule = gauss_legendre();
  using R = decltype(f(a));
  R total{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    R acc{};
    for (int k = 0; k < kGaussPoints; ++k) acc += rule.weights[k] * f(mid + half * rule.nodes[k]);
    total += half * acc;
  }
  return total;
}

/// Panel count that keeps |kappa| * panel_width <= 2 for a function growing like exp(kappa x).
inline int panels_for_rate(double rate, double length) {
  const double n = std::ceil(std::abs(rate) * std::abs(length) / 2.0);
  return n < 1.0 ? 1 : static_cast<int>(n);
}

}  // namespace qpencil::detail
