#include "qpencil/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpencil/errors.hpp"
#include "qpencil/piecewise.hpp"

namespace qpencil {

namespace detail {

namespace {

/// C = cosh(k dx), S = sinh(k dx)/k, E = (C - 1)/k^2 as entire functions of k^2.
struct CellFunctions {
  cplx c, s, e;
};

CellFunctions cell_functions(cplx k2, double dx) {
  const cplx q = k2 * dx * dx;
  if (std::abs(q) < 1e-2) {
    cplx c = 0.0, s = 0.0, e = 0.0;
    cplx term = 1.0;  // q^k / (2k)!
    for (int k = 0; k < 9; ++k) {
      c += term;
      s += term / double(2 * k + 1);
      e += term / double((2 * k + 1) * (2 * k + 2));
      term *= q / double((2 * k + 1) * (2 * k + 2));
    }
    return {c, s * dx, e * dx * dx};
  }
  const cplx k = std::sqrt(k2);
  const cplx c = std::cosh(k * dx);
  return {c, std::sinh(k * dx) / k, (c - 1.0) / k2};
}

Grid make_grid(const CoefficientMeasure& omega, const CoefficientMeasure& upsilon,
               const ForcingMeasure* chi) {
  Grid g;
  std::vector<double> extra;
  if (chi != nullptr) {
    for (const auto& a : chi->atoms()) extra.push_back(a.position);
    for (const auto& p : chi->pieces()) {
      extra.push_back(p.left);
      extra.push_back(p.right);
    }
  }
  g.points = support_mesh(omega, upsilon, extra).points;
  g.forced = chi != nullptr;
  const std::size_t n = g.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.points[i];
    g.node_w.push_back(omega.mass_at(x));
    g.node_v.push_back(upsilon.mass_at(x));
    g.node_g.push_back(chi != nullptr ? chi->mass_at(x) : cplx{});
    if (i + 1 < n) {
      const double mid = 0.5 * (x + g.points[i + 1]);
      g.cell_w.push_back(omega.density_at(mid));
      g.cell_v.push_back(upsilon.density_at(mid));
      g.cell_g.push_back(chi != nullptr ? chi->density_at(mid) : cplx{});
    }
  }
  return g;
}

State apply_piece(const Grid& g, std::ptrdiff_t cell, cplx z, double dx, State s, bool forward) {
  const double w = cell >= 0 ? g.cell_w[cell] : 0.0;
  const double v = cell >= 0 ? g.cell_v[cell] : 0.0;
  const cplx gd = cell >= 0 ? g.cell_g[cell] : cplx{};
  const cplx k2 = 0.25 - z * w - z * z * v;
  const auto cf = cell_functions(k2, dx);
  if (forward) {
    return {cf.c * s.f + cf.s * s.df - gd * cf.e, k2 * cf.s * s.f + cf.c * s.df - gd * cf.s};
  }
  const cplx f = s.f + gd * cf.e;
  const cplx df = s.df + gd * cf.s;
  return {cf.c * f - cf.s * df, -k2 * cf.s * f + cf.c * df};
}

cplx node_jump(const Grid& g, std::size_t node, cplx z, cplx f) {
  return (z * g.node_w[node] + z * z * g.node_v[node]) * f + g.node_g[node];
}

}  // namespace

State walk(const Grid& g, cplx z, double x, double y, State s) {
  const auto& pts = g.points;
  const auto n = static_cast<std::ptrdiff_t>(pts.size());
  double pos = x;
  if (y > x) {
    while (pos < y) {
      const auto idx = std::upper_bound(pts.begin(), pts.end(), pos) - pts.begin();
      if (idx > 0 && pts[idx - 1] == pos) s.df -= node_jump(g, idx - 1, z, s.f);
      const double next = idx < n ? std::min(pts[idx], y) : y;
      const std::ptrdiff_t cell = (idx > 0 && idx < n) ? idx - 1 : -1;
      s = apply_piece(g, cell, z, next - pos, s, true);
      pos = next;
    }
  } else {
    while (pos > y) {
      const auto idx = std::lower_bound(pts.begin(), pts.end(), pos) - pts.begin();
      const double prev = idx > 0 ? std::max(pts[idx - 1], y) : y;
      const std::ptrdiff_t cell = (idx > 0 && idx < n) ? idx - 1 : -1;
      s = apply_piece(g, cell, z, pos - prev, s, false);
      pos = prev;
      if (idx > 0 && pts[idx - 1] == pos) s.df += node_jump(g, idx - 1, z, s.f);
    }
  }
  return s;
}

std::vector<SolutionFrame> sample(const Grid& g, cplx z, double c, State s0,
                                  std::span<const double> targets) {
  std::vector<SolutionFrame> out(targets.size());
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return targets[l] < targets[r]; });
  const auto emit = [&](std::size_t i, State s) {
    const double x = targets[i];
    auto& fr = out[i];
    fr.x = x;
    fr.f = s.f;
    fr.df_left = s.df;
    fr.df_right = s.df;
    const auto it = std::lower_bound(g.points.begin(), g.points.end(), x);
    if (it != g.points.end() && *it == x) {
      fr.df_right -= node_jump(g, static_cast<std::size_t>(it - g.points.begin()), z, s.f);
    }
  };
  // Rightward pass over targets >= c, leftward pass over targets < c.
  const auto split = std::partition_point(order.begin(), order.end(),
                                          [&](std::size_t i) { return targets[i] < c; });
  State s = s0;
  double pos = c;
  for (auto it = split; it != order.end(); ++it) {
    s = walk(g, z, pos, targets[*it], s);
    pos = targets[*it];
    emit(*it, s);
  }
  s = s0;
  pos = c;
  for (auto it = split; it != order.begin();) {
    --it;
    s = walk(g, z, pos, targets[*it], s);
    pos = targets[*it];
    emit(*it, s);
  }
  return out;
}

}  // namespace detail

Coefficients::Coefficients() : grid_(detail::make_grid(omega_, upsilon_, nullptr)) {}

Coefficients::Coefficients(CoefficientMeasure omega, CoefficientMeasure upsilon)
    : omega_(std::move(omega)),
      upsilon_(upsilon.atoms(), upsilon.pieces(), false),
      grid_(detail::make_grid(omega_, upsilon_, nullptr)) {}

std::optional<std::pair<double, double>> Coefficients::hull() const {
  if (grid_.points.empty()) return std::nullopt;
  return std::make_pair(grid_.points.front(), grid_.points.back());
}

std::vector<double> Coefficients::atom_sites() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < grid_.points.size(); ++i) {
    if (grid_.node_w[i] != 0.0 || grid_.node_v[i] != 0.0) out.push_back(grid_.points[i]);
  }
  return out;
}

double Coefficients::omega_mass(double x) const { return omega_.mass_at(x); }
double Coefficients::upsilon_mass(double x) const { return upsilon_.mass_at(x); }

double Coefficients::max_rate(cplx z) const {
  double r = 0.5;
  for (std::size_t i = 0; i < grid_.cell_w.size(); ++i) {
    const cplx k2 = 0.25 - z * grid_.cell_w[i] - z * z * grid_.cell_v[i];
    r = std::max(r, std::sqrt(std::abs(k2)));
  }
  return r;
}

TransferMatrix piece_transfer(cplx z, double w, double v, double dx) {
  if (!(dx > 0.0)) throw ValidationError("piece_transfer: dx must be positive");
  const cplx k2 = 0.25 - z * w - z * z * v;
  const auto cf = detail::cell_functions(k2, dx);
  TransferMatrix m;
  m << cf.c, cf.s, k2 * cf.s, cf.c;
  return m;
}

TransferMatrix atom_transfer(cplx z, double w_p, double v_p) {
  TransferMatrix m;
  m << 1.0, 0.0, -(z * w_p + z * z * v_p), 1.0;
  return m;
}

TransferMatrix transfer(const Coefficients& coeffs, cplx z, double x, double y) {
  const State a = detail::walk(coeffs.grid(), z, x, y, {1.0, 0.0});
  const State b = detail::walk(coeffs.grid(), z, x, y, {0.0, 1.0});
  TransferMatrix m;
  m << a.f, b.f, a.df, b.df;
  return m;
}

State advance(const Coefficients& coeffs, cplx z, double x, double y, State s) {
  return detail::walk(coeffs.grid(), z, x, y, s);
}

std::vector<SolutionFrame> solve_ivp(const Coefficients& coeffs, cplx z, double c, cplx d1,
                                     cplx d2, std::span<const double> targets) {
  return detail::sample(coeffs.grid(), z, c, {d1, d2}, targets);
}

std::vector<SolutionFrame> solve_inhomogeneous(const Coefficients& coeffs, cplx z,
                                               const ForcingMeasure& chi, double c, cplx d1,
                                               cplx d2, std::span<const double> targets) {
  const auto grid = detail::make_grid(coeffs.omega(), coeffs.upsilon(), &chi);
  return detail::sample(grid, z, c, {d1, d2}, targets);
}

FundamentalPair fundamental_pair(const Coefficients& coeffs, cplx z, double base, double angle,
                                 std::span<const double> targets) {
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  FundamentalPair fp{z, base, angle, {}, {}};
  fp.theta = solve_ivp(coeffs, z, base, cs, -z * sn, targets);
  fp.phi = solve_ivp(coeffs, z, base, sn, z * cs, targets);
  return fp;
}

cplx wronskian(const SolutionFrame& a, const SolutionFrame& b, DerivativeSide side) {
  if (a.x != b.x) throw ValidationError("wronskian: frames evaluated at different points");
  if (side == DerivativeSide::left) return a.f * b.df_left - a.df_left * b.f;
  return a.f * b.df_right - a.df_right * b.f;
}

double lagrange_residual(const Coefficients& coeffs, cplx z1, cplx z2, const SolutionFrame& f0,
                         const SolutionFrame& g0, double x, double y) {
  const PiecewiseSolution f(coeffs, z1, f0.x, {f0.f, f0.df_left});
  const PiecewiseSolution g(coeffs, z2, g0.x, {g0.f, g0.df_left});
  const auto V = [&](double s) {
    return z1 * f.value(s) * g.derivative(s) - z2 * f.derivative(s) * g.value(s);
  };
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  cplx rhs = 0.0;
  if (lo < hi) {
    rhs = (z1 - z2) * (h1_pair(f, g, lo, hi) + z1 * z2 * measure_pair(coeffs.upsilon(), f, g, lo, hi));
    if (y < x) rhs = -rhs;
  }
  return std::abs(V(y) - V(x) - rhs);
}

}  // namespace qpencil
