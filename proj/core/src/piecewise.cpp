#include "qpencil/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quadrature.hpp"

namespace qpencil {

cplx ExpTail::value(double x) const { return p * std::exp(0.5 * x) + q * std::exp(-0.5 * x); }

cplx ExpTail::derivative(double x) const {
  return 0.5 * p * std::exp(0.5 * x) - 0.5 * q * std::exp(-0.5 * x);
}

ExpTail ExpTail::from_state(double x, cplx f, cplx df) {
  return {0.5 * std::exp(-0.5 * x) * (f + 2.0 * df), 0.5 * std::exp(0.5 * x) * (f - 2.0 * df)};
}

PiecewiseSolution::PiecewiseSolution(const Coefficients&, cplx z) : z_(z) {}

PiecewiseSolution::PiecewiseSolution(const Coefficients& coeffs, cplx z, double x0, State s0)
    : z_(z) {
  build(coeffs, x0, s0);
}

PiecewiseSolution PiecewiseSolution::from_tail(const Coefficients& coeffs, cplx z, int side,
                                               ExpTail tail) {
  PiecewiseSolution sol(coeffs, z);
  const auto hull = coeffs.hull();
  const double x0 = side > 0 ? (hull ? hull->second + 1.0 : 0.0) : (hull ? hull->first - 1.0 : 0.0);
  sol.build(coeffs, x0, {tail.value(x0), tail.derivative(x0)});
  if (side > 0) {
    sol.rtail_ = tail;
  } else {
    sol.ltail_ = tail;
  }
  return sol;
}

void PiecewiseSolution::build(const Coefficients& coeffs, double x0, State s0) {
  const auto& g = coeffs.grid();
  const auto hull = coeffs.hull();
  if (!hull) {
    left_ = right_ = x0;
    ltail_ = rtail_ = ExpTail::from_state(x0, s0.f, s0.df);
    segments_.push_back({x0, x0, 0.0, 0.0, s0.f, s0.df, s0.df});
    return;
  }
  left_ = hull->first;
  right_ = hull->second;
  points_ = g.points;
  State s = advance(coeffs, z_, x0, left_, s0);
  ltail_ = ExpTail::from_state(left_, s.f, s.df);
  const std::size_t n = g.points.size();
  segments_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx jump = z_ * g.node_w[i] + z_ * z_ * g.node_v[i];
    Segment seg{g.points[i], g.points[i], 0.0, 0.0, s.f, s.df, s.df - jump * s.f};
    if (i + 1 < n) {
      seg.right = g.points[i + 1];
      seg.w = g.cell_w[i];
      seg.v = g.cell_v[i];
      const TransferMatrix m = piece_transfer(z_, seg.w, seg.v, seg.right - seg.left);
      s = {m(0, 0) * seg.f + m(0, 1) * seg.df_right, m(1, 0) * seg.f + m(1, 1) * seg.df_right};
      const cplx k2 = 0.25 - z_ * seg.w - z_ * z_ * seg.v;
      rate_ = std::max(rate_, std::sqrt(std::abs(k2)));
    }
    segments_.push_back(seg);
  }
  const auto& last = segments_.back();
  rtail_ = ExpTail::from_state(right_, last.f, last.df_right);
}

const PiecewiseSolution::Segment* PiecewiseSolution::locate(double x) const {
  if (x < left_ || x > right_) return nullptr;
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](double v, const Segment& s) { return v < s.left; });
  return &*(it - 1);
}

cplx PiecewiseSolution::value(double x) const {
  const Segment* s = locate(x);
  if (s == nullptr) return x < left_ ? ltail_.value(x) : rtail_.value(x);
  if (x == s->left) return s->f;
  const TransferMatrix m = piece_transfer(z_, s->w, s->v, x - s->left);
  return m(0, 0) * s->f + m(0, 1) * s->df_right;
}

cplx PiecewiseSolution::derivative(double x) const {
  const Segment* s = locate(x);
  if (s == nullptr) return x < left_ ? ltail_.derivative(x) : rtail_.derivative(x);
  if (x == s->left) return s->df_left;
  const TransferMatrix m = piece_transfer(z_, s->w, s->v, x - s->left);
  return m(1, 0) * s->f + m(1, 1) * s->df_right;
}

cplx PiecewiseSolution::derivative_right(double x) const {
  const Segment* s = locate(x);
  if (s != nullptr && x == s->left) return s->df_right;
  return derivative(x);
}

SolutionFrame PiecewiseSolution::frame(double x) const {
  return {x, value(x), derivative(x), derivative_right(x)};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// 1/4 int uv + int u'v' over [a, b) for two ExpTails; growing parts dropped at infinite ends.
cplx tail_pair(const ExpTail& u, const ExpTail& v, double a, double b) {
  cplx total = 0.0;
  const cplx pp = u.p * v.p;
  const cplx qq = u.q * v.q;
  if (b != kInf) total += pp * (std::exp(b) - (a == -kInf ? 0.0 : std::exp(a)));
  if (a != -kInf) total += qq * (std::exp(-a) - (b == kInf ? 0.0 : std::exp(-b)));
  return 0.5 * total;
}

std::vector<double> merged_breaks(const PiecewiseExp& u, const PiecewiseExp& v) {
  std::vector<double> pts = u.breakpoints();
  pts.insert(pts.end(), v.breakpoints().begin(), v.breakpoints().end());
  for (const auto* f : {&u, &v}) {
    pts.push_back(f->core().first);
    pts.push_back(f->core().second);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

cplx h1_pair(const PiecewiseExp& u, const PiecewiseExp& v, double x, double y) {
  if (!(x < y)) return 0.0;
  const double lo = std::min(u.core().first, v.core().first);
  const double hi = std::max(u.core().second, v.core().second);
  cplx total = 0.0;
  if (x < lo) total += tail_pair(u.left_tail(), v.left_tail(), x, std::min(y, lo));
  if (y > hi) total += tail_pair(u.right_tail(), v.right_tail(), std::max(x, hi), y);
  const double a = std::max(x, lo);
  const double b = std::min(y, hi);
  if (a < b) {
    std::vector<double> cuts{a};
    for (double p : merged_breaks(u, v)) {
      if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    const double rate = u.rate() + v.rate();
    const auto integrand = [&](double s) {
      return 0.25 * u.value(s) * v.value(s) + u.derivative(s) * v.derivative(s);
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const int panels = detail::panels_for_rate(rate, cuts[i + 1] - cuts[i]);
      total += detail::integrate_panels(integrand, cuts[i], cuts[i + 1], panels);
    }
  }
  return total;
}

cplx measure_pair(const CoefficientMeasure& upsilon, const PiecewiseExp& u, const PiecewiseExp& v,
                  double x, double y) {
  if (upsilon.empty()) return 0.0;
  const auto breaks = merged_breaks(u, v);
  return integrate_oriented<double>(
      upsilon, [&](double s) { return u.value(s) * v.value(s); }, x, y, breaks);
}

}  // namespace qpencil
