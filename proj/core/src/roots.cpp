#include "roots.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qpencil/errors.hpp"

namespace qpencil::detail {

namespace {

using cplx = std::complex<double>;

constexpr double kMaxPhaseStep = std::numbers::pi / 3.0;

double phase_change(cplx from, cplx to) { return std::arg(to / from); }

double edge_phase(const EntireFn& f, cplx za, cplx fa, cplx zb, cplx fb, int depth) {
  const cplx zm = 0.5 * (za + zb);
  const cplx fm = f(zm);
  if (fm == 0.0 || fa == 0.0 || fb == 0.0) {
    throw ConvergenceError("argument principle: function vanishes on the contour");
  }
  const double d1 = phase_change(fa, fm);
  const double d2 = phase_change(fm, fb);
  const double d = phase_change(fa, fb);
  if (std::abs(d1) < kMaxPhaseStep && std::abs(d2) < kMaxPhaseStep &&
      std::abs(d1 + d2 - d) < 1e-9) {
    return d1 + d2;
  }
  if (depth > 48) throw ConvergenceError("argument principle: contour subdivision did not resolve");
  return edge_phase(f, za, fa, zm, fm, depth + 1) + edge_phase(f, zm, fm, zb, fb, depth + 1);
}

double derivative_estimate(const EntireFn& f, double x) {
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (f(x + h).real() - f(x - h).real()) / (2.0 * h);
}

void check_boundary(const EntireFn& f, double x, double tol) {
  const double v = f(x).real();
  const double d = derivative_estimate(f, x);
  if (v == 0.0 || std::abs(v) < tol * std::max(1.0, std::abs(x)) * std::abs(d)) {
    std::ostringstream msg;
    msg << "a zero lies within tolerance of the window boundary " << x
        << "; perturb the window and retry";
    throw BoundaryCollisionError(msg.str());
  }
}

}  // namespace

int winding_count(const EntireFn& f, double lo, double hi, double height) {
  const cplx corners[4] = {{lo, -height}, {hi, -height}, {hi, height}, {lo, height}};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e];
    const cplx b = corners[(e + 1) % 4];
    const int pieces = 16 + static_cast<int>(8.0 * std::abs(b - a));
    cplx za = a;
    cplx fa = f(za);
    for (int k = 1; k <= pieces; ++k) {
      const cplx zb = a + (b - a) * (double(k) / pieces);
      const cplx fb = f(zb);
      total += edge_phase(f, za, fa, zb, fb, 0);
      za = zb;
      fa = fb;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

std::vector<double> real_zeros(const EntireFn& f, double lo, double hi, int samples_per_unit,
                               double tol, double height) {
  if (!(lo < hi)) throw ValidationError("window must satisfy lo < hi");
  check_boundary(f, lo, tol);
  check_boundary(f, hi, tol);
  const int expected = winding_count(f, lo, hi, height);
  const auto real_part = [&](double x) { return f(x).real(); };
  long base = std::max<long>(64, static_cast<long>(std::ceil(samples_per_unit * (hi - lo))));
  std::vector<double> roots;
  for (int attempt = 0; attempt < 7; ++attempt) {
    const long n = base << attempt;
    roots.clear();
    double x_prev = lo;
    double v_prev = real_part(lo);
    for (long k = 1; k <= n; ++k) {
      const double x = k == n ? hi : lo + (hi - lo) * double(k) / double(n);
      const double v = real_part(x);
      if (v == 0.0) {
        roots.push_back(x);
      } else if (v_prev != 0.0 && std::signbit(v) != std::signbit(v_prev)) {
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(
            real_part, x_prev, x, v_prev, v, boost::math::tools::eps_tolerance<double>(52), iters);
        roots.push_back(0.5 * (r.first + r.second));
      }
      x_prev = x;
      v_prev = v;
    }
    if (static_cast<int>(roots.size()) == expected) {
      std::sort(roots.begin(), roots.end());
      return roots;
    }
  }
  std::ostringstream msg;
  msg << "root scan on [" << lo << ", " << hi << "] found " << roots.size()
      << " real zeros but the argument principle counts " << expected;
  throw ConvergenceError(msg.str());
}

cplx circle_residue(const EntireFn& g, cplx center, double radius, int points) {
  cplx sum = 0.0;
  for (int k = 0; k < points; ++k) {
    const cplx u = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / points);
    sum += g(center + radius * u) * radius * u;
  }
  return sum / double(points);
}

}  // namespace qpencil::detail
