#include <gtest/gtest.h>

#include <Eigen/LU>
#include <array>
#include <random>

#include "combs.hpp"
#include "qpencil/errors.hpp"
#include "qpencil/propagator.hpp"

using namespace qpencil;
using qpencil::testing::random_comb;
using qpencil::testing::random_mixed;

namespace {

/// Classical RK4 for f'' = k2 f over [0, dx].
std::array<cplx, 2> rk4(cplx k2, cplx f, cplx df, double dx, int steps) {
  const double h = dx / steps;
  for (int i = 0; i < steps; ++i) {
    const cplx a1 = df, b1 = k2 * f;
    const cplx a2 = df + 0.5 * h * b1, b2 = k2 * (f + 0.5 * h * a1);
    const cplx a3 = df + 0.5 * h * b2, b3 = k2 * (f + 0.5 * h * a2);
    const cplx a4 = df + h * b3, b4 = k2 * (f + h * a3);
    f += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    df += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
  }
  return {f, df};
}

}  // namespace

TEST(PieceTransfer, MatchesRungeKutta) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 20; ++k) {
    const cplx z(u(rng), u(rng));
    const double w = u(rng), v = std::abs(u(rng));
    const double dx = k % 4 == 0 ? 1e-3 * (1.0 + std::abs(u(rng))) : 0.5 + std::abs(u(rng));
    const cplx k2 = 0.25 - z * w - z * z * v;
    const auto t = piece_transfer(z, w, v, dx);
    const auto c0 = rk4(k2, 1.0, 0.0, dx, 4000);
    const auto c1 = rk4(k2, 0.0, 1.0, dx, 4000);
    EXPECT_LT(std::abs(t(0, 0) - c0[0]), 1e-11);
    EXPECT_LT(std::abs(t(1, 0) - c0[1]), 1e-11);
    EXPECT_LT(std::abs(t(0, 1) - c1[0]), 1e-11);
    EXPECT_LT(std::abs(t(1, 1) - c1[1]), 1e-11);
    EXPECT_LT(std::abs(t.determinant() - 1.0), 1e-12);
  }
}

TEST(PieceTransfer, SeriesBranchAtTurningPoint) {
  const cplx z = 0.25;
  const auto t = piece_transfer(z, 1.0, 0.0, 2.0);
  EXPECT_NEAR(std::abs(t(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t(0, 1) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t(1, 0)), 0.0, 1e-15);
}

TEST(AtomTransfer, JumpMatrix) {
  const cplx z(0.3, -0.2);
  const auto t = atom_transfer(z, 2.0, 0.5);
  EXPECT_EQ(t(0, 0), cplx(1.0));
  EXPECT_EQ(t(0, 1), cplx(0.0));
  EXPECT_EQ(t(1, 1), cplx(1.0));
  EXPECT_LT(std::abs(t(1, 0) + (z * 2.0 + z * z * 0.5)), 1e-16);
}

TEST(Transfer, LeftwardIsInverse) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) {
    const auto coeffs = random_mixed(rng, 5);
    const cplx z(0.4 * k - 2.0, 0.3);
    const auto fwd = transfer(coeffs, z, -4.0, 3.7);
    const auto back = transfer(coeffs, z, 3.7, -4.0);
    EXPECT_LT((fwd * back - TransferMatrix::Identity()).norm(), 1e-9 * fwd.norm() * back.norm());
  }
}

TEST(Transfer, AtomAtStartIncludedAtEndExcluded) {
  Coefficients coeffs(CoefficientMeasure({{0.0, 1.0}}, {}), CoefficientMeasure({}, {}, false));
  const cplx z = 0.5;
  EXPECT_LT((transfer(coeffs, z, 0.0, 0.0) - TransferMatrix::Identity()).norm(), 1e-15);
  const auto across = transfer(coeffs, z, 0.0, 1e-300);
  EXPECT_LT((across - atom_transfer(z, 1.0, 0.0)).norm(), 1e-15);
  const auto before = transfer(coeffs, z, -1.0, 0.0);
  EXPECT_LT((before - piece_transfer(z, 0.0, 0.0, 1.0)).norm(), 1e-15);
}

TEST(SolveIvp, JumpAtAtom) {
  Coefficients coeffs(CoefficientMeasure({{0.5, 1.5}}, {}),
                      CoefficientMeasure({{0.5, 0.7}}, {}, false));
  const cplx z(0.8, 0.1);
  const double at[] = {0.5};
  const auto fr = solve_ivp(coeffs, z, -1.0, 1.0, 0.2, at);
  EXPECT_LT(std::abs(fr[0].df_right - fr[0].df_left + (z * 1.5 + z * z * 0.7) * fr[0].f), 1e-14);
}

TEST(SolveIvp, FreeSolutionIsExponential) {
  Coefficients coeffs;
  const double at[] = {-2.0, 3.0, 0.0};
  const auto fr = solve_ivp(coeffs, cplx(1.0, 1.0), 0.0, 1.0, -0.5, at);
  EXPECT_NEAR(std::abs(fr[0].f - std::exp(1.0)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(fr[1].f - std::exp(-1.5)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(fr[2].f - 1.0), 0.0, 1e-15);
}

TEST(Inhomogeneous, VariationOfConstants) {
  Coefficients coeffs(CoefficientMeasure({{-1.0, 1.2}, {0.4, -0.8}}, {{1.5, 2.0, 0.6}}),
                      CoefficientMeasure({{0.4, 0.5}}, {}, false));
  ForcingMeasure chi({{-0.5, cplx(1.0, 0.5)}, {0.4, -0.7}}, {{0.6, 1.3, cplx(0.3, -0.2)}});
  const cplx z(0.9, 0.4);
  const double c = -2.0;
  const cplx d1(0.3, 0.0), d2(-0.2, 0.1);

  const int n = 4000;
  const double l = 0.6, r = 1.3, h = (r - l) / n;
  std::vector<double> pts{-0.5, 0.4};
  for (int i = 0; i <= n; ++i) pts.push_back(l + i * h);
  const double xs[] = {-0.7, 0.1, 0.4, 0.9, 1.7, 2.5};
  pts.insert(pts.end(), std::begin(xs), std::end(xs));
  const auto u1 = solve_ivp(coeffs, z, c, 1.0, 0.0, pts);
  const auto u2 = solve_ivp(coeffs, z, c, 0.0, 1.0, pts);
  const cplx w = u1[0].f * u2[0].df_left - u1[0].df_left * u2[0].f;
  const std::size_t off = n + 3;

  const auto got = solve_inhomogeneous(coeffs, z, chi, c, d1, d2, xs);
  for (std::size_t j = 0; j < std::size(xs); ++j) {
    const double x = xs[j];
    const cplx a = u1[off + j].f, b = u2[off + j].f;
    auto kernel = [&](std::size_t i) { return -(u1[i].f * b - u2[i].f * a) / w; };
    cplx fp = 0.0;
    if (-0.5 < x) fp += cplx(1.0, 0.5) * kernel(0);
    if (0.4 < x) fp += -0.7 * kernel(1);
    // Simpson over the part of the density piece left of x.
    const double top = std::min(x, r);
    if (top > l) {
      const int m = static_cast<int>(std::round((top - l) / h));
      const int even = m - m % 2;
      cplx s = 0.0;
      for (int i = 0; i <= even; ++i) {
        const double wt = (i == 0 || i == even) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += wt * kernel(2 + i);
      }
      fp += cplx(0.3, -0.2) * s * h / 3.0;
      ASSERT_EQ(even, m);
    }
    const cplx expect = d1 * a + d2 * b + fp;
    EXPECT_LT(std::abs(got[j].f - expect), 1e-9 * std::max(1.0, std::abs(expect))) << x;
  }
}

TEST(Wronskian, ConstantAcrossAtomsAndPieces) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto coeffs = random_mixed(rng, 6);
    std::vector<double> xs;
    for (double x = -5.0; x <= 5.0; x += 0.37) xs.push_back(x);
    for (double x : coeffs.nodes()) xs.push_back(x);
    const cplx z(0.5 * k - 4.0, 0.2 * (k % 5) - 0.4);
    if (z == 0.0) continue;
    const auto fp = fundamental_pair(coeffs, z, 0.1, 0.7, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto& t = fp.theta[i];
      const auto& p = fp.phi[i];
      const double scale = std::abs(t.f * p.df_left) + std::abs(t.df_left * p.f);
      EXPECT_LT(std::abs(wronskian(t, p) - z) / scale, 1e-12);
      EXPECT_LT(std::abs(wronskian(t, p, DerivativeSide::right) - z) / scale, 1e-12);
    }
  }
}

TEST(Wronskian, FramesMustShareAPoint) {
  SolutionFrame a{0.0, 1.0, 0.0, 0.0};
  SolutionFrame b{1.0, 1.0, 0.0, 0.0};
  EXPECT_THROW(wronskian(a, b), ValidationError);
}

TEST(Lagrange, ResidualSmallAndMatchesQuadrature) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const auto coeffs = random_comb(rng, 5);
    const cplx z1(0.3 * k - 1.0, 0.5), z2(-0.7, -0.2 * k - 0.1);
    const double x = -4.0, y = 4.0;
    const double at[] = {x};
    const auto f0 = solve_ivp(coeffs, z1, x, 1.0, 0.3, at)[0];
    const auto g0 = solve_ivp(coeffs, z2, x, -0.4, 0.9, at)[0];

    // Independent evaluation of both sides with Simpson's rule between atoms.
    std::vector<double> cuts{x};
    for (double p : coeffs.nodes()) cuts.push_back(p);
    cuts.push_back(y);
    cplx rhs = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const int n = 400;
      const double h = (cuts[c + 1] - cuts[c]) / n;
      std::vector<double> pts;
      for (int i = 0; i <= n; ++i) pts.push_back(cuts[c] + i * h);
      pts.back() = cuts[c + 1];
      auto f = solve_ivp(coeffs, z1, x, f0.f, f0.df_left, pts);
      auto g = solve_ivp(coeffs, z2, x, g0.f, g0.df_left, pts);
      for (int i = 0; i <= n; ++i) {
        const double wt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const cplx df = i == 0 ? f[i].df_right : f[i].df_left;
        const cplx dg = i == 0 ? g[i].df_right : g[i].df_left;
        rhs += wt * h / 3.0 * (0.25 * f[i].f * g[i].f + df * dg);
      }
      if (c > 0) rhs += z1 * z2 * coeffs.upsilon_mass(cuts[c]) * f[0].f * g[0].f;
    }
    rhs *= (z1 - z2);
    const double ends[] = {x, y};
    const auto f = solve_ivp(coeffs, z1, x, f0.f, f0.df_left, ends);
    const auto g = solve_ivp(coeffs, z2, x, g0.f, g0.df_left, ends);
    auto V = [&](int i) { return z1 * f[i].f * g[i].df_left - z2 * f[i].df_left * g[i].f; };
    EXPECT_LT(std::abs(V(1) - V(0) - rhs), 1e-8 * std::max(1.0, std::abs(rhs)));
    const double scale = (1.0 + std::abs(z1) + std::abs(z2)) *
                         (std::abs(f[1].f) + std::abs(f[1].df_left)) *
                         (std::abs(g[1].f) + std::abs(g[1].df_left));
    EXPECT_LT(lagrange_residual(coeffs, z1, z2, f0, g0, x, y), 1e-10 * std::max(1.0, scale));
  }
}
