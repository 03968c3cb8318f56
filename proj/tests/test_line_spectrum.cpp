#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "combs.hpp"
#include "qpencil/errors.hpp"
#include "qpencil/line_spectrum.hpp"
#include "qpencil/pencil.hpp"

using namespace qpencil;
using qpencil::testing::random_comb;
using qpencil::testing::rel;

namespace {

Coefficients omega_atom(double p, double w) {
  return {CoefficientMeasure({{p, w}}, {}), CoefficientMeasure({}, {}, false)};
}

Coefficients upsilon_atom(double p, double v) {
  return {CoefficientMeasure{}, CoefficientMeasure({{p, v}}, {}, false)};
}

/// 1 / mu({lambda}) for a Dirac comb: the squared norm of (phi, lambda phi) rewritten through the
/// equation as sum phi(p)^2 (lambda w_p + 2 lambda^2 v_p).
double comb_mass(const Coefficients& c, double lambda) {
  const auto phi = weyl_solution(c, lambda, Side::plus);
  double s = 0.0;
  for (double p : c.atom_sites()) {
    s += std::norm(phi.value(p)) * (lambda * c.omega_mass(p) + 2.0 * lambda * lambda * c.upsilon_mass(p));
  }
  return 1.0 / s;
}

}  // namespace

TEST(WeylSolution, TailNormalisation) {
  std::mt19937_64 rng(1);
  const auto c = random_comb(rng, 4);
  const cplx z(0.7, -0.3);
  const auto plus = weyl_solution(c, z, Side::plus);
  const auto minus = weyl_solution(c, z, Side::minus);
  EXPECT_LT(std::abs(plus.value(5.0) - std::exp(-2.5)), 1e-15);
  EXPECT_LT(std::abs(plus.derivative(5.0) + 0.5 * std::exp(-2.5)), 1e-15);
  EXPECT_LT(std::abs(minus.value(-5.0) - std::exp(-2.5)), 1e-15);
  EXPECT_LT(rel(weyl_solution(c, std::conj(z), Side::plus).value(-1.0), std::conj(plus.value(-1.0))),
            1e-14);
}

TEST(Connection, FreeProblem) {
  const auto cc = connection_coefficients(Coefficients{}, cplx(0.3, 0.2));
  EXPECT_LT(std::abs(cc.A - 1.0), 1e-15);
  EXPECT_LT(std::abs(cc.B), 1e-15);
  EXPECT_EQ(singular_M(Coefficients{}, cplx(1.0, 1.0)), cplx(0.0));
  EXPECT_TRUE(eigenvalues_line(Coefficients{}, -3.0, 3.0).empty());
}

TEST(LineEigen, SingleOmegaAtom) {
  // e^{x/2} left and e^{-x/2} right meet at the atom when the derivative jumps by -1 = -z w.
  for (double w : {0.5, 1.0, 2.0, -3.0}) {
    const auto eig = eigenvalues_line(omega_atom(0.0, w), -5.0, 5.0);
    ASSERT_EQ(eig.size(), 1u);
    EXPECT_NEAR(eig[0], 1.0 / w, 1e-10);
  }
}

TEST(LineEigen, SingleUpsilonAtom) {
  for (double v : {1.0, 4.0}) {
    const auto eig = eigenvalues_line(upsilon_atom(0.0, v), -5.0, 5.0);
    ASSERT_EQ(eig.size(), 2u);
    EXPECT_NEAR(eig[0], -1.0 / std::sqrt(v), 1e-10);
    EXPECT_NEAR(eig[1], 1.0 / std::sqrt(v), 1e-10);
  }
}

TEST(LineEigen, WindowValidationAndCollision) {
  EXPECT_THROW(eigenvalues_line(Coefficients{}, 1.0, -1.0), ValidationError);
  EXPECT_THROW(eigenvalues_line(omega_atom(0.0, 2.0), 0.5, 2.0), BoundaryCollisionError);
}

TEST(LineEigen, MatchesPencil) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const auto c = random_comb(rng, 6);
    const auto [lo, hi] = default_window(c);
    const auto eig = eigenvalues_line(c, lo, hi, 1e-12);
    const auto pencil = pencil_real_spectrum(assemble_pencil(c, WholeLine{}));
    ASSERT_EQ(eig.size(), pencil.size());
    for (std::size_t i = 0; i < eig.size(); ++i) {
      EXPECT_NEAR(eig[i], pencil[i], 1e-8 * std::max(1.0, std::abs(pencil[i])));
    }
  }
}

TEST(Measure, SingleAtomMasses) {
  EXPECT_NEAR(norming_constant(omega_atom(0.0, 2.0), 0.5), 1.0, 1e-12);
  EXPECT_NEAR(norming_constant(upsilon_atom(0.0, 4.0), 0.5), 0.5, 1e-12);
  EXPECT_NEAR(norming_constant(upsilon_atom(0.0, 4.0), -0.5), 0.5, 1e-12);
  EXPECT_THROW(norming_constant(omega_atom(0.0, 2.0), 0.7), PreconditionError);
}

TEST(Measure, MassesMatchCombFormulaAndResidues) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 10; ++k) {
    const auto c = random_comb(rng, 5);
    const auto [lo, hi] = default_window(c);
    const auto data = spectral_measure(c, lo, hi);
    const auto res = residue_check(c, data);
    for (std::size_t i = 0; i < data.size(); ++i) {
      EXPECT_NEAR(data[i].mass / comb_mass(c, data[i].lambda), 1.0, 1e-10);
      EXPECT_LT(res[i], 1e-6);
    }
  }
}

TEST(Measure, SingularMConjugation) {
  std::mt19937_64 rng(10);
  const auto c = random_comb(rng, 5);
  for (const cplx z : {cplx(0.2, 0.9), cplx(-1.5, 0.3)}) {
    EXPECT_LT(rel(singular_M(c, std::conj(z)), std::conj(singular_M(c, z))), 1e-13);
  }
  EXPECT_EQ(singular_M(c, 0.0), cplx(0.0));
}

TEST(HalfLine, SingleAtomDirichlet) {
  const double c = -0.5, p = 0.7, w = 1.3;
  const double A = 0.5 * (p - c);
  const double expect = (1.0 / std::tanh(A) + 1.0) / (2.0 * w);
  const auto eig = eigenvalues_halfline(omega_atom(p, w), HalfLine{c, Side::plus, 0.0}, -5.0, 5.0);
  ASSERT_EQ(eig.size(), 2u);
  EXPECT_EQ(eig[0].lambda, 0.0);
  EXPECT_EQ(eig[0].multiplicity, 1);
  EXPECT_NEAR(eig[1].lambda, expect, 1e-10);

  const auto left = eigenvalues_halfline(omega_atom(-p, w), HalfLine{-c, Side::minus, 0.0}, -5.0, 5.0);
  ASSERT_EQ(left.size(), 2u);
  EXPECT_NEAR(left[1].lambda, expect, 1e-10);

  const auto neumann =
      eigenvalues_halfline(omega_atom(p, w), HalfLine{c, Side::plus, 1.0}, -5.0, 5.0);
  for (const auto& e : neumann) EXPECT_NE(e.lambda, 0.0);
}

TEST(HalfLine, WeylLaws) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.01, 3.0), ang(0.01, 3.1);
  for (int k = 0; k < 6; ++k) {
    const auto coeffs = random_comb(rng, 5);
    const Side side = k % 2 ? Side::minus : Side::plus;
    const double c = re(rng) / 2.0;
    for (int j = 0; j < 20; ++j) {
      const cplx z(re(rng), im(rng));
      const cplx m = weyl_m_halfline(coeffs, z, HalfLine{c, side, ang(rng)});
      EXPECT_GE(m.imag() / std::max(1.0, std::abs(m)), -1e-12);
      const cplx m0 = weyl_m_halfline(coeffs, z, HalfLine{c, side, 0.0});
      const cplx m1 = weyl_m_halfline(coeffs, z, HalfLine{c, side, std::numbers::pi / 2});
      EXPECT_LT(rel(m1, -1.0 / m0), 1e-11);
    }
  }
}

TEST(HalfLine, SmallZAsymptotics) {
  std::mt19937_64 rng(15);
  const auto coeffs = random_comb(rng, 4);
  const double eps = 1e-6;
  const cplx z(0.0, eps);
  for (Side side : {Side::plus, Side::minus}) {
    const double s = side == Side::plus ? 1.0 : -1.0;
    const cplx m0 = weyl_m_halfline(coeffs, z, HalfLine{0.1, side, 0.0});
    EXPECT_NEAR(std::abs(-2.0 * z * m0 - 1.0), 0.0, 1e-3);
    const double g = 0.8;
    const cplx m = weyl_m_halfline(coeffs, z, HalfLine{0.1, side, g});
    const cplx fit = (m + s / std::tan(g)) * std::pow(std::sin(g), 2) / (2.0 * z);
    EXPECT_NEAR(std::abs(fit - 1.0), 0.0, 1e-3);
  }
}

TEST(Element, Validation) {
  EXPECT_THROW(HilbertElement({}, {}), ValidationError);
  EXPECT_THROW(HilbertElement({1.0, 0.0}, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(HilbertElement({0.0}, {1.0, 2.0}), ValidationError);
}

TEST(Element, DeltaPairings) {
  std::mt19937_64 rng(16);
  const auto coeffs = random_comb(rng, 4);
  for (double c : {-1.0, 0.3}) {
    for (double d : {-2.0, 0.5}) {
      EXPECT_NEAR(std::abs(inner_product(coeffs, delta_element(c), delta_element(d)) -
                           std::exp(-0.5 * std::abs(c - d))),
                  0.0, 1e-13);
    }
    const auto [lo, hi] = default_window(coeffs);
    for (double l : eigenvalues_line(coeffs, lo, hi)) {
      EXPECT_LT(rel(transform_hat(coeffs, delta_element(c), l),
                    weyl_solution(coeffs, l, Side::plus).value(c)),
                1e-12);
    }
  }
}

TEST(Element, ParsevalOnRandomElements) {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 8; ++k) {
    const auto coeffs = random_comb(rng, 5);
    std::vector<double> nodes{-2.5, -0.4, 0.9, 2.2};
    std::vector<cplx> values;
    for (std::size_t i = 0; i < nodes.size(); ++i) values.emplace_back(u(rng), u(rng));
    std::vector<std::pair<double, cplx>> second;
    for (const auto& a : coeffs.upsilon().atoms()) second.emplace_back(a.position, cplx(u(rng), u(rng)));
    const HilbertElement f(nodes, values, second);
    const auto r = parseval_check(coeffs, f);
    EXPECT_NEAR(r.lhs / r.rhs, 1.0, 1e-8);
    EXPECT_LE(r.rhs, std::real(inner_product(coeffs, f, f)) * (1.0 + 1e-12));
  }
}

TEST(Element, ProjectionNeedsComb) {
  Coefficients c(CoefficientMeasure({}, {{0.0, 1.0, 1.0}}), CoefficientMeasure({}, {}, false));
  EXPECT_THROW(projection_norm(c, delta_element(0.0)), ValidationError);
}

TEST(Window, CoversPencilSpectrum) {
  const auto [lo, hi] = default_window(omega_atom(0.0, 0.5));
  EXPECT_NEAR(hi, 3.0, 1e-12);
  EXPECT_NEAR(lo, -3.0, 1e-12);
  const auto zero = default_window(Coefficients{});
  EXPECT_EQ(zero.second, 1.0);
}
