#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qpencil/measures.hpp"

namespace qpencil {

using TransferMatrix = Eigen::Matrix2cd;

/// Value and both one-sided derivatives of a solution at x. `df_left` is the canonical
/// (left-continuous) representative.
struct SolutionFrame {
  double x = 0.0;
  cplx f{};
  cplx df_left{};
  cplx df_right{};
};

/// Cauchy data (f(x), f'(x-)) carried while propagating.
struct State {
  cplx f{};
  cplx df{};
};

namespace detail {

/// Breakpoints with per-cell densities and per-node point masses of omega, upsilon and an
/// optional forcing term. Cell i is (points[i], points[i+1]); outside all coefficients vanish.
struct Grid {
  std::vector<double> points;
  std::vector<double> cell_w, cell_v;
  std::vector<cplx> cell_g;
  std::vector<double> node_w, node_v;
  std::vector<cplx> node_g;
  bool forced = false;
};

}  // namespace detail

/// The coefficient pair (omega, upsilon) of the equation
///   -f'' + f/4 = z omega f + z^2 upsilon f.
class Coefficients {
 public:
  Coefficients();
  /// Throws ValidationError if upsilon carries negative mass or density.
  Coefficients(CoefficientMeasure omega, CoefficientMeasure upsilon);

  const CoefficientMeasure& omega() const { return omega_; }
  const CoefficientMeasure& upsilon() const { return upsilon_; }

  /// Breakpoints of both measures.
  const std::vector<double>& nodes() const { return grid_.points; }
  /// Smallest interval containing supp(|omega| + upsilon); nullopt if both vanish.
  std::optional<std::pair<double, double>> hull() const;
  bool is_dirac_comb() const { return omega_.is_atomic() && upsilon_.is_atomic(); }
  bool is_zero() const { return omega_.empty() && upsilon_.empty(); }

  /// Atom positions of |omega| + upsilon carrying nonzero mass, ascending.
  std::vector<double> atom_sites() const;

  double omega_mass(double x) const;
  double upsilon_mass(double x) const;
  /// Largest |kappa| over all cells at spectral parameter z (including the free value 1/2).
  double max_rate(cplx z) const;

  const detail::Grid& grid() const { return grid_; }

  friend bool operator==(const Coefficients& l, const Coefficients& r) {
    return l.omega_ == r.omega_ && l.upsilon_ == r.upsilon_;
  }

 private:
  CoefficientMeasure omega_;
  CoefficientMeasure upsilon_;
  detail::Grid grid_;
};

/// Transfer across a cell of length dx with constant densities w, v:
/// [[C, S], [kappa^2 S, C]] with kappa^2 = 1/4 - z w - z^2 v, C = cosh(kappa dx),
/// S = sinh(kappa dx)/kappa. Evaluated as entire functions of kappa^2.
TransferMatrix piece_transfer(cplx z, double w, double v, double dx);

/// Jump across a point mass: [[1, 0], [-(z w_p + z^2 v_p), 1]].
TransferMatrix atom_transfer(cplx z, double w_p, double v_p);

/// Product of piece and atom transfers mapping (f(x), f'(x-)) to (f(y), f'(y-)). For y < x
/// this is the inverse of transfer(z, y, x).
TransferMatrix transfer(const Coefficients& coeffs, cplx z, double x, double y);

/// Propagates Cauchy data from x to y. Moving right applies the atoms in [x, y); moving left
/// undoes the atoms in [y, x).
State advance(const Coefficients& coeffs, cplx z, double x, double y, State s);

/// Solution with f(c) = d1, f'(c-) = d2, sampled at `targets` (returned in the given order).
std::vector<SolutionFrame> solve_ivp(const Coefficients& coeffs, cplx z, double c, cplx d1,
                                     cplx d2, std::span<const double> targets);

/// Solution of -f'' + f/4 = z omega f + z^2 upsilon f + chi with the same initial data.
std::vector<SolutionFrame> solve_inhomogeneous(const Coefficients& coeffs, cplx z,
                                               const ForcingMeasure& chi, double c, cplx d1,
                                               cplx d2, std::span<const double> targets);

struct FundamentalPair {
  cplx z;
  double base;
  double angle;
  std::vector<SolutionFrame> theta;
  std::vector<SolutionFrame> phi;
};

/// theta(base) = cos(angle), theta'(base) = -z sin(angle);
/// phi(base) = sin(angle), phi'(base) = z cos(angle).
FundamentalPair fundamental_pair(const Coefficients& coeffs, cplx z, double base, double angle,
                                 std::span<const double> targets);

enum class DerivativeSide { left, right };

/// a.f b.f' - a.f' b.f with the chosen one-sided derivatives. Throws ValidationError when the
/// frames sit at different points.
cplx wronskian(const SolutionFrame& a, const SolutionFrame& b,
               DerivativeSide side = DerivativeSide::left);

/// |V(y) - V(x) - RHS| for the pairs (f, z1 f), (g, z2 g), where f and g are the solutions
/// through the frames `f0` (at z1) and `g0` (at z2), V = z1 f g' - z2 f' g, and
///   RHS = (z1 - z2) (1/4 int fg + int f'g' + z1 z2 int fg dupsilon) over [x, y).
double lagrange_residual(const Coefficients& coeffs, cplx z1, cplx z2, const SolutionFrame& f0,
                         const SolutionFrame& g0, double x, double y);

}  // namespace qpencil
