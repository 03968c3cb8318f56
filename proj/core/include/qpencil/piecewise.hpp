#pragma once

#include <utility>
#include <vector>

#include "qpencil/propagator.hpp"

namespace qpencil {

/// p e^{x/2} + q e^{-x/2}.
struct ExpTail {
  cplx p{};
  cplx q{};
  cplx value(double x) const;
  cplx derivative(double x) const;
  static ExpTail from_state(double x, cplx f, cplx df);
};

/// A continuous function which is smooth between its breakpoints and equals an ExpTail left of
/// core().first and right of core().second.
class PiecewiseExp {
 public:
  virtual ~PiecewiseExp() = default;
  virtual cplx value(double x) const = 0;
  /// Left derivative f'(x-).
  virtual cplx derivative(double x) const = 0;
  virtual std::pair<double, double> core() const = 0;
  virtual ExpTail left_tail() const = 0;
  virtual ExpTail right_tail() const = 0;
  virtual const std::vector<double>& breakpoints() const = 0;
  /// Bound on the exponential rate inside the core; used to size quadrature panels.
  virtual double rate() const = 0;
};

/// Homogeneous solution stored cell by cell over the coefficient hull, with exact tails.
class PiecewiseSolution final : public PiecewiseExp {
 public:
  PiecewiseSolution(const Coefficients& coeffs, cplx z, double x0, State s0);
  /// Solution given by its tail law right of the hull (side > 0) or left of it (side < 0).
  static PiecewiseSolution from_tail(const Coefficients& coeffs, cplx z, int side, ExpTail tail);

  cplx z() const { return z_; }
  cplx value(double x) const override;
  cplx derivative(double x) const override;
  cplx derivative_right(double x) const;
  SolutionFrame frame(double x) const;
  std::pair<double, double> core() const override { return {left_, right_}; }
  ExpTail left_tail() const override { return ltail_; }
  ExpTail right_tail() const override { return rtail_; }
  const std::vector<double>& breakpoints() const override { return points_; }
  double rate() const override { return rate_; }

 private:
  struct Segment {
    double left;
    double right;
    double w;
    double v;
    cplx f;         // f(left)
    cplx df_left;   // f'(left-)
    cplx df_right;  // f'(left+)
  };

  PiecewiseSolution(const Coefficients& coeffs, cplx z);
  void build(const Coefficients& coeffs, double x0, State s0);
  const Segment* locate(double x) const;

  cplx z_;
  double left_ = 0.0;
  double right_ = 0.0;
  std::vector<double> points_;
  std::vector<Segment> segments_;
  ExpTail ltail_, rtail_;
  double rate_ = 0.5;
};

/// 1/4 int u v + int u' v' over [x, y) (x < y, either may be infinite). Over infinite ranges the
/// growing tail contributions are dropped, so only decaying functions should be integrated there.
cplx h1_pair(const PiecewiseExp& u, const PiecewiseExp& v, double x, double y);

/// int u v dupsilon over [x, y).
cplx measure_pair(const CoefficientMeasure& upsilon, const PiecewiseExp& u, const PiecewiseExp& v,
                  double x, double y);

}  // namespace qpencil
