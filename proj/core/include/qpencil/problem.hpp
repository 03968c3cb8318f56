#pragma once

#include <variant>

#include "qpencil/propagator.hpp"

namespace qpencil {

enum class Side { plus, minus };

/// The interval [a, b) with separated boundary conditions
///   z f(a) cos(alpha) - f'(a) sin(alpha) = 0,  z f(b) cos(beta) - f'(b) sin(beta) = 0.
struct Bounded {
  double a = 0.0;
  double b = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  friend bool operator==(const Bounded&, const Bounded&) = default;
};

/// J+ = [c, inf) or J- = (-inf, c) with boundary angle gamma at c.
struct HalfLine {
  double c = 0.0;
  Side side = Side::plus;
  double gamma = 0.0;
  friend bool operator==(const HalfLine&, const HalfLine&) = default;
};

struct WholeLine {
  friend bool operator==(const WholeLine&, const WholeLine&) = default;
};

using Geometry = std::variant<WholeLine, HalfLine, Bounded>;

struct Problem {
  Coefficients coeffs;
  Geometry geometry;
  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Throws ValidationError for a >= b, non-finite endpoints or angles outside [0, pi).
void validate(const Bounded& g);
void validate(const HalfLine& g);

}  // namespace qpencil
