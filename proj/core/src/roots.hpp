#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace qpencil::detail {

using EntireFn = std::function<std::complex<double>(std::complex<double>)>;

/// Number of zeros of f inside the rectangle [lo, hi] x [-height, height], by the argument
/// principle with adaptive edge subdivision.
int winding_count(const EntireFn& f, double lo, double hi, double height);

/// Real zeros of a real entire function on [lo, hi]: sign-change scan at `samples_per_unit`
/// points per unit length, bracket refinement, and a winding-number certificate. The scan is
/// refined until the counts agree. Throws BoundaryCollisionError if a zero sits within
/// tol * max(1, |x|) of an endpoint, ConvergenceError if the counts never agree.
std::vector<double> real_zeros(const EntireFn& f, double lo, double hi, int samples_per_unit,
                               double tol, double height = 1.0);

/// Scan resolution for coefficients made of n atoms and pieces.
inline int scan_density(std::size_t n) { return 8 * (2 * static_cast<int>(n) + 2); }

/// Residue of g at `center` by the trapezoidal rule on a circle.
std::complex<double> circle_residue(const EntireFn& g, std::complex<double> center, double radius,
                                    int points = 64);

}  // namespace qpencil::detail
