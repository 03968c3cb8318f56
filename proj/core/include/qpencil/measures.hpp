#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qpencil {

using cplx = std::complex<double>;

template <class T>
struct Atom {
  double position;
  T mass;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Constant density on the half-open interval [left, right).
template <class T>
struct Piece {
  double left;
  double right;
  T density;
  friend bool operator==(const Piece&, const Piece&) = default;
};

/// A compactly supported Borel measure made of finitely many point masses and a
/// piecewise-constant density.
///
/// Atoms are kept sorted by position with no duplicates; pieces are sorted and
/// pairwise disjoint. A non-signed measure (the `upsilon` coefficient) rejects
/// negative masses and densities at construction.
template <class T>
class BasicMeasure {
 public:
  BasicMeasure() = default;
  BasicMeasure(std::vector<Atom<T>> atoms, std::vector<Piece<T>> pieces, bool is_signed = true);

  static BasicMeasure dirac(double position, T mass, bool is_signed = true) {
    return BasicMeasure({{position, mass}}, {}, is_signed);
  }

  const std::vector<Atom<T>>& atoms() const { return atoms_; }
  const std::vector<Piece<T>>& pieces() const { return pieces_; }
  bool is_signed() const { return signed_; }
  bool empty() const { return atoms_.empty() && pieces_.empty(); }
  bool is_atomic() const { return pieces_.empty(); }

  /// Smallest closed interval containing every atom and piece; nullopt for the zero measure.
  std::optional<std::pair<double, double>> support_hull() const;

  /// mu({x}).
  T mass_at(double x) const;
  /// Density of the absolutely continuous part at x (pieces are half-open on the right).
  T density_at(double x) const;

  friend bool operator==(const BasicMeasure&, const BasicMeasure&) = default;

 private:
  std::vector<Atom<T>> atoms_;
  std::vector<Piece<T>> pieces_;
  bool signed_ = true;
};

using CoefficientMeasure = BasicMeasure<double>;
/// Inhomogeneity of the differential equation; complex masses allowed.
using ForcingMeasure = BasicMeasure<cplx>;

/// Sorted breakpoints; between consecutive points all densities are constant and no atom
/// lies in the open cell.
struct Mesh {
  std::vector<double> points;
};

/// Oriented Stieltjes integral with the left-continuous convention:
/// over [x, y) for y > x, zero for y == x, and minus the integral over [y, x) for y < x.
///
/// The density part is integrated with panelled Gauss-Legendre quadrature; `g` must be
/// smooth between consecutive entries of `breakpoints` (pass the jump points of `g`).
template <class T>
cplx integrate_oriented(const BasicMeasure<T>& mu, const std::function<cplx(double)>& g, double x,
                        double y, std::span<const double> breakpoints = {});

/// Absolute difference between the two sides of the integration by parts formula
///   int_x^y F dnu = [F G]_x^y - int_x^y G(s+) dmu(s)
/// where F, G are the left-continuous distribution functions of mu and nu.
double integration_by_parts_residual(const CoefficientMeasure& mu, const CoefficientMeasure& nu,
                                     double x, double y);

Mesh support_mesh(const CoefficientMeasure& omega, const CoefficientMeasure& upsilon,
                  std::span<const double> extra = {});

}  // namespace qpencil
