#include "quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace qpencil::detail {

namespace {

GaussRule build_rule() {
  using Gauss = boost::math::quadrature::gauss<double, kGaussPoints>;
  const auto& abscissa = Gauss::abscissa();
  const auto& weights = Gauss::weights();
  // boost stores the non-negative half of the symmetric rule.
  GaussRule rule{};
  int k = 0;
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    rule.nodes[k] = abscissa[i];
    rule.weights[k] = weights[i];
    ++k;
    if (abscissa[i] != 0.0) {
      rule.nodes[k] = -abscissa[i];
      rule.weights[k] = weights[i];
      ++k;
    }
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre() {
  static const GaussRule rule = build_rule();
  return rule;
}

}  // namespace qpencil::detail
