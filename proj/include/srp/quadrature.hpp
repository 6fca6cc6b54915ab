#pragma once

#include <vector>

namespace srp {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Generalized Gauss-Laguerre rule for the weight u^alpha e^{-u} on (0, inf),
/// normalized so the weights sum to one (i.e. integrating against the
/// Gamma(alpha + 1, 1) probability density). Requires alpha > -1, n >= 1.
QuadratureRule gauss_laguerre(int n, double alpha);

}  // namespace srp
