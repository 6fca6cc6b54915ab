#include "srp/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace srp {

// Golub-Welsch: the nodes are the eigenvalues of the Jacobi matrix of the
// monic generalized Laguerre recurrence, and the normalized weights are the
// squared first components of the eigenvectors.
QuadratureRule gauss_laguerre(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: node count must be >= 1");
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_laguerre: alpha must exceed -1");

  Eigen::VectorXd diagonal(n);
  Eigen::VectorXd off_diagonal(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) diagonal(k) = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) off_diagonal(k - 1) = std::sqrt(k * (k + alpha));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, off_diagonal, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gauss_laguerre: eigen decomposition failed");
  }

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = solver.eigenvalues()(k);
    const double first = solver.eigenvectors()(0, k);
    rule.weights[k] = first * first;
  }
  return rule;
}

}  // namespace srp
