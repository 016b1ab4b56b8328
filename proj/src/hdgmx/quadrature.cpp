#include "hdgmx/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace hdgmx {

void gauss_jacobi(int n, int alpha, Eigen::VectorXd& nodes,
                  Eigen::VectorXd& weights) {
  // Golub-Welsch for the Jacobi weight (1-t)^alpha (beta = 0) on [-1,1],
  // then mapped to [0,1] with the weight normalization folded in.
  const double a = alpha, b = 0.0;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double den = (2 * k + a + b) * (2 * k + a + b + 2);
    jac(k, k) = den == 0.0 ? 0.0 : (b * b - a * a) / den;
    if (k > 0) {
      const double s = 2 * k + a + b;
      const double off2 =
          4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1) * (s - 1));
      jac(k, k - 1) = jac(k - 1, k) = std::sqrt(off2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  // mu0 = integral of (1-t)^a over [-1,1] = 2^(a+1) / (a+1) for integer a.
  double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  nodes.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = 0.5 * (1.0 + es.eigenvalues()[k]);
    weights[k] = mu0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k) /
                 std::pow(2.0, a + 1.0);
  }
}

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw std::invalid_argument("quadrature: unsupported degree " +
                                std::to_string(degree));
}

} // namespace

QuadratureRule tet_rule(int degree) {
  check_degree(degree);
  const int n = degree / 2 + 1;
  Eigen::VectorXd xa, wa, xb, wb, xc, wc;
  gauss_jacobi(n, 0, xa, wa);
  gauss_jacobi(n, 1, xb, wb);
  gauss_jacobi(n, 2, xc, wc);

  QuadratureRule rule;
  rule.exactness_degree = degree;
  rule.points.resize(3, n * n * n);
  rule.weights.resize(n * n * n);
  int q = 0;
  // Collapsed coordinates: x = a (1-b)(1-c), y = b (1-c), z = c, with the
  // Jacobian (1-b)(1-c)^2 absorbed into the Jacobi weights.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++q) {
        rule.points(0, q) = xa[i] * (1.0 - xb[j]) * (1.0 - xc[k]);
        rule.points(1, q) = xb[j] * (1.0 - xc[k]);
        rule.points(2, q) = xc[k];
        rule.weights[q] = wa[i] * wb[j] * wc[k];
      }
  for (int i = 0; i < rule.weights.size(); ++i)
    if (!(rule.weights[i] > 0.0))
      throw std::runtime_error("quadrature: nonpositive weight");
  return rule;
}

QuadratureRule tri_rule(int degree) {
  check_degree(degree);
  const int n = degree / 2 + 1;
  Eigen::VectorXd xa, wa, xb, wb;
  gauss_jacobi(n, 0, xa, wa);
  gauss_jacobi(n, 1, xb, wb);

  QuadratureRule rule;
  rule.exactness_degree = degree;
  rule.points.resize(2, n * n);
  rule.weights.resize(n * n);
  int q = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++q) {
      rule.points(0, q) = xa[i] * (1.0 - xb[j]);
      rule.points(1, q) = xb[j];
      rule.weights[q] = wa[i] * wb[j];
    }
  for (int i = 0; i < rule.weights.size(); ++i)
    if (!(rule.weights[i] > 0.0))
      throw std::runtime_error("quadrature: nonpositive weight");
  return rule;
}

MappedRule map_to_tet(const QuadratureRule& rule,
                      const std::array<Eigen::Vector3d, 4>& verts) {
  Eigen::Matrix3d jac;
  jac.col(0) = verts[1] - verts[0];
  jac.col(1) = verts[2] - verts[0];
  jac.col(2) = verts[3] - verts[0];
  const double det = jac.determinant();
  if (!(std::abs(det) > 1e-300))
    throw std::runtime_error("quadrature: degenerate tetrahedron");
  MappedRule mapped;
  mapped.points = (jac * rule.points).colwise() + verts[0];
  mapped.weights = std::abs(det) * rule.weights;
  return mapped;
}

MappedRule map_to_triangle(const QuadratureRule& rule,
                           const std::array<Eigen::Vector3d, 3>& verts) {
  const Eigen::Vector3d e1 = verts[1] - verts[0];
  const Eigen::Vector3d e2 = verts[2] - verts[0];
  const double area2 = e1.cross(e2).norm(); // = 2 * area
  if (!(area2 > 1e-300))
    throw std::runtime_error("quadrature: degenerate triangle");
  MappedRule mapped;
  mapped.points.resize(3, rule.num_points());
  for (int q = 0; q < rule.num_points(); ++q)
    mapped.points.col(q) =
        verts[0] + rule.points(0, q) * e1 + rule.points(1, q) * e2;
  mapped.weights = area2 * rule.weights;
  return mapped;
}

} // namespace hdgmx
