#ifndef HDGMX_QUADRATURE_HPP
#define HDGMX_QUADRATURE_HPP

#include <Eigen/Dense>
#include <array>

namespace hdgmx {

/// Quadrature rule on a reference simplex. Points are reference coordinates
/// (3 rows for the tetrahedron, 2 for the triangle); weights sum to the
/// reference measure (1/6 resp. 1/2) and are strictly positive.
struct QuadratureRule {
  Eigen::MatrixXd points; // dim x npoints
  Eigen::VectorXd weights;
  int exactness_degree = 0;

  int num_points() const { return static_cast<int>(points.cols()); }
};

constexpr int kMaxQuadratureDegree = 14;

/// Rule exact for all polynomials of total degree <= degree on the reference
/// tetrahedron {x,y,z >= 0, x+y+z <= 1}. Collapsed-coordinate tensor product
/// of Gauss-Jacobi rules, so the weights are positive at every degree.
QuadratureRule tet_rule(int degree);

/// Same on the reference triangle {x,y >= 0, x+y <= 1}.
QuadratureRule tri_rule(int degree);

/// Rule pushed forward to a physical simplex.
struct MappedRule {
  Eigen::Matrix3Xd points;
  Eigen::VectorXd weights;
};

/// Affine push-forward to a tetrahedron; weights scale by |det J| so that the
/// integral of 1 is the physical volume. Throws on degenerate geometry.
MappedRule map_to_tet(const QuadratureRule& rule,
                      const std::array<Eigen::Vector3d, 4>& verts);

/// Affine push-forward to a triangle embedded in R^3; integral of 1 equals
/// the triangle area.
MappedRule map_to_triangle(const QuadratureRule& rule,
                           const std::array<Eigen::Vector3d, 3>& verts);

/// Gauss-Jacobi rule on [0,1] with weight (1-x)^alpha: integrates
/// f(x) (1-x)^alpha exactly for polynomials f of degree <= 2n-1.
void gauss_jacobi(int n, int alpha, Eigen::VectorXd& nodes,
                  Eigen::VectorXd& weights);

} // namespace hdgmx

#endif
