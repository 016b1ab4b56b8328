#ifndef HDGMX_POLYNOMIAL_HPP
#define HDGMX_POLYNOMIAL_HPP

#include <Eigen/Dense>
#include <vector>

namespace hdgmx {

/// Exact integral of x^a y^b z^c over the reference tetrahedron
/// {x,y,z >= 0, x+y+z <= 1}: a! b! c! / (a+b+c+3)!.
double tet_monomial_integral(int a, int b, int c);

/// Exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!.
double tri_monomial_integral(int a, int b);

/// Modal basis of P_degree on the reference tetrahedron, orthonormal in L2.
/// Built by modified Gram-Schmidt (with re-orthogonalization) on graded-lex
/// monomials, using exact monomial integrals for the inner products.
class ScalarModalBasis {
public:
  explicit ScalarModalBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exps_.size()); }

  /// values(i, p) = psi_i at points.col(p)
  void eval(const Eigen::Matrix3Xd& points, Eigen::MatrixXd& values) const;
  /// grads[d](i, p) = d psi_i / d x_d
  void eval_grad(const Eigen::Matrix3Xd& points,
                 std::array<Eigen::MatrixXd, 3>& grads) const;

  /// Expansion coefficients of a polynomial given by monomial coefficients
  /// (graded-lex order, same length as size()).
  Eigen::VectorXd project_monomial_coeffs(const Eigen::VectorXd& mono) const;

  const std::vector<std::array<int, 3>>& exponents() const { return exps_; }
  /// coeff()(i, j): weight of monomial j in basis function i.
  const Eigen::MatrixXd& coeff() const { return coeff_; }

private:
  int degree_;
  std::vector<std::array<int, 3>> exps_;
  Eigen::MatrixXd coeff_;
};

/// Modal basis of P_degree on the reference triangle {x,y >= 0, x+y <= 1},
/// orthonormal in L2. Same construction as the tetrahedral basis.
class ScalarModalBasis2D {
public:
  explicit ScalarModalBasis2D(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exps_.size()); }

  void eval(const Eigen::Matrix2Xd& points, Eigen::MatrixXd& values) const;

  const std::vector<std::array<int, 2>>& exponents() const { return exps_; }

private:
  int degree_;
  std::vector<std::array<int, 2>> exps_;
  Eigen::MatrixXd coeff_;
};

} // namespace hdgmx

#endif
