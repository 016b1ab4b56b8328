#ifndef HDGMX_BASIS_HPP
#define HDGMX_BASIS_HPP

#include "hdgmx/mesh.hpp"
#include "hdgmx/polynomial.hpp"
#include "hdgmx/quadrature.hpp"

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace hdgmx {

/// Affine map x = v0 + J x_ref of an element.
struct ElementGeometry {
  Eigen::Vector3d v0;
  Eigen::Matrix3d jac;
  Eigen::Matrix3d jac_inv_t;
  double det = 0.0;
};

ElementGeometry element_geometry(const Mesh& mesh, int e);

/// Values and reference gradients of a scalar basis at reference points.
struct ScalarTab {
  Eigen::MatrixXd val;                  // nbasis x npoints
  std::array<Eigen::MatrixXd, 3> grad;  // reference-coordinate gradients
};

ScalarTab tabulate(const ScalarModalBasis& basis, const Eigen::Matrix3Xd& pts);

/// The vector basis used for q and u on an element is {e_d psi_j}: three
/// Cartesian copies of the scalar modal basis, indexed func = d * n + j.
/// curl(e_d psi) = grad(psi) x e_d with the physical gradient.
void vector_basis_values(const ScalarTab& tab, int point,
                         Eigen::Matrix3Xd& values);
void vector_basis_curls(const ScalarTab& tab, const ElementGeometry& geom,
                        int point, Eigen::Matrix3Xd& curls);

/// Tangential polynomial basis on mesh faces. The scalar factor is a set of
/// centered, diameter-scaled monomials in the global face frame, so both
/// incident elements evaluate exactly the same functions; the vector basis is
/// {t1 phi_j} followed by {t2 phi_j}, dimension (k+1)(k+2).
class FaceBasis {
public:
  FaceBasis(const Mesh& mesh, int degree);

  int degree() const { return degree_; }
  int scalar_size() const { return static_cast<int>(exps_.size()); }
  int size() const { return 2 * scalar_size(); }

  /// phi(j, p): scalar factor j at physical point p on face f.
  void eval_scalar(int f, const Eigen::Matrix3Xd& points,
                   Eigen::MatrixXd& phi) const;
  /// Full tangential vector basis; values(:, i, p) laid out as a 3 x size
  /// matrix per point.
  void eval(int f, const Eigen::Matrix3Xd& points,
            std::vector<Eigen::Matrix3Xd>& values) const;

  /// L2 projection of a (complex) tangential field onto the face basis.
  Eigen::VectorXcd project(int f,
                           const std::function<Eigen::Vector3cd(
                               const Eigen::Vector3d&)>& field,
                           const QuadratureRule& rule) const;

private:
  const Mesh* mesh_;
  int degree_;
  std::vector<std::array<int, 2>> exps_;
  std::vector<Eigen::Vector2d> centroid_; // frame coordinates per face
};

/// Globally continuous Lagrange space of degree r with equispaced nodes,
/// used for the multiplier p (r = k+1). Dofs on the domain boundary are
/// flagged; the solver eliminates them.
class CGSpace {
public:
  CGSpace(const Mesh& mesh, int degree);

  int degree() const { return degree_; }
  int local_size() const { return static_cast<int>(ref_nodes_.size()); }
  int global_size() const { return num_global_; }
  int interior_size() const { return num_interior_; }

  const std::vector<int>& element_dofs(int e) const { return elem_dofs_[e]; }
  bool dof_on_boundary(int g) const { return on_boundary_[g]; }
  /// Interior numbering (-1 for boundary dofs).
  int interior_index(int g) const { return interior_idx_[g]; }
  const Eigen::Vector3d& dof_node(int g) const { return nodes_[g]; }

  /// Shape function values / reference gradients at reference points.
  ScalarTab tabulate(const Eigen::Matrix3Xd& ref_pts) const;

  /// Nodal interpolation of a scalar field (exact for polynomials in P_r).
  Eigen::VectorXcd interpolate(
      const std::function<std::complex<double>(const Eigen::Vector3d&)>& f)
      const;

private:
  const Mesh* mesh_;
  int degree_;
  ScalarModalBasis modal_;
  Eigen::MatrixXd shape_coeff_; // modal -> nodal: phi_l = sum_j C(j,l) psi_j
  std::vector<Eigen::Vector3d> ref_nodes_;
  std::vector<std::vector<int>> elem_dofs_;
  std::vector<Eigen::Vector3d> nodes_;
  std::vector<char> on_boundary_;
  std::vector<int> interior_idx_;
  int num_global_ = 0;
  int num_interior_ = 0;
};

} // namespace hdgmx

#endif
