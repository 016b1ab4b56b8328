#include "hdgmx/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace hdgmx {

ElementGeometry element_geometry(const Mesh& mesh, int e) {
  const auto v = mesh.element_vertices(e);
  ElementGeometry g;
  g.v0 = v[0];
  g.jac.col(0) = v[1] - v[0];
  g.jac.col(1) = v[2] - v[0];
  g.jac.col(2) = v[3] - v[0];
  g.det = g.jac.determinant();
  g.jac_inv_t = g.jac.inverse().transpose();
  return g;
}

ScalarTab tabulate(const ScalarModalBasis& basis, const Eigen::Matrix3Xd& pts) {
  ScalarTab tab;
  basis.eval(pts, tab.val);
  basis.eval_grad(pts, tab.grad);
  return tab;
}

void vector_basis_values(const ScalarTab& tab, int point,
                         Eigen::Matrix3Xd& values) {
  const int n = static_cast<int>(tab.val.rows());
  values.setZero(3, 3 * n);
  for (int d = 0; d < 3; ++d)
    for (int j = 0; j < n; ++j) values(d, d * n + j) = tab.val(j, point);
}

void vector_basis_curls(const ScalarTab& tab, const ElementGeometry& geom,
                        int point, Eigen::Matrix3Xd& curls) {
  const int n = static_cast<int>(tab.val.rows());
  curls.resize(3, 3 * n);
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector3d gref(tab.grad[0](j, point), tab.grad[1](j, point),
                               tab.grad[2](j, point));
    const Eigen::Vector3d g = geom.jac_inv_t * gref;
    // curl(psi e_x) = (0, dz, -dy), curl(psi e_y) = (-dz, 0, dx),
    // curl(psi e_z) = (dy, -dx, 0)
    curls.col(0 * n + j) = Eigen::Vector3d(0.0, g[2], -g[1]);
    curls.col(1 * n + j) = Eigen::Vector3d(-g[2], 0.0, g[0]);
    curls.col(2 * n + j) = Eigen::Vector3d(g[1], -g[0], 0.0);
  }
}

FaceBasis::FaceBasis(const Mesh& mesh, int degree)
    : mesh_(&mesh), degree_(degree) {
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) exps_.push_back({a, d - a});
  centroid_.resize(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto v = mesh.face_vertices(f);
    const Eigen::Vector3d c = (v[0] + v[1] + v[2]) / 3.0 - v[0];
    const Face& fc = mesh.faces[f];
    centroid_[f] = Eigen::Vector2d(c.dot(fc.t1), c.dot(fc.t2));
  }
}

void FaceBasis::eval_scalar(int f, const Eigen::Matrix3Xd& points,
                            Eigen::MatrixXd& phi) const {
  const Face& fc = mesh_->faces.at(f);
  const Eigen::Vector3d origin = mesh_->vertices[fc.vertices[0]];
  const double scale = 1.0 / fc.diameter;
  const int np = static_cast<int>(points.cols());
  phi.resize(scalar_size(), np);
  for (int p = 0; p < np; ++p) {
    const Eigen::Vector3d r = points.col(p) - origin;
    const double xi = (r.dot(fc.t1) - centroid_[f][0]) * scale;
    const double eta = (r.dot(fc.t2) - centroid_[f][1]) * scale;
    for (int j = 0; j < scalar_size(); ++j)
      phi(j, p) = std::pow(xi, exps_[j][0]) * std::pow(eta, exps_[j][1]);
  }
}

void FaceBasis::eval(int f, const Eigen::Matrix3Xd& points,
                     std::vector<Eigen::Matrix3Xd>& values) const {
  const Face& fc = mesh_->faces.at(f);
  Eigen::MatrixXd phi;
  eval_scalar(f, points, phi);
  const int n2 = scalar_size();
  values.assign(points.cols(), Eigen::Matrix3Xd(3, 2 * n2));
  for (int p = 0; p < points.cols(); ++p)
    for (int j = 0; j < n2; ++j) {
      values[p].col(j) = phi(j, p) * fc.t1;
      values[p].col(n2 + j) = phi(j, p) * fc.t2;
    }
}

Eigen::VectorXcd FaceBasis::project(
    int f,
    const std::function<Eigen::Vector3cd(const Eigen::Vector3d&)>& field,
    const QuadratureRule& rule) const {
  const MappedRule mq = map_to_triangle(rule, mesh_->face_vertices(f));
  std::vector<Eigen::Matrix3Xd> vals;
  eval(f, mq.points, vals);
  const int n = size();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  for (int p = 0; p < mq.points.cols(); ++p) {
    gram += mq.weights[p] * vals[p].transpose() * vals[p];
    rhs += mq.weights[p] * vals[p].transpose() * field(mq.points.col(p));
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  Eigen::VectorXcd out(n);
  out.real() = ldlt.solve(rhs.real());
  out.imag() = ldlt.solve(rhs.imag());
  return out;
}

namespace {

// Global key of a Lagrange node, canonical under the element's vertex order.
struct DofKey {
  // kind 0: vertex(g0); 1: edge(g0<g1, t); 2: face(g0<g1<g2, w1, w2);
  // 3: interior(element, index)
  int kind;
  std::array<int, 5> data;
  bool operator<(const DofKey& o) const {
    return std::tie(kind, data) < std::tie(o.kind, o.data);
  }
};

} // namespace

CGSpace::CGSpace(const Mesh& mesh, int degree)
    : mesh_(&mesh), degree_(degree), modal_(degree) {
  const int r = degree;
  // Reference nodes from barycentric multi-indices (i0,i1,i2,i3), sum r.
  std::vector<std::array<int, 4>> multi;
  for (int i1 = 0; i1 <= r; ++i1)
    for (int i2 = 0; i2 <= r - i1; ++i2)
      for (int i3 = 0; i3 <= r - i1 - i2; ++i3)
        multi.push_back({r - i1 - i2 - i3, i1, i2, i3});
  for (const auto& m : multi)
    ref_nodes_.push_back(
        Eigen::Vector3d(double(m[1]) / r, double(m[2]) / r, double(m[3]) / r));
  const int nloc = local_size();

  Eigen::Matrix3Xd ref_pts(3, nloc);
  for (int l = 0; l < nloc; ++l) ref_pts.col(l) = ref_nodes_[l];
  Eigen::MatrixXd vand;
  modal_.eval(ref_pts, vand); // vand(j, l) = psi_j(node_l)
  shape_coeff_ = vand.transpose().fullPivLu().solve(
      Eigen::MatrixXd::Identity(nloc, nloc));
  // shape_coeff_(j, l): phi_l = sum_j shape_coeff_(j, l) psi_j with
  // phi_l(node_m) = delta_lm.

  // Boundary entities of the mesh, keyed by sorted global vertex ids.
  std::set<int> bdry_verts;
  std::set<std::array<int, 2>> bdry_edges;
  std::set<std::array<int, 3>> bdry_faces;
  for (const Face& fc : mesh.faces) {
    if (!fc.on_boundary()) continue;
    bdry_faces.insert(fc.vertices);
    const auto& v = fc.vertices;
    for (int i = 0; i < 3; ++i) bdry_verts.insert(v[i]);
    bdry_edges.insert({std::min(v[0], v[1]), std::max(v[0], v[1])});
    bdry_edges.insert({std::min(v[0], v[2]), std::max(v[0], v[2])});
    bdry_edges.insert({std::min(v[1], v[2]), std::max(v[1], v[2])});
  }

  std::map<DofKey, int> global_ids;
  elem_dofs_.resize(mesh.num_elements());
  int interior_counter = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[e];
    const auto ev = mesh.element_vertices(e);
    elem_dofs_[e].resize(nloc);
    for (int l = 0; l < nloc; ++l) {
      const auto& m = multi[l];
      std::vector<std::pair<int, int>> support; // (global vertex, weight)
      for (int i = 0; i < 4; ++i)
        if (m[i] > 0) support.emplace_back(el[i], m[i]);
      std::sort(support.begin(), support.end());

      DofKey key{};
      bool boundary = false;
      switch (support.size()) {
        case 1:
          key = {0, {support[0].first, 0, 0, 0, 0}};
          boundary = bdry_verts.count(support[0].first) > 0;
          break;
        case 2:
          key = {1,
                 {support[0].first, support[1].first, support[1].second, 0, 0}};
          boundary =
              bdry_edges.count({support[0].first, support[1].first}) > 0;
          break;
        case 3:
          key = {2,
                 {support[0].first, support[1].first, support[2].first,
                  support[1].second, support[2].second}};
          boundary = bdry_faces.count({support[0].first, support[1].first,
                                       support[2].first}) > 0;
          break;
        default:
          key = {3, {e, interior_counter++, 0, 0, 0}};
          break;
      }

      auto [it, inserted] = global_ids.try_emplace(key, num_global_);
      if (inserted) {
        Eigen::Vector3d node = Eigen::Vector3d::Zero();
        for (int i = 0; i < 4; ++i) node += (double(m[i]) / r) * ev[i];
        nodes_.push_back(node);
        on_boundary_.push_back(boundary ? 1 : 0);
        ++num_global_;
      }
      elem_dofs_[e][l] = it->second;
    }
  }

  interior_idx_.assign(num_global_, -1);
  for (int g = 0; g < num_global_; ++g)
    if (!on_boundary_[g]) interior_idx_[g] = num_interior_++;
}

ScalarTab CGSpace::tabulate(const Eigen::Matrix3Xd& ref_pts) const {
  ScalarTab modal_tab = hdgmx::tabulate(modal_, ref_pts);
  ScalarTab tab;
  tab.val = shape_coeff_.transpose() * modal_tab.val;
  for (int d = 0; d < 3; ++d)
    tab.grad[d] = shape_coeff_.transpose() * modal_tab.grad[d];
  return tab;
}

Eigen::VectorXcd CGSpace::interpolate(
    const std::function<std::complex<double>(const Eigen::Vector3d&)>& f)
    const {
  Eigen::VectorXcd v(num_global_);
  for (int g = 0; g < num_global_; ++g) v[g] = f(nodes_[g]);
  return v;
}

} // namespace hdgmx
