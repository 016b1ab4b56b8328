#include "hdgmx/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace hdgmx {

namespace {

double signed_volume(const std::array<Eigen::Vector3d, 4>& v) {
  return (v[1] - v[0]).cross(v[2] - v[0]).dot(v[3] - v[0]) / 6.0;
}

int detect_plane_axis(const std::array<Eigen::Vector3d, 3>& v, double* coord) {
  for (int d = 0; d < 3; ++d) {
    if (std::abs(v[0][d] - v[1][d]) < 1e-13 &&
        std::abs(v[0][d] - v[2][d]) < 1e-13) {
      *coord = v[0][d];
      return d;
    }
  }
  return -1;
}

} // namespace

std::array<Eigen::Vector3d, 4> Mesh::element_vertices(int e) const {
  const auto& el = elements.at(e);
  return {vertices[el[0]], vertices[el[1]], vertices[el[2]], vertices[el[3]]};
}

std::array<Eigen::Vector3d, 3> Mesh::face_vertices(int f) const {
  const auto& fc = faces.at(f);
  return {vertices[fc.vertices[0]], vertices[fc.vertices[1]],
          vertices[fc.vertices[2]]};
}

double Mesh::face_sign(int e, int f) const {
  const Face& fc = faces.at(f);
  if (fc.owner == e) return 1.0;
  if (fc.neighbor == e) return -1.0;
  throw std::out_of_range("mesh: face not incident to element");
}

void Mesh::dump(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("mesh: cannot open " + path);
  for (const auto& v : vertices)
    out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& el : elements)
    out << el[0] << ' ' << el[1] << ' ' << el[2] << ' ' << el[3] << '\n';
}

Mesh build_from_cells(std::vector<Eigen::Vector3d> vertices,
                      std::vector<std::array<int, 4>> cells) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.elements = std::move(cells);

  const int ne = mesh.num_elements();
  mesh.element_h.resize(ne);
  mesh.element_volume.resize(ne);
  mesh.element_faces.assign(ne, {-1, -1, -1, -1});

  for (int e = 0; e < ne; ++e) {
    auto& el = mesh.elements[e];
    auto verts = mesh.element_vertices(e);
    double vol = signed_volume(verts);
    if (vol < 0.0) {
      std::swap(el[2], el[3]);
      verts = mesh.element_vertices(e);
      vol = signed_volume(verts);
    }
    if (!(vol > 0.0)) throw std::runtime_error("mesh: degenerate element");
    mesh.element_volume[e] = vol;
    double hmax = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        hmax = std::max(hmax, (verts[i] - verts[j]).norm());
    mesh.element_h[e] = hmax;
  }

  // Face table keyed by sorted vertex triples. Local face f of an element is
  // the one opposite local vertex f.
  std::map<std::array<int, 3>, int> face_ids;
  for (int e = 0; e < ne; ++e) {
    const auto& el = mesh.elements[e];
    for (int lf = 0; lf < 4; ++lf) {
      std::array<int, 3> key;
      int k = 0;
      for (int i = 0; i < 4; ++i)
        if (i != lf) key[k++] = el[i];
      std::sort(key.begin(), key.end());
      auto [it, inserted] = face_ids.try_emplace(key, mesh.num_faces());
      if (inserted) {
        Face fc;
        fc.vertices = key;
        fc.owner = e;
        mesh.faces.push_back(fc);
      } else {
        Face& fc = mesh.faces[it->second];
        if (fc.neighbor >= 0)
          throw std::runtime_error("mesh: face with more than two elements");
        fc.neighbor = e;
      }
      mesh.element_faces[e][lf] = it->second;
    }
  }

  for (int f = 0; f < mesh.num_faces(); ++f) {
    Face& fc = mesh.faces[f];
    const auto v = mesh.face_vertices(f);
    const Eigen::Vector3d cross = (v[1] - v[0]).cross(v[2] - v[0]);
    fc.area = 0.5 * cross.norm();
    if (!(fc.area > 0.0)) throw std::runtime_error("mesh: degenerate face");
    fc.diameter = std::max({(v[0] - v[1]).norm(), (v[1] - v[2]).norm(),
                            (v[0] - v[2]).norm()});
    // Orient the normal away from the owner element.
    Eigen::Vector3d n = cross.normalized();
    const auto ev = mesh.element_vertices(fc.owner);
    const Eigen::Vector3d owner_centroid =
        (ev[0] + ev[1] + ev[2] + ev[3]) / 4.0;
    const Eigen::Vector3d face_centroid = (v[0] + v[1] + v[2]) / 3.0;
    if (n.dot(face_centroid - owner_centroid) < 0.0) n = -n;
    fc.normal = n;
    fc.t1 = (v[1] - v[0]).normalized();
    fc.t2 = n.cross(fc.t1);
    fc.plane_axis = detect_plane_axis(v, &fc.plane_coord);
  }
  return mesh;
}

Mesh build_structured_cube(int n) {
  if (n < 1) throw std::invalid_argument("mesh: level must be positive");

  std::vector<Eigen::Vector3d> vertices((n + 1) * (n + 1) * (n + 1));
  auto vid = [n](int i, int j, int k) {
    return (k * (n + 1) + j) * (n + 1) + i;
  };
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        vertices[vid(i, j, k)] =
            Eigen::Vector3d(double(i) / n, double(j) / n, double(k) / n);

  // Kuhn split: the six tetrahedra of a cube share the main diagonal
  // c -> c + (1,1,1); one per permutation of the axis order.
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::array<int, 4>> cells;
  cells.reserve(6 * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& perm : perms) {
          std::array<int, 3> c = {i, j, k};
          std::array<int, 4> cell;
          cell[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            c[perm[s]] += 1;
            cell[s + 1] = vid(c[0], c[1], c[2]);
          }
          cells.push_back(cell);
        }

  Mesh mesh = build_from_cells(std::move(vertices), std::move(cells));
  mesh.level = n;
  return mesh;
}

} // namespace hdgmx
