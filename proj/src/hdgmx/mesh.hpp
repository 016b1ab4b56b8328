#ifndef HDGMX_MESH_HPP
#define HDGMX_MESH_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace hdgmx {

/// A mesh face, identified by its sorted global vertex triple. The normal and
/// tangent frame are stored once per face so that both incident elements see
/// bitwise identical data. The normal points from the owner (lower element
/// index) to the neighbor, or outward on the boundary.
struct Face {
  std::array<int, 3> vertices; // sorted ascending global indices
  int owner = -1;
  int neighbor = -1; // -1 on the boundary
  Eigen::Vector3d normal;
  Eigen::Vector3d t1, t2; // right-handed orthonormal frame (t1, t2, normal)
  double area = 0.0;
  double diameter = 0.0;
  // Axis-aligned plane classification: axis in {0,1,2} and coordinate if the
  // face lies in a plane x_axis = coord, else axis = -1. Used to check that
  // coefficient interfaces are unions of faces.
  int plane_axis = -1;
  double plane_coord = 0.0;

  bool on_boundary() const { return neighbor < 0; }
};

struct Mesh {
  int level = 0; // subdivision level n for structured cube meshes, else 0
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 4>> elements; // positive orientation
  std::vector<Face> faces;
  std::vector<std::array<int, 4>> element_faces; // local face f opposite vertex f
  std::vector<double> element_h;                 // longest edge of each element
  std::vector<double> element_volume;

  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }

  std::array<Eigen::Vector3d, 4> element_vertices(int e) const;
  std::array<Eigen::Vector3d, 3> face_vertices(int f) const;
  /// Outward normal sign of face f as seen from element e: +1 if the stored
  /// global normal points out of e, else -1.
  double face_sign(int e, int f) const;

  /// Plain-text dump (one vertex per line, then one element per line), for
  /// debugging only.
  void dump(const std::string& path) const;
};

/// Conforming mesh of the unit cube: n^3 subcubes, each split into the six
/// Kuhn tetrahedra around the main diagonal. All planes x_d = j/n are unions
/// of mesh faces.
Mesh build_structured_cube(int n);

/// Derives faces, frames and element metrics from raw cells. Throws if the
/// cells do not form a conforming mesh.
Mesh build_from_cells(std::vector<Eigen::Vector3d> vertices,
                      std::vector<std::array<int, 4>> cells);

} // namespace hdgmx

#endif
