#ifndef HHONS_MESH_HPP
#define HHONS_MESH_HPP

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace hhons {

/// Axis-aligned rectangle used as a generator bounding box.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// A straight mesh face (edge in 2D). Every face stores one canonical unit
/// normal, oriented from the lower vertex index to the higher; incident
/// elements record a sign so that sign * normal points outward.
struct Face {
  std::array<int, 2> vertices{-1, -1};  // vertices[0] < vertices[1]
  std::array<int, 2> elements{-1, -1};  // elements[1] == -1 on the boundary
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();
  Eigen::Vector2d midpoint = Eigen::Vector2d::Zero();
  double measure = 0.0;   // length
  double diameter = 0.0;  // equals measure for a straight segment
  bool boundary = false;
};

/// A polygonal element described by its counterclockwise vertex loop.
struct Element {
  std::vector<int> vertices;       // counterclockwise
  std::vector<int> faces;          // face ids, in edge order
  std::vector<double> face_signs;  // +1 if the face normal points outward
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double measure = 0.0;
  double diameter = 0.0;
};

/// Report produced by validate_mesh. Reports only, never throws.
struct MeshDiagnostics {
  int n_elements = 0;
  int n_faces = 0;
  int n_internal_faces = 0;
  int n_boundary_faces = 0;
  double min_face_elem_ratio = 0.0;  // min over elements/faces of h_F / h_T
  double max_face_elem_ratio = 0.0;
  double min_inradius_ratio = 0.0;  // min over elements of dist(centroid, edge)/h_T
  double max_normal_defect = 0.0;   // max |sum_F |F| n_TF| over elements
  double total_measure = 0.0;
  std::vector<int> non_star_elements;  // centroid sub-triangulation flips orientation
};

/// Immutable 2D polygonal mesh with the face topology, normals and size data
/// needed by hybrid discretizations. Safe for concurrent reads.
class Mesh {
 public:
  /// Build from vertex coordinates and counterclockwise element vertex loops.
  /// Face topology is reconstructed by matching shared vertex pairs.
  static Mesh from_polygons(std::vector<Eigen::Vector2d> vertices,
                            const std::vector<std::vector<int>>& cells);

  int n_vertices() const { return static_cast<int>(m_vertices.size()); }
  int n_elements() const { return static_cast<int>(m_elements.size()); }
  int n_faces() const { return static_cast<int>(m_faces.size()); }
  int n_internal_faces() const { return m_n_internal; }
  int n_boundary_faces() const { return n_faces() - m_n_internal; }

  const Eigen::Vector2d& vertex(int i) const { return m_vertices[i]; }
  const Element& element(int i) const { return m_elements[i]; }
  const Face& face(int i) const { return m_faces[i]; }

  /// Largest element diameter.
  double meshsize() const { return m_h; }
  double total_measure() const { return m_total_measure; }

  /// Outward normal of face `local_face` of element `elem`.
  Eigen::Vector2d outward_normal(int elem, int local_face) const {
    const Element& T = m_elements[elem];
    return T.face_signs[local_face] * m_faces[T.faces[local_face]].normal;
  }

 private:
  std::vector<Eigen::Vector2d> m_vertices;
  std::vector<Element> m_elements;
  std::vector<Face> m_faces;
  int m_n_internal = 0;
  double m_h = 0.0;
  double m_total_measure = 0.0;
};

/// nx-by-ny grid of axis-aligned quadrilaterals covering bbox.
Mesh generate_cartesian(int nx, int ny, const Rect& bbox);

/// Same grid with each cell split along one diagonal into two triangles.
Mesh generate_triangular(int nx, int ny, const Rect& bbox);

/// Load a mesh from the plain-text polygon format:
///   line 1: npts nelems
///   npts lines: x y
///   nelems lines: m i1 ... im   (0-based vertex ids, counterclockwise)
/// '#' starts a comment. Throws MeshError with the offending line number.
Mesh read_polymesh(const std::string& path);

/// Geometric quality indicators and star-shapedness flags.
MeshDiagnostics validate_mesh(const Mesh& mesh);

}  // namespace hhons

#endif
