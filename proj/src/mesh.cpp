#include "hhons/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "hhons/errors.hpp"

namespace hhons {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

double signed_area(const std::vector<Eigen::Vector2d>& pts, const std::vector<int>& loop) {
  double a = 0.0;
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = pts[loop[i]];
    const Eigen::Vector2d& q = pts[loop[(i + 1) % n]];
    a += cross2(p, q);
  }
  return 0.5 * a;
}

Eigen::Vector2d polygon_centroid(const std::vector<Eigen::Vector2d>& pts,
                                 const std::vector<int>& loop, double area) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = pts[loop[i]];
    const Eigen::Vector2d& q = pts[loop[(i + 1) % n]];
    c += (p + q) * cross2(p, q);
  }
  return c / (6.0 * area);
}

}  // namespace

Mesh Mesh::from_polygons(std::vector<Eigen::Vector2d> vertices,
                         const std::vector<std::vector<int>>& cells) {
  Mesh mesh;
  mesh.m_vertices = std::move(vertices);
  const int nv = mesh.n_vertices();
  if (cells.empty()) throw MeshError("mesh has no elements");

  mesh.m_elements.resize(cells.size());
  // Edge key (lo, hi) -> face id; also remember traversal direction per side.
  std::map<std::pair<int, int>, int> edge_of;

  for (int e = 0; e < static_cast<int>(cells.size()); ++e) {
    const std::vector<int>& loop = cells[e];
    if (loop.size() < 3) throw MeshError("element " + std::to_string(e) + " has fewer than 3 vertices");
    for (int id : loop) {
      if (id < 0 || id >= nv)
        throw MeshError("element " + std::to_string(e) + " references vertex " + std::to_string(id));
    }
    Element& T = mesh.m_elements[e];
    T.vertices = loop;

    const double area = signed_area(mesh.m_vertices, loop);
    if (!(area > 0.0))
      throw MeshError("element " + std::to_string(e) + " is not counterclockwise or degenerate");
    T.measure = area;
    T.centroid = polygon_centroid(mesh.m_vertices, loop, area);

    T.diameter = 0.0;
    for (size_t i = 0; i < loop.size(); ++i)
      for (size_t j = i + 1; j < loop.size(); ++j)
        T.diameter = std::max(T.diameter,
                              (mesh.m_vertices[loop[i]] - mesh.m_vertices[loop[j]]).norm());

    const int n = static_cast<int>(loop.size());
    T.faces.resize(n);
    T.face_signs.resize(n);
    for (int i = 0; i < n; ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % n];
      if (a == b) throw MeshError("element " + std::to_string(e) + " repeats vertex " + std::to_string(a));
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = edge_of.find(key);
      int fid;
      if (it == edge_of.end()) {
        fid = static_cast<int>(mesh.m_faces.size());
        Face F;
        F.vertices = {key.first, key.second};
        const Eigen::Vector2d p0 = mesh.m_vertices[key.first];
        const Eigen::Vector2d p1 = mesh.m_vertices[key.second];
        const Eigen::Vector2d d = p1 - p0;
        F.measure = d.norm();
        F.diameter = F.measure;
        F.midpoint = 0.5 * (p0 + p1);
        F.normal = Eigen::Vector2d(d.y(), -d.x()) / F.measure;
        F.elements[0] = e;
        mesh.m_faces.push_back(F);
        edge_of.emplace(key, fid);
      } else {
        fid = it->second;
        Face& F = mesh.m_faces[fid];
        if (F.elements[1] >= 0)
          throw MeshError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                          ") shared by more than two elements");
        F.elements[1] = e;
      }
      T.faces[i] = fid;
      // CCW traversal from a to b: outward normal is (d.y, -d.x)/|d|; the
      // canonical normal goes from the lower to the higher vertex index.
      T.face_signs[i] = (a == key.first) ? 1.0 : -1.0;
    }
  }

  // Orientation consistency: an internal face must be traversed lo->hi on one
  // side and hi->lo on the other, i.e. the recorded signs must differ.
  for (int f = 0; f < mesh.n_faces(); ++f) {
    Face& F = mesh.m_faces[f];
    F.boundary = (F.elements[1] < 0);
    if (!F.boundary) {
      auto sign_in = [&](int e) {
        const Element& T = mesh.m_elements[e];
        for (size_t i = 0; i < T.faces.size(); ++i)
          if (T.faces[i] == f) return T.face_signs[i];
        return 0.0;
      };
      if (sign_in(F.elements[0]) * sign_in(F.elements[1]) >= 0.0)
        throw MeshError("inconsistent orientation across edge (" +
                        std::to_string(F.vertices[0]) + "," + std::to_string(F.vertices[1]) + ")");
    }
  }

  mesh.m_n_internal = 0;
  for (const Face& F : mesh.m_faces)
    if (!F.boundary) ++mesh.m_n_internal;

  mesh.m_h = 0.0;
  mesh.m_total_measure = 0.0;
  for (const Element& T : mesh.m_elements) {
    mesh.m_h = std::max(mesh.m_h, T.diameter);
    mesh.m_total_measure += T.measure;
  }
  return mesh;
}

Mesh generate_cartesian(int nx, int ny, const Rect& bbox) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("generate_cartesian: counts must be >= 1");
  if (!(bbox.width() > 0.0) || !(bbox.height() > 0.0))
    throw std::invalid_argument("generate_cartesian: degenerate bounding box");

  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      pts.emplace_back(bbox.x0 + bbox.width() * i / nx, bbox.y0 + bbox.height() * j / ny);

  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      cells.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
  return Mesh::from_polygons(std::move(pts), cells);
}

Mesh generate_triangular(int nx, int ny, const Rect& bbox) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("generate_triangular: counts must be >= 1");
  if (!(bbox.width() > 0.0) || !(bbox.height() > 0.0))
    throw std::invalid_argument("generate_triangular: degenerate bounding box");

  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      pts.emplace_back(bbox.x0 + bbox.width() * i / nx, bbox.y0 + bbox.height() * j / ny);

  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(2 * static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      cells.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1)});
      cells.push_back({node(i, j), node(i + 1, j + 1), node(i, j + 1)});
    }
  return Mesh::from_polygons(std::move(pts), cells);
}

Mesh read_polymesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open '" + path + "'");

  long lineno = 0;
  auto next_data_line = [&](std::string& out) {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string line;
  if (!next_data_line(line)) throw MeshError("missing header", lineno);
  long npts = 0, nelems = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> npts >> nelems) || npts < 3 || nelems < 1)
      throw MeshError("expected 'npts nelems' header", lineno);
  }

  std::vector<Eigen::Vector2d> pts(npts);
  for (long i = 0; i < npts; ++i) {
    if (!next_data_line(line)) throw MeshError("unexpected end of file in vertex list", lineno);
    std::istringstream ss(line);
    if (!(ss >> pts[i].x() >> pts[i].y()))
      throw MeshError("expected 'x y' for vertex " + std::to_string(i), lineno);
  }

  std::vector<std::vector<int>> cells(nelems);
  for (long e = 0; e < nelems; ++e) {
    if (!next_data_line(line)) throw MeshError("unexpected end of file in element list", lineno);
    std::istringstream ss(line);
    long m = 0;
    if (!(ss >> m) || m < 3) throw MeshError("expected vertex count >= 3 for element " + std::to_string(e), lineno);
    cells[e].resize(m);
    for (long i = 0; i < m; ++i) {
      if (!(ss >> cells[e][i]))
        throw MeshError("expected " + std::to_string(m) + " vertex ids for element " + std::to_string(e), lineno);
      if (cells[e][i] < 0 || cells[e][i] >= npts)
        throw MeshError("vertex id out of range for element " + std::to_string(e), lineno);
    }
  }

  try {
    return Mesh::from_polygons(std::move(pts), cells);
  } catch (const MeshError& err) {
    throw MeshError(std::string("'") + path + "': " + err.what());
  }
}

MeshDiagnostics validate_mesh(const Mesh& mesh) {
  MeshDiagnostics d;
  d.n_elements = mesh.n_elements();
  d.n_faces = mesh.n_faces();
  d.n_internal_faces = mesh.n_internal_faces();
  d.n_boundary_faces = mesh.n_boundary_faces();
  d.total_measure = mesh.total_measure();

  d.min_face_elem_ratio = std::numeric_limits<double>::infinity();
  d.max_face_elem_ratio = 0.0;
  d.min_inradius_ratio = std::numeric_limits<double>::infinity();

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const Element& T = mesh.element(e);
    Eigen::Vector2d defect = Eigen::Vector2d::Zero();
    bool star = true;
    const int n = static_cast<int>(T.vertices.size());
    for (int i = 0; i < n; ++i) {
      const Face& F = mesh.face(T.faces[i]);
      const double ratio = F.diameter / T.diameter;
      d.min_face_elem_ratio = std::min(d.min_face_elem_ratio, ratio);
      d.max_face_elem_ratio = std::max(d.max_face_elem_ratio, ratio);
      defect += F.measure * mesh.outward_normal(e, i);

      const Eigen::Vector2d p = mesh.vertex(T.vertices[i]);
      const Eigen::Vector2d q = mesh.vertex(T.vertices[(i + 1) % n]);
      // Signed area of (centroid, p, q): negative means the centroid does not
      // see this edge from inside.
      const double a2 = (p.x() - T.centroid.x()) * (q.y() - T.centroid.y()) -
                        (p.y() - T.centroid.y()) * (q.x() - T.centroid.x());
      if (!(a2 > 0.0)) star = false;
      const double dist = std::abs(a2) / F.measure;  // height of the sub-triangle over this edge
      d.min_inradius_ratio = std::min(d.min_inradius_ratio, dist / T.diameter);
    }
    d.max_normal_defect = std::max(d.max_normal_defect, defect.norm());
    if (!star) d.non_star_elements.push_back(e);
  }
  return d;
}

}  // namespace hhons
