#include <ddrc/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace ddrc
{

  namespace
  {
    std::size_t sorted_position(const std::vector<std::size_t> &list, std::size_t id, const char *what, std::size_t cell)
    {
      auto it = std::lower_bound(list.begin(), list.end(), id);
      if (it == list.end() || *it != id) {
        std::ostringstream msg;
        msg << what << " " << id << " is not in cell " << cell;
        throw MeshError(msg.str());
      }
      return static_cast<std::size_t>(it - list.begin());
    }

    double loop_diameter(const std::vector<Point3> &pts)
    {
      double d = 0.;
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
          d = std::max(d, (pts[i] - pts[j]).norm());
      return d;
    }
  } // namespace

  VectorRd polygon_area_vector(const std::vector<Point3> &loop)
  {
    VectorRd a = VectorRd::Zero();
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      a += loop[i].cross(loop[(i + 1) % n]);
    }
    return 0.5 * a;
  }

  //------------------------------------------------------------------------------

  PolyMesh PolyMesh::from_topology(std::vector<Point3> vertices,
                                   std::vector<std::vector<std::size_t>> face_loops,
                                   std::vector<std::vector<OrientedFace>> cells)
  {
    PolyMesh mesh;
    mesh.m_vertices.resize(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (!vertices[i].allFinite()) {
        throw MeshError("vertex " + std::to_string(i) + " has non-finite coordinates");
      }
      mesh.m_vertices[i].coords = vertices[i];
    }

    // Faces and edges
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_ids;
    mesh.m_faces.resize(face_loops.size());
    for (std::size_t iF = 0; iF < face_loops.size(); ++iF) {
      MeshFace &F = mesh.m_faces[iF];
      F.vertices = std::move(face_loops[iF]);
      const std::size_t n = F.vertices.size();
      if (n < 3) {
        throw MeshError("face " + std::to_string(iF) + " has fewer than 3 vertices");
      }
      std::vector<Point3> pts;
      pts.reserve(n);
      for (std::size_t v : F.vertices) {
        if (v >= vertices.size()) {
          throw MeshError("face " + std::to_string(iF) + " references unknown vertex " + std::to_string(v));
        }
        pts.push_back(vertices[v]);
      }
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t a = F.vertices[i], b = F.vertices[(i + 1) % n];
        auto key = std::minmax(a, b);
        auto [it, inserted] = edge_ids.try_emplace({key.first, key.second}, mesh.m_edges.size());
        if (inserted) {
          MeshEdge E;
          E.vertices = {key.first, key.second};
          const VectorRd d = vertices[key.second] - vertices[key.first];
          E.length = d.norm();
          E.center = 0.5 * (vertices[key.first] + vertices[key.second]);
          E.tangent = E.length > 0. ? VectorRd(d / E.length) : VectorRd::Zero();
          mesh.m_edges.push_back(E);
        }
        F.edges.push_back(it->second);
        mesh.m_edges[it->second].faces.push_back(iF);
      }

      const VectorRd area_vec = polygon_area_vector(pts);
      F.area = area_vec.norm();
      if (!(F.area > 0.)) {
        throw MeshError("face " + std::to_string(iF) + " has zero area");
      }
      F.normal = area_vec / F.area;
      // Centroid by a signed triangle fan from the first vertex
      double wsum = 0.;
      Point3 c = Point3::Zero();
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double a = 0.5 * (pts[i] - pts[0]).cross(pts[i + 1] - pts[0]).dot(F.normal);
        c += a * (pts[0] + pts[i] + pts[i + 1]) / 3.;
        wsum += a;
      }
      F.center = c / wsum;
      F.diameter = loop_diameter(pts);
    }

    // Cells
    mesh.m_cells.resize(cells.size());
    for (std::size_t iC = 0; iC < cells.size(); ++iC) {
      MeshCell &C = mesh.m_cells[iC];
      if (cells[iC].size() < 4) {
        throw MeshError("cell " + std::to_string(iC) + " has fewer than 4 faces");
      }
      for (auto [f, o] : cells[iC]) {
        if (f >= mesh.m_faces.size() || (o != 1 && o != -1)) {
          throw MeshError("cell " + std::to_string(iC) + " has an invalid face reference");
        }
        C.faces.push_back(f);
        C.orientations.push_back(o);
        mesh.m_faces[f].cells.push_back(iC);
        const MeshFace &F = mesh.m_faces[f];
        C.vertices.insert(C.vertices.end(), F.vertices.begin(), F.vertices.end());
        C.edges.insert(C.edges.end(), F.edges.begin(), F.edges.end());
      }
      std::sort(C.vertices.begin(), C.vertices.end());
      C.vertices.erase(std::unique(C.vertices.begin(), C.vertices.end()), C.vertices.end());
      std::sort(C.edges.begin(), C.edges.end());
      C.edges.erase(std::unique(C.edges.begin(), C.edges.end()), C.edges.end());

      // Volume and barycenter by the divergence theorem, relative to a reference vertex
      const Point3 x0 = vertices[C.vertices.front()];
      double vol = 0.;
      VectorRd first_moment = VectorRd::Zero();
      for (std::size_t i = 0; i < C.faces.size(); ++i) {
        const MeshFace &F = mesh.m_faces[C.faces[i]];
        const VectorRd nK = C.orientations[i] * F.normal;
        vol += (F.center - x0).dot(nK) * F.area / 3.;
        // int_F (x-x0)_j^2 n_j via a triangle fan and the exact degree-2 edge-midpoint rule
        const std::size_t n = F.vertices.size();
        const Point3 p0 = vertices[F.vertices[0]] - x0;
        for (std::size_t k = 1; k + 1 < n; ++k) {
          const Point3 p1 = vertices[F.vertices[k]] - x0;
          const Point3 p2 = vertices[F.vertices[k + 1]] - x0;
          const double a = 0.5 * (p1 - p0).cross(p2 - p0).dot(F.normal);
          const Point3 m[3] = {0.5 * (p0 + p1), 0.5 * (p1 + p2), 0.5 * (p2 + p0)};
          for (int j = 0; j < 3; ++j) {
            const double sq = m[0](j) * m[0](j) + m[1](j) * m[1](j) + m[2](j) * m[2](j);
            first_moment(j) += 0.5 * a / 3. * sq * nK(j);
          }
        }
      }
      C.volume = vol;
      C.center = x0 + first_moment / vol;
      std::vector<Point3> pts;
      for (std::size_t v : C.vertices)
        pts.push_back(vertices[v]);
      C.diameter = loop_diameter(pts);
    }

    // Incidence and boundary flags
    for (std::size_t iC = 0; iC < mesh.m_cells.size(); ++iC) {
      const MeshCell &C = mesh.m_cells[iC];
      for (std::size_t v : C.vertices)
        mesh.m_vertices[v].cells.push_back(iC);
      for (std::size_t e : C.edges)
        mesh.m_edges[e].cells.push_back(iC);
    }
    for (std::size_t iE = 0; iE < mesh.m_edges.size(); ++iE) {
      for (std::size_t v : mesh.m_edges[iE].vertices)
        mesh.m_vertices[v].edges.push_back(iE);
    }
    for (std::size_t iF = 0; iF < mesh.m_faces.size(); ++iF) {
      MeshFace &F = mesh.m_faces[iF];
      for (std::size_t v : F.vertices)
        mesh.m_vertices[v].faces.push_back(iF);
      F.boundary = (F.cells.size() == 1);
      if (F.boundary) {
        for (std::size_t v : F.vertices)
          mesh.m_vertices[v].boundary = true;
        for (std::size_t e : F.edges)
          mesh.m_edges[e].boundary = true;
      }
    }
    return mesh;
  }

  //------------------------------------------------------------------------------

  double PolyMesh::h() const
  {
    double h = 0.;
    for (const auto &C : m_cells)
      h = std::max(h, C.diameter);
    return h;
  }

  VectorRd PolyMesh::cell_face_normal(std::size_t cell, std::size_t iF) const
  {
    const MeshCell &C = m_cells[cell];
    return C.orientations[iF] * m_faces[C.faces[iF]].normal;
  }

  VectorRd PolyMesh::face_edge_normal(std::size_t face, std::size_t iE) const
  {
    const MeshFace &F = m_faces[face];
    const std::size_t n = F.vertices.size();
    const VectorRd d = m_vertices[F.vertices[(iE + 1) % n]].coords - m_vertices[F.vertices[iE]].coords;
    return d.cross(F.normal).normalized();
  }

  std::size_t PolyMesh::local_vertex(std::size_t cell, std::size_t vertex) const
  {
    return sorted_position(m_cells[cell].vertices, vertex, "vertex", cell);
  }

  std::size_t PolyMesh::local_edge(std::size_t cell, std::size_t edge) const
  {
    return sorted_position(m_cells[cell].edges, edge, "edge", cell);
  }

  std::size_t PolyMesh::local_face(std::size_t cell, std::size_t face) const
  {
    const auto &faces = m_cells[cell].faces;
    auto it = std::find(faces.begin(), faces.end(), face);
    if (it == faces.end()) {
      throw MeshError("face " + std::to_string(face) + " is not in cell " + std::to_string(cell));
    }
    return static_cast<std::size_t>(it - faces.begin());
  }

  double tet_fan_volume(const PolyMesh &mesh, std::size_t cell)
  {
    const MeshCell &C = mesh.cell(cell);
    const Point3 apex = mesh.vertex(C.vertices.front()).coords;
    double vol = 0.;
    for (std::size_t i = 0; i < C.faces.size(); ++i) {
      const MeshFace &F = mesh.face(C.faces[i]);
      const std::size_t n = F.vertices.size();
      const Point3 p0 = mesh.vertex(F.vertices[0]).coords - apex;
      for (std::size_t k = 1; k + 1 < n; ++k) {
        const Point3 p1 = mesh.vertex(F.vertices[k]).coords - apex;
        const Point3 p2 = mesh.vertex(F.vertices[k + 1]).coords - apex;
        vol += C.orientations[i] * p0.dot(p1.cross(p2)) / 6.;
      }
    }
    return vol;
  }

  //------------------------------------------------------------------------------
  // Validation

  void MeshValidationReport::fail_face(std::size_t f, const std::string &msg)
  {
    ok = false;
    bad_faces.push_back(f);
    messages.push_back("face " + std::to_string(f) + ": " + msg);
  }

  void MeshValidationReport::fail_cell(std::size_t c, const std::string &msg)
  {
    ok = false;
    bad_cells.push_back(c);
    messages.push_back("cell " + std::to_string(c) + ": " + msg);
  }

  namespace
  {
    // Proper intersection of segments [a,b] and [c,d] in 2D
    bool segments_cross(const Eigen::Vector2d &a, const Eigen::Vector2d &b, const Eigen::Vector2d &c,
                        const Eigen::Vector2d &d, double tol)
    {
      auto orient = [](const Eigen::Vector2d &p, const Eigen::Vector2d &q, const Eigen::Vector2d &r) {
        return (q(0) - p(0)) * (r(1) - p(1)) - (q(1) - p(1)) * (r(0) - p(0));
      };
      const double d1 = orient(c, d, a), d2 = orient(c, d, b);
      const double d3 = orient(a, b, c), d4 = orient(a, b, d);
      return ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
             ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol));
    }
  } // namespace

  MeshValidationReport validate(const PolyMesh &mesh)
  {
    MeshValidationReport report;

    for (std::size_t iF = 0; iF < mesh.n_faces(); ++iF) {
      const MeshFace &F = mesh.face(iF);
      std::vector<std::size_t> sorted = F.vertices;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        report.fail_face(iF, "vertex loop is not simple (repeated vertex)");
        continue;
      }
      double dev = 0.;
      for (std::size_t v : F.vertices)
        dev = std::max(dev, std::abs((mesh.vertex(v).coords - F.center).dot(F.normal)));
      if (dev > 1e-12 * F.diameter) {
        report.fail_face(iF, "not planar (deviation " + std::to_string(dev) + ")");
      }
      // Self-intersection of the loop projected on its plane
      const std::size_t n = F.vertices.size();
      if (n > 3) {
        VectorRd t1 = (mesh.vertex(F.vertices[1]).coords - mesh.vertex(F.vertices[0]).coords).normalized();
        VectorRd t2 = F.normal.cross(t1);
        std::vector<Eigen::Vector2d> p2(n);
        for (std::size_t i = 0; i < n; ++i) {
          const VectorRd d = mesh.vertex(F.vertices[i]).coords - F.center;
          p2[i] = Eigen::Vector2d(d.dot(t1), d.dot(t2));
        }
        bool crossing = false;
        for (std::size_t i = 0; i < n && !crossing; ++i)
          for (std::size_t j = i + 2; j < n && !crossing; ++j) {
            if (i == 0 && j == n - 1)
              continue;
            crossing = segments_cross(p2[i], p2[(i + 1) % n], p2[j], p2[(j + 1) % n], 1e-14 * F.diameter * F.diameter);
          }
        if (crossing)
          report.fail_face(iF, "vertex loop self-intersects");
      }
      if (F.cells.empty() || F.cells.size() > 2) {
        report.fail_face(iF, "has " + std::to_string(F.cells.size()) + " incident cells");
      } else if (F.cells.size() == 2) {
        const int o0 = mesh.cell(F.cells[0]).orientations[mesh.local_face(F.cells[0], iF)];
        const int o1 = mesh.cell(F.cells[1]).orientations[mesh.local_face(F.cells[1], iF)];
        if (o0 != -o1)
          report.fail_face(iF, "incident cells do not have opposite orientations");
      }
    }

    for (std::size_t iC = 0; iC < mesh.n_cells(); ++iC) {
      const MeshCell &C = mesh.cell(iC);
      VectorRd closure = VectorRd::Zero();
      for (std::size_t i = 0; i < C.faces.size(); ++i) {
        const MeshFace &F = mesh.face(C.faces[i]);
        closure += C.orientations[i] * F.area * F.normal;
      }
      if (closure.norm() > 1e-12 * C.diameter * C.diameter) {
        report.fail_cell(iC, "boundary is not closed (|sum |F| n_KF| = " + std::to_string(closure.norm()) + ")");
      }
      if (!(C.volume > 0.)) {
        report.fail_cell(iC, "non-positive volume");
      }
    }
    return report;
  }

} // namespace ddrc
