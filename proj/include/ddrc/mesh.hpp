// Polytopal mesh data structures for fractured 3D domains.
//
// Provides:
//  - PolyMesh: vertices, edges, planar polygonal faces and polyhedral cells
//    with full incidence and precomputed geometry
//  - MeshValidationReport: structural and geometric consistency checks
//

#ifndef DDRC_MESH_HPP
#define DDRC_MESH_HPP

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ddrc
{

  using Point3 = Eigen::Vector3d;
  using VectorRd = Eigen::Vector3d;

  /// Error raised on structurally invalid mesh input (bad indices, degenerate entities, non-compliant fractures)
  class MeshError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  struct MeshVertex
  {
    Point3 coords;
    std::vector<std::size_t> edges;
    std::vector<std::size_t> faces;
    std::vector<std::size_t> cells;
    bool boundary = false;
  };

  struct MeshEdge
  {
    std::array<std::size_t, 2> vertices{};
    std::vector<std::size_t> faces;
    std::vector<std::size_t> cells;
    double length = 0.;
    Point3 center = Point3::Zero();
    /// Unit vector from vertices[0] to vertices[1]
    VectorRd tangent = VectorRd::Zero();
    bool boundary = false;
  };

  struct MeshFace
  {
    /// Vertex loop; the loop orientation defines `normal` by the right-hand rule
    std::vector<std::size_t> vertices;
    /// edges[i] joins vertices[i] and vertices[(i+1) % n]
    std::vector<std::size_t> edges;
    std::vector<std::size_t> cells;
    VectorRd normal = VectorRd::Zero();
    double area = 0.;
    Point3 center = Point3::Zero();
    double diameter = 0.;
    bool boundary = false;
  };

  struct MeshCell
  {
    std::vector<std::size_t> faces;
    /// +1 if the face normal points out of the cell, -1 otherwise
    std::vector<int> orientations;
    std::vector<std::size_t> edges;    // sorted
    std::vector<std::size_t> vertices; // sorted
    double volume = 0.;
    Point3 center = Point3::Zero();
    double diameter = 0.;
  };

  /// Oriented face reference used to describe a cell: (face id, +1 if the loop normal is outward)
  using OrientedFace = std::pair<std::size_t, int>;

  /// Polytopal mesh with planar faces. Immutable after construction.
  class PolyMesh
  {
  public:
    PolyMesh() = default;

    /// Build a mesh from raw topology. Orientation flags are stored as given (not corrected).
    static PolyMesh from_topology(std::vector<Point3> vertices,
                                  std::vector<std::vector<std::size_t>> face_loops,
                                  std::vector<std::vector<OrientedFace>> cells);

    std::size_t n_vertices() const { return m_vertices.size(); }
    std::size_t n_edges() const { return m_edges.size(); }
    std::size_t n_faces() const { return m_faces.size(); }
    std::size_t n_cells() const { return m_cells.size(); }

    const MeshVertex &vertex(std::size_t i) const { return m_vertices[i]; }
    const MeshEdge &edge(std::size_t i) const { return m_edges[i]; }
    const MeshFace &face(std::size_t i) const { return m_faces[i]; }
    const MeshCell &cell(std::size_t i) const { return m_cells[i]; }

    const std::vector<MeshVertex> &vertices() const { return m_vertices; }
    const std::vector<MeshEdge> &edges() const { return m_edges; }
    const std::vector<MeshFace> &faces() const { return m_faces; }
    const std::vector<MeshCell> &cells() const { return m_cells; }

    /// Mesh size h = max_K h_K
    double h() const;

    /// Outward unit normal of `cell` on its local face `iF`
    VectorRd cell_face_normal(std::size_t cell, std::size_t iF) const;

    /// Unit normal to face `face` lying in its plane, outward along its local edge `iE`
    VectorRd face_edge_normal(std::size_t face, std::size_t iE) const;

    /// Local position of an entity in a cell's (sorted) list; throws if absent
    std::size_t local_vertex(std::size_t cell, std::size_t vertex) const;
    std::size_t local_edge(std::size_t cell, std::size_t edge) const;
    std::size_t local_face(std::size_t cell, std::size_t face) const;

  private:
    std::vector<MeshVertex> m_vertices;
    std::vector<MeshEdge> m_edges;
    std::vector<MeshFace> m_faces;
    std::vector<MeshCell> m_cells;
  };

  /// Newell normal (not normalised) of a polygon loop; its norm is twice the area for planar loops
  VectorRd polygon_area_vector(const std::vector<Point3> &loop);

  /// Cell volume recomputed by a tetrahedral fan from the first cell vertex
  double tet_fan_volume(const PolyMesh &mesh, std::size_t cell);

  struct MeshValidationReport
  {
    bool ok = true;
    std::vector<std::string> messages;
    std::vector<std::size_t> bad_faces;
    std::vector<std::size_t> bad_cells;

    void fail_face(std::size_t f, const std::string &msg);
    void fail_cell(std::size_t c, const std::string &msg);
  };

  /// Check planarity, simplicity, closure and face/cell incidence of a mesh
  MeshValidationReport validate(const PolyMesh &mesh);

} // namespace ddrc

#endif // DDRC_MESH_HPP
