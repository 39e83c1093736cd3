#include <ddrc/fracture.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ddrc
{

  FractureNetwork::FractureNetwork(const PolyMesh &mesh, std::vector<FractureFace> faces)
      : m_faces(std::move(faces)), m_face_to_index(mesh.n_faces(), -1)
  {
    for (std::size_t i = 0; i < m_faces.size(); ++i) {
      const std::size_t f = m_faces[i].face;
      if (f >= mesh.n_faces()) {
        throw MeshError("fracture references unknown face " + std::to_string(f));
      }
      if (m_face_to_index[f] >= 0) {
        throw MeshError("face " + std::to_string(f) + " listed twice in the fracture network");
      }
      m_face_to_index[f] = static_cast<long>(i);
    }
  }

  std::optional<std::size_t> FractureNetwork::index_of(std::size_t face) const
  {
    if (face >= m_face_to_index.size() || m_face_to_index[face] < 0)
      return std::nullopt;
    return static_cast<std::size_t>(m_face_to_index[face]);
  }

  std::size_t FractureNetwork::negative_cell(const PolyMesh &mesh, std::size_t i) const
  {
    const MeshFace &F = mesh.face(m_faces[i].face);
    return F.cells[0] == m_faces[i].positive_cell ? F.cells[1] : F.cells[0];
  }

  std::string FractureNetwork::check(const PolyMesh &mesh) const
  {
    std::ostringstream msg;
    for (const FractureFace &ff : m_faces) {
      const MeshFace &F = mesh.face(ff.face);
      if (F.cells.size() != 2) {
        msg << "fracture face " << ff.face << " is not interior";
        return msg.str();
      }
      if (std::find(F.cells.begin(), F.cells.end(), ff.positive_cell) == F.cells.end()) {
        msg << "fracture face " << ff.face << ": positive cell " << ff.positive_cell << " is not incident";
        return msg.str();
      }
      const VectorRd nK = mesh.cell_face_normal(ff.positive_cell, mesh.local_face(ff.positive_cell, ff.face));
      if ((nK - ff.normal_plus).norm() > 1e-12) {
        msg << "fracture face " << ff.face << ": n+ is not the outward normal of the positive cell";
        return msg.str();
      }
      if (!(ff.threshold >= 0.)) {
        msg << "fracture face " << ff.face << ": negative Tresca threshold";
        return msg.str();
      }
    }
    return {};
  }

  //------------------------------------------------------------------------------

  std::size_t EntityPartition::class_of_cell(std::size_t cell) const
  {
    auto it = std::find(cells.begin(), cells.end(), cell);
    if (it == cells.end()) {
      throw MeshError("cell " + std::to_string(cell) + " is not incident to this entity");
    }
    return class_of[static_cast<std::size_t>(it - cells.begin())];
  }

  std::vector<std::vector<std::size_t>> EntityPartition::classes() const
  {
    std::vector<std::vector<std::size_t>> out(n_classes);
    for (std::size_t i = 0; i < cells.size(); ++i)
      out[class_of[i]].push_back(cells[i]);
    for (auto &c : out)
      std::sort(c.begin(), c.end());
    return out;
  }

  namespace
  {
    // Union-find over the incident cells of one entity, joined through the given non-fracture faces
    EntityPartition partition(const PolyMesh &mesh, const FractureNetwork &fracture,
                              const std::vector<std::size_t> &cells, const std::vector<std::size_t> &faces)
    {
      EntityPartition P;
      P.cells = cells;
      std::vector<std::size_t> parent(cells.size());
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&parent](std::size_t i) {
        while (parent[i] != i) {
          parent[i] = parent[parent[i]];
          i = parent[i];
        }
        return i;
      };
      auto pos = [&cells](std::size_t c) {
        return static_cast<std::size_t>(std::find(cells.begin(), cells.end(), c) - cells.begin());
      };
      for (std::size_t f : faces) {
        const MeshFace &F = mesh.face(f);
        if (F.cells.size() != 2 || fracture.is_fracture(f))
          continue;
        const std::size_t a = find(pos(F.cells[0])), b = find(pos(F.cells[1]));
        if (a != b)
          parent[std::max(a, b)] = std::min(a, b);
      }
      // Number classes by first appearance
      std::vector<long> label(cells.size(), -1);
      P.class_of.resize(cells.size());
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::size_t r = find(i);
        if (label[r] < 0)
          label[r] = static_cast<long>(P.n_classes++);
        P.class_of[i] = static_cast<std::size_t>(label[r]);
      }
      return P;
    }
  } // namespace

  SideClasses classify_fracture_sides(const PolyMesh &mesh, const FractureNetwork &fracture)
  {
    SideClasses sides;
    sides.vertices.reserve(mesh.n_vertices());
    for (std::size_t v = 0; v < mesh.n_vertices(); ++v) {
      const MeshVertex &V = mesh.vertex(v);
      sides.vertices.push_back(partition(mesh, fracture, V.cells, V.faces));
    }
    sides.edges.reserve(mesh.n_edges());
    for (std::size_t e = 0; e < mesh.n_edges(); ++e) {
      const MeshEdge &E = mesh.edge(e);
      sides.edges.push_back(partition(mesh, fracture, E.cells, E.faces));
    }
    return sides;
  }

} // namespace ddrc
