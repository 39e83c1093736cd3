// Fracture networks on polytopal meshes and the side classification of
// vertices and edges lying on them.

#ifndef DDRC_FRACTURE_HPP
#define DDRC_FRACTURE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include <ddrc/mesh.hpp>

namespace ddrc
{

  /// A fracture face: its normal n+ points out of the positive cell
  struct FractureFace
  {
    std::size_t face;
    VectorRd normal_plus;
    std::size_t positive_cell;
    /// Tresca threshold g >= 0 on this face
    double threshold = 0.;
  };

  /// Set of mesh faces forming the fracture network Gamma
  class FractureNetwork
  {
  public:
    FractureNetwork() = default;
    FractureNetwork(const PolyMesh &mesh, std::vector<FractureFace> faces);

    std::size_t size() const { return m_faces.size(); }
    bool empty() const { return m_faces.empty(); }
    const std::vector<FractureFace> &faces() const { return m_faces; }
    const FractureFace &operator[](std::size_t i) const { return m_faces[i]; }

    /// Index in faces() of mesh face `face`, if it is a fracture face
    std::optional<std::size_t> index_of(std::size_t face) const;
    bool is_fracture(std::size_t face) const { return index_of(face).has_value(); }

    /// The cell on the negative side of fracture face i
    std::size_t negative_cell(const PolyMesh &mesh, std::size_t i) const;

    /// Returns a description of the first violated invariant, or an empty string
    std::string check(const PolyMesh &mesh) const;

  private:
    std::vector<FractureFace> m_faces;
    std::vector<long> m_face_to_index;
  };

  /// Partition of the cells around one vertex or edge into sides of the fracture network
  struct EntityPartition
  {
    /// Incident cells, in the mesh's incidence order
    std::vector<std::size_t> cells;
    /// Class index of each incident cell
    std::vector<std::size_t> class_of;
    std::size_t n_classes = 0;

    std::size_t class_of_cell(std::size_t cell) const;
    /// Cells of each class, sorted
    std::vector<std::vector<std::size_t>> classes() const;
  };

  struct SideClasses
  {
    std::vector<EntityPartition> vertices;
    std::vector<EntityPartition> edges;
  };

  /// Group the cells around every vertex and edge into connected components through non-fracture faces
  SideClasses classify_fracture_sides(const PolyMesh &mesh, const FractureNetwork &fracture);

} // namespace ddrc

#endif // DDRC_FRACTURE_HPP
