// Structured mesh families compliant with axis-aligned fracture planes:
// Cartesian, Kuhn tetrahedral, and perturbed "hexa-cut" meshes.

#ifndef DDRC_MESH_GENERATORS_HPP
#define DDRC_MESH_GENERATORS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <ddrc/fracture.hpp>
#include <ddrc/mesh.hpp>

namespace ddrc
{

  struct Box
  {
    Point3 lo = Point3::Constant(-1.);
    Point3 hi = Point3::Constant(1.);
  };

  /// Axis-aligned planar fracture {x_axis = value}, optionally restricted to a rectangle
  struct FracturePlane
  {
    int axis = 0;
    double value = 0.;
    /// [min, max] along the two remaining axes, in increasing axis order
    std::optional<std::array<double, 4>> extent;
    double threshold = 0.;
  };

  struct FracturedMesh
  {
    PolyMesh mesh;
    FractureNetwork fracture;
  };

  enum class MeshFamily
  {
    Cartesian,
    Tetrahedral,
    HexaCut
  };

  std::string to_string(MeshFamily family);
  MeshFamily mesh_family_from_string(const std::string &name);

  /// n^3 hexahedra; fracture faces are the grid faces inside each plane's extent
  FracturedMesh build_cartesian(int n, const Box &domain, const std::vector<FracturePlane> &planes);

  /// Each cube of the n^3 grid split into 6 Kuhn tetrahedra sharing the main diagonal
  FracturedMesh build_tetrahedral(int n, const Box &domain, const std::vector<FracturePlane> &planes);

  /// Cartesian grid with interior vertices off the fractures randomly displaced by up to magnitude*spacing
  /// in each direction; non-planar quadrilaterals are cut into two triangles along the shorter diagonal
  FracturedMesh build_hexacut(int n, const Box &domain, const std::vector<FracturePlane> &planes,
                              std::uint64_t seed, double magnitude = 0.125);

  /// Build any family; `seed` and `magnitude` are only used by HexaCut
  FracturedMesh build_mesh(MeshFamily family, int n, const Box &domain, const std::vector<FracturePlane> &planes,
                           std::uint64_t seed = 1, double magnitude = 0.125);

  /// Assemble a mesh from cells given as lists of face loops of any orientation.
  /// Faces are shared by vertex set and orientation flags are deduced from the geometry.
  PolyMesh mesh_from_cell_loops(std::vector<Point3> vertices, const std::vector<std::vector<std::vector<std::size_t>>> &cells);

  /// Fracture faces of `mesh` lying on the given planes; n+ points out of the cell on the lower-coordinate side
  FractureNetwork fracture_from_planes(const PolyMesh &mesh, const std::vector<FracturePlane> &planes, double tol);

} // namespace ddrc

#endif // DDRC_MESH_GENERATORS_HPP
