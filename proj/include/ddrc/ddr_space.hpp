// Discrete displacement space with fracture-side DOFs, local reconstructions
// and the interpolator.

#ifndef DDRC_DDR_SPACE_HPP
#define DDRC_DDR_SPACE_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include <ddrc/fracture.hpp>
#include <ddrc/mesh.hpp>
#include <ddrc/poly.hpp>

namespace ddrc
{

  enum class BlockKind
  {
    Vertex,
    Edge,
    Face,
    Cell
  };

  /// One 3-vector unknown: a vertex class, an edge class, a face side or a cell
  struct DofBlock
  {
    BlockKind kind;
    std::size_t entity;
    /// Cell used to evaluate the field when interpolating (first cell of the class)
    std::size_t representative_cell;
    bool boundary;
  };

  /// Block numbering: vertex classes, edge classes, face sides, cells. DOF index = 3*block + component.
  class DofMap
  {
  public:
    DofMap() = default;
    DofMap(const PolyMesh &mesh, const FractureNetwork &fracture, const SideClasses &sides);

    std::size_t n_blocks() const { return m_blocks.size(); }
    std::size_t n_dofs() const { return 3 * m_blocks.size(); }
    std::size_t n_vertex_blocks() const { return m_n_vertex; }
    std::size_t n_edge_blocks() const { return m_n_edge; }
    std::size_t n_face_blocks() const { return m_n_face; }
    std::size_t n_cell_blocks() const { return m_n_cell; }
    std::size_t n_free_dofs() const { return n_dofs() - 3 * m_n_boundary; }

    const DofBlock &block(std::size_t b) const { return m_blocks[b]; }

    /// Blocks of a cell in local order: vertices, edges, faces (cell order), then the cell itself
    const std::vector<std::size_t> &cell_blocks(std::size_t cell) const { return m_cell_blocks[cell]; }
    /// Block of the side of `face` seen from `cell`
    std::size_t face_block(const PolyMesh &mesh, std::size_t face, std::size_t cell) const;

    /// One flag per DOF, true on boundary vertex, edge and face blocks
    std::vector<bool> boundary_mask() const;

  private:
    std::vector<DofBlock> m_blocks;
    std::vector<std::vector<std::size_t>> m_cell_blocks;
    std::size_t m_n_vertex = 0, m_n_edge = 0, m_n_face = 0, m_n_cell = 0, m_n_boundary = 0;
  };

  struct ReconstructionOptions
  {
    int quadrature_order = default_quadrature_order;
    /// Multiplies the face potential in the face term of the stabilization; 1 is the consistent value
    double stabilization_face_factor = 1.;
  };

  /// Scalar reconstruction operators of one cell, acting on the local scalar DOF vector
  /// (vertices, edges, faces, cell). Vector versions apply them component-wise.
  struct CellOperators
  {
    std::size_t cell = 0;
    std::size_t n_vertices = 0, n_edges = 0, n_faces = 0;

    std::size_t n_local() const { return n_vertices + n_edges + n_faces + 1; }
    std::size_t vertex_index(std::size_t j) const { return j; }
    std::size_t edge_index(std::size_t j) const { return n_vertices + j; }
    std::size_t face_index(std::size_t j) const { return n_vertices + n_edges + j; }
    std::size_t cell_index() const { return n_vertices + n_edges + n_faces; }

    std::vector<MonomialBasis> edge_bases; // P2 in the edge coordinate
    std::vector<MonomialBasis> face_bases; // P2, first 3 functions span P1
    MonomialBasis cell_basis;              // P2, first 4 functions span P1

    /// 3 x n_local per edge
    std::vector<Eigen::MatrixXd> edge_potential;
    /// 9 x n_local per face; row 3k+b is the coefficient of face P1 function b in global direction k
    std::vector<Eigen::MatrixXd> face_gradient;
    /// 6 x n_local per face
    std::vector<Eigen::MatrixXd> face_potential;
    /// 12 x n_local; row 4k+b is the coefficient of cell P1 function b in direction k
    Eigen::MatrixXd cell_gradient;
    /// 10 x n_local
    Eigen::MatrixXd cell_potential;
    /// n_local x n_local scalar stabilization
    Eigen::MatrixXd stabilization;

    CellOperators() : cell_basis(3, 0, Point3::Zero(), 1., Eigen::Matrix3d::Identity()) {}
  };

  CellOperators build_cell_operators(const PolyMesh &mesh, std::size_t cell, const ReconstructionOptions &options = {});

  /// Local vector DOFs (index 3j+i) as an n_local x 3 matrix
  Eigen::MatrixXd component_matrix(const Eigen::VectorXd &local);
  Eigen::VectorXd flatten_components(const Eigen::MatrixXd &components);

  /// Displacement field evaluated at x from the side containing `side_point`
  using SidedField = std::function<Eigen::Vector3d(const Point3 &x, const Point3 &side_point)>;

  /// Interpolate on one cell, using the cell barycenter as side point for every DOF.
  /// `correction` receives the higher-order cell correction added to the cell mean.
  Eigen::VectorXd interpolate_local(const PolyMesh &mesh, const CellOperators &op, const SidedField &u,
                                    int order = default_quadrature_order, Eigen::Vector3d *correction = nullptr);

  class DDRSpace
  {
  public:
    DDRSpace(const PolyMesh &mesh, const FractureNetwork &fracture, ReconstructionOptions options = {});

    const PolyMesh &mesh() const { return *m_mesh; }
    const FractureNetwork &fracture() const { return *m_fracture; }
    const SideClasses &sides() const { return m_sides; }
    const DofMap &dofmap() const { return m_dofmap; }
    const ReconstructionOptions &options() const { return m_options; }
    const CellOperators &operators(std::size_t cell) const { return m_operators[cell]; }

    /// Global indices of the 3*n_local local DOFs of a cell
    std::vector<std::size_t> local_dofs(std::size_t cell) const;
    Eigen::VectorXd restrict_to_cell(const Eigen::VectorXd &uh, std::size_t cell) const;

    /// Global interpolate; each block takes the value computed on its representative cell
    Eigen::VectorXd interpolate(const SidedField &u) const;

    Eigen::MatrixXd cell_potential(const Eigen::VectorXd &uh, std::size_t cell) const; // 10 x 3
    Eigen::MatrixXd cell_gradient(const Eigen::VectorXd &uh, std::size_t cell) const;  // 12 x 3, column i = component
    Eigen::MatrixXd face_potential(const Eigen::VectorXd &uh, std::size_t cell, std::size_t iF) const; // 6 x 3

    /// Jump Υ_Kσ - Υ_Lσ on fracture face i (positive minus negative side), 6 x 3 in the face basis
    Eigen::MatrixXd jump(const Eigen::VectorXd &uh, std::size_t i) const;
    /// v_Kσ - v_Lσ on fracture face i
    Eigen::Vector3d mean_jump(const Eigen::VectorXd &uh, std::size_t i) const;

  private:
    const PolyMesh *m_mesh;
    const FractureNetwork *m_fracture;
    ReconstructionOptions m_options;
    SideClasses m_sides;
    DofMap m_dofmap;
    std::vector<CellOperators> m_operators;
  };

} // namespace ddrc

#endif // DDRC_DDR_SPACE_HPP
