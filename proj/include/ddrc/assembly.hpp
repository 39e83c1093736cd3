// Global stabilized elasticity operator, multiplier coupling and load vector.

#ifndef DDRC_ASSEMBLY_HPP
#define DDRC_ASSEMBLY_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <ddrc/ddr_space.hpp>

namespace ddrc
{

  using SparseMatrix = Eigen::SparseMatrix<double>;

  /// Isotropic material. Stored as Lamé parameters (G, L) so that L >> G stays exact.
  struct MaterialParams
  {
    double G = 1.;
    double L = 1.;
    /// Stabilization weight; non-positive means the default E/(1+nu) = 2G
    double mu1 = 0.;

    static MaterialParams from_young(double E, double nu);
    static MaterialParams from_lame(double G, double L);

    double E() const { return 2. * G * (1. + nu()); }
    double nu() const { return L / (2. * (L + G)); }
    double stabilization_weight() const { return mu1 > 0. ? mu1 : 2. * G; }
    /// Throws std::invalid_argument unless G > 0 and L >= 0
    void validate() const;
  };

  /// Cell matrix of (u, v) -> int_K sigma_h(u):eps_h(v) + mu1 S_K(u, v) on the 3*n_local vector DOFs
  Eigen::MatrixXd local_stiffness(const PolyMesh &mesh, const CellOperators &op, const MaterialParams &params);

  struct SystemBlocks
  {
    /// Energy operator on all DOFs
    SparseMatrix A;
    /// Row block 3i..3i+2 of fracture face i maps v to |sigma| (v_K,sigma - v_L,sigma)
    SparseMatrix B;
    /// Load, nonzero on cell blocks only
    Eigen::VectorXd F;
  };

  /// `f` is the body force; pass an empty function for f = 0
  SystemBlocks assemble(const DDRSpace &space, const MaterialParams &params, const SidedField &f);

  /// System restricted to the free DOFs, with the boundary values lifted to the right-hand side
  struct ReducedSystem
  {
    SparseMatrix A;
    SparseMatrix B;
    Eigen::VectorXd F;
    /// Contribution of the boundary values to B v (zero unless a fracture touches boundary DOFs)
    Eigen::VectorXd B_offset;
    /// Full vector holding the boundary values and zeros elsewhere
    Eigen::VectorXd lifted;
    /// Global index of each free DOF
    std::vector<std::size_t> free_dofs;
    /// Face areas of the fracture faces
    std::vector<double> areas;

    std::size_t n_free() const { return free_dofs.size(); }
    /// Full DOF vector from free values
    Eigen::VectorXd expand(const Eigen::VectorXd &free_values) const;
  };

  /// `boundary_values` is a full DOF vector; only its boundary entries are used
  ReducedSystem apply_dirichlet(const SystemBlocks &system, const DDRSpace &space, const Eigen::VectorXd &boundary_values);
  /// Dirichlet values only on the DOFs flagged in `mask`; the rest of the boundary carries homogeneous Neumann data
  ReducedSystem apply_dirichlet(const SystemBlocks &system, const DDRSpace &space, const Eigen::VectorXd &boundary_values,
                                const std::vector<bool> &mask);
  /// DOF mask of the boundary vertex, edge and face blocks whose entity location satisfies `on_dirichlet`
  std::vector<bool> boundary_mask_where(const DDRSpace &space, const std::function<bool(const Point3 &)> &on_dirichlet);

  /// Write a matrix as "i j value" lines (0-based), column-major order
  void write_coo(std::ostream &os, const SparseMatrix &M);

} // namespace ddrc

#endif // DDRC_ASSEMBLY_HPP
