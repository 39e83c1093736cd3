// Manufactured solutions with exact derivatives, error norms and
// convergence studies.

#ifndef DDRC_VERIFICATION_HPP
#define DDRC_VERIFICATION_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <ddrc/assembly.hpp>
#include <ddrc/contact_solver.hpp>
#include <ddrc/ddr_space.hpp>
#include <ddrc/mesh_generators.hpp>

namespace ddrc
{

  /// Scalar field value with its gradient and Hessian at a point
  struct Jet
  {
    double v = 0.;
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  };

  /// Value and first two derivatives of a function of one variable
  struct Jet1
  {
    double v, d, dd;
  };

  Jet operator+(const Jet &a, const Jet &b);
  Jet operator-(const Jet &a, const Jet &b);
  Jet operator*(double s, const Jet &a);
  /// fx(x) fy(y) fz(z)
  Jet separable(const Jet1 &fx, const Jet1 &fy, const Jet1 &fz);

  using VectorJet = std::array<Jet, 3>;

  /// Exact displacement given through its jets; `plus_side` selects the branch on the positive side of the fracture
  using JetField = std::function<VectorJet(const Point3 &x, bool plus_side)>;

  struct ManufacturedCase
  {
    std::string name;
    MaterialParams material;
    /// Tresca threshold (0 for frictionless contact)
    double threshold = 0.;
    /// Fracture plane; no fracture when `fractured` is false
    FracturePlane plane;
    bool fractured = true;
    JetField jets;

    /// Positive side: coordinate along the plane axis below the plane value
    bool plus_side(const Point3 &side_point) const;

    Eigen::Vector3d displacement(const Point3 &x, const Point3 &side_point) const;
    /// (i, k) = d u_i / d x_k
    Eigen::Matrix3d gradient(const Point3 &x, const Point3 &side_point) const;
    Eigen::Matrix3d stress(const Point3 &x, const Point3 &side_point) const;
    /// f = -div sigma(u)
    Eigen::Vector3d body_force(const Point3 &x, const Point3 &side_point) const;

    Eigen::Vector3d normal_plus() const;
    /// lambda = -sigma(u) n+ evaluated from the positive side
    Eigen::Vector3d traction(const Point3 &x) const;
    /// u+ - u- at a fracture point
    Eigen::Vector3d jump(const Point3 &x) const;

    SidedField displacement_field() const;
    SidedField body_force_field() const;
  };

  /// Frictionless contact on {x = 0} in (-1,1)^3, G = L = 1
  ManufacturedCase case_frictionless();
  /// Tresca friction with g = 1, slip for z < 0 and stick for z > 0, G = L = 1
  ManufacturedCase case_tresca();
  /// Divergence-free cubic field plus a Tresca perturbation scaled by 1/L; G = 1, g = 1/L
  ManufacturedCase case_incompressible(double L);
  /// Quadratic field without fracture, for patch tests
  ManufacturedCase case_quadratic_patch(const MaterialParams &material);

  /// Names: frictionless, tresca, incompressible (uses L), quadratic (uses material)
  ManufacturedCase case_by_name(const std::string &name, double L = 1.);

  struct ErrorReport
  {
    double e_u = 0., e_jump = 0., e_grad = 0., e_lambda_n = 0.;
    /// Unnormalized L2 norms of the same differences
    double abs_u = 0., abs_jump = 0., abs_grad = 0., abs_lambda_n = 0.;
    /// Set when a reference norm vanished and the absolute norm was reported instead
    bool absolute_u = false, absolute_jump = false, absolute_grad = false, absolute_lambda_n = false;
  };

  ErrorReport compute_errors(const DDRSpace &space, const ManufacturedCase &mcase, const ContactSolution &solution,
                             int order = default_quadrature_order);

  struct RunOptions
  {
    MeshFamily family = MeshFamily::Cartesian;
    int n = 2;
    std::uint64_t seed = 1;
    double magnitude = 0.125;
    NewtonConfig newton;
    ReconstructionOptions reconstruction;
  };

  struct RunResult
  {
    std::size_t n_cells = 0, n_dofs = 0;
    double h = 0.;
    ContactSolution solution;
    ErrorReport errors;
  };

  /// Mesh, assemble, solve and measure errors for one case and mesh
  RunResult run_case(const ManufacturedCase &mcase, const RunOptions &options);

  struct StudyRow
  {
    std::string case_name;
    MeshFamily family = MeshFamily::Cartesian;
    int level = 0;
    int n = 0;
    double h = 0.;
    std::size_t n_cells = 0, n_dofs = 0;
    int newton_iters = 0;
    ErrorReport errors;
    /// Observed orders against the previous level (NaN on the first level or after a failure)
    std::array<double, 4> orders{};
    bool failed = false;
    std::string message;
  };

  /// Runs each level in turn; a failed level is recorded and the study continues
  std::vector<StudyRow> convergence_study(const ManufacturedCase &mcase, const std::vector<int> &levels, const RunOptions &options);

  void write_csv_header(std::ostream &os);
  void write_csv_row(std::ostream &os, const StudyRow &row);
  void write_csv(std::ostream &os, const std::vector<StudyRow> &rows);

} // namespace ddrc

#endif // DDRC_VERIFICATION_HPP
