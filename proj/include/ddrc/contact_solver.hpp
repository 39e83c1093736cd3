// Semi-smooth Newton solver for the displacement-multiplier system with
// Tresca friction written as projection equations.

#ifndef DDRC_CONTACT_SOLVER_HPP
#define DDRC_CONTACT_SOLVER_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <ddrc/assembly.hpp>

namespace ddrc
{

  /// [r]_+ = max(0, r)
  double project_plus(double r);
  /// Projection of xi on the closed ball of radius g >= 0
  Eigen::Vector3d project_ball(const Eigen::Vector3d &xi, double g);
  /// Derivative of project_ball at xi (the identity at |xi| = g)
  Eigen::Matrix3d project_ball_derivative(const Eigen::Vector3d &xi, double g);

  struct NewtonConfig
  {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_iter = 50;
    /// Also stop after a full step with |dz| <= step_tol |z|; the residual test alone cannot pass once
    /// roundoff in A (of size L) dominates
    double step_tol = 1e-10;
    /// Constant penalties overriding the defaults factor*(2G+L)/h_sigma (normal) and factor*2G/h_sigma (tangential);
    /// a given beta_n alone is used for both
    std::optional<double> beta_n, beta_t;
    double beta_factor = 10.;
  };

  /// Fracture data seen by the solver, one entry per fracture face
  struct ContactData
  {
    std::vector<Eigen::Vector3d> normals;
    std::vector<double> thresholds;
    std::vector<double> areas;
    std::vector<double> beta_n, beta_t;
  };

  ContactData make_contact_data(const DDRSpace &space, const MaterialParams &params, const NewtonConfig &config);

  /// Unknowns z = [free displacements; lambda per face]. Complementarity rows are multiplied by the face area.
  Eigen::VectorXd contact_residual(const ReducedSystem &sys, const ContactData &data, const Eigen::VectorXd &z);
  SparseMatrix semismooth_jacobian(const ReducedSystem &sys, const ContactData &data, const Eigen::VectorXd &z);

  enum class ContactState
  {
    OpenStick = 0,
    ContactStick = 1,
    OpenSlip = 2,
    ContactSlip = 3
  };

  struct ContactSolution
  {
    /// Full displacement DOF vector, boundary values included
    Eigen::VectorXd u;
    std::vector<Eigen::Vector3d> lambda;
    /// Mean jump u_K,sigma - u_L,sigma per face
    std::vector<Eigen::Vector3d> jump;
    std::vector<ContactState> states;
    int iterations = 0;
    std::vector<double> residual_history;
    /// True when the step test rather than the residual test ended the iteration
    bool stopped_on_step = false;
  };

  class SolverFailure : public std::runtime_error
  {
  public:
    SolverFailure(const std::string &what, std::vector<double> history)
        : std::runtime_error(what), residual_history(std::move(history))
    {
    }
    std::vector<double> residual_history;
  };

  /// Classify a face from its multiplier and mean jump; `tol` is relative to the threshold and jump scales
  ContactState classify_face(const Eigen::Vector3d &lambda, const Eigen::Vector3d &jump, const Eigen::Vector3d &normal,
                             double g, double jump_scale, double tol = 1e-8);

  /// Violations of the discrete contact conditions, relative to the largest multiplier (or threshold) and the largest
  /// displacement or jump
  struct Admissibility
  {
    /// max(-lambda_n, 0)
    double normal_sign = 0.;
    /// max(|lambda_t| - g, 0)
    double friction_bound = 0.;
    /// max(J_n, 0)
    double penetration = 0.;
    /// |lambda_n J_n|
    double complementarity = 0.;
    /// |lambda_t . J_t - g |J_t||
    double dissipation = 0.;

    double worst() const;
  };

  Admissibility check_admissibility(const ContactSolution &solution, const ContactData &data);

  /// Starts from the linear elasticity solution with lambda = 0 when the fracture is not empty
  ContactSolution newton_solve(const ReducedSystem &sys, const ContactData &data, const NewtonConfig &config);

} // namespace ddrc

#endif // DDRC_CONTACT_SOLVER_HPP
