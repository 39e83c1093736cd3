#include <ddrc/contact_solver.hpp>

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

namespace ddrc
{

  double project_plus(double r)
  {
    return std::max(0., r);
  }

  Eigen::Vector3d project_ball(const Eigen::Vector3d &xi, double g)
  {
    const double n = xi.norm();
    if (n <= g)
      return xi;
    return (g / n) * xi;
  }

  Eigen::Matrix3d project_ball_derivative(const Eigen::Vector3d &xi, double g)
  {
    const double n = xi.norm();
    if (n <= g)
      return Eigen::Matrix3d::Identity();
    return (g / n) * (Eigen::Matrix3d::Identity() - xi * xi.transpose() / (n * n));
  }

  ContactData make_contact_data(const DDRSpace &space, const MaterialParams &params, const NewtonConfig &config)
  {
    const PolyMesh &mesh = space.mesh();
    const FractureNetwork &fr = space.fracture();
    ContactData data;
    for (std::size_t i = 0; i < fr.size(); ++i) {
      const MeshFace &F = mesh.face(fr[i].face);
      data.normals.push_back(fr[i].normal_plus);
      data.thresholds.push_back(fr[i].threshold);
      data.areas.push_back(F.area);
      // the tangential penalty follows the shear stiffness; scaling it with L stalls Newton in the nearly incompressible regime
      const double beta_n = config.beta_factor * (2. * params.G + params.L) / F.diameter;
      const double beta_t = config.beta_factor * 2. * params.G / F.diameter;
      data.beta_n.push_back(config.beta_n.value_or(beta_n));
      data.beta_t.push_back(config.beta_t.value_or(config.beta_n.value_or(beta_t)));
      if (!(data.beta_n.back() > 0.) || !(data.beta_t.back() > 0.))
        throw std::invalid_argument("contact penalties must be positive");
    }
    return data;
  }

  namespace
  {
    struct FaceEval
    {
      Eigen::Vector3d lambda, jump, C;
      Eigen::Matrix3d d_lambda, d_jump;
      double scale;
    };

    Eigen::VectorXd face_jumps(const ReducedSystem &sys, const Eigen::VectorXd &u)
    {
      return sys.B * u + sys.B_offset;
    }

    FaceEval eval_face(const ContactData &data, std::size_t i, const Eigen::Vector3d &lambda, const Eigen::Vector3d &jump,
                       bool with_derivatives)
    {
      FaceEval e;
      e.lambda = lambda;
      e.jump = jump;
      const Eigen::Vector3d &n = data.normals[i];
      const double g = data.thresholds[i];
      const double bn = data.beta_n[i], bt = data.beta_t[i];
      const Eigen::Matrix3d P = Eigen::Matrix3d::Identity() - n * n.transpose();
      // rows in force units, like the momentum rows
      e.scale = data.areas[i];

      const double ln = lambda.dot(n), Jn = jump.dot(n);
      const double arg = ln + bn * Jn;
      const Eigen::Vector3d lt = P * lambda;
      const Eigen::Vector3d zeta = P * (lambda + bt * jump);
      e.C = (ln - project_plus(arg)) * n + lt - project_ball(zeta, g);
      if (!with_derivatives)
        return e;

      const Eigen::Matrix3d nn = n * n.transpose();
      e.d_lambda.setZero();
      e.d_jump.setZero();
      if (arg > 0.)
        e.d_jump -= bn * nn;
      else
        e.d_lambda += nn;
      if (g == 0.) {
        e.d_lambda += P;
      } else {
        const double zn = zeta.norm();
        if (zn <= g) {
          e.d_jump -= bt * P;
        } else {
          const Eigen::Matrix3d D = (g / zn) * (P - zeta * zeta.transpose() / (zn * zn));
          e.d_lambda += P - D;
          e.d_jump -= bt * D;
        }
      }
      return e;
    }
  } // namespace

  Eigen::VectorXd contact_residual(const ReducedSystem &sys, const ContactData &data, const Eigen::VectorXd &z)
  {
    const auto nu = static_cast<Eigen::Index>(sys.n_free());
    const auto nf = static_cast<Eigen::Index>(data.normals.size());
    const Eigen::VectorXd u = z.head(nu), lam = z.tail(3 * nf);
    Eigen::VectorXd R(nu + 3 * nf);
    R.head(nu) = sys.A * u + sys.B.transpose() * lam - sys.F;
    const Eigen::VectorXd J = face_jumps(sys, u);
    for (Eigen::Index i = 0; i < nf; ++i) {
      const auto fi = static_cast<std::size_t>(i);
      const FaceEval e = eval_face(data, fi, lam.segment<3>(3 * i), J.segment<3>(3 * i) / data.areas[fi], false);
      R.segment<3>(nu + 3 * i) = e.scale * e.C;
    }
    return R;
  }

  SparseMatrix semismooth_jacobian(const ReducedSystem &sys, const ContactData &data, const Eigen::VectorXd &z)
  {
    const auto nu = static_cast<Eigen::Index>(sys.n_free());
    const auto nf = static_cast<Eigen::Index>(data.normals.size());
    const Eigen::VectorXd u = z.head(nu), lam = z.tail(3 * nf);
    const Eigen::VectorXd J = face_jumps(sys, u);

    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(sys.A.nonZeros() + 2 * sys.B.nonZeros() + 27 * nf));
    for (Eigen::Index col = 0; col < sys.A.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(sys.A, col); it; ++it)
        t.emplace_back(static_cast<int>(it.row()), static_cast<int>(col), it.value());
    for (Eigen::Index col = 0; col < sys.B.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(sys.B, col); it; ++it)
        t.emplace_back(static_cast<int>(col), static_cast<int>(nu + it.row()), it.value());

    // Every face block is emitted in full so that the sparsity pattern does not depend on the active set
    const Eigen::SparseMatrix<double, Eigen::RowMajor> Br = sys.B;
    for (Eigen::Index i = 0; i < nf; ++i) {
      const auto fi = static_cast<std::size_t>(i);
      const FaceEval e = eval_face(data, fi, lam.segment<3>(3 * i), J.segment<3>(3 * i) / data.areas[fi], true);
      const auto row0 = static_cast<int>(nu + 3 * i);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          t.emplace_back(row0 + a, static_cast<int>(nu + 3 * i + b), e.scale * e.d_lambda(a, b));
      for (int k = 0; k < 3; ++k) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(Br, 3 * i + k); it; ++it) {
          const double c = e.scale * it.value() / data.areas[fi];
          for (int a = 0; a < 3; ++a)
            t.emplace_back(row0 + a, static_cast<int>(it.col()), c * e.d_jump(a, k));
        }
      }
    }
    SparseMatrix Jac(nu + 3 * nf, nu + 3 * nf);
    Jac.setFromTriplets(t.begin(), t.end());
    return Jac;
  }

  ContactState classify_face(const Eigen::Vector3d &lambda, const Eigen::Vector3d &jump, const Eigen::Vector3d &normal,
                             double g, double jump_scale, double tol)
  {
    const Eigen::Vector3d lt = lambda - lambda.dot(normal) * normal;
    const bool slip = lt.norm() >= g - tol * std::max(1., g);
    const bool contact = jump.dot(normal) >= -tol * std::max(1., jump_scale);
    if (slip)
      return contact ? ContactState::ContactSlip : ContactState::OpenSlip;
    return contact ? ContactState::ContactStick : ContactState::OpenStick;
  }

  namespace
  {
    // Newton steps through the Schur complement on the multipliers: A is factored once and
    // S = B A^-1 B^T is formed once, so each iteration only solves a dense 3nf system.
    class SchurStepper
    {
    public:
      SchurStepper(const ReducedSystem &sys, const ContactData &data) : sys_(sys), data_(data)
      {
        lu_.compute(sys.A);
        ok_ = lu_.info() == Eigen::Success;
        if (!ok_)
          return;
        const Eigen::Index m = sys.B.rows();
        S_.resize(m, m);
        const SparseMatrix Bt = sys.B.transpose();
        constexpr Eigen::Index chunk = 64;
        for (Eigen::Index c0 = 0; c0 < m; c0 += chunk) {
          const Eigen::Index nc = std::min(chunk, m - c0);
          const Eigen::MatrixXd rhs = Eigen::MatrixXd(Bt.middleCols(c0, nc));
          const Eigen::MatrixXd X = lu_.solve(rhs);
          S_.middleCols(c0, nc) = sys.B * X;
        }
      }

      bool ok() const { return ok_; }

      Eigen::VectorXd solve_elasticity(const Eigen::VectorXd &rhs) const { return lu_.solve(rhs); }

      Eigen::VectorXd step(const Eigen::VectorXd &z, const Eigen::VectorXd &R) const
      {
        const Eigen::Index nu = sys_.A.rows();
        const Eigen::Index nf = static_cast<Eigen::Index>(data_.normals.size());
        const Eigen::VectorXd u = z.head(nu), lam = z.tail(3 * nf);
        const Eigen::VectorXd J = face_jumps(sys_, u);
        const Eigen::VectorXd y = lu_.solve(R.head(nu));
        const Eigen::VectorXd By = sys_.B * y;

        Eigen::MatrixXd M(3 * nf, 3 * nf);
        Eigen::VectorXd rhs(3 * nf);
        for (Eigen::Index i = 0; i < nf; ++i) {
          const auto fi = static_cast<std::size_t>(i);
          const FaceEval e = eval_face(data_, fi, lam.segment<3>(3 * i), J.segment<3>(3 * i) / data_.areas[fi], true);
          const Eigen::Matrix3d Dj = (e.scale / data_.areas[fi]) * e.d_jump;
          M.middleRows(3 * i, 3) = -Dj * S_.middleRows(3 * i, 3);
          M.block(3 * i, 3 * i, 3, 3) += e.scale * e.d_lambda;
          rhs.segment<3>(3 * i) = -R.segment<3>(nu + 3 * i) + Dj * By.segment<3>(3 * i);
        }
        Eigen::VectorXd dz(nu + 3 * nf);
        const Eigen::VectorXd dl = M.fullPivLu().solve(rhs);
        dz.tail(3 * nf) = dl;
        dz.head(nu) = -y - lu_.solve(sys_.B.transpose() * dl);
        return dz;
      }

    private:
      const ReducedSystem &sys_;
      const ContactData &data_;
      Eigen::SparseLU<SparseMatrix> lu_;
      Eigen::MatrixXd S_;
      bool ok_ = false;
    };
  } // namespace

  ContactSolution newton_solve(const ReducedSystem &sys, const ContactData &data, const NewtonConfig &config)
  {
    if (!(config.rel_tol > 0.) || !(config.abs_tol > 0.) || !(config.step_tol >= 0.) || config.max_iter < 1)
      throw std::invalid_argument("Newton tolerances and iteration cap must be positive");
    const auto nu = static_cast<Eigen::Index>(sys.n_free());
    const auto nf = static_cast<Eigen::Index>(data.normals.size());

    Eigen::VectorXd z = Eigen::VectorXd::Zero(nu + 3 * nf);
    std::vector<double> history;
    const SchurStepper schur(sys, data);
    if (nf > 0 && schur.ok())
      z.head(nu) = schur.solve_elasticity(sys.F);

    // Without a nonsingular A (a block held only through contact) the full Jacobian is factored every step
    Eigen::SparseLU<SparseMatrix> lu;
    bool pattern_ready = false;
    const auto full_step = [&](const Eigen::VectorXd &zc, const Eigen::VectorXd &Rc, int it) {
      const SparseMatrix Jac = semismooth_jacobian(sys, data, zc);
      if (!pattern_ready) {
        lu.analyzePattern(Jac);
        pattern_ready = true;
      }
      lu.factorize(Jac);
      if (lu.info() != Eigen::Success)
        throw SolverFailure("singular Newton matrix at iteration " + std::to_string(it + 1), history);
      return Eigen::VectorXd(lu.solve(-Rc));
    };

    Eigen::VectorXd R = contact_residual(sys, data, z);
    double rnorm = R.norm();
    history.push_back(rnorm);
    const double target = config.rel_tol * rnorm + config.abs_tol;
    int it = 0;
    bool stopped_on_step = false;
    while (rnorm > target && !stopped_on_step) {
      if (it == config.max_iter)
        throw SolverFailure("Newton did not converge in " + std::to_string(config.max_iter) + " iterations", history);
      const Eigen::VectorXd dz = schur.ok() ? schur.step(z, R) : full_step(z, R, it);
      if (!dz.allFinite())
        throw SolverFailure("non-finite Newton step at iteration " + std::to_string(it + 1), history);
      double step = 1.;
      Eigen::VectorXd z_new = z + dz;
      Eigen::VectorXd R_new = contact_residual(sys, data, z_new);
      for (int h = 0; h < 8 && R_new.norm() > rnorm; ++h) {
        step *= 0.5;
        z_new = z + step * dz;
        R_new = contact_residual(sys, data, z_new);
      }
      stopped_on_step = step == 1. && dz.norm() <= config.step_tol * z_new.norm();
      z = std::move(z_new);
      R = std::move(R_new);
      rnorm = R.norm();
      history.push_back(rnorm);
      ++it;
    }

    ContactSolution sol;
    sol.u = sys.expand(z.head(nu));
    sol.iterations = it;
    sol.stopped_on_step = stopped_on_step;
    sol.residual_history = std::move(history);
    const Eigen::VectorXd J = face_jumps(sys, z.head(nu));
    double jump_scale = 0.;
    for (Eigen::Index i = 0; i < nf; ++i) {
      sol.lambda.push_back(z.segment<3>(nu + 3 * i));
      sol.jump.push_back(J.segment<3>(3 * i) / data.areas[static_cast<std::size_t>(i)]);
      jump_scale = std::max(jump_scale, sol.jump.back().norm());
    }
    for (std::size_t i = 0; i < sol.lambda.size(); ++i)
      sol.states.push_back(classify_face(sol.lambda[i], sol.jump[i], data.normals[i], data.thresholds[i], jump_scale));
    return sol;
  }

  double Admissibility::worst() const
  {
    return std::max({normal_sign, friction_bound, penetration, complementarity, dissipation});
  }

  Admissibility check_admissibility(const ContactSolution &solution, const ContactData &data)
  {
    // jumps are measured against the displacement size so that a closed network does not normalize roundoff by itself
    double ls = 0., js = solution.u.size() > 0 ? solution.u.cwiseAbs().maxCoeff() : 0.;
    for (std::size_t i = 0; i < solution.lambda.size(); ++i) {
      ls = std::max({ls, solution.lambda[i].norm(), data.thresholds[i]});
      js = std::max(js, solution.jump[i].norm());
    }
    ls = ls > 0. ? ls : 1.;
    js = js > 0. ? js : 1.;
    Admissibility a;
    for (std::size_t i = 0; i < solution.lambda.size(); ++i) {
      const Eigen::Vector3d &n = data.normals[i];
      const Eigen::Vector3d &l = solution.lambda[i], &J = solution.jump[i];
      const double ln = l.dot(n), Jn = J.dot(n);
      const Eigen::Vector3d lt = l - ln * n, Jt = J - Jn * n;
      const double g = data.thresholds[i];
      a.normal_sign = std::max(a.normal_sign, std::max(-ln, 0.) / ls);
      a.friction_bound = std::max(a.friction_bound, std::max(lt.norm() - g, 0.) / ls);
      a.penetration = std::max(a.penetration, std::max(Jn, 0.) / js);
      a.complementarity = std::max(a.complementarity, std::abs(ln * Jn) / (ls * js));
      a.dissipation = std::max(a.dissipation, std::abs(lt.dot(Jt) - g * Jt.norm()) / (ls * js));
    }
    return a;
  }

} // namespace ddrc
