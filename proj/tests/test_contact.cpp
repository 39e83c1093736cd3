#include <doctest.h>

#include <map>
#include <memory>
#include <random>

#include <Eigen/SparseLU>

#include <ddrc/contact_solver.hpp>
#include <ddrc/mesh_generators.hpp>
#include <ddrc/verification.hpp>

using namespace ddrc;

namespace
{
  // One fracture face of unit area, A = k I and B = I on three free DOFs: u = (F - lambda) / k
  struct TinyProblem
  {
    ReducedSystem sys;
    ContactData data;

    TinyProblem(double k, const Eigen::Vector3d &F, double g, double beta = 1.)
    {
      SparseMatrix I(3, 3);
      I.setIdentity();
      sys.A = k * I;
      sys.B = I;
      sys.F = F;
      sys.B_offset = Eigen::VectorXd::Zero(3);
      sys.lifted = Eigen::VectorXd::Zero(3);
      sys.free_dofs = {0, 1, 2};
      sys.areas = {1.};
      data.normals = {Eigen::Vector3d::UnitX()};
      data.thresholds = {g};
      data.areas = {1.};
      data.beta_n = {beta};
      data.beta_t = {beta};
    }
  };

  // Assembled manufactured problem kept alive for the solver tests
  struct Problem
  {
    ManufacturedCase mcase;
    FracturedMesh mesh;
    std::unique_ptr<DDRSpace> space;
    ReducedSystem sys;

    Problem(const ManufacturedCase &c, MeshFamily family, int n) : mcase(c), mesh(build_mesh(family, n, Box{}, {c.plane}))
    {
      space = std::make_unique<DDRSpace>(mesh.mesh, mesh.fracture);
      const SystemBlocks blocks = assemble(*space, mcase.material, mcase.body_force_field());
      sys = apply_dirichlet(blocks, *space, space->interpolate(mcase.displacement_field()));
    }

    ContactData data(const NewtonConfig &cfg = {}) const { return make_contact_data(*space, mcase.material, cfg); }
  };

  Eigen::VectorXd stacked(const ReducedSystem &sys, const ContactSolution &s)
  {
    Eigen::VectorXd z(static_cast<Eigen::Index>(sys.n_free() + 3 * s.lambda.size()));
    for (std::size_t i = 0; i < sys.n_free(); ++i)
      z(static_cast<Eigen::Index>(i)) = s.u(static_cast<Eigen::Index>(sys.free_dofs[i]));
    for (std::size_t i = 0; i < s.lambda.size(); ++i)
      z.segment<3>(static_cast<Eigen::Index>(sys.n_free() + 3 * i)) = s.lambda[i];
    return z;
  }
  // Reflection x -> Rx, R = diag(-1, 1, 1), of a case about its fracture plane x = 0: u'(x) = R u(Rx).
  // The positive side of u' is the image of the negative side of u.
  ManufacturedCase mirrored(const ManufacturedCase &c)
  {
    ManufacturedCase m = c;
    m.name = c.name + "_mirrored";
    const Eigen::Matrix3d R = Eigen::Vector3d(-1., 1., 1.).asDiagonal();
    m.jets = [jets = c.jets, R](const Point3 &x, bool plus) {
      VectorJet u = jets(R * x, !plus);
      for (int i = 0; i < 3; ++i) {
        const double s = R(i, i);
        u[static_cast<std::size_t>(i)].v *= s;
        u[static_cast<std::size_t>(i)].g = s * R * u[static_cast<std::size_t>(i)].g;
        u[static_cast<std::size_t>(i)].H = s * R * u[static_cast<std::size_t>(i)].H * R;
      }
      return u;
    };
    return m;
  }

  // Where a block lives: entity location, and the side of x = 0 for entities split by the fracture
  std::map<std::array<long, 4>, std::size_t> block_locations(const PolyMesh &mesh, const DofMap &dm, bool reflect)
  {
    const auto location = [&](const DofBlock &b) -> Point3 {
      switch (b.kind) {
      case BlockKind::Vertex:
        return mesh.vertex(b.entity).coords;
      case BlockKind::Edge:
        return mesh.edge(b.entity).center;
      case BlockKind::Face:
        return mesh.face(b.entity).center;
      default:
        return mesh.cell(b.entity).center;
      }
    };
    const auto round = [](double v) { return std::lround(v * 1e6); };
    std::map<std::array<long, 4>, std::vector<std::size_t>> groups;
    for (std::size_t b = 0; b < dm.n_blocks(); ++b) {
      Point3 x = location(dm.block(b));
      if (reflect)
        x.x() = -x.x();
      groups[{static_cast<long>(dm.block(b).kind), round(x.x()), round(x.y()), round(x.z())}].push_back(b);
    }
    std::map<std::array<long, 4>, std::size_t> out;
    for (const auto &[key, blocks] : groups)
      for (std::size_t b : blocks) {
        auto k = key;
        if (blocks.size() > 1) {
          // split entity: tag by the side of its representative cell, after reflection
          const double side = mesh.cell(dm.block(b).representative_cell).center.x();
          k[0] += (reflect ? -side : side) < 0. ? 10 : 20;
        }
        out[k] = b;
      }
    return out;
  }
} // namespace

TEST_CASE("projections")
{
  CHECK(project_plus(-2.) == 0.);
  CHECK(project_plus(1.5) == 1.5);
  const Eigen::Vector3d xi(3., 4., 0.);
  CHECK(project_ball(xi, 5.) == xi);
  CHECK((project_ball(xi, 2.5) - Eigen::Vector3d(1.5, 2., 0.)).norm() < 1e-15);
  CHECK(project_ball(xi, 0.).norm() == 0.);
  CHECK(project_ball_derivative(xi, 6.) == Eigen::Matrix3d::Identity());

  const Eigen::Vector3d zeta(0., 3., 4.);
  const double h = 1e-6;
  const Eigen::Matrix3d D = project_ball_derivative(zeta, 1.);
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d fd =
        (project_ball(zeta + h * Eigen::Vector3d::Unit(k), 1.) - project_ball(zeta - h * Eigen::Vector3d::Unit(k), 1.)) / (2 * h);
    CHECK((fd - D.col(k)).norm() < 1e-8);
  }
}

TEST_CASE("residual on a hand-built system")
{
  const TinyProblem p(1., Eigen::Vector3d::Zero(), 0.5);
  CHECK(contact_residual(p.sys, p.data, Eigen::VectorXd::Zero(6)).norm() == 0.);

  // lambda_n = 1, beta = 1, J_n = -2: C_n = 1 - [1 - 2]_+ = 1
  Eigen::VectorXd z(6);
  z << -2., 0., 0., 1., 0., 0.;
  const Eigen::VectorXd R = contact_residual(p.sys, p.data, z);
  CHECK((R.head(3) - Eigen::Vector3d(-1., 0., 0.)).norm() < 1e-15);
  CHECK((R.tail(3) - Eigen::Vector3d(1., 0., 0.)).norm() < 1e-15);

  // closed and sliding: lambda_t on the friction circle along the slip
  z << 0., 0.2, 0., 2., 0.5, 0.;
  CHECK((contact_residual(p.sys, p.data, z).tail(3) - Eigen::Vector3d(0., 0., 0.)).norm() < 1e-15);
}

TEST_CASE("tiny problems with closed-form solutions")
{
  SUBCASE("contact with slip")
  {
    const TinyProblem p(1., Eigen::Vector3d(2., 0.5, 0.), 0.3);
    const ContactSolution s = newton_solve(p.sys, p.data, {});
    CHECK((s.u - Eigen::Vector3d(0., 0.2, 0.)).norm() < 1e-12);
    CHECK((s.lambda[0] - Eigen::Vector3d(2., 0.3, 0.)).norm() < 1e-12);
    CHECK(s.states[0] == ContactState::ContactSlip);
  }
  SUBCASE("open with stick")
  {
    const TinyProblem p(2., Eigen::Vector3d(-1., 0.1, 0.), 0.3);
    const ContactSolution s = newton_solve(p.sys, p.data, {});
    CHECK((s.u - Eigen::Vector3d(-0.5, 0., 0.)).norm() < 1e-12);
    CHECK((s.lambda[0] - Eigen::Vector3d(0., 0.1, 0.)).norm() < 1e-12);
    CHECK(s.states[0] == ContactState::OpenStick);
  }
  SUBCASE("frictionless contact")
  {
    const TinyProblem p(1., Eigen::Vector3d(1., -0.4, 0.7), 0.);
    const ContactSolution s = newton_solve(p.sys, p.data, {});
    CHECK((s.u - Eigen::Vector3d(0., -0.4, 0.7)).norm() < 1e-12);
    CHECK((s.lambda[0] - Eigen::Vector3d(1., 0., 0.)).norm() < 1e-12);
    CHECK(s.states[0] == ContactState::ContactSlip);
  }
}

TEST_CASE("face classification")
{
  const Eigen::Vector3d n = Eigen::Vector3d::UnitZ();
  CHECK(classify_face({1., 0., 2.}, {0.1, 0., 0.}, n, 1., 1.) == ContactState::ContactSlip);
  CHECK(classify_face({0.2, 0., 2.}, {0., 0., 0.}, n, 1., 1.) == ContactState::ContactStick);
  CHECK(classify_face({0., 0., 0.}, {0., 0., -0.3}, n, 1., 1.) == ContactState::OpenStick);
  CHECK(classify_face({0., 0., 0.}, {0., 0., -0.3}, n, 0., 1.) == ContactState::OpenSlip);
}

TEST_CASE("semi-smooth Jacobian against finite differences")
{
  const Problem p(case_tresca(), MeshFamily::Cartesian, 2);
  const ContactData data = p.data();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-1., 1.);
  const Eigen::Index n = static_cast<Eigen::Index>(p.sys.n_free() + 3 * data.normals.size());
  Eigen::VectorXd z(n), dir(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i) = 0.1 * d(rng);
    dir(i) = d(rng);
  }
  const SparseMatrix J = semismooth_jacobian(p.sys, data, z);
  const double h = 1e-7;
  const Eigen::VectorXd fd = (contact_residual(p.sys, data, z + h * dir) - contact_residual(p.sys, data, z - h * dir)) / (2 * h);
  CHECK((fd - J * dir).norm() < 1e-6 * (J * dir).norm());
}

TEST_CASE("Newton on the manufactured cases")
{
  SUBCASE("without a fracture one step solves the linear problem")
  {
    ManufacturedCase c = case_quadratic_patch(MaterialParams::from_young(1., 0.3));
    RunOptions o;
    const RunResult r = run_case(c, o);
    CHECK(r.solution.iterations == 1);
    CHECK(r.solution.lambda.empty());
  }

  SUBCASE("Tresca: convergence, admissibility and the residual history")
  {
    const Problem p(case_tresca(), MeshFamily::Cartesian, 2);
    const ContactData data = p.data();
    const ContactSolution s = newton_solve(p.sys, data, {});
    CHECK(s.iterations <= 12);
    CHECK(s.residual_history.size() == static_cast<std::size_t>(s.iterations + 1));
    CHECK(s.residual_history.back() <= 1e-12 * s.residual_history.front() + 1e-14);
    CHECK(check_admissibility(s, data).worst() < 1e-9);
    // the shear sits on the friction bound everywhere; the fracture slides below z = 0 and stays shut above
    for (std::size_t i = 0; i < s.states.size(); ++i) {
      const Eigen::Vector3d &J = s.jump[i];
      CHECK(s.lambda[i].tail<2>().norm() == doctest::Approx(1.).epsilon(1e-9));
      CHECK(std::abs(J.x()) < 1e-11);
      if (p.mesh.mesh.face(p.mesh.fracture[i].face).center.z() < 0.)
        CHECK(J.tail<2>().norm() > 0.05);
      else
        CHECK(J.norm() < 1e-11);
    }
  }

  SUBCASE("the solution does not depend on the penalty")
  {
    const Problem p(case_tresca(), MeshFamily::Cartesian, 2);
    std::vector<ContactSolution> sols;
    for (double beta : {1., 1e3, 1e6}) {
      NewtonConfig cfg;
      cfg.beta_n = beta;
      sols.push_back(newton_solve(p.sys, p.data(cfg), cfg));
    }
    for (std::size_t k = 1; k < sols.size(); ++k) {
      CHECK((sols[k].u - sols[0].u).norm() < 1e-9 * sols[0].u.norm());
      for (std::size_t i = 0; i < sols[0].lambda.size(); ++i)
        CHECK((sols[k].lambda[i] - sols[0].lambda[i]).norm() < 1e-8);
    }
  }

  SUBCASE("the Schur-complement path agrees with Newton on the full Jacobian")
  {
    const Problem p(case_frictionless(), MeshFamily::Tetrahedral, 2);
    const ContactData data = p.data();
    const ContactSolution s = newton_solve(p.sys, data, {});
    const Eigen::Index n = static_cast<Eigen::Index>(p.sys.n_free() + 3 * data.normals.size());
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (int it = 0; it < 30; ++it) {
      const Eigen::VectorXd R = contact_residual(p.sys, data, z);
      if (R.norm() < 1e-11)
        break;
      Eigen::SparseLU<SparseMatrix> lu(semismooth_jacobian(p.sys, data, z));
      REQUIRE(lu.info() == Eigen::Success);
      z -= Eigen::VectorXd(lu.solve(R));
    }
    CHECK(contact_residual(p.sys, data, z).norm() < 1e-10);
    const Eigen::VectorXd zs = stacked(p.sys, s);
    CHECK((zs - z).norm() < 1e-9 * z.norm());
  }

  SUBCASE("nearly incompressible material")
  {
    const Problem p(case_incompressible(1e6), MeshFamily::Cartesian, 2);
    const ContactSolution s = newton_solve(p.sys, p.data(), {});
    CHECK(s.iterations <= 12);
  }

  SUBCASE("iteration cap and invalid settings")
  {
    const Problem p(case_tresca(), MeshFamily::Cartesian, 2);
    NewtonConfig cfg;
    cfg.max_iter = 1;
    cfg.step_tol = 0.;
    CHECK_THROWS_AS(newton_solve(p.sys, p.data(), cfg), SolverFailure);
    try {
      newton_solve(p.sys, p.data(), cfg);
    } catch (const SolverFailure &e) {
      CHECK(e.residual_history.size() == 2);
    }
    cfg.max_iter = 0;
    CHECK_THROWS_AS(newton_solve(p.sys, p.data(), cfg), std::invalid_argument);
    NewtonConfig bad;
    bad.beta_n = -1.;
    CHECK_THROWS_AS(p.data(bad), std::invalid_argument);
  }
}

TEST_CASE("frictionless problem mirrored across the fracture")
{
  const Problem p(case_frictionless(), MeshFamily::Cartesian, 2);
  const Problem q(mirrored(case_frictionless()), MeshFamily::Cartesian, 2);
  const ContactSolution s = newton_solve(p.sys, p.data(), {});
  const ContactSolution t = newton_solve(q.sys, q.data(), {});
  const Eigen::Vector3d R(-1., 1., 1.);

  const DofMap &dm = p.space->dofmap();
  const auto original = block_locations(p.mesh.mesh, dm, false);
  const auto image = block_locations(q.mesh.mesh, q.space->dofmap(), true);
  REQUIRE(original.size() == dm.n_blocks());
  REQUIRE(image.size() == dm.n_blocks());
  double worst = 0.;
  for (const auto &[key, b] : original) {
    REQUIRE(image.count(key) == 1);
    const Eigen::Vector3d ub = s.u.segment<3>(static_cast<Eigen::Index>(3 * b));
    const Eigen::Vector3d vb = t.u.segment<3>(static_cast<Eigen::Index>(3 * image.at(key)));
    worst = std::max(worst, (vb - R.cwiseProduct(ub)).norm());
  }
  CHECK(worst <= 1e-9 * s.u.cwiseAbs().maxCoeff());

  // fracture faces map onto themselves; the sides swap, so jump and multiplier become -R J and -R lambda
  REQUIRE(s.jump.size() == t.jump.size());
  for (std::size_t i = 0; i < s.jump.size(); ++i) {
    const Point3 ci = p.mesh.mesh.face(p.mesh.fracture[i].face).center;
    std::size_t j = 0;
    while (j < t.jump.size() && (q.mesh.mesh.face(q.mesh.fracture[j].face).center - ci).norm() > 1e-9)
      ++j;
    REQUIRE(j < t.jump.size());
    CHECK((t.jump[j] + R.cwiseProduct(s.jump[i])).norm() < 1e-9);
    CHECK((t.lambda[j] + R.cwiseProduct(s.lambda[i])).norm() < 1e-9);
    CHECK(t.jump[j].x() == doctest::Approx(s.jump[i].x()).epsilon(1e-9));
    CHECK(t.states[j] == s.states[i]);
  }
}
