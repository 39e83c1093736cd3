#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <ddrc/verification.hpp>

using namespace ddrc;

namespace
{
  // Random points of (-1,1)^3 kept away from the fracture and from the branch plane z = 0
  std::vector<Point3> sample_points(std::uint64_t seed, int count)
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-0.95, 0.95);
    std::vector<Point3> out;
    while (static_cast<int>(out.size()) < count) {
      const Point3 x(d(rng), d(rng), d(rng));
      if (std::abs(x.x()) > 0.01 && std::abs(x.z()) > 0.01)
        out.push_back(x);
    }
    return out;
  }

  // Fourth-order central difference of f along e_k
  template <typename F>
  auto central(const F &f, const Point3 &x, int k, double h)
  {
    const Point3 e = h * Point3::Unit(k);
    return (-f(x + 2 * e) + 8. * f(x + e) - 8. * f(x - e) + f(x - 2 * e)) / (12. * h);
  }

  std::vector<ManufacturedCase> all_cases()
  {
    return {case_frictionless(), case_tresca(), case_incompressible(1.), case_incompressible(100.),
            case_quadratic_patch(MaterialParams::from_young(1., 0.3))};
  }

  // Fracture point (0, y, z) seen from both sides
  struct Sides
  {
    Eigen::Matrix3d sigma_plus, sigma_minus;
    Eigen::Vector3d lambda, jump;
  };

  Sides at_fracture(const ManufacturedCase &c, double y, double z)
  {
    const Point3 x(0., y, z);
    return {c.stress(x, Point3(-1, y, z)), c.stress(x, Point3(1, y, z)), c.traction(x), c.jump(x)};
  }
} // namespace

TEST_CASE("exact derivatives against finite differences")
{
  const double h = 1e-4;
  for (const ManufacturedCase &c : all_cases()) {
    INFO(c.name);
    for (const Point3 &x : sample_points(42, 20)) {
      const auto u = [&](const Point3 &p) { return c.displacement(p, x); };
      const auto s = [&](const Point3 &p) { return c.stress(p, x); };
      Eigen::Matrix3d grad;
      Eigen::Vector3d div_sigma = Eigen::Vector3d::Zero();
      for (int k = 0; k < 3; ++k) {
        grad.col(k) = central(u, x, k, h);
        div_sigma += Eigen::Matrix3d(central(s, x, k, h)).col(k);
      }
      const Eigen::Matrix3d G = c.gradient(x, x);
      CHECK((grad - G).cwiseAbs().maxCoeff() < 1e-9 * std::max(1., G.cwiseAbs().maxCoeff()));
      const Eigen::Vector3d f = c.body_force(x, x);
      CHECK((-div_sigma - f).cwiseAbs().maxCoeff() < 1e-8 * std::max(1., f.cwiseAbs().maxCoeff()));
      // sigma is symmetric
      CHECK((s(x) - s(x).transpose()).norm() < 1e-14 * std::max(1., s(x).norm()));
    }
  }
}

TEST_CASE("frictionless contact conditions on the fracture")
{
  const ManufacturedCase c = case_frictionless();
  for (double z : {-0.9, -0.4, -0.05, 0.05, 0.5, 0.95})
    for (double y : {-0.7, 0.1, 0.8}) {
      const Sides s = at_fracture(c, y, z);
      const Eigen::Vector3d n = c.normal_plus();
      // traction balance
      CHECK((s.sigma_plus * n - s.sigma_minus * n).norm() < 1e-12);
      // no shear
      CHECK(s.lambda.tail<2>().norm() < 1e-12);
      CHECK(s.jump.dot(n) == doctest::Approx(-std::pow(std::min(z, 0.), 4)));
      if (z < 0.) {
        CHECK(s.jump.dot(n) < 0.);
        CHECK(std::abs(s.lambda.dot(n)) < 1e-12);
      } else {
        CHECK(s.jump.norm() == 0.);
        CHECK(s.lambda.dot(n) >= 0.);
      }
    }
}

TEST_CASE("Tresca conditions on the fracture")
{
  for (const ManufacturedCase &c : {case_tresca(), case_incompressible(1.), case_incompressible(1e4)}) {
    INFO(c.name << " L=" << c.material.L);
    const double g = c.threshold;
    for (double z : {-0.9, -0.4, -0.05, 0.05, 0.5, 0.95})
      for (double y : {-0.7, 0.1, 0.8}) {
        const Sides s = at_fracture(c, y, z);
        const Eigen::Vector3d n = c.normal_plus();
        const double scale = std::max(1., s.sigma_plus.norm());
        CHECK((s.sigma_plus * n - s.sigma_minus * n).norm() < 1e-12 * scale);
        const double ln = s.lambda.dot(n), jn = s.jump.dot(n);
        const Eigen::Vector3d lt = s.lambda - ln * n, jt = s.jump - jn * n;
        CHECK(ln >= -1e-12 * scale);
        CHECK(jn <= 0.);
        CHECK(std::abs(ln * jn) < 1e-12 * scale);
        CHECK(lt.norm() <= g * (1. + 1e-12));
        // T = sigma n+ opposes the slip: T_t . [u]_t = -g |[u]_t|
        const Eigen::Vector3d T = s.sigma_plus * n;
        const Eigen::Vector3d Tt = T - T.dot(n) * n;
        CHECK(Tt.dot(jt) == doctest::Approx(-g * jt.norm()).epsilon(1e-12).scale(scale));
        if (z < 0.) {
          CHECK(jt.norm() > 0.);
          CHECK(lt.norm() == doctest::Approx(g).epsilon(1e-12));
        } else {
          CHECK(s.jump.norm() == 0.);
        }
      }
  }
}

TEST_CASE("branches join continuously across z = 0")
{
  for (const ManufacturedCase &c : all_cases()) {
    INFO(c.name);
    for (double x0 : {-0.6, 0.4})
      for (double y : {-0.3, 0.7}) {
        const Point3 above(x0, y, 1e-9), below(x0, y, -1e-9);
        CHECK((c.displacement(above, above) - c.displacement(below, below)).norm() < 1e-8);
        CHECK((c.gradient(above, above) - c.gradient(below, below)).norm() < 1e-8);
      }
  }
}

TEST_CASE("the incompressible case is divergence free up to 1/L")
{
  for (const Point3 &x : sample_points(7, 20)) {
    const double d4 = case_incompressible(1e4).gradient(x, x).trace();
    const double d6 = case_incompressible(1e6).gradient(x, x).trace();
    CHECK(std::abs(d4) < 1e-3);
    CHECK(1e4 * d4 == doctest::Approx(1e6 * d6).epsilon(1e-6));
  }
  CHECK_THROWS_AS(case_incompressible(0.), std::invalid_argument);
  CHECK_THROWS_AS(case_by_name("hertz"), std::invalid_argument);
  CHECK(case_by_name("incompressible", 50.).material.L == 50.);
}

TEST_CASE("error norms vanish on the interpolate of a quadratic field")
{
  const ManufacturedCase c = case_quadratic_patch(MaterialParams::from_young(1., 0.3));
  const FracturedMesh m = build_hexacut(2, Box{}, {}, 3, 0.2);
  const DDRSpace space(m.mesh, m.fracture);
  ContactSolution s;
  s.u = space.interpolate(c.displacement_field());
  const ErrorReport e = compute_errors(space, c, s);
  CHECK(e.e_u < 1e-12);
  CHECK(e.e_grad < 1e-12);
  CHECK(e.abs_u < 1e-12);
}

TEST_CASE("convergence study rows and CSV output")
{
  RunOptions o;
  const auto rows = convergence_study(case_frictionless(), {2, 4}, o);
  REQUIRE(rows.size() == 2);
  CHECK(std::isnan(rows[0].orders[0]));
  const double expected = std::log(rows[0].errors.e_grad / rows[1].errors.e_grad) / std::log(rows[0].h / rows[1].h);
  CHECK(rows[1].orders[2] == doctest::Approx(expected));
  CHECK(rows[1].orders[2] > 1.);
  CHECK(rows[1].n_cells == 64);

  std::ostringstream os;
  write_csv(os, rows);
  std::istringstream is(os.str());
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  CHECK(header == "case,family,level,n,h,n_cells,n_dofs,newton_iters,e_u,e_jump,e_grad,e_lambda_n,ord_u,ord_jump,ord_grad,"
                  "ord_lambda_n");
  CHECK(first.rfind("frictionless,cartesian,0,2,", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), ',') == 15);
  CHECK(first.substr(first.size() - 16) == ",nan,nan,nan,nan");

  // a failing level is recorded and the study goes on
  const auto mixed = convergence_study(case_frictionless(), {0, 2}, o);
  REQUIRE(mixed.size() == 2);
  CHECK(mixed[0].failed);
  CHECK_FALSE(mixed[0].message.empty());
  CHECK_FALSE(mixed[1].failed);
  CHECK(std::isnan(mixed[1].orders[2]));
  CHECK_THROWS_AS(convergence_study(case_frictionless(), {}, o), std::invalid_argument);
}

TEST_CASE("no locking at n = 2")
{
  RunOptions o;
  const double e1 = run_case(case_incompressible(1.), o).errors.e_grad;
  const double e4 = run_case(case_incompressible(1e4), o).errors.e_grad;
  CHECK(e4 / e1 > 0.8);
  CHECK(e4 / e1 < 1.25);
}
