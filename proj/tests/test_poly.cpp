#include <doctest.h>

#include <cmath>
#include <functional>

#include <ddrc/mesh_generators.hpp>
#include <ddrc/poly.hpp>

using namespace ddrc;

namespace
{
  double integrate(const QuadRule &q, const std::function<double(const Point3 &)> &f)
  {
    double s = 0.;
    for (const auto &qp : q)
      s += qp.w * f(qp.x);
    return s;
  }

  double factorial(int n) { return std::tgamma(n + 1.); }

  Box unit_box()
  {
    Box b;
    b.lo = Point3::Zero();
    b.hi = Point3::Ones();
    return b;
  }

  std::size_t face_with_center(const PolyMesh &mesh, const Point3 &x)
  {
    for (std::size_t f = 0; f < mesh.n_faces(); ++f)
      if ((mesh.face(f).center - x).norm() < 1e-12)
        return f;
    FAIL("face not found");
    return 0;
  }

  Eigen::Matrix3d rotation()
  {
    return (Eigen::AngleAxisd(0.4, Eigen::Vector3d::UnitZ()) * Eigen::AngleAxisd(-0.7, Eigen::Vector3d(1, 1, 0).normalized()))
        .toRotationMatrix();
  }
} // namespace

TEST_CASE("segment, triangle and tetrahedron rules")
{
  const QuadRule s = segment_quadrature(Point3::Zero(), Point3::UnitX(), 4);
  CHECK(integrate(s, [](const Point3 &x) { return std::pow(x.x(), 4); }) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(integrate(s, [](const Point3 &) { return 1.; }) == doctest::Approx(1.).epsilon(1e-14));

  // exactness on monomials of the reference tetrahedron: int x^a y^b z^c = a! b! c! / (a+b+c+3)!
  for (int order = 1; order <= max_quadrature_order; ++order) {
    const QuadRule t = tetrahedron_quadrature(Point3::Zero(), Point3::UnitX(), Point3::UnitY(), Point3::UnitZ(), order);
    const QuadRule tri = triangle_quadrature(Point3::Zero(), Point3::UnitX(), Point3::UnitY(), order);
    for (int a = 0; a <= order; ++a)
      for (int b = 0; a + b <= order; ++b) {
        const double tri_exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK(integrate(tri, [&](const Point3 &x) { return std::pow(x.x(), a) * std::pow(x.y(), b); }) ==
              doctest::Approx(tri_exact).epsilon(1e-13));
        for (int c = 0; a + b + c <= order; ++c) {
          const double exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
          CHECK(integrate(t, [&](const Point3 &x) {
                  return std::pow(x.x(), a) * std::pow(x.y(), b) * std::pow(x.z(), c);
                }) == doctest::Approx(exact).epsilon(1e-12));
        }
      }
  }
}

TEST_CASE("Gauss-Jacobi rules")
{
  const auto [x0, w0] = gauss_jacobi(3, 0.);
  CHECK(w0.sum() == doctest::Approx(2.));
  CHECK((w0.array() * x0.array().pow(4)).sum() == doctest::Approx(0.4));
  const auto [x1, w1] = gauss_jacobi(2, 1.);
  CHECK((w1.array() * x1.array().square()).sum() == doctest::Approx(2. / 3.));
  const auto [x2, w2] = gauss_jacobi(2, 2.);
  CHECK(w2.sum() == doctest::Approx(8. / 3.));
  CHECK((x2.array().abs() < 1.).all());
}

TEST_CASE("mesh face and cell rules")
{
  const FracturedMesh m = build_cartesian(1, unit_box(), {});
  const std::size_t bottom = face_with_center(m.mesh, Point3(0.5, 0.5, 0.));
  const QuadRule fq = face_quadrature(m.mesh, bottom, 6);
  CHECK(integrate(fq, [](const Point3 &x) { return x.x() * x.x() * std::pow(x.y(), 4); }) ==
        doctest::Approx(1. / 15.).epsilon(1e-13));
  const QuadRule cq = cell_quadrature(m.mesh, 0, 6);
  CHECK(integrate(cq, [](const Point3 &x) { return x.x() * x.x() * x.y() * x.y() * x.z() * x.z(); }) ==
        doctest::Approx(1. / 27.).epsilon(1e-13));

  const QuadRule eq = edge_quadrature(m.mesh, 0, 6);
  CHECK(integrate(eq, [](const Point3 &) { return 1.; }) == doctest::Approx(1.));

  // perturbed cells: volumes match the mesh geometry
  const FracturedMesh h = build_hexacut(2, Box{}, {}, 9, 0.25);
  for (std::size_t c = 0; c < h.mesh.n_cells(); ++c)
    CHECK(integrate(cell_quadrature(h.mesh, c, 4), [](const Point3 &) { return 1.; }) ==
          doctest::Approx(h.mesh.cell(c).volume).epsilon(1e-12));
}

TEST_CASE("monomial bases")
{
  CHECK(poly_dimension(1, 2) == 3);
  CHECK(poly_dimension(2, 2) == 6);
  CHECK(poly_dimension(3, 2) == 10);
  CHECK(poly_dimension(3, 3) == 20);

  const MonomialBasis b(3, 3, Point3(0.1, -0.2, 0.3), 0.7, rotation());
  CHECK(b.size() == 20);
  const Eigen::VectorXd v = b.values(Point3(0.1, -0.2, 0.3));
  CHECK(v(0) == 1.);
  CHECK(v.tail(19).norm() == 0.);
  // ordered by degree
  for (std::size_t i = 1; i < b.size(); ++i) {
    const auto &e0 = b.exponents()[i - 1], &e1 = b.exponents()[i];
    CHECK(e0[0] + e0[1] + e0[2] <= e1[0] + e1[1] + e1[2]);
  }

  // gradients against central differences
  const Point3 x(0.4, 0.25, -0.6);
  const Eigen::MatrixX3d G = b.gradients(x);
  const double eps = 1e-6;
  for (int k = 0; k < 3; ++k) {
    const Point3 d = eps * Point3::Unit(k);
    const Eigen::VectorXd fd = (b.values(x + d) - b.values(x - d)) / (2 * eps);
    CHECK((fd - G.col(k)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("L2 projections")
{
  SUBCASE("constant and linear projections on segments")
  {
    const MonomialBasis p0(1, 0, Point3(0.5, 0, 0), 0.5, Eigen::Matrix3d::Identity());
    const QuadRule q01 = segment_quadrature(Point3::Zero(), Point3::UnitX(), 4);
    const Eigen::MatrixXd c0 = l2_project(p0, q01, [](const Point3 &x) { return Eigen::VectorXd::Constant(1, x.x()); });
    CHECK(c0(0, 0) == doctest::Approx(0.5));

    const MonomialBasis p1(1, 1, Point3::Zero(), 1., Eigen::Matrix3d::Identity());
    const QuadRule qm = segment_quadrature(-Point3::UnitX(), Point3::UnitX(), 4);
    const Eigen::MatrixXd c1 = l2_project(p1, qm, [](const Point3 &x) { return Eigen::VectorXd::Constant(1, x.x() * x.x()); });
    for (double t : {-1., -0.3, 0.8})
      CHECK(evaluate(p1, c1, Point3(t, 0, 0))(0) == doctest::Approx(1. / 3.));
  }

  const FracturedMesh m = build_hexacut(2, Box{}, {}, 2, 0.2);
  const std::size_t c = 3;
  const MonomialBasis cell = MonomialBasis::cell(m.mesh, c, 2);
  const QuadRule cq = cell_quadrature(m.mesh, c, 8);
  const auto f = [](const Point3 &x) -> Eigen::VectorXd {
    return Eigen::Vector2d(std::sin(x.x()) * std::exp(x.y()) + x.z(), x.x() * x.y() * x.z());
  };

  SUBCASE("polynomials are fixed points")
  {
    const MonomialBasis cubic = MonomialBasis::cell(m.mesh, c, 3);
    const auto q = [](const Point3 &x) -> Eigen::VectorXd {
      return Eigen::VectorXd::Constant(1, 1. - 2. * x.x() * x.y() * x.z() + x.y() * x.y() * x.y());
    };
    const Eigen::MatrixXd coeffs = l2_project(cubic, cq, q);
    for (const auto &qp : cq)
      CHECK(evaluate(cubic, coeffs, qp.x)(0) == doctest::Approx(q(qp.x)(0)).epsilon(1e-11));
  }

  SUBCASE("idempotence and orthogonality")
  {
    const Eigen::MatrixXd coeffs = l2_project(cell, cq, f);
    const Eigen::MatrixXd again = l2_project(cell, cq, [&](const Point3 &x) { return evaluate(cell, coeffs, x); });
    CHECK((again - coeffs).cwiseAbs().maxCoeff() < 1e-11);
    Eigen::MatrixXd residual = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cell.size()), 2);
    for (const auto &qp : cq)
      residual += qp.w * cell.values(qp.x) * (f(qp.x) - evaluate(cell, coeffs, qp.x)).transpose();
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("frame independence")
  {
    const MonomialBasis rotated(3, 2, m.mesh.cell(c).center + Point3(0.01, 0.02, 0.), 0.3, rotation());
    const Eigen::MatrixXd a = l2_project(cell, cq, f);
    const Eigen::MatrixXd b = l2_project(rotated, cq, f);
    for (const auto &qp : cq)
      CHECK((evaluate(cell, a, qp.x) - evaluate(rotated, b, qp.x)).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("singular systems are reported")
{
  Eigen::MatrixXd M = Eigen::MatrixXd::Ones(3, 3);
  CHECK_THROWS_AS(solve_checked(M, Eigen::MatrixXd::Ones(3, 1), "test"), NumericalError);
  M = Eigen::MatrixXd::Identity(3, 3) * 1e-8;
  CHECK(solve_checked(M, Eigen::MatrixXd::Ones(3, 1), "test")(1, 0) == doctest::Approx(1e8));
}
