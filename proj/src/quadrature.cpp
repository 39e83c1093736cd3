#include <ddrc/poly.hpp>

#include <cmath>

#include <Eigen/Eigenvalues>

namespace ddrc
{

  std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_jacobi(int n, double alpha)
  {
    if (n < 1)
      throw std::invalid_argument("gauss_jacobi: need at least one node");
    // Golub-Welsch on the Jacobi matrix of the (alpha, 0) polynomials
    const double beta = 0.;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      const double s = 2. * k + alpha + beta;
      J(k, k) = (k == 0) ? (beta - alpha) / (alpha + beta + 2.) : (beta * beta - alpha * alpha) / (s * (s + 2.));
      if (k > 0) {
        const double num = 4. * k * (k + alpha) * (k + beta) * (k + alpha + beta);
        const double den = s * s * (s + 1.) * (s - 1.);
        J(k, k - 1) = J(k - 1, k) = std::sqrt(num / den);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::pow(2., alpha + beta + 1.) * std::tgamma(alpha + 1.) * std::tgamma(beta + 1.) / std::tgamma(alpha + beta + 2.);
    Eigen::VectorXd nodes = es.eigenvalues();
    Eigen::VectorXd weights(n);
    for (int k = 0; k < n; ++k)
      weights(k) = mu0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
    return {nodes, weights};
  }

  namespace
  {
    void check_order(int order)
    {
      if (order < 0 || order > max_quadrature_order)
        throw std::invalid_argument("quadrature order must lie in [0, " + std::to_string(max_quadrature_order) + "]");
    }

    int points_for(int degree)
    {
      return std::max(1, (degree + 2) / 2);
    }

    // Cache of reference rules, built once per order (construction is thread-safe for function statics)
    struct ReferenceRules
    {
      std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> legendre, jacobi1, jacobi2;
      ReferenceRules()
      {
        for (int k = 0; k <= max_quadrature_order; ++k) {
          const int n = points_for(k);
          legendre.push_back(gauss_jacobi(n, 0.));
          jacobi1.push_back(gauss_jacobi(n, 1.));
          jacobi2.push_back(gauss_jacobi(n, 2.));
        }
      }
    };

    const ReferenceRules &reference_rules()
    {
      static const ReferenceRules rules;
      return rules;
    }
  } // namespace

  QuadRule segment_quadrature(const Point3 &a, const Point3 &b, int order)
  {
    check_order(order);
    const auto &[x, w] = reference_rules().legendre[static_cast<std::size_t>(order)];
    const double len = (b - a).norm();
    QuadRule q;
    q.reserve(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i)
      q.push_back({a + 0.5 * (1. + x(i)) * (b - a), 0.5 * len * w(i)});
    return q;
  }

  QuadRule triangle_quadrature(const Point3 &a, const Point3 &b, const Point3 &c, int order)
  {
    check_order(order);
    const auto &R = reference_rules();
    const auto &[u, wu] = R.jacobi1[static_cast<std::size_t>(order)];
    const auto &[v, wv] = R.legendre[static_cast<std::size_t>(order)];
    const double twice_area = (b - a).cross(c - a).norm();
    QuadRule q;
    q.reserve(static_cast<std::size_t>(u.size() * v.size()));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double eta = 0.5 * (1. + u(i));
      for (Eigen::Index j = 0; j < v.size(); ++j) {
        const double xi = 0.5 * (1. + v(j)) * (1. - eta);
        q.push_back({a + xi * (b - a) + eta * (c - a), twice_area * wu(i) * wv(j) / 8.});
      }
    }
    return q;
  }

  QuadRule tetrahedron_quadrature(const Point3 &a, const Point3 &b, const Point3 &c, const Point3 &d, int order)
  {
    check_order(order);
    const auto &R = reference_rules();
    const auto &[r, wr] = R.jacobi2[static_cast<std::size_t>(order)];
    const auto &[s, ws] = R.jacobi1[static_cast<std::size_t>(order)];
    const auto &[t, wt] = R.legendre[static_cast<std::size_t>(order)];
    const double six_vol = std::abs((b - a).dot((c - a).cross(d - a)));
    QuadRule q;
    q.reserve(static_cast<std::size_t>(r.size() * s.size() * t.size()));
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double zeta = 0.5 * (1. + r(i));
      for (Eigen::Index j = 0; j < s.size(); ++j) {
        const double eta = 0.5 * (1. + s(j)) * (1. - zeta);
        for (Eigen::Index k = 0; k < t.size(); ++k) {
          const double xi = 0.5 * (1. + t(k)) * (1. - zeta - eta);
          q.push_back({a + xi * (b - a) + eta * (c - a) + zeta * (d - a), six_vol * wr(i) * ws(j) * wt(k) / 64.});
        }
      }
    }
    return q;
  }

  //------------------------------------------------------------------------------

  QuadRule edge_quadrature(const PolyMesh &mesh, std::size_t edge, int order)
  {
    const MeshEdge &E = mesh.edge(edge);
    return segment_quadrature(mesh.vertex(E.vertices[0]).coords, mesh.vertex(E.vertices[1]).coords, order);
  }

  namespace
  {
    // Triangles covering a face, oriented like the face loop
    std::vector<std::array<Point3, 3>> face_triangles(const PolyMesh &mesh, std::size_t face)
    {
      const MeshFace &F = mesh.face(face);
      const std::size_t n = F.vertices.size();
      std::vector<std::array<Point3, 3>> tris;
      if (n == 3) {
        tris.push_back({mesh.vertex(F.vertices[0]).coords, mesh.vertex(F.vertices[1]).coords, mesh.vertex(F.vertices[2]).coords});
        return tris;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const Point3 &p1 = mesh.vertex(F.vertices[i]).coords;
        const Point3 &p2 = mesh.vertex(F.vertices[(i + 1) % n]).coords;
        if ((p1 - F.center).cross(p2 - F.center).dot(F.normal) <= 0.) {
          throw MeshError("face " + std::to_string(face) + " is not star-shaped with respect to its barycenter");
        }
        tris.push_back({F.center, p1, p2});
      }
      return tris;
    }
  } // namespace

  QuadRule face_quadrature(const PolyMesh &mesh, std::size_t face, int order)
  {
    QuadRule q;
    for (const auto &t : face_triangles(mesh, face)) {
      QuadRule qt = triangle_quadrature(t[0], t[1], t[2], order);
      q.insert(q.end(), qt.begin(), qt.end());
    }
    return q;
  }

  QuadRule cell_quadrature(const PolyMesh &mesh, std::size_t cell, int order)
  {
    const MeshCell &C = mesh.cell(cell);
    QuadRule q;
    for (std::size_t iF = 0; iF < C.faces.size(); ++iF) {
      for (const auto &t : face_triangles(mesh, C.faces[iF])) {
        const double vol6 = C.orientations[iF] * (t[0] - C.center).dot((t[1] - C.center).cross(t[2] - C.center));
        if (vol6 <= 0.) {
          throw MeshError("cell " + std::to_string(cell) + " is not star-shaped with respect to its barycenter");
        }
        QuadRule qt = tetrahedron_quadrature(C.center, t[0], t[1], t[2], order);
        q.insert(q.end(), qt.begin(), qt.end());
      }
    }
    return q;
  }

} // namespace ddrc
