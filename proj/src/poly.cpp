#include <ddrc/poly.hpp>

#include <cmath>

namespace ddrc
{

  std::size_t poly_dimension(int dim, int degree)
  {
    if (degree < 0)
      return 0;
    const auto k = static_cast<std::size_t>(degree);
    switch (dim) {
    case 1:
      return k + 1;
    case 2:
      return (k + 1) * (k + 2) / 2;
    case 3:
      return (k + 1) * (k + 2) * (k + 3) / 6;
    default:
      throw std::invalid_argument("poly_dimension: dimension must be 1, 2 or 3");
    }
  }

  MonomialBasis::MonomialBasis(int dim, int degree, const Point3 &center, double scale, const Eigen::Matrix3d &axes)
      : m_dim(dim), m_degree(degree), m_center(center), m_scale(scale), m_axes(axes)
  {
    if (dim < 1 || dim > 3 || degree < 0)
      throw std::invalid_argument("MonomialBasis: invalid dimension or degree");
    if (!(scale > 0.))
      throw std::invalid_argument("MonomialBasis: scale must be positive");
    for (int d = 0; d <= degree; ++d) {
      for (int a = d; a >= 0; --a) {
        if (dim == 1) {
          if (a == d)
            m_exponents.push_back({a, 0, 0});
          continue;
        }
        for (int b = d - a; b >= 0; --b) {
          const int c = d - a - b;
          if (dim == 2 && c != 0)
            continue;
          m_exponents.push_back({a, b, c});
        }
      }
    }
  }

  MonomialBasis MonomialBasis::edge(const PolyMesh &mesh, std::size_t e, int degree)
  {
    const MeshEdge &E = mesh.edge(e);
    Eigen::Matrix3d axes = Eigen::Matrix3d::Zero();
    axes.col(0) = E.tangent;
    return MonomialBasis(1, degree, E.center, 0.5 * E.length, axes);
  }

  MonomialBasis MonomialBasis::face(const PolyMesh &mesh, std::size_t f, int degree)
  {
    const MeshFace &F = mesh.face(f);
    Eigen::Matrix3d axes;
    const VectorRd t1 = (mesh.vertex(F.vertices[1]).coords - mesh.vertex(F.vertices[0]).coords).normalized();
    axes.col(0) = t1;
    axes.col(1) = F.normal.cross(t1);
    axes.col(2) = F.normal;
    return MonomialBasis(2, degree, F.center, F.diameter, axes);
  }

  MonomialBasis MonomialBasis::cell(const PolyMesh &mesh, std::size_t c, int degree)
  {
    const MeshCell &C = mesh.cell(c);
    return MonomialBasis(3, degree, C.center, C.diameter, Eigen::Matrix3d::Identity());
  }

  namespace
  {
    inline double ipow(double x, int e)
    {
      double r = 1.;
      for (int i = 0; i < e; ++i)
        r *= x;
      return r;
    }
  } // namespace

  Eigen::VectorXd MonomialBasis::values(const Point3 &x) const
  {
    const Eigen::Vector3d xi = m_axes.transpose() * (x - m_center) / m_scale;
    Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < m_exponents.size(); ++i) {
      const auto &e = m_exponents[i];
      v(static_cast<Eigen::Index>(i)) = ipow(xi(0), e[0]) * ipow(xi(1), e[1]) * ipow(xi(2), e[2]);
    }
    return v;
  }

  Eigen::MatrixX3d MonomialBasis::gradients(const Point3 &x) const
  {
    const Eigen::Vector3d xi = m_axes.transpose() * (x - m_center) / m_scale;
    Eigen::MatrixX3d G(static_cast<Eigen::Index>(size()), 3);
    for (std::size_t i = 0; i < m_exponents.size(); ++i) {
      const auto &e = m_exponents[i];
      Eigen::Vector3d dlocal;
      for (int a = 0; a < 3; ++a) {
        if (e[static_cast<std::size_t>(a)] == 0) {
          dlocal(a) = 0.;
          continue;
        }
        double d = e[static_cast<std::size_t>(a)] * ipow(xi(a), e[static_cast<std::size_t>(a)] - 1);
        for (int b = 0; b < 3; ++b)
          if (b != a)
            d *= ipow(xi(b), e[static_cast<std::size_t>(b)]);
        dlocal(a) = d;
      }
      G.row(static_cast<Eigen::Index>(i)) = (m_axes * dlocal / m_scale).transpose();
    }
    return G;
  }

  Eigen::MatrixXd gram_matrix(const MonomialBasis &basis, const QuadRule &quad)
  {
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (const auto &qp : quad) {
      const Eigen::VectorXd phi = basis.values(qp.x);
      M.noalias() += qp.w * phi * phi.transpose();
    }
    return M;
  }

  Eigen::MatrixXd solve_checked(const Eigen::MatrixXd &M, const Eigen::MatrixXd &rhs, const std::string &what)
  {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) {
      throw NumericalError("singular system in " + what);
    }
    return lu.solve(rhs);
  }

  Eigen::VectorXd evaluate(const MonomialBasis &basis, const Eigen::MatrixXd &coeffs, const Point3 &x)
  {
    return coeffs.transpose() * basis.values(x);
  }

} // namespace ddrc
