// Polynomial tools on edges, faces and cells: quadrature rules, scaled
// monomial bases, Gram matrices and L2 projections.

#ifndef DDRC_POLY_HPP
#define DDRC_POLY_HPP

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <ddrc/mesh.hpp>

namespace ddrc
{

  /// Raised when a local linear system is singular to working precision
  class NumericalError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  struct QuadraturePoint
  {
    Point3 x;
    double w;
  };
  using QuadRule = std::vector<QuadraturePoint>;

  /// Default quadrature order for all integrals
  inline constexpr int default_quadrature_order = 6;
  inline constexpr int max_quadrature_order = 10;

  /// Gauss-Jacobi nodes and weights on [-1,1] for the weight (1-x)^alpha, exact to degree 2n-1
  std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_jacobi(int n, double alpha);

  QuadRule segment_quadrature(const Point3 &a, const Point3 &b, int order);
  QuadRule triangle_quadrature(const Point3 &a, const Point3 &b, const Point3 &c, int order);
  QuadRule tetrahedron_quadrature(const Point3 &a, const Point3 &b, const Point3 &c, const Point3 &d, int order);

  QuadRule edge_quadrature(const PolyMesh &mesh, std::size_t edge, int order);
  /// Fan triangulation from the face barycenter (triangles are used as they are)
  QuadRule face_quadrature(const PolyMesh &mesh, std::size_t face, int order);
  /// Fan of tetrahedra from the cell barycenter over the triangulated faces
  QuadRule cell_quadrature(const PolyMesh &mesh, std::size_t cell, int order);

  /// Dimension of P^degree in `dim` variables
  std::size_t poly_dimension(int dim, int degree);

  /// Monomials ((x - center).axis_a / scale)^e_a up to a given total degree, ordered by degree
  class MonomialBasis
  {
  public:
    MonomialBasis(int dim, int degree, const Point3 &center, double scale, const Eigen::Matrix3d &axes);

    /// Edge basis in t in [-1,1]: center at the midpoint, axis along the edge, scale half the length
    static MonomialBasis edge(const PolyMesh &mesh, std::size_t e, int degree);
    /// Face basis in the frame (t1, t2): t1 along the first loop edge, t2 = n x t1; scaled by h_F
    static MonomialBasis face(const PolyMesh &mesh, std::size_t f, int degree);
    /// Cell basis in global axes, centred at the barycenter and scaled by h_K
    static MonomialBasis cell(const PolyMesh &mesh, std::size_t c, int degree);

    std::size_t size() const { return m_exponents.size(); }
    int degree() const { return m_degree; }
    int dimension() const { return m_dim; }
    const Point3 &center() const { return m_center; }
    double scale() const { return m_scale; }
    /// Column a is the a-th local axis (only the first dimension() columns are meaningful)
    const Eigen::Matrix3d &axes() const { return m_axes; }
    const std::vector<std::array<int, 3>> &exponents() const { return m_exponents; }

    Eigen::VectorXd values(const Point3 &x) const;
    /// Row i holds the gradient of function i in global coordinates
    Eigen::MatrixX3d gradients(const Point3 &x) const;

  private:
    int m_dim;
    int m_degree;
    Point3 m_center;
    double m_scale;
    Eigen::Matrix3d m_axes;
    std::vector<std::array<int, 3>> m_exponents;
  };

  Eigen::MatrixXd gram_matrix(const MonomialBasis &basis, const QuadRule &quad);

  /// Solve M X = rhs by full-pivot LU; throws NumericalError when a pivot falls below 1e-13 x the largest
  Eigen::MatrixXd solve_checked(const Eigen::MatrixXd &M, const Eigen::MatrixXd &rhs, const std::string &what);

  /// Coefficients (one column per component) of the L2 projection of f on span(basis)
  template <typename Function>
  Eigen::MatrixXd l2_project(const MonomialBasis &basis, const QuadRule &quad, Function &&f)
  {
    const auto f0 = f(quad.front().x);
    const Eigen::Index ncomp = Eigen::VectorXd(f0).size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()), ncomp);
    for (const auto &qp : quad) {
      const Eigen::VectorXd phi = basis.values(qp.x);
      const Eigen::VectorXd val = f(qp.x);
      M.noalias() += qp.w * phi * phi.transpose();
      rhs.noalias() += qp.w * phi * val.transpose();
    }
    return solve_checked(M, rhs, "L2 projection Gram matrix");
  }

  /// Evaluate a polynomial given by coefficients (one column per component) at x
  Eigen::VectorXd evaluate(const MonomialBasis &basis, const Eigen::MatrixXd &coeffs, const Point3 &x);

} // namespace ddrc

#endif // DDRC_POLY_HPP
