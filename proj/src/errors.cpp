#include <ddrc/verification.hpp>

#include <cmath>

#include <ddrc/parallel.hpp>

namespace ddrc
{

  namespace
  {
    struct Sums
    {
      double diff = 0., ref = 0.;
    };

    double ratio(const Sums &s, bool &absolute)
    {
      absolute = !(s.ref > 0.);
      return absolute ? std::sqrt(s.diff) : std::sqrt(s.diff / s.ref);
    }
  } // namespace

  ErrorReport compute_errors(const DDRSpace &space, const ManufacturedCase &mcase, const ContactSolution &solution, int order)
  {
    const PolyMesh &mesh = space.mesh();
    const std::size_t nc = mesh.n_cells();
    if (static_cast<std::size_t>(solution.u.size()) != space.dofmap().n_dofs())
      throw std::invalid_argument("compute_errors: solution does not match the space");

    std::vector<Sums> su(nc), sg(nc);
    parallel_for(nc, [&](std::size_t c) {
      const CellOperators &op = space.operators(c);
      const Eigen::MatrixXd P = space.cell_potential(solution.u, c);
      const Point3 &ref = mesh.cell(c).center;
      for (const auto &qp : cell_quadrature(mesh, c, order)) {
        const VectorJet u = mcase.jets(qp.x, mcase.plus_side(ref));
        const Eigen::Vector3d uh = P.transpose() * op.cell_basis.values(qp.x);
        const Eigen::Matrix3d Gh = P.transpose() * op.cell_basis.gradients(qp.x);
        for (int i = 0; i < 3; ++i) {
          const auto &ui = u[static_cast<std::size_t>(i)];
          su[c].diff += qp.w * std::pow(ui.v - uh(i), 2);
          su[c].ref += qp.w * ui.v * ui.v;
          sg[c].diff += qp.w * (ui.g - Gh.row(i).transpose()).squaredNorm();
          sg[c].ref += qp.w * ui.g.squaredNorm();
        }
      }
    });
    Sums tu, tg, tj, tl;
    for (std::size_t c = 0; c < nc; ++c) {
      tu.diff += su[c].diff;
      tu.ref += su[c].ref;
      tg.diff += sg[c].diff;
      tg.ref += sg[c].ref;
    }

    const FractureNetwork &fr = space.fracture();
    const Eigen::Vector3d np = mcase.normal_plus();
    for (std::size_t i = 0; i < fr.size(); ++i) {
      const std::size_t f = fr[i].face;
      const Eigen::MatrixXd Jh = space.jump(solution.u, i);
      const MonomialBasis &fb = space.operators(fr[i].positive_cell).face_bases[mesh.local_face(fr[i].positive_cell, f)];
      const double lh = solution.lambda.at(i).dot(np);
      for (const auto &qp : face_quadrature(mesh, f, order)) {
        const Eigen::Vector3d J = mcase.jump(qp.x);
        tj.diff += qp.w * (J - Jh.transpose() * fb.values(qp.x)).squaredNorm();
        tj.ref += qp.w * J.squaredNorm();
        const double ln = mcase.traction(qp.x).dot(np);
        tl.diff += qp.w * (ln - lh) * (ln - lh);
        tl.ref += qp.w * ln * ln;
      }
    }

    ErrorReport r;
    r.e_u = ratio(tu, r.absolute_u);
    r.e_grad = ratio(tg, r.absolute_grad);
    r.e_jump = ratio(tj, r.absolute_jump);
    r.e_lambda_n = ratio(tl, r.absolute_lambda_n);
    r.abs_u = std::sqrt(tu.diff);
    r.abs_grad = std::sqrt(tg.diff);
    r.abs_jump = std::sqrt(tj.diff);
    r.abs_lambda_n = std::sqrt(tl.diff);
    return r;
  }

} // namespace ddrc
