#include <ddrc/ddr_space.hpp>

namespace ddrc
{

  namespace
  {
    using RowVec = Eigen::RowVectorXd;

    Eigen::MatrixXd block_solve(const Eigen::MatrixXd &M, const Eigen::MatrixXd &rhs, Eigen::Index nblocks, const std::string &what)
    {
      const Eigen::Index n = M.rows();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      lu.setThreshold(1e-13);
      if (!lu.isInvertible())
        throw NumericalError("singular system in " + what);
      Eigen::MatrixXd out(rhs.rows(), rhs.cols());
      for (Eigen::Index k = 0; k < nblocks; ++k)
        out.middleRows(k * n, n) = lu.solve(rhs.middleRows(k * n, n));
      return out;
    }
  } // namespace

  CellOperators build_cell_operators(const PolyMesh &mesh, std::size_t iC, const ReconstructionOptions &options)
  {
    const MeshCell &C = mesh.cell(iC);
    const int order = options.quadrature_order;

    CellOperators op;
    op.cell = iC;
    op.n_vertices = C.vertices.size();
    op.n_edges = C.edges.size();
    op.n_faces = C.faces.size();
    const auto ns = static_cast<Eigen::Index>(op.n_local());
    const auto cdof = static_cast<Eigen::Index>(op.cell_index());

    // Edge potentials
    std::vector<QuadRule> edge_quad(op.n_edges);
    for (std::size_t j = 0; j < op.n_edges; ++j) {
      const std::size_t e = C.edges[j];
      const MeshEdge &E = mesh.edge(e);
      op.edge_bases.push_back(MonomialBasis::edge(mesh, e, 2));
      edge_quad[j] = edge_quadrature(mesh, e, order);
      const auto a = static_cast<Eigen::Index>(mesh.local_vertex(iC, E.vertices[0]));
      const auto b = static_cast<Eigen::Index>(mesh.local_vertex(iC, E.vertices[1]));
      const auto m = static_cast<Eigen::Index>(op.edge_index(j));
      Eigen::MatrixXd EP = Eigen::MatrixXd::Zero(3, ns);
      EP(0, m) += 1.5;
      EP(0, a) -= 0.25;
      EP(0, b) -= 0.25;
      EP(1, a) -= 0.5;
      EP(1, b) += 0.5;
      EP(2, a) += 0.75;
      EP(2, b) += 0.75;
      EP(2, m) -= 1.5;
      op.edge_potential.push_back(EP);
    }

    // Face gradients and potentials
    std::vector<QuadRule> face_quad(op.n_faces);
    for (std::size_t iF = 0; iF < op.n_faces; ++iF) {
      const std::size_t f = C.faces[iF];
      const MeshFace &F = mesh.face(f);
      const MonomialBasis fb = MonomialBasis::face(mesh, f, 2);
      op.face_bases.push_back(fb);
      face_quad[iF] = face_quadrature(mesh, f, order);
      const auto fdof = static_cast<Eigen::Index>(op.face_index(iF));

      Eigen::Matrix3d M1 = Eigen::Matrix3d::Zero();
      Eigen::MatrixXd rhsG = Eigen::MatrixXd::Zero(9, ns);
      Eigen::MatrixXd lhsP = Eigen::MatrixXd::Zero(6, 6);
      for (const auto &qp : face_quad[iF]) {
        const Eigen::VectorXd psi = fb.values(qp.x);
        const Eigen::MatrixX3d dpsi = fb.gradients(qp.x);
        const Eigen::Vector3d phi = psi.head<3>();
        M1.noalias() += qp.w * phi * phi.transpose();
        for (int k = 0; k < 3; ++k)
          for (int b = 0; b < 3; ++b)
            rhsG(3 * k + b, fdof) -= qp.w * dpsi(b, k);
        const Eigen::Vector3d d = qp.x - F.center;
        for (int c = 0; c < 6; ++c) {
          const double div_eta = 2. * psi(c) + d.dot(dpsi.row(c).transpose());
          lhsP.row(c) += qp.w * div_eta * psi.transpose();
        }
      }

      // Boundary terms along the edges of the face
      Eigen::MatrixXd rhsP = Eigen::MatrixXd::Zero(6, ns);
      for (std::size_t iE = 0; iE < F.edges.size(); ++iE) {
        const std::size_t e = F.edges[iE];
        const std::size_t je = mesh.local_edge(iC, e);
        const VectorRd nse = mesh.face_edge_normal(f, iE);
        for (const auto &qp : edge_quad[je]) {
          const RowVec val = op.edge_bases[je].values(qp.x).transpose() * op.edge_potential[je];
          const Eigen::VectorXd psi = fb.values(qp.x);
          for (int k = 0; k < 3; ++k)
            for (int b = 0; b < 3; ++b)
              rhsG.row(3 * k + b) += (qp.w * psi(b) * nse(k)) * val;
          const double dn = (qp.x - F.center).dot(nse);
          for (int c = 0; c < 6; ++c)
            rhsP.row(c) += (qp.w * psi(c) * dn) * val;
        }
      }
      const Eigen::MatrixXd FG = block_solve(M1, rhsG, 3, "face gradient Gram matrix");
      op.face_gradient.push_back(FG);

      for (const auto &qp : face_quad[iF]) {
        const Eigen::VectorXd psi = fb.values(qp.x);
        const Eigen::Vector3d d = qp.x - F.center;
        RowVec Gd = RowVec::Zero(ns);
        for (int k = 0; k < 3; ++k)
          for (int b = 0; b < 3; ++b)
            Gd += (d(k) * psi(b)) * FG.row(3 * k + b);
        for (int c = 0; c < 6; ++c)
          rhsP.row(c) -= (qp.w * psi(c)) * Gd;
      }
      op.face_potential.push_back(solve_checked(lhsP, rhsP, "face potential system"));
    }

    // Cell gradient and potential
    op.cell_basis = MonomialBasis::cell(mesh, iC, 2);
    const MonomialBasis &cb = op.cell_basis;
    const QuadRule cell_quad = cell_quadrature(mesh, iC, order);
    Eigen::Matrix4d M1K = Eigen::Matrix4d::Zero();
    Eigen::MatrixXd rhsG = Eigen::MatrixXd::Zero(12, ns);
    Eigen::MatrixXd lhsP = Eigen::MatrixXd::Zero(10, 10);
    for (const auto &qp : cell_quad) {
      const Eigen::VectorXd psi = cb.values(qp.x);
      const Eigen::MatrixX3d dpsi = cb.gradients(qp.x);
      const Eigen::Vector4d phi = psi.head<4>();
      M1K.noalias() += qp.w * phi * phi.transpose();
      for (int k = 0; k < 3; ++k)
        for (int b = 0; b < 4; ++b)
          rhsG(4 * k + b, cdof) -= qp.w * dpsi(b, k);
      const Eigen::Vector3d d = qp.x - C.center;
      for (int c = 0; c < 10; ++c) {
        const double div_eta = 3. * psi(c) + d.dot(dpsi.row(c).transpose());
        lhsP.row(c) += qp.w * div_eta * psi.transpose();
      }
    }
    Eigen::MatrixXd rhsP = Eigen::MatrixXd::Zero(10, ns);
    for (std::size_t iF = 0; iF < op.n_faces; ++iF) {
      const VectorRd nK = mesh.cell_face_normal(iC, iF);
      for (const auto &qp : face_quad[iF]) {
        const RowVec val = op.face_bases[iF].values(qp.x).transpose() * op.face_potential[iF];
        const Eigen::VectorXd psi = cb.values(qp.x);
        for (int k = 0; k < 3; ++k)
          for (int b = 0; b < 4; ++b)
            rhsG.row(4 * k + b) += (qp.w * psi(b) * nK(k)) * val;
        const double dn = (qp.x - C.center).dot(nK);
        for (int c = 0; c < 10; ++c)
          rhsP.row(c) += (qp.w * psi(c) * dn) * val;
      }
    }
    op.cell_gradient = block_solve(M1K, rhsG, 3, "cell gradient Gram matrix");
    for (const auto &qp : cell_quad) {
      const Eigen::VectorXd psi = cb.values(qp.x);
      const Eigen::Vector3d d = qp.x - C.center;
      RowVec Gd = RowVec::Zero(ns);
      for (int k = 0; k < 3; ++k)
        for (int b = 0; b < 4; ++b)
          Gd += (d(k) * psi(b)) * op.cell_gradient.row(4 * k + b);
      for (int c = 0; c < 10; ++c)
        rhsP.row(c) -= (qp.w * psi(c)) * Gd;
    }
    op.cell_potential = solve_checked(lhsP, rhsP, "cell potential system");

    // Stabilization: faces scaled by 1/h_K, edges unscaled, vertices by h_K
    const double hK = C.diameter;
    const double face_factor = options.stabilization_face_factor;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(ns, ns);
    for (std::size_t iF = 0; iF < op.n_faces; ++iF) {
      for (const auto &qp : face_quad[iF]) {
        const RowVec r = cb.values(qp.x).transpose() * op.cell_potential
                         - face_factor * (op.face_bases[iF].values(qp.x).transpose() * op.face_potential[iF]);
        S.noalias() += (qp.w / hK) * r.transpose() * r;
      }
    }
    for (std::size_t j = 0; j < op.n_edges; ++j) {
      for (const auto &qp : edge_quad[j]) {
        const RowVec r = cb.values(qp.x).transpose() * op.cell_potential
                         - op.edge_bases[j].values(qp.x).transpose() * op.edge_potential[j];
        S.noalias() += qp.w * r.transpose() * r;
      }
    }
    for (std::size_t j = 0; j < op.n_vertices; ++j) {
      RowVec r = cb.values(mesh.vertex(C.vertices[j]).coords).transpose() * op.cell_potential;
      r(static_cast<Eigen::Index>(j)) -= 1.;
      S.noalias() += hK * r.transpose() * r;
    }
    op.stabilization = 0.5 * (S + S.transpose());
    return op;
  }

} // namespace ddrc
