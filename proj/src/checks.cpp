#include <ddrc/checks.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include <ddrc/ddr_space.hpp>
#include <ddrc/mesh_generators.hpp>
#include <ddrc/verification.hpp>

namespace ddrc
{

  std::string to_string(CheckStatus status)
  {
    switch (status) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Marginal:
      return "marginal";
    case CheckStatus::Fail:
      return "FAIL";
    }
    return "?";
  }

  namespace
  {
    CheckResult make_result(const std::string &name, double error, double default_tol, const CheckOptions &options)
    {
      CheckResult r;
      r.name = name;
      r.error = error;
      r.tolerance = options.tolerance.value_or(default_tol);
      if (std::isfinite(error) && error <= r.tolerance)
        r.status = CheckStatus::Pass;
      else if (std::isfinite(error) && error <= options.marginal_factor * r.tolerance)
        r.status = CheckStatus::Marginal;
      else
        r.status = CheckStatus::Fail;
      return r;
    }

    Eigen::MatrixXd random_matrix(std::mt19937_64 &rng, Eigen::Index rows, Eigen::Index cols)
    {
      std::uniform_real_distribution<double> d(-1., 1.);
      Eigen::MatrixXd M(rows, cols);
      for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
          M(i, j) = d(rng);
      return M;
    }

    /// Sum of row k's cell P1 coefficients for gradient component (i, k) evaluated at x
    Eigen::Matrix3d eval_cell_gradient(const CellOperators &op, const Eigen::MatrixXd &G, const Point3 &x)
    {
      const Eigen::VectorXd phi = op.cell_basis.values(x).head(4);
      Eigen::Matrix3d out;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
          out(i, k) = G.block(4 * k, i, 4, 1).col(0).dot(phi);
      return out;
    }

    struct Errors
    {
      double face_mean = 0., cell_mean = 0., gradient = 0., cell_pot = 0., edge_pot = 0., face_pot = 0., stab = 0.,
             normal_nullity = 0.;
    };

    void cell_identities(const PolyMesh &mesh, const CellOperators &op, int samples, std::mt19937_64 &rng, Errors &e)
    {
      const MeshCell &K = mesh.cell(op.cell);
      const auto nl = static_cast<Eigen::Index>(op.n_local());
      const QuadRule cq = cell_quadrature(mesh, op.cell, default_quadrature_order);
      std::vector<QuadRule> fq, eq;
      for (std::size_t f : K.faces)
        fq.push_back(face_quadrature(mesh, f, default_quadrature_order));
      for (std::size_t ed : K.edges)
        eq.push_back(edge_quadrature(mesh, ed, default_quadrature_order));

      for (int s = 0; s < samples; ++s) {
        // Means of the potentials reproduce the face and cell DOFs of arbitrary local vectors
        const Eigen::MatrixXd V = random_matrix(rng, nl, 3);
        for (std::size_t j = 0; j < op.n_faces; ++j) {
          const Eigen::MatrixXd P = op.face_potential[j] * V;
          Eigen::Vector3d mean = Eigen::Vector3d::Zero();
          double area = 0.;
          for (const auto &qp : fq[j]) {
            mean += qp.w * (P.transpose() * op.face_bases[j].values(qp.x));
            area += qp.w;
          }
          e.face_mean = std::max(e.face_mean, (mean / area - V.row(static_cast<Eigen::Index>(op.face_index(j))).transpose()).norm());
          const Eigen::Vector3d n = mesh.face(K.faces[j]).normal;
          const Eigen::MatrixXd FG = op.face_gradient[j] * V;
          for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 3; ++b) {
              double dot = 0.;
              for (int k = 0; k < 3; ++k)
                dot += FG(3 * k + b, i) * n(k);
              e.normal_nullity = std::max(e.normal_nullity, std::abs(dot));
            }
        }
        {
          const Eigen::MatrixXd P = op.cell_potential * V;
          Eigen::Vector3d mean = Eigen::Vector3d::Zero();
          double vol = 0.;
          for (const auto &qp : cq) {
            mean += qp.w * (P.transpose() * op.cell_basis.values(qp.x));
            vol += qp.w;
          }
          e.cell_mean = std::max(e.cell_mean, (mean / vol - V.row(static_cast<Eigen::Index>(op.cell_index())).transpose()).norm());
        }

        // Interpolates of quadratic fields are reproduced exactly
        const Eigen::MatrixXd Q = random_matrix(rng, 10, 3);
        const SidedField q = [&](const Point3 &x, const Point3 &) -> Eigen::Vector3d {
          return Q.transpose() * op.cell_basis.values(x);
        };
        const Eigen::MatrixXd U = component_matrix(interpolate_local(mesh, op, q));
        const Eigen::MatrixXd G = op.cell_gradient * U;
        const Eigen::MatrixXd P = op.cell_potential * U;
        for (const auto &qp : cq) {
          const Eigen::Matrix3d exact = Q.transpose() * op.cell_basis.gradients(qp.x);
          e.gradient = std::max(e.gradient, (eval_cell_gradient(op, G, qp.x) - exact).cwiseAbs().maxCoeff());
          e.cell_pot = std::max(e.cell_pot, (P.transpose() * op.cell_basis.values(qp.x) - q(qp.x, qp.x)).cwiseAbs().maxCoeff());
        }
        for (std::size_t j = 0; j < op.n_edges; ++j) {
          const Eigen::MatrixXd Pe = op.edge_potential[j] * U;
          for (const auto &qp : eq[j])
            e.edge_pot = std::max(e.edge_pot, (Pe.transpose() * op.edge_bases[j].values(qp.x) - q(qp.x, qp.x)).cwiseAbs().maxCoeff());
        }
        for (std::size_t j = 0; j < op.n_faces; ++j) {
          const Eigen::MatrixXd Pf = op.face_potential[j] * U;
          for (const auto &qp : fq[j])
            e.face_pot = std::max(e.face_pot, (Pf.transpose() * op.face_bases[j].values(qp.x) - q(qp.x, qp.x)).cwiseAbs().maxCoeff());
        }
        // S(I q, w) = 0 for every w, i.e. S I q = 0 componentwise
        const double scale = std::max(1., U.cwiseAbs().maxCoeff());
        e.stab = std::max(e.stab, (op.stabilization * U).cwiseAbs().maxCoeff() / scale);
      }
    }

    std::vector<std::pair<std::string, FracturedMesh>> check_meshes(std::uint64_t seed)
    {
      std::vector<std::pair<std::string, FracturedMesh>> out;
      out.emplace_back("cube", build_mesh(MeshFamily::Cartesian, 2, Box{}, {}));
      out.emplace_back("tet", build_mesh(MeshFamily::Tetrahedral, 2, Box{}, {}));
      out.emplace_back("hexacut", build_mesh(MeshFamily::HexaCut, 2, Box{}, {}, seed));
      return out;
    }
  } // namespace

  std::vector<CheckResult> operator_identity_checks(const CheckOptions &options)
  {
    if (options.samples < 1)
      throw std::invalid_argument("checks need at least one sample");
    ReconstructionOptions ropt;
    ropt.stabilization_face_factor = options.stabilization_face_factor;
    std::mt19937_64 rng(options.seed);
    std::vector<CheckResult> out;
    for (const auto &[label, fm] : check_meshes(options.seed)) {
      Errors e;
      for (std::size_t c = 0; c < fm.mesh.n_cells(); ++c)
        cell_identities(fm.mesh, build_cell_operators(fm.mesh, c, ropt), options.samples, rng, e);
      out.push_back(make_result(label + ": face potential mean = face DOF", e.face_mean, 1e-10, options));
      out.push_back(make_result(label + ": cell potential mean = cell DOF", e.cell_mean, 1e-10, options));
      out.push_back(make_result(label + ": cell gradient of I_h q = grad q", e.gradient, 1e-10, options));
      out.push_back(make_result(label + ": cell potential of I_h q = q", e.cell_pot, 1e-10, options));
      out.push_back(make_result(label + ": edge potential of I_h q = q", e.edge_pot, 1e-10, options));
      out.push_back(make_result(label + ": face potential of I_h q = q", e.face_pot, 1e-10, options));
      out.push_back(make_result(label + ": face gradient normal part = 0", e.normal_nullity, 1e-12, options));
      out.push_back(make_result(label + ": stabilization consistency", e.stab, 1e-10, options));
    }
    return out;
  }

  CheckResult fortin_check(const CheckOptions &options)
  {
    std::mt19937_64 rng(options.seed + 1);
    const MonomialBasis cubic(3, 3, Point3::Zero(), 1., Eigen::Matrix3d::Identity());
    double worst = 0.;
    for (const auto &entry : check_meshes(options.seed)) {
      const PolyMesh &mesh = entry.second.mesh;
      for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
        const CellOperators op = build_cell_operators(mesh, c);
        const QuadRule cq = cell_quadrature(mesh, c, default_quadrature_order);
        for (int s = 0; s < std::max(1, options.samples / 4); ++s) {
          const Eigen::MatrixXd C = random_matrix(rng, static_cast<Eigen::Index>(cubic.size()), 3);
          const SidedField u = [&](const Point3 &x, const Point3 &) -> Eigen::Vector3d {
            return C.transpose() * cubic.values(x);
          };
          const Eigen::MatrixXd G = op.cell_gradient * component_matrix(interpolate_local(mesh, op, u));
          Eigen::Vector4d r = Eigen::Vector4d::Zero();
          for (const auto &qp : cq) {
            const double div_u = (C.transpose() * cubic.gradients(qp.x)).trace();
            const double div_h = eval_cell_gradient(op, G, qp.x).trace();
            r += qp.w * (div_u - div_h) * op.cell_basis.values(qp.x).head(4);
          }
          worst = std::max(worst, r.cwiseAbs().maxCoeff());
        }
      }
    }
    return make_result("Fortin commutation of the divergence", worst, 1e-9, options);
  }

  std::vector<CheckResult> patch_test_checks(const CheckOptions &options)
  {
    std::vector<CheckResult> out;
    for (MeshFamily family : {MeshFamily::Cartesian, MeshFamily::Tetrahedral})
      for (double nu : {0.3, 0.49}) {
        RunOptions ro;
        ro.family = family;
        ro.n = 2;
        ro.reconstruction.stabilization_face_factor = options.stabilization_face_factor;
        const RunResult r = run_case(case_quadratic_patch(MaterialParams::from_young(1., nu)), ro);
        char nu_buf[16];
        std::snprintf(nu_buf, sizeof nu_buf, "%g", nu);
        out.push_back(make_result("patch test " + to_string(family) + " nu=" + nu_buf + ": e_u, e_grad",
                                  std::max(r.errors.e_u, r.errors.e_grad), 1e-9, options));
      }
    return out;
  }

  std::vector<CheckResult> run_property_checks(const CheckOptions &options)
  {
    std::vector<CheckResult> out = operator_identity_checks(options);
    out.push_back(fortin_check(options));
    if (options.include_patch_test) {
      const auto p = patch_test_checks(options);
      out.insert(out.end(), p.begin(), p.end());
    }
    return out;
  }

  bool all_passed(const std::vector<CheckResult> &results)
  {
    return std::all_of(results.begin(), results.end(), [](const CheckResult &r) { return r.status == CheckStatus::Pass; });
  }

} // namespace ddrc
