#include <ddrc/assembly.hpp>

#include <array>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include <ddrc/parallel.hpp>

namespace ddrc
{

  MaterialParams MaterialParams::from_young(double E, double nu)
  {
    if (!(E > 0.) || !(nu >= 0. && nu < 0.5))
      throw std::invalid_argument("material: need E > 0 and 0 <= nu < 0.5");
    MaterialParams p;
    p.G = E / (2. * (1. + nu));
    p.L = nu * E / ((1. + nu) * (1. - 2. * nu));
    return p;
  }

  MaterialParams MaterialParams::from_lame(double G, double L)
  {
    MaterialParams p;
    p.G = G;
    p.L = L;
    p.validate();
    return p;
  }

  void MaterialParams::validate() const
  {
    if (!(G > 0.) || !(L >= 0.))
      throw std::invalid_argument("material: need G > 0 and L >= 0");
  }

  Eigen::MatrixXd local_stiffness(const PolyMesh &mesh, const CellOperators &op, const MaterialParams &params)
  {
    const auto ns = static_cast<Eigen::Index>(op.n_local());
    const auto nv = 3 * ns;

    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    for (const auto &qp : cell_quadrature(mesh, op.cell, 2)) {
      const Eigen::Vector4d phi = op.cell_basis.values(qp.x).head<4>();
      M.noalias() += qp.w * phi * phi.transpose();
    }

    // grad[i][k] maps vector DOFs to the P1 coefficients of d u_i / d x_k
    auto grad = [&](int i, int k) {
      Eigen::MatrixXd Gik = Eigen::MatrixXd::Zero(4, nv);
      for (Eigen::Index j = 0; j < ns; ++j)
        Gik.col(3 * j + i) = op.cell_gradient.block(4 * k, j, 4, 1);
      return Gik;
    };
    std::array<std::array<Eigen::MatrixXd, 3>, 3> Gm;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        Gm[i][k] = grad(i, k);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nv, nv);
    Eigen::MatrixXd tr = Eigen::MatrixXd::Zero(4, nv);
    for (int i = 0; i < 3; ++i) {
      tr += Gm[i][i];
      for (int k = 0; k < 3; ++k) {
        const Eigen::MatrixXd eps = 0.5 * (Gm[i][k] + Gm[k][i]);
        A.noalias() += 2. * params.G * eps.transpose() * M * eps;
      }
    }
    A.noalias() += params.L * tr.transpose() * M * tr;

    const double mu1 = params.stabilization_weight();
    for (Eigen::Index a = 0; a < ns; ++a)
      for (Eigen::Index b = 0; b < ns; ++b)
        for (int i = 0; i < 3; ++i)
          A(3 * a + i, 3 * b + i) += mu1 * op.stabilization(a, b);
    return 0.5 * (A + A.transpose());
  }

  SystemBlocks assemble(const DDRSpace &space, const MaterialParams &params, const SidedField &f)
  {
    params.validate();
    const PolyMesh &mesh = space.mesh();
    const DofMap &dm = space.dofmap();
    const auto ndof = static_cast<Eigen::Index>(dm.n_dofs());
    const std::size_t nc = mesh.n_cells();

    std::vector<Eigen::MatrixXd> local(nc);
    std::vector<Eigen::Vector3d> load(nc, Eigen::Vector3d::Zero());
    parallel_for(nc, [&](std::size_t c) {
      local[c] = local_stiffness(mesh, space.operators(c), params);
      if (f) {
        const Point3 &ref = mesh.cell(c).center;
        for (const auto &qp : cell_quadrature(mesh, c, space.options().quadrature_order))
          load[c] += qp.w * f(qp.x, ref);
      }
    });

    SystemBlocks sys;
    std::vector<Eigen::Triplet<double>> trip;
    std::size_t nnz = 0;
    for (const auto &m : local)
      nnz += static_cast<std::size_t>(m.size());
    trip.reserve(nnz);
    sys.F = Eigen::VectorXd::Zero(ndof);
    for (std::size_t c = 0; c < nc; ++c) {
      const auto dofs = space.local_dofs(c);
      for (std::size_t a = 0; a < dofs.size(); ++a)
        for (std::size_t b = 0; b < dofs.size(); ++b)
          trip.emplace_back(static_cast<int>(dofs[a]), static_cast<int>(dofs[b]),
                            local[c](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
      const std::size_t cb = dm.cell_blocks(c).back();
      sys.F.segment<3>(static_cast<Eigen::Index>(3 * cb)) += load[c];
    }
    sys.A.resize(ndof, ndof);
    sys.A.setFromTriplets(trip.begin(), trip.end());

    const FractureNetwork &fr = space.fracture();
    std::vector<Eigen::Triplet<double>> btrip;
    for (std::size_t i = 0; i < fr.size(); ++i) {
      const std::size_t face = fr[i].face;
      const double area = mesh.face(face).area;
      const std::size_t bk = dm.face_block(mesh, face, fr[i].positive_cell);
      const std::size_t bl = dm.face_block(mesh, face, fr.negative_cell(mesh, i));
      for (int k = 0; k < 3; ++k) {
        btrip.emplace_back(static_cast<int>(3 * i) + k, static_cast<int>(3 * bk) + k, area);
        btrip.emplace_back(static_cast<int>(3 * i) + k, static_cast<int>(3 * bl) + k, -area);
      }
    }
    sys.B.resize(static_cast<Eigen::Index>(3 * fr.size()), ndof);
    sys.B.setFromTriplets(btrip.begin(), btrip.end());
    return sys;
  }

  Eigen::VectorXd ReducedSystem::expand(const Eigen::VectorXd &free_values) const
  {
    Eigen::VectorXd full = lifted;
    for (std::size_t i = 0; i < free_dofs.size(); ++i)
      full(static_cast<Eigen::Index>(free_dofs[i])) = free_values(static_cast<Eigen::Index>(i));
    return full;
  }

  std::vector<bool> boundary_mask_where(const DDRSpace &space, const std::function<bool(const Point3 &)> &on_dirichlet)
  {
    const PolyMesh &mesh = space.mesh();
    const DofMap &dm = space.dofmap();
    std::vector<bool> mask(dm.n_dofs(), false);
    for (std::size_t b = 0; b < dm.n_blocks(); ++b) {
      const DofBlock &blk = dm.block(b);
      if (!blk.boundary)
        continue;
      Point3 x;
      switch (blk.kind) {
      case BlockKind::Vertex:
        x = mesh.vertex(blk.entity).coords;
        break;
      case BlockKind::Edge:
        x = mesh.edge(blk.entity).center;
        break;
      case BlockKind::Face:
        x = mesh.face(blk.entity).center;
        break;
      case BlockKind::Cell:
        continue;
      }
      if (on_dirichlet(x))
        for (std::size_t i = 0; i < 3; ++i)
          mask[3 * b + i] = true;
    }
    return mask;
  }

  ReducedSystem apply_dirichlet(const SystemBlocks &system, const DDRSpace &space, const Eigen::VectorXd &boundary_values)
  {
    return apply_dirichlet(system, space, boundary_values, space.dofmap().boundary_mask());
  }

  ReducedSystem apply_dirichlet(const SystemBlocks &system, const DDRSpace &space, const Eigen::VectorXd &boundary_values,
                                const std::vector<bool> &mask)
  {
    const DofMap &dm = space.dofmap();
    const auto ndof = static_cast<Eigen::Index>(dm.n_dofs());
    if (boundary_values.size() != ndof || mask.size() != dm.n_dofs())
      throw std::invalid_argument("apply_dirichlet: boundary vector or mask length does not match the DOF count");

    ReducedSystem red;
    red.lifted = Eigen::VectorXd::Zero(ndof);
    std::vector<int> reduced_index(static_cast<std::size_t>(ndof), -1);
    for (Eigen::Index i = 0; i < ndof; ++i) {
      if (mask[static_cast<std::size_t>(i)]) {
        red.lifted(i) = boundary_values(i);
      } else {
        reduced_index[static_cast<std::size_t>(i)] = static_cast<int>(red.free_dofs.size());
        red.free_dofs.push_back(static_cast<std::size_t>(i));
      }
    }
    const auto nfree = static_cast<Eigen::Index>(red.free_dofs.size());

    auto restrict_columns = [&](const SparseMatrix &M, bool restrict_rows) {
      std::vector<Eigen::Triplet<double>> t;
      for (Eigen::Index col = 0; col < M.outerSize(); ++col) {
        const int rc = reduced_index[static_cast<std::size_t>(col)];
        if (rc < 0)
          continue;
        for (SparseMatrix::InnerIterator it(M, col); it; ++it) {
          const int rr = restrict_rows ? reduced_index[static_cast<std::size_t>(it.row())] : static_cast<int>(it.row());
          if (rr >= 0)
            t.emplace_back(rr, rc, it.value());
        }
      }
      SparseMatrix R(restrict_rows ? nfree : M.rows(), nfree);
      R.setFromTriplets(t.begin(), t.end());
      return R;
    };

    red.A = restrict_columns(system.A, true);
    red.B = restrict_columns(system.B, false);
    const Eigen::VectorXd Ag = system.A * red.lifted;
    red.F.resize(nfree);
    for (Eigen::Index i = 0; i < nfree; ++i) {
      const auto g = static_cast<Eigen::Index>(red.free_dofs[static_cast<std::size_t>(i)]);
      red.F(i) = system.F(g) - Ag(g);
    }
    red.B_offset = system.B * red.lifted;
    const FractureNetwork &fr = space.fracture();
    for (std::size_t i = 0; i < fr.size(); ++i)
      red.areas.push_back(space.mesh().face(fr[i].face).area);
    return red;
  }

  void write_coo(std::ostream &os, const SparseMatrix &M)
  {
    os << std::setprecision(17);
    for (Eigen::Index col = 0; col < M.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(M, col); it; ++it)
        os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  }

} // namespace ddrc
