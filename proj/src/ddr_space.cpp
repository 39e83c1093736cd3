#include <ddrc/ddr_space.hpp>

#include <stdexcept>
#include <string>

#include <ddrc/parallel.hpp>

namespace ddrc
{

  Eigen::MatrixXd component_matrix(const Eigen::VectorXd &local)
  {
    const Eigen::Index n = local.size() / 3;
    return Eigen::Map<const Eigen::MatrixXd>(local.data(), 3, n).transpose();
  }

  Eigen::VectorXd flatten_components(const Eigen::MatrixXd &components)
  {
    const Eigen::MatrixXd t = components.transpose();
    return Eigen::Map<const Eigen::VectorXd>(t.data(), t.size());
  }

  Eigen::VectorXd interpolate_local(const PolyMesh &mesh, const CellOperators &op, const SidedField &u, int order,
                                    Eigen::Vector3d *correction)
  {
    const MeshCell &C = mesh.cell(op.cell);
    const Point3 &ref = C.center;
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(op.n_local()), 3);

    for (std::size_t j = 0; j < op.n_vertices; ++j)
      U.row(static_cast<Eigen::Index>(op.vertex_index(j))) = u(mesh.vertex(C.vertices[j]).coords, ref).transpose();
    for (std::size_t j = 0; j < op.n_edges; ++j) {
      Eigen::Vector3d mean = Eigen::Vector3d::Zero();
      for (const auto &qp : edge_quadrature(mesh, C.edges[j], order))
        mean += qp.w * u(qp.x, ref);
      U.row(static_cast<Eigen::Index>(op.edge_index(j))) = mean.transpose() / mesh.edge(C.edges[j]).length;
    }
    std::vector<QuadRule> face_quad(op.n_faces);
    for (std::size_t j = 0; j < op.n_faces; ++j) {
      face_quad[j] = face_quadrature(mesh, C.faces[j], order);
      Eigen::Vector3d mean = Eigen::Vector3d::Zero();
      for (const auto &qp : face_quad[j])
        mean += qp.w * u(qp.x, ref);
      U.row(static_cast<Eigen::Index>(op.face_index(j))) = mean.transpose() / mesh.face(C.faces[j]).area;
    }
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto &qp : cell_quadrature(mesh, op.cell, order))
      mean += qp.w * u(qp.x, ref);
    mean /= C.volume;

    // Correction from the mismatch between u and the face potentials of its interpolate
    Eigen::Vector3d corr = Eigen::Vector3d::Zero();
    for (std::size_t j = 0; j < op.n_faces; ++j) {
      const Eigen::MatrixXd P = op.face_potential[j] * U; // the cell column of the operator is zero
      const VectorRd nK = mesh.cell_face_normal(op.cell, j);
      for (const auto &qp : face_quad[j]) {
        const Eigen::Vector3d diff = u(qp.x, ref) - P.transpose() * op.face_bases[j].values(qp.x);
        corr -= qp.w * diff.dot(nK) * (qp.x - C.center);
      }
    }
    corr /= C.volume;
    U.row(static_cast<Eigen::Index>(op.cell_index())) = (mean + corr).transpose();
    if (correction)
      *correction = corr;
    return flatten_components(U);
  }

  DDRSpace::DDRSpace(const PolyMesh &mesh, const FractureNetwork &fracture, ReconstructionOptions options)
      : m_mesh(&mesh), m_fracture(&fracture), m_options(options), m_sides(classify_fracture_sides(mesh, fracture)),
        m_dofmap(mesh, fracture, m_sides), m_operators(mesh.n_cells())
  {
    parallel_for(mesh.n_cells(), [&](std::size_t c) { m_operators[c] = build_cell_operators(mesh, c, m_options); });
  }

  std::vector<std::size_t> DDRSpace::local_dofs(std::size_t cell) const
  {
    const auto &blocks = m_dofmap.cell_blocks(cell);
    std::vector<std::size_t> dofs;
    dofs.reserve(3 * blocks.size());
    for (std::size_t b : blocks)
      for (std::size_t i = 0; i < 3; ++i)
        dofs.push_back(3 * b + i);
    return dofs;
  }

  Eigen::VectorXd DDRSpace::restrict_to_cell(const Eigen::VectorXd &uh, std::size_t cell) const
  {
    if (static_cast<std::size_t>(uh.size()) != m_dofmap.n_dofs())
      throw std::invalid_argument("restrict_to_cell: vector length does not match the DOF count");
    const auto dofs = local_dofs(cell);
    Eigen::VectorXd v(static_cast<Eigen::Index>(dofs.size()));
    for (std::size_t i = 0; i < dofs.size(); ++i)
      v(static_cast<Eigen::Index>(i)) = uh(static_cast<Eigen::Index>(dofs[i]));
    return v;
  }

  Eigen::VectorXd DDRSpace::interpolate(const SidedField &u) const
  {
    const std::size_t nc = m_mesh->n_cells();
    std::vector<Eigen::VectorXd> local(nc);
    parallel_for(nc, [&](std::size_t c) { local[c] = interpolate_local(*m_mesh, m_operators[c], u, m_options.quadrature_order); });
    Eigen::VectorXd uh = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_dofmap.n_dofs()));
    for (std::size_t c = 0; c < nc; ++c) {
      const auto &blocks = m_dofmap.cell_blocks(c);
      for (std::size_t j = 0; j < blocks.size(); ++j) {
        if (m_dofmap.block(blocks[j]).representative_cell != c)
          continue;
        uh.segment<3>(static_cast<Eigen::Index>(3 * blocks[j])) = local[c].segment<3>(static_cast<Eigen::Index>(3 * j));
      }
    }
    return uh;
  }

  Eigen::MatrixXd DDRSpace::cell_potential(const Eigen::VectorXd &uh, std::size_t cell) const
  {
    return m_operators[cell].cell_potential * component_matrix(restrict_to_cell(uh, cell));
  }

  Eigen::MatrixXd DDRSpace::cell_gradient(const Eigen::VectorXd &uh, std::size_t cell) const
  {
    return m_operators[cell].cell_gradient * component_matrix(restrict_to_cell(uh, cell));
  }

  Eigen::MatrixXd DDRSpace::face_potential(const Eigen::VectorXd &uh, std::size_t cell, std::size_t iF) const
  {
    return m_operators[cell].face_potential[iF] * component_matrix(restrict_to_cell(uh, cell));
  }

  Eigen::MatrixXd DDRSpace::jump(const Eigen::VectorXd &uh, std::size_t i) const
  {
    if (i >= m_fracture->size())
      throw std::out_of_range("jump: fracture face index " + std::to_string(i) + " out of range");
    const std::size_t f = (*m_fracture)[i].face;
    const std::size_t K = (*m_fracture)[i].positive_cell;
    const std::size_t L = m_fracture->negative_cell(*m_mesh, i);
    return face_potential(uh, K, m_mesh->local_face(K, f)) - face_potential(uh, L, m_mesh->local_face(L, f));
  }

  Eigen::Vector3d DDRSpace::mean_jump(const Eigen::VectorXd &uh, std::size_t i) const
  {
    const std::size_t f = (*m_fracture)[i].face;
    const std::size_t K = (*m_fracture)[i].positive_cell;
    const std::size_t L = m_fracture->negative_cell(*m_mesh, i);
    return uh.segment<3>(static_cast<Eigen::Index>(3 * m_dofmap.face_block(*m_mesh, f, K)))
           - uh.segment<3>(static_cast<Eigen::Index>(3 * m_dofmap.face_block(*m_mesh, f, L)));
  }

} // namespace ddrc
