#include <ddrc/ddr_space.hpp>

namespace ddrc
{

  DofMap::DofMap(const PolyMesh &mesh, const FractureNetwork &fracture, const SideClasses &sides)
  {
    // (entity, class) -> block, for vertices and edges
    std::vector<std::vector<std::size_t>> vertex_block(mesh.n_vertices()), edge_block(mesh.n_edges());
    auto add = [&](BlockKind kind, std::size_t entity, std::size_t rep, bool boundary) {
      m_blocks.push_back({kind, entity, rep, boundary});
      if (boundary)
        ++m_n_boundary;
      return m_blocks.size() - 1;
    };

    for (std::size_t v = 0; v < mesh.n_vertices(); ++v) {
      for (const auto &cls : sides.vertices[v].classes())
        vertex_block[v].push_back(add(BlockKind::Vertex, v, cls.front(), mesh.vertex(v).boundary));
    }
    m_n_vertex = m_blocks.size();
    for (std::size_t e = 0; e < mesh.n_edges(); ++e) {
      for (const auto &cls : sides.edges[e].classes())
        edge_block[e].push_back(add(BlockKind::Edge, e, cls.front(), mesh.edge(e).boundary));
    }
    m_n_edge = m_blocks.size() - m_n_vertex;

    // Face sides: one block per face, two for fracture faces (positive cell first)
    std::vector<std::vector<std::size_t>> face_block(mesh.n_faces());
    for (std::size_t f = 0; f < mesh.n_faces(); ++f) {
      const MeshFace &F = mesh.face(f);
      if (const auto i = fracture.index_of(f)) {
        const std::size_t pos = fracture[*i].positive_cell;
        const std::size_t neg = fracture.negative_cell(mesh, *i);
        face_block[f].push_back(add(BlockKind::Face, f, pos, false));
        face_block[f].push_back(add(BlockKind::Face, f, neg, false));
      } else {
        face_block[f].push_back(add(BlockKind::Face, f, F.cells.front(), F.boundary));
      }
    }
    m_n_face = m_blocks.size() - m_n_vertex - m_n_edge;

    m_cell_blocks.resize(mesh.n_cells());
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
      const std::size_t cb = add(BlockKind::Cell, c, c, false);
      const MeshCell &C = mesh.cell(c);
      auto &cbs = m_cell_blocks[c];
      cbs.reserve(C.vertices.size() + C.edges.size() + C.faces.size() + 1);
      for (std::size_t v : C.vertices)
        cbs.push_back(vertex_block[v][sides.vertices[v].class_of_cell(c)]);
      for (std::size_t e : C.edges)
        cbs.push_back(edge_block[e][sides.edges[e].class_of_cell(c)]);
      for (std::size_t f : C.faces) {
        const auto &fb = face_block[f];
        if (fb.size() == 1) {
          cbs.push_back(fb[0]);
        } else {
          cbs.push_back(m_blocks[fb[0]].representative_cell == c ? fb[0] : fb[1]);
        }
      }
      cbs.push_back(cb);
    }
    m_n_cell = mesh.n_cells();
  }

  std::size_t DofMap::face_block(const PolyMesh &mesh, std::size_t face, std::size_t cell) const
  {
    const std::size_t iF = mesh.local_face(cell, face);
    const MeshCell &C = mesh.cell(cell);
    return m_cell_blocks[cell][C.vertices.size() + C.edges.size() + iF];
  }

  std::vector<bool> DofMap::boundary_mask() const
  {
    std::vector<bool> mask(n_dofs(), false);
    for (std::size_t b = 0; b < m_blocks.size(); ++b)
      if (m_blocks[b].boundary)
        mask[3 * b] = mask[3 * b + 1] = mask[3 * b + 2] = true;
    return mask;
  }

} // namespace ddrc
