#include <doctest.h>

#include <cmath>
#include <sstream>

#include <ddrc/mesh.hpp>
#include <ddrc/mesh_generators.hpp>
#include <ddrc/mesh_io.hpp>

using namespace ddrc;

namespace
{
  std::size_t find_vertex(const PolyMesh &mesh, const Point3 &x)
  {
    for (std::size_t v = 0; v < mesh.n_vertices(); ++v)
      if ((mesh.vertex(v).coords - x).norm() < 1e-12)
        return v;
    FAIL("vertex not found");
    return 0;
  }

  double total_volume(const PolyMesh &mesh)
  {
    double v = 0.;
    for (const auto &c : mesh.cells())
      v += c.volume;
    return v;
  }

  FracturePlane plane_x0()
  {
    FracturePlane p;
    p.axis = 0;
    p.value = 0.;
    return p;
  }

  // Unit cube as one cell, faces with outward loops
  PolyMesh unit_cube(bool flip_last = false, bool repeat_vertex = false)
  {
    std::vector<Point3> v{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    std::vector<std::vector<std::size_t>> loops{{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                                {2, 3, 7, 6}, {0, 4, 7, 3}, {1, 2, 6, 5}};
    if (repeat_vertex)
      loops[1] = {4, 5, 6, 7, 5};
    std::vector<OrientedFace> cell;
    for (std::size_t f = 0; f < loops.size(); ++f)
      cell.emplace_back(f, 1);
    if (flip_last)
      cell.back().second = -1;
    return PolyMesh::from_topology(v, loops, {cell});
  }
} // namespace

TEST_CASE("cartesian grid counts and fracture faces")
{
  const FracturedMesh m2 = build_cartesian(2, Box{}, {plane_x0()});
  CHECK(m2.mesh.n_cells() == 8);
  CHECK(m2.mesh.n_faces() == 36);
  CHECK(m2.mesh.n_edges() == 54);
  CHECK(m2.mesh.n_vertices() == 27);
  CHECK(m2.fracture.size() == 4);
  CHECK(validate(m2.mesh).ok);
  CHECK(m2.fracture.check(m2.mesh).empty());
  CHECK(m2.mesh.h() == doctest::Approx(std::sqrt(3.)));

  for (std::size_t i = 0; i < m2.fracture.size(); ++i) {
    const FractureFace &ff = m2.fracture[i];
    CHECK(std::abs(m2.mesh.face(ff.face).center.x()) < 1e-14);
    CHECK((ff.normal_plus - Eigen::Vector3d::UnitX()).norm() < 1e-14);
    // positive cell on the lower-coordinate side
    CHECK(m2.mesh.cell(ff.positive_cell).center.x() < 0.);
    CHECK(m2.mesh.cell(m2.fracture.negative_cell(m2.mesh, i)).center.x() > 0.);
  }

  const FracturedMesh m4 = build_cartesian(4, Box{}, {plane_x0()});
  CHECK(m4.mesh.n_cells() == 64);
  CHECK(m4.fracture.size() == 16);

  FracturePlane y0;
  y0.axis = 1;
  const FracturedMesh two = build_cartesian(2, Box{}, {plane_x0(), y0});
  CHECK(two.fracture.size() == 8);
  CHECK(two.fracture.check(two.mesh).empty());
}

TEST_CASE("tetrahedral family")
{
  const FracturedMesh one = build_tetrahedral(1, Box{}, {});
  CHECK(one.mesh.n_cells() == 6);
  CHECK(one.mesh.n_faces() == 18);
  CHECK(validate(one.mesh).ok);

  const FracturedMesh m = build_tetrahedral(2, Box{}, {plane_x0()});
  CHECK(m.mesh.n_cells() == 48);
  CHECK(m.fracture.size() == 8);
  CHECK(validate(m.mesh).ok);
  CHECK(total_volume(m.mesh) == doctest::Approx(8.).epsilon(1e-13));
  for (const auto &c : m.mesh.cells())
    CHECK(c.faces.size() == 4);
}

TEST_CASE("hexa-cut family")
{
  const FracturedMesh a = build_hexacut(2, Box{}, {plane_x0()}, 1, 0.25);
  const MeshValidationReport rep = validate(a.mesh);
  CHECK(rep.ok);
  CHECK(a.fracture.size() == 4);
  CHECK(total_volume(a.mesh) == doctest::Approx(8.).epsilon(1e-12));

  // same seed, same mesh
  const FracturedMesh b = build_hexacut(2, Box{}, {plane_x0()}, 1, 0.25);
  REQUIRE(a.mesh.n_vertices() == b.mesh.n_vertices());
  REQUIRE(a.mesh.n_faces() == b.mesh.n_faces());
  for (std::size_t v = 0; v < a.mesh.n_vertices(); ++v)
    CHECK(a.mesh.vertex(v).coords == b.mesh.vertex(v).coords);

  // fracture vertices stay on the plane
  for (std::size_t i = 0; i < a.fracture.size(); ++i)
    for (std::size_t v : a.mesh.face(a.fracture[i].face).vertices)
      CHECK(std::abs(a.mesh.vertex(v).coords.x()) < 1e-14);

  // no perturbation: the Cartesian grid
  const FracturedMesh flat = build_hexacut(2, Box{}, {plane_x0()}, 7, 0.);
  const FracturedMesh cart = build_cartesian(2, Box{}, {plane_x0()});
  CHECK(flat.mesh.n_faces() == cart.mesh.n_faces());
  CHECK(flat.mesh.n_cells() == cart.mesh.n_cells());
  for (std::size_t v = 0; v < flat.mesh.n_vertices(); ++v)
    CHECK((flat.mesh.vertex(v).coords - cart.mesh.vertex(v).coords).norm() < 1e-15);

  const FracturedMesh c = build_hexacut(4, Box{}, {plane_x0()}, 3, 0.25);
  CHECK(validate(c.mesh).ok);
  CHECK(c.fracture.check(c.mesh).empty());
}

TEST_CASE("side classes around fracture vertices and tips")
{
  {
    const FracturedMesh m = build_cartesian(2, Box{}, {plane_x0()});
    const SideClasses sides = classify_fracture_sides(m.mesh, m.fracture);
    const auto &p = sides.vertices[find_vertex(m.mesh, Point3::Zero())];
    REQUIRE(p.n_classes == 2);
    const auto cls = p.classes();
    CHECK(cls[0].size() == 4);
    CHECK(cls[1].size() == 4);
    for (const auto &cl : cls) {
      const double side = m.mesh.cell(cl.front()).center.x();
      for (std::size_t c : cl)
        CHECK(m.mesh.cell(c).center.x() * side > 0.);
    }
  }
  {
    const FracturedMesh m = build_cartesian(4, Box{}, {plane_x0()});
    const SideClasses sides = classify_fracture_sides(m.mesh, m.fracture);
    CHECK(sides.vertices[find_vertex(m.mesh, Point3(-0.5, 0, 0))].n_classes == 1);
    CHECK(sides.vertices[find_vertex(m.mesh, Point3(0, 0.5, 0.5))].n_classes == 2);
  }
  {
    // immersed square: its boundary vertices are tips with one class
    FracturePlane p = plane_x0();
    p.extent = std::array<double, 4>{-0.5, 0.5, -0.5, 0.5};
    const FracturedMesh m = build_cartesian(4, Box{}, {p});
    CHECK(m.fracture.size() == 4);
    const SideClasses sides = classify_fracture_sides(m.mesh, m.fracture);
    CHECK(sides.vertices[find_vertex(m.mesh, Point3(0, 0, 0))].n_classes == 2);
    CHECK(sides.vertices[find_vertex(m.mesh, Point3(0, 0.5, 0))].n_classes == 1);
    CHECK(sides.vertices[find_vertex(m.mesh, Point3(0, 0.5, 0.5))].n_classes == 1);
  }
}

TEST_CASE("validation catches broken cells and faces")
{
  CHECK(validate(unit_cube()).ok);
  CHECK(unit_cube().cell(0).volume == doctest::Approx(1.));

  const MeshValidationReport flipped = validate(unit_cube(true));
  CHECK_FALSE(flipped.ok);
  CHECK(flipped.bad_cells == std::vector<std::size_t>{0});

  const MeshValidationReport repeated = validate(unit_cube(false, true));
  CHECK_FALSE(repeated.ok);
  CHECK(std::find(repeated.bad_faces.begin(), repeated.bad_faces.end(), 1) != repeated.bad_faces.end());
}

TEST_CASE("geometry: volumes, normals and local indices")
{
  for (MeshFamily fam : {MeshFamily::Cartesian, MeshFamily::Tetrahedral, MeshFamily::HexaCut}) {
    const FracturedMesh m = build_mesh(fam, 2, Box{}, {plane_x0()}, 5, 0.2);
    for (std::size_t c = 0; c < m.mesh.n_cells(); ++c) {
      const MeshCell &K = m.mesh.cell(c);
      CHECK(K.volume == doctest::Approx(tet_fan_volume(m.mesh, c)).epsilon(1e-12));
      Eigen::Vector3d closure = Eigen::Vector3d::Zero();
      for (std::size_t j = 0; j < K.faces.size(); ++j) {
        const Eigen::Vector3d n = m.mesh.cell_face_normal(c, j);
        CHECK(n.norm() == doctest::Approx(1.));
        // outward: points away from the cell center
        CHECK(n.dot(m.mesh.face(K.faces[j]).center - K.center) > 0.);
        closure += m.mesh.face(K.faces[j]).area * n;
        CHECK(m.mesh.local_face(c, K.faces[j]) == j);
      }
      CHECK(closure.norm() < 1e-13);
      for (std::size_t j = 0; j < K.edges.size(); ++j)
        CHECK(m.mesh.local_edge(c, K.edges[j]) == j);
    }
    for (std::size_t f = 0; f < m.mesh.n_faces(); ++f) {
      const MeshFace &F = m.mesh.face(f);
      Eigen::Vector3d closure = Eigen::Vector3d::Zero();
      for (std::size_t j = 0; j < F.edges.size(); ++j) {
        const Eigen::Vector3d nFE = m.mesh.face_edge_normal(f, j);
        CHECK(std::abs(nFE.dot(F.normal)) < 1e-13);
        closure += m.mesh.edge(F.edges[j]).length * nFE;
      }
      CHECK(closure.norm() < 1e-13);
    }
  }
  const FracturedMesh m = build_cartesian(2, Box{}, {});
  CHECK_THROWS_AS(m.mesh.local_face(0, m.mesh.n_faces() - 1), MeshError);
}

TEST_CASE("non-compliant fracture planes are rejected")
{
  FracturePlane off = plane_x0();
  off.value = 0.3;
  CHECK_THROWS_AS(build_cartesian(2, Box{}, {off}), MeshError);
  FracturePlane on_boundary = plane_x0();
  on_boundary.value = 1.;
  CHECK_THROWS_AS(build_cartesian(2, Box{}, {on_boundary}), MeshError);
  FracturePlane bad_extent = plane_x0();
  bad_extent.extent = std::array<double, 4>{-0.3, 0.5, -1., 1.};
  CHECK_THROWS_AS(build_cartesian(4, Box{}, {bad_extent}), MeshError);
  CHECK_THROWS_AS(build_cartesian(0, Box{}, {}), MeshError);
  CHECK_THROWS_AS(mesh_family_from_string("voronoi"), std::invalid_argument);
}

TEST_CASE("POLYMESH round trip")
{
  FracturePlane p = plane_x0();
  p.threshold = 0.75;
  const FracturedMesh m = build_hexacut(2, Box{}, {p}, 4, 0.2);
  std::stringstream ss;
  ss.precision(17);
  write_polymesh(ss, m.mesh, m.fracture);
  const FracturedMesh r = read_polymesh(ss);
  REQUIRE(r.mesh.n_vertices() == m.mesh.n_vertices());
  REQUIRE(r.mesh.n_faces() == m.mesh.n_faces());
  REQUIRE(r.mesh.n_cells() == m.mesh.n_cells());
  REQUIRE(r.fracture.size() == m.fracture.size());
  for (std::size_t v = 0; v < m.mesh.n_vertices(); ++v)
    CHECK((r.mesh.vertex(v).coords - m.mesh.vertex(v).coords).norm() == 0.);
  for (std::size_t c = 0; c < m.mesh.n_cells(); ++c) {
    CHECK(r.mesh.cell(c).faces == m.mesh.cell(c).faces);
    CHECK(r.mesh.cell(c).orientations == m.mesh.cell(c).orientations);
  }
  for (std::size_t i = 0; i < m.fracture.size(); ++i) {
    CHECK(r.fracture[i].face == m.fracture[i].face);
    CHECK(r.fracture[i].positive_cell == m.fracture[i].positive_cell);
    CHECK(r.fracture[i].threshold == 0.75);
  }

  std::istringstream bad("POLYMESH 2\n");
  CHECK_THROWS_AS(read_polymesh(bad), MeshError);
  std::istringstream truncated("POLYMESH 1\nVERTICES 2\n0 0 0\n");
  CHECK_THROWS_AS(read_polymesh(truncated), MeshError);
}
