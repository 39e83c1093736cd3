#include <ddrc/mesh_generators.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace ddrc
{

  std::string to_string(MeshFamily family)
  {
    switch (family) {
    case MeshFamily::Cartesian:
      return "cartesian";
    case MeshFamily::Tetrahedral:
      return "tetrahedral";
    case MeshFamily::HexaCut:
      return "hexacut";
    }
    return "unknown";
  }

  MeshFamily mesh_family_from_string(const std::string &name)
  {
    if (name == "cartesian")
      return MeshFamily::Cartesian;
    if (name == "tetrahedral" || name == "tet")
      return MeshFamily::Tetrahedral;
    if (name == "hexacut" || name == "hexa-cut")
      return MeshFamily::HexaCut;
    throw std::invalid_argument("unknown mesh family '" + name + "'");
  }

  //------------------------------------------------------------------------------

  namespace
  {
    struct Grid
    {
      int n;
      Box box;

      double coord(int axis, int i) const { return box.lo(axis) + (box.hi(axis) - box.lo(axis)) * i / n; }
      double spacing(int axis) const { return (box.hi(axis) - box.lo(axis)) / n; }
      std::size_t vid(int i, int j, int k) const
      {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(n + 1) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(k));
      }
      std::vector<Point3> vertices() const
      {
        std::vector<Point3> v;
        v.reserve(static_cast<std::size_t>((n + 1) * (n + 1) * (n + 1)));
        for (int k = 0; k <= n; ++k)
          for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i)
              v.emplace_back(coord(0, i), coord(1, j), coord(2, k));
        return v;
      }
    };

    // Grid index of a coordinate, or -1 if it does not lie on a grid plane
    int grid_index(const Grid &g, int axis, double value)
    {
      const double t = (value - g.box.lo(axis)) / g.spacing(axis);
      const double r = std::round(t);
      if (std::abs(t - r) > 1e-9)
        return -1;
      return static_cast<int>(r);
    }

    std::array<int, 2> other_axes(int axis)
    {
      return {axis == 0 ? 1 : 0, axis == 2 ? 1 : 2};
    }

    void check_planes(const Grid &g, const std::vector<FracturePlane> &planes)
    {
      for (std::size_t p = 0; p < planes.size(); ++p) {
        const FracturePlane &P = planes[p];
        std::ostringstream msg;
        msg << "fracture plane " << p << " ";
        if (P.axis < 0 || P.axis > 2) {
          msg << "has invalid axis " << P.axis;
          throw MeshError(msg.str());
        }
        const int idx = grid_index(g, P.axis, P.value);
        if (idx <= 0 || idx >= g.n) {
          msg << "at " << "xyz"[P.axis] << "=" << P.value << " does not coincide with an interior plane of the "
              << g.n << "-cell grid";
          throw MeshError(msg.str());
        }
        if (P.extent) {
          const auto ax = other_axes(P.axis);
          const auto &e = *P.extent;
          for (int k = 0; k < 4; ++k) {
            const int a = ax[k / 2];
            const int i = grid_index(g, a, e[k]);
            if (i < 0 || i > g.n) {
              msg << "extent bound " << e[k] << " along " << "xyz"[a] << " is not a grid line";
              throw MeshError(msg.str());
            }
          }
          if (!(e[0] < e[1]) || !(e[2] < e[3])) {
            msg << "has an empty extent";
            throw MeshError(msg.str());
          }
        }
        if (P.threshold < 0.) {
          msg << "has a negative Tresca threshold";
          throw MeshError(msg.str());
        }
      }
    }

    bool on_fracture(const Point3 &x, const FracturePlane &P, double tol)
    {
      if (std::abs(x(P.axis) - P.value) > tol)
        return false;
      if (!P.extent)
        return true;
      const auto ax = other_axes(P.axis);
      const auto &e = *P.extent;
      return x(ax[0]) >= e[0] - tol && x(ax[0]) <= e[1] + tol && x(ax[1]) >= e[2] - tol && x(ax[1]) <= e[3] + tol;
    }

    // Cube corner (a,b,c) in {0,1}^3 of grid cell (i,j,k)
    std::size_t corner(const Grid &g, int i, int j, int k, int a, int b, int c)
    {
      return g.vid(i + a, j + b, k + c);
    }

    std::vector<std::vector<std::size_t>> cube_faces(const Grid &g, int i, int j, int k)
    {
      auto v = [&](int a, int b, int c) { return corner(g, i, j, k, a, b, c); };
      return {
          {v(0, 0, 0), v(0, 1, 0), v(0, 1, 1), v(0, 0, 1)},
          {v(1, 0, 0), v(1, 1, 0), v(1, 1, 1), v(1, 0, 1)},
          {v(0, 0, 0), v(1, 0, 0), v(1, 0, 1), v(0, 0, 1)},
          {v(0, 1, 0), v(1, 1, 0), v(1, 1, 1), v(0, 1, 1)},
          {v(0, 0, 0), v(1, 0, 0), v(1, 1, 0), v(0, 1, 0)},
          {v(0, 0, 1), v(1, 0, 1), v(1, 1, 1), v(0, 1, 1)},
      };
    }

    FracturedMesh finish(PolyMesh mesh, const Grid &g, const std::vector<FracturePlane> &planes)
    {
      const double tol = 1e-9 * std::min({g.spacing(0), g.spacing(1), g.spacing(2)});
      FractureNetwork fracture = fracture_from_planes(mesh, planes, tol);
      return {std::move(mesh), std::move(fracture)};
    }

    // Uniform double in [0,1) from the top 53 bits, identical on every platform
    double unit_draw(std::mt19937_64 &rng)
    {
      return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
  } // namespace

  //------------------------------------------------------------------------------

  PolyMesh mesh_from_cell_loops(std::vector<Point3> vertices, const std::vector<std::vector<std::vector<std::size_t>>> &cells)
  {
    std::map<std::vector<std::size_t>, std::size_t> face_ids;
    std::vector<std::vector<std::size_t>> loops;
    std::vector<std::vector<OrientedFace>> cell_faces(cells.size());

    for (std::size_t iC = 0; iC < cells.size(); ++iC) {
      Point3 avg = Point3::Zero();
      std::size_t count = 0;
      for (const auto &loop : cells[iC])
        for (std::size_t v : loop) {
          avg += vertices.at(v);
          ++count;
        }
      avg /= static_cast<double>(count);

      for (const auto &loop : cells[iC]) {
        std::vector<std::size_t> key = loop;
        std::sort(key.begin(), key.end());
        auto [it, inserted] = face_ids.try_emplace(key, loops.size());
        if (inserted)
          loops.push_back(loop);
        const auto &stored = loops[it->second];
        std::vector<Point3> pts;
        Point3 c = Point3::Zero();
        for (std::size_t v : stored) {
          pts.push_back(vertices[v]);
          c += vertices[v];
        }
        c /= static_cast<double>(stored.size());
        const int o = polygon_area_vector(pts).dot(c - avg) > 0. ? 1 : -1;
        cell_faces[iC].emplace_back(it->second, o);
      }
    }
    return PolyMesh::from_topology(std::move(vertices), std::move(loops), std::move(cell_faces));
  }

  FractureNetwork fracture_from_planes(const PolyMesh &mesh, const std::vector<FracturePlane> &planes, double tol)
  {
    std::vector<FractureFace> faces;
    for (std::size_t iF = 0; iF < mesh.n_faces(); ++iF) {
      const MeshFace &F = mesh.face(iF);
      for (const FracturePlane &P : planes) {
        bool all_on = std::all_of(F.vertices.begin(), F.vertices.end(), [&](std::size_t v) {
          return std::abs(mesh.vertex(v).coords(P.axis) - P.value) <= tol;
        });
        if (!all_on || !on_fracture(F.center, P, tol))
          continue;
        if (F.cells.size() != 2) {
          throw MeshError("fracture face " + std::to_string(iF) + " lies on the domain boundary");
        }
        const std::size_t K = mesh.cell(F.cells[0]).center(P.axis) < P.value ? F.cells[0] : F.cells[1];
        const VectorRd nplus = mesh.cell_face_normal(K, mesh.local_face(K, iF));
        faces.push_back({iF, nplus, K, P.threshold});
        break;
      }
    }
    FractureNetwork net(mesh, std::move(faces));
    if (auto err = net.check(mesh); !err.empty())
      throw MeshError(err);
    return net;
  }

  //------------------------------------------------------------------------------

  FracturedMesh build_cartesian(int n, const Box &domain, const std::vector<FracturePlane> &planes)
  {
    if (n < 1)
      throw MeshError("number of cells per axis must be positive");
    const Grid g{n, domain};
    check_planes(g, planes);
    std::vector<std::vector<std::vector<std::size_t>>> cells;
    cells.reserve(static_cast<std::size_t>(n * n * n));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          cells.push_back(cube_faces(g, i, j, k));
    return finish(mesh_from_cell_loops(g.vertices(), cells), g, planes);
  }

  FracturedMesh build_tetrahedral(int n, const Box &domain, const std::vector<FracturePlane> &planes)
  {
    if (n < 1)
      throw MeshError("number of cells per axis must be positive");
    const Grid g{n, domain};
    check_planes(g, planes);
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::vector<std::vector<std::vector<std::size_t>>> cells;
    cells.reserve(static_cast<std::size_t>(6 * n * n * n));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (const auto &p : perms) {
            std::array<int, 3> c{0, 0, 0};
            std::array<std::size_t, 4> t;
            t[0] = corner(g, i, j, k, 0, 0, 0);
            for (int s = 0; s < 2; ++s) {
              c[static_cast<std::size_t>(p[s])] = 1;
              t[static_cast<std::size_t>(s) + 1] = corner(g, i, j, k, c[0], c[1], c[2]);
            }
            t[3] = corner(g, i, j, k, 1, 1, 1);
            cells.push_back({{t[0], t[1], t[2]}, {t[0], t[1], t[3]}, {t[0], t[2], t[3]}, {t[1], t[2], t[3]}});
          }
    return finish(mesh_from_cell_loops(g.vertices(), cells), g, planes);
  }

  FracturedMesh build_hexacut(int n, const Box &domain, const std::vector<FracturePlane> &planes, std::uint64_t seed,
                              double magnitude)
  {
    if (n < 1)
      throw MeshError("number of cells per axis must be positive");
    if (!(magnitude >= 0. && magnitude < 0.3))
      throw MeshError("hexa-cut perturbation magnitude must lie in [0, 0.3)");
    const Grid g{n, domain};
    check_planes(g, planes);
    const double tol = 1e-9 * std::min({g.spacing(0), g.spacing(1), g.spacing(2)});

    std::vector<Point3> vertices = g.vertices();
    std::mt19937_64 rng(seed);
    for (int k = 1; k < n; ++k)
      for (int j = 1; j < n; ++j)
        for (int i = 1; i < n; ++i) {
          Point3 &x = vertices[g.vid(i, j, k)];
          const bool frozen = std::any_of(planes.begin(), planes.end(), [&](const FracturePlane &P) { return on_fracture(x, P, tol); });
          if (frozen)
            continue;
          for (int a = 0; a < 3; ++a)
            x(a) += magnitude * g.spacing(a) * (2. * unit_draw(rng) - 1.);
        }

    std::vector<std::vector<std::vector<std::size_t>>> cells;
    cells.reserve(static_cast<std::size_t>(n * n * n));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          std::vector<std::vector<std::size_t>> faces;
          for (const auto &q : cube_faces(g, i, j, k)) {
            std::vector<Point3> pts;
            for (std::size_t v : q)
              pts.push_back(vertices[v]);
            const VectorRd nrm = polygon_area_vector(pts).normalized();
            const Point3 c = 0.25 * (pts[0] + pts[1] + pts[2] + pts[3]);
            double dev = 0., diam = 0.;
            for (int a = 0; a < 4; ++a) {
              dev = std::max(dev, std::abs((pts[static_cast<std::size_t>(a)] - c).dot(nrm)));
              for (int b = a + 1; b < 4; ++b)
                diam = std::max(diam, (pts[static_cast<std::size_t>(a)] - pts[static_cast<std::size_t>(b)]).norm());
            }
            if (dev <= 1e-12 * diam) {
              faces.push_back(q);
              continue;
            }
            // Cut along the shorter diagonal; ties go to the diagonal holding the smallest vertex id
            const double d02 = (pts[0] - pts[2]).norm(), d13 = (pts[1] - pts[3]).norm();
            bool use02 = d02 < d13;
            if (d02 == d13)
              use02 = std::min(q[0], q[2]) < std::min(q[1], q[3]);
            if (use02) {
              faces.push_back({q[0], q[1], q[2]});
              faces.push_back({q[0], q[2], q[3]});
            } else {
              faces.push_back({q[0], q[1], q[3]});
              faces.push_back({q[1], q[2], q[3]});
            }
          }
          cells.push_back(std::move(faces));
        }

    PolyMesh mesh = mesh_from_cell_loops(std::move(vertices), cells);

    // Reject inverted or non star-shaped cells (w.r.t. their barycenter)
    for (std::size_t iC = 0; iC < mesh.n_cells(); ++iC) {
      const MeshCell &C = mesh.cell(iC);
      for (std::size_t iF = 0; iF < C.faces.size(); ++iF) {
        const MeshFace &F = mesh.face(C.faces[iF]);
        const std::size_t m = F.vertices.size();
        for (std::size_t a = 0; a < m; ++a) {
          const Point3 p1 = mesh.vertex(F.vertices[a]).coords - C.center;
          const Point3 p2 = mesh.vertex(F.vertices[(a + 1) % m]).coords - C.center;
          const Point3 p0 = F.center - C.center;
          if (C.orientations[iF] * p0.dot(p1.cross(p2)) <= 0.) {
            throw MeshError("hexa-cut perturbation produced a degenerate cell " + std::to_string(iC));
          }
        }
      }
    }
    return finish(std::move(mesh), g, planes);
  }

  FracturedMesh build_mesh(MeshFamily family, int n, const Box &domain, const std::vector<FracturePlane> &planes,
                           std::uint64_t seed, double magnitude)
  {
    switch (family) {
    case MeshFamily::Cartesian:
      return build_cartesian(n, domain, planes);
    case MeshFamily::Tetrahedral:
      return build_tetrahedral(n, domain, planes);
    case MeshFamily::HexaCut:
      return build_hexacut(n, domain, planes, seed, magnitude);
    }
    throw std::invalid_argument("unknown mesh family");
  }

} // namespace ddrc
