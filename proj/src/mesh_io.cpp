#include <ddrc/mesh_io.hpp>

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace ddrc
{

  void write_polymesh(std::ostream &os, const PolyMesh &mesh, const FractureNetwork &fracture)
  {
    os << "POLYMESH 1\n";
    os << std::setprecision(17);
    os << "VERTICES " << mesh.n_vertices() << "\n";
    for (const auto &V : mesh.vertices())
      os << V.coords(0) << " " << V.coords(1) << " " << V.coords(2) << "\n";
    os << "FACES " << mesh.n_faces() << "\n";
    for (const auto &F : mesh.faces()) {
      os << F.vertices.size();
      for (std::size_t v : F.vertices)
        os << " " << v;
      os << "\n";
    }
    os << "CELLS " << mesh.n_cells() << "\n";
    for (const auto &C : mesh.cells()) {
      os << C.faces.size();
      for (std::size_t i = 0; i < C.faces.size(); ++i)
        os << " " << (C.orientations[i] < 0 ? "-" : "") << C.faces[i];
      os << "\n";
    }
    os << "FRACTURE " << fracture.size() << "\n";
    for (const auto &ff : fracture.faces()) {
      os << ff.face << " " << ff.normal_plus(0) << " " << ff.normal_plus(1) << " " << ff.normal_plus(2) << " "
         << ff.positive_cell << " " << ff.threshold << "\n";
    }
  }

  namespace
  {
    std::size_t expect_section(std::istream &is, const std::string &name)
    {
      std::string tag;
      long long count = -1;
      if (!(is >> tag >> count) || tag != name || count < 0) {
        throw MeshError("POLYMESH: expected section '" + name + " <count>'");
      }
      return static_cast<std::size_t>(count);
    }

    template <typename T> T read_value(std::istream &is, const char *what)
    {
      T value;
      if (!(is >> value)) {
        throw MeshError(std::string("POLYMESH: could not read ") + what);
      }
      return value;
    }
  } // namespace

  FracturedMesh read_polymesh(std::istream &is)
  {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "POLYMESH" || version != 1) {
      throw MeshError("POLYMESH: missing 'POLYMESH 1' header");
    }
    std::vector<Point3> vertices(expect_section(is, "VERTICES"));
    for (auto &x : vertices)
      for (int a = 0; a < 3; ++a)
        x(a) = read_value<double>(is, "vertex coordinate");

    std::vector<std::vector<std::size_t>> faces(expect_section(is, "FACES"));
    for (auto &loop : faces) {
      loop.resize(read_value<std::size_t>(is, "face size"));
      for (auto &v : loop)
        v = read_value<std::size_t>(is, "face vertex");
    }

    std::vector<std::vector<OrientedFace>> cells(expect_section(is, "CELLS"));
    for (auto &cell : cells) {
      cell.resize(read_value<std::size_t>(is, "cell size"));
      for (auto &of : cell) {
        std::string tok = read_value<std::string>(is, "cell face");
        int sign = 1;
        if (!tok.empty() && tok[0] == '-') {
          sign = -1;
          tok.erase(0, 1);
        }
        try {
          std::size_t pos = 0;
          of = {static_cast<std::size_t>(std::stoull(tok, &pos)), sign};
          if (pos != tok.size())
            throw std::invalid_argument(tok);
        } catch (const std::exception &) {
          throw MeshError("POLYMESH: bad cell face token '" + tok + "'");
        }
      }
    }

    PolyMesh mesh = PolyMesh::from_topology(std::move(vertices), std::move(faces), std::move(cells));

    std::vector<FractureFace> fracture(expect_section(is, "FRACTURE"));
    for (auto &ff : fracture) {
      ff.face = read_value<std::size_t>(is, "fracture face");
      for (int a = 0; a < 3; ++a)
        ff.normal_plus(a) = read_value<double>(is, "fracture normal");
      ff.positive_cell = read_value<std::size_t>(is, "fracture positive cell");
      ff.threshold = read_value<double>(is, "fracture threshold");
    }
    FractureNetwork net(mesh, std::move(fracture));
    if (auto err = net.check(mesh); !err.empty())
      throw MeshError("POLYMESH: " + err);
    return {std::move(mesh), std::move(net)};
  }

  void write_polymesh_file(const std::string &path, const PolyMesh &mesh, const FractureNetwork &fracture)
  {
    std::ofstream os(path);
    if (!os)
      throw std::runtime_error("cannot open '" + path + "' for writing");
    write_polymesh(os, mesh, fracture);
  }

  FracturedMesh read_polymesh_file(const std::string &path)
  {
    std::ifstream is(path);
    if (!is)
      throw std::runtime_error("cannot open '" + path + "'");
    return read_polymesh(is);
  }

} // namespace ddrc
