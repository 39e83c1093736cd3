// POLYMESH v1 text format.
//
//   POLYMESH 1
//   VERTICES n      followed by n lines `x y z`
//   FACES m         followed by m lines `k v1 ... vk`
//   CELLS p         followed by p lines `k f1 ... fk`; a leading '-' marks an inward face (also "-0")
//   FRACTURE q      followed by q lines `face_id nx ny nz pos_cell_id g`
//
// Indices are 0-based; tokens are whitespace-separated.

#ifndef DDRC_MESH_IO_HPP
#define DDRC_MESH_IO_HPP

#include <iosfwd>
#include <string>

#include <ddrc/mesh_generators.hpp>

namespace ddrc
{

  void write_polymesh(std::ostream &os, const PolyMesh &mesh, const FractureNetwork &fracture);
  FracturedMesh read_polymesh(std::istream &is);

  void write_polymesh_file(const std::string &path, const PolyMesh &mesh, const FractureNetwork &fracture);
  FracturedMesh read_polymesh_file(const std::string &path);

} // namespace ddrc

#endif // DDRC_MESH_IO_HPP
