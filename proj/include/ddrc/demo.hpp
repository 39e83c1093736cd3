// Built-in network of two intersecting fractures in the unit cube, loaded
// through the top face with the bottom clamped and free lateral faces.

#ifndef DDRC_DEMO_HPP
#define DDRC_DEMO_HPP

#include <array>

#include <ddrc/assembly.hpp>
#include <ddrc/contact_solver.hpp>
#include <ddrc/mesh_generators.hpp>

namespace ddrc
{

  struct FractureDemoOptions
  {
    /// Cartesian n^3 grid of (0,1)^3; must be a multiple of 4 so the fracture tips lie on grid lines
    int n = 8;
    MaterialParams material = MaterialParams::from_young(4e9, 0.2);
    /// With the default load one fracture slips and the other sticks
    double threshold = 2.3e6;
    /// Displacement imposed on z = 1; z = 0 is clamped
    Eigen::Vector3d top_displacement{0.0015, -0.0015, -0.002};
    NewtonConfig newton;
  };

  struct FractureDemoResult
  {
    FracturedMesh mesh;
    ContactData data;
    ContactSolution solution;
    Admissibility admissibility;
    /// Face count per ContactState
    std::array<int, 4> histogram{};
  };

  /// Planes x = 1/2 and y = 1/2 restricted to the middle half of the cube, crossing along the vertical axis
  std::vector<FracturePlane> demo_planes(double threshold);

  FractureDemoResult run_fracture_demo(const FractureDemoOptions &options);

} // namespace ddrc

#endif // DDRC_DEMO_HPP
