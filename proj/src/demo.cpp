#include <ddrc/demo.hpp>

#include <cmath>
#include <stdexcept>

namespace ddrc
{

  std::vector<FracturePlane> demo_planes(double threshold)
  {
    return {FracturePlane{0, 0.5, std::array<double, 4>{0.25, 0.75, 0.25, 0.75}, threshold},
            FracturePlane{1, 0.5, std::array<double, 4>{0.25, 0.75, 0.25, 0.75}, threshold}};
  }

  FractureDemoResult run_fracture_demo(const FractureDemoOptions &options)
  {
    if (options.n < 4 || options.n % 4 != 0)
      throw std::invalid_argument("the fracture demo needs n to be a positive multiple of 4");
    options.material.validate();
    if (!(options.threshold >= 0.))
      throw std::invalid_argument("the friction threshold must be non-negative");

    FractureDemoResult out;
    const Box cube{Point3::Zero(), Point3::Ones()};
    out.mesh = build_cartesian(options.n, cube, demo_planes(options.threshold));
    const DDRSpace space(out.mesh.mesh, out.mesh.fracture);

    const SidedField zero = [](const Point3 &, const Point3 &) { return Eigen::Vector3d::Zero().eval(); };
    const SystemBlocks sys = assemble(space, options.material, zero);
    const Eigen::Vector3d d = options.top_displacement;
    const Eigen::VectorXd lift = space.interpolate([d](const Point3 &x, const Point3 &) -> Eigen::Vector3d { return x.z() * d; });
    const double tol = 1e-12;
    const std::vector<bool> mask =
        boundary_mask_where(space, [tol](const Point3 &x) { return std::abs(x.z()) < tol || std::abs(x.z() - 1.) < tol; });
    const ReducedSystem red = apply_dirichlet(sys, space, lift, mask);

    out.data = make_contact_data(space, options.material, options.newton);
    out.solution = newton_solve(red, out.data, options.newton);
    out.admissibility = check_admissibility(out.solution, out.data);
    for (ContactState s : out.solution.states)
      ++out.histogram[static_cast<std::size_t>(s)];
    return out;
  }

} // namespace ddrc
