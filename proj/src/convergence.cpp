#include <ddrc/verification.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace ddrc
{

  RunResult run_case(const ManufacturedCase &mcase, const RunOptions &options)
  {
    std::vector<FracturePlane> planes;
    if (mcase.fractured)
      planes.push_back(mcase.plane);
    const FracturedMesh fm = build_mesh(options.family, options.n, Box{}, planes, options.seed, options.magnitude);
    const DDRSpace space(fm.mesh, fm.fracture, options.reconstruction);

    const SystemBlocks sys = assemble(space, mcase.material, mcase.body_force_field());
    const Eigen::VectorXd boundary = space.interpolate(mcase.displacement_field());
    const ReducedSystem red = apply_dirichlet(sys, space, boundary);
    const ContactData data = make_contact_data(space, mcase.material, options.newton);

    RunResult r;
    r.n_cells = fm.mesh.n_cells();
    r.n_dofs = space.dofmap().n_dofs();
    r.h = fm.mesh.h();
    r.solution = newton_solve(red, data, options.newton);
    r.errors = compute_errors(space, mcase, r.solution, options.reconstruction.quadrature_order);
    return r;
  }

  std::vector<StudyRow> convergence_study(const ManufacturedCase &mcase, const std::vector<int> &levels, const RunOptions &options)
  {
    if (levels.empty())
      throw std::invalid_argument("convergence study needs at least one level");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<StudyRow> rows;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      StudyRow row;
      row.case_name = mcase.name;
      row.family = options.family;
      row.level = static_cast<int>(l);
      row.n = levels[l];
      row.orders.fill(nan);
      RunOptions opt = options;
      opt.n = levels[l];
      try {
        const RunResult r = run_case(mcase, opt);
        row.h = r.h;
        row.n_cells = r.n_cells;
        row.n_dofs = r.n_dofs;
        row.newton_iters = r.solution.iterations;
        row.errors = r.errors;
      } catch (const std::exception &e) {
        row.failed = true;
        row.message = e.what();
        row.errors = ErrorReport{nan, nan, nan, nan, nan, nan, nan, nan};
      }
      if (!rows.empty() && !row.failed && !rows.back().failed) {
        const StudyRow &prev = rows.back();
        const double lh = std::log(prev.h / row.h);
        const std::array<double, 4> a{prev.errors.e_u, prev.errors.e_jump, prev.errors.e_grad, prev.errors.e_lambda_n};
        const std::array<double, 4> b{row.errors.e_u, row.errors.e_jump, row.errors.e_grad, row.errors.e_lambda_n};
        for (std::size_t k = 0; k < 4; ++k)
          row.orders[k] = std::log(a[k] / b[k]) / lh;
      }
      rows.push_back(row);
    }
    return rows;
  }

  namespace
  {
    std::string fmt(double v)
    {
      if (std::isnan(v))
        return "nan";
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.12g", v);
      return buf;
    }
  } // namespace

  void write_csv_header(std::ostream &os)
  {
    os << "case,family,level,n,h,n_cells,n_dofs,newton_iters,e_u,e_jump,e_grad,e_lambda_n,ord_u,ord_jump,ord_grad,ord_lambda_n\n";
  }

  void write_csv_row(std::ostream &os, const StudyRow &row)
  {
    const ErrorReport &e = row.errors;
    os << row.case_name << ',' << to_string(row.family) << ',' << row.level << ',' << row.n << ',' << fmt(row.h) << ','
       << row.n_cells << ',' << row.n_dofs << ',' << row.newton_iters << ',' << fmt(e.e_u) << ',' << fmt(e.e_jump) << ','
       << fmt(e.e_grad) << ',' << fmt(e.e_lambda_n);
    for (double o : row.orders)
      os << ',' << fmt(o);
    os << '\n';
  }

  void write_csv(std::ostream &os, const std::vector<StudyRow> &rows)
  {
    write_csv_header(os);
    for (const auto &r : rows)
      write_csv_row(os, r);
  }

} // namespace ddrc
