#include <ddrc/cli.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include <ddrc/checks.hpp>
#include <ddrc/config.hpp>
#include <ddrc/demo.hpp>
#include <ddrc/mesh_io.hpp>
#include <ddrc/parallel.hpp>

namespace ddrc
{

  namespace
  {
    const char *state_names[4] = {"open-stick", "contact-stick", "open-slip", "contact-slip"};

    /// Flags shared by the solve and mesh subcommands; each one writes a config key
    void add_config_flags(CLI::App &app, ConfigMap &overrides, std::string &config_path)
    {
      app.add_option("-c,--config", config_path, "key=value configuration file; flags override it");
      const std::vector<std::pair<std::string, std::string>> flags{
          {"--case", "case.name"},
          {"--family", "mesh.family"},
          {"--n", "mesh.n"},
          {"--levels", "mesh.levels"},
          {"--seed", "mesh.seed"},
          {"--perturbation", "mesh.perturbation"},
          {"--E", "material.E"},
          {"--nu", "material.nu"},
          {"--G", "material.G"},
          {"--L", "material.L"},
          {"--mu1", "material.mu1"},
          {"--sweep-L", "sweep.L"},
          {"--g", "contact.g"},
          {"--beta", "newton.beta"},
          {"--beta-n", "newton.beta_n"},
          {"--beta-t", "newton.beta_t"},
          {"--beta-factor", "newton.beta_factor"},
          {"--rel-tol", "newton.rel_tol"},
          {"--abs-tol", "newton.abs_tol"},
          {"--max-iter", "newton.max_iter"},
          {"--quadrature-order", "quadrature.order"},
          {"--csv", "output.csv"},
      };
      for (const auto &[flag, key] : flags) {
        const std::string k = key;
        app.add_option_function<std::string>(flag, [&overrides, k](const std::string &v) { overrides[k] = v; }, "sets " + key);
      }
      app.add_option_function<std::vector<std::string>>(
          "--set",
          [&overrides](const std::vector<std::string> &items) {
            for (const auto &item : items) {
              const auto eq = item.find('=');
              if (eq == std::string::npos || eq == 0)
                throw ConfigError("--set expects key=value, got '" + item + "'");
              overrides[item.substr(0, eq)] = item.substr(eq + 1);
            }
          },
          "any configuration key as key=value (repeatable)");
    }

    RunConfig load_config(const std::string &path, const ConfigMap &overrides)
    {
      ConfigMap values;
      if (!path.empty())
        values = parse_config_file(path);
      for (const auto &[k, v] : overrides)
        values[k] = v;
      return make_run_config(values);
    }

    /// CSV goes to the configured path, or to `out` when none is set
    class CsvSink
    {
    public:
      CsvSink(const std::string &path, std::ostream &out)
      {
        if (path.empty()) {
          m_os = &out;
        } else {
          m_file = std::make_unique<std::ofstream>(path);
          if (!*m_file)
            throw ConfigError("cannot open '" + path + "' for writing");
          m_os = m_file.get();
        }
      }
      std::ostream &stream() { return *m_os; }

    private:
      std::unique_ptr<std::ofstream> m_file;
      std::ostream *m_os = nullptr;
    };

    void print_states(std::ostream &out, const std::vector<ContactState> &states)
    {
      std::array<int, 4> h{};
      for (ContactState s : states)
        ++h[static_cast<std::size_t>(s)];
      out << "contact states:";
      for (std::size_t i = 0; i < 4; ++i)
        out << ' ' << i << ':' << state_names[i] << '=' << h[i];
      out << '\n';
    }

    void print_newton(std::ostream &out, const ContactSolution &s)
    {
      out << "newton iterations " << s.iterations << ", residual " << std::scientific << std::setprecision(3)
          << s.residual_history.front() << " -> " << s.residual_history.back() << std::defaultfloat
          << (s.stopped_on_step ? " (stopped on step size)" : "") << '\n';
    }

    int cmd_run(const RunConfig &cfg, std::ostream &out)
    {
      if (cfg.case_name == "demo") {
        FractureDemoOptions opt;
        opt.n = cfg.n;
        opt.newton = cfg.newton;
        if (cfg.E)
          opt.material = MaterialParams::from_young(*cfg.E, *cfg.nu);
        if (cfg.G)
          opt.material.G = *cfg.G;
        if (cfg.L)
          opt.material.L = *cfg.L;
        if (cfg.mu1)
          opt.material.mu1 = *cfg.mu1;
        if (cfg.threshold)
          opt.threshold = *cfg.threshold;
        const FractureDemoResult r = run_fracture_demo(opt);
        out << "case demo  n " << cfg.n << "  cells " << r.mesh.mesh.n_cells() << "  fracture faces " << r.mesh.fracture.size()
            << '\n';
        print_newton(out, r.solution);
        print_states(out, r.solution.states);
        const Admissibility &a = r.admissibility;
        out << "admissibility: normal sign " << a.normal_sign << ", friction bound " << a.friction_bound << ", penetration "
            << a.penetration << ", complementarity " << a.complementarity << ", dissipation " << a.dissipation << '\n';
        return 0;
      }

      const ManufacturedCase mc = configured_case(cfg);
      const RunOptions opt = run_options(cfg);
      const RunResult r = run_case(mc, opt);
      out << "case " << mc.name << "  family " << to_string(cfg.family) << "  n " << cfg.n << "  seed " << cfg.seed << '\n';
      out << "cells " << r.n_cells << "  dofs " << r.n_dofs << "  h " << r.h << '\n';
      print_newton(out, r.solution);
      print_states(out, r.solution.states);

      StudyRow row;
      row.case_name = mc.name;
      row.family = cfg.family;
      row.n = cfg.n;
      row.h = r.h;
      row.n_cells = r.n_cells;
      row.n_dofs = r.n_dofs;
      row.newton_iters = r.solution.iterations;
      row.errors = r.errors;
      row.orders.fill(std::numeric_limits<double>::quiet_NaN());
      CsvSink sink(cfg.csv_path, out);
      write_csv_header(sink.stream());
      write_csv_row(sink.stream(), row);
      return 0;
    }

    int cmd_convergence(const RunConfig &cfg, std::ostream &out, std::ostream &err)
    {
      if (cfg.case_name == "demo")
        throw ConfigError("convergence needs a manufactured case");
      if (cfg.levels.empty())
        throw ConfigError("convergence needs a non-empty level list");
      const RunOptions opt = run_options(cfg);
      std::vector<StudyRow> rows;
      if (cfg.sweep_L.empty()) {
        rows = convergence_study(configured_case(cfg), cfg.levels, opt);
      } else {
        for (double L : cfg.sweep_L) {
          auto part = convergence_study(configured_case(cfg, L), cfg.levels, opt);
          char tag[32];
          std::snprintf(tag, sizeof tag, "_L%g", L);
          for (auto &r : part)
            r.case_name += tag;
          rows.insert(rows.end(), part.begin(), part.end());
        }
      }
      CsvSink sink(cfg.csv_path, out);
      write_csv(sink.stream(), rows);
      bool failed = false;
      for (const auto &r : rows)
        if (r.failed) {
          err << "level n=" << r.n << " of " << r.case_name << " failed: " << r.message << '\n';
          failed = true;
        }
      return failed ? 2 : 0;
    }

    FracturedMesh configured_mesh(const RunConfig &cfg)
    {
      if (cfg.case_name == "demo") {
        const double g = cfg.threshold.value_or(FractureDemoOptions{}.threshold);
        return build_cartesian(cfg.n, Box{Point3::Zero(), Point3::Ones()}, demo_planes(g));
      }
      const ManufacturedCase mc = configured_case(cfg);
      std::vector<FracturePlane> planes;
      if (mc.fractured)
        planes.push_back(mc.plane);
      return build_mesh(cfg.family, cfg.n, Box{}, planes, cfg.seed, cfg.perturbation);
    }

    int cmd_mesh_info(const RunConfig &cfg, std::ostream &out)
    {
      const FracturedMesh fm = configured_mesh(cfg);
      const DDRSpace space(fm.mesh, fm.fracture);
      const DofMap &dm = space.dofmap();
      out << "family " << (cfg.case_name == "demo" ? "cartesian (demo)" : to_string(cfg.family)) << "  n " << cfg.n
          << "  seed " << cfg.seed << '\n'
          << "vertices " << fm.mesh.n_vertices() << "  edges " << fm.mesh.n_edges() << "  faces " << fm.mesh.n_faces()
          << "  cells " << fm.mesh.n_cells() << '\n'
          << "fracture faces " << fm.fracture.size() << "  h " << std::setprecision(12) << fm.mesh.h() << '\n'
          << "dof blocks: vertex " << dm.n_vertex_blocks() << "  edge " << dm.n_edge_blocks() << "  face "
          << dm.n_face_blocks() << "  cell " << dm.n_cell_blocks() << "  total dofs " << dm.n_dofs() << "  free "
          << dm.n_free_dofs() << '\n';
      return 0;
    }

    int cmd_export_mesh(const RunConfig &cfg, const std::string &path, std::ostream &out)
    {
      const FracturedMesh fm = configured_mesh(cfg);
      if (path.empty() || path == "-")
        write_polymesh(out, fm.mesh, fm.fracture);
      else
        write_polymesh_file(path, fm.mesh, fm.fracture);
      return 0;
    }

    int cmd_checks(const CheckOptions &opt, std::ostream &out)
    {
      const std::vector<CheckResult> results = run_property_checks(opt);
      std::size_t width = 0;
      for (const auto &r : results)
        width = std::max(width, r.name.size());
      for (const auto &r : results) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%10.3e  %8.1e  ", r.error, r.tolerance);
        out << std::left << std::setw(static_cast<int>(width) + 2) << r.name << std::right << buf << to_string(r.status) << '\n';
      }
      const bool ok = all_passed(results);
      out << (ok ? "all checks passed" : "some checks did not pass") << '\n';
      return ok ? 0 : 2;
    }
  } // namespace

  int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
  {
    CLI::App app{"Polytopal discretization of elasticity with Tresca contact on fractures"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    ConfigMap overrides;
    std::string config_path, export_path;
    CheckOptions check_opt;
    bool list_keys = false;

    CLI::App *run = app.add_subcommand("run", "solve one case and print a summary and a CSV row");
    CLI::App *conv = app.add_subcommand("convergence", "run the case on each level and write the CSV table");
    CLI::App *info = app.add_subcommand("mesh-info", "print mesh and DOF counts and h");
    CLI::App *exp = app.add_subcommand("export-mesh", "write the mesh and fracture in POLYMESH v1 format");
    CLI::App *chk = app.add_subcommand("checks", "run the operator property checks");
    CLI::App *keys = app.add_subcommand("keys", "list the configuration keys");
    for (CLI::App *sub : {run, conv, info, exp})
      add_config_flags(*sub, overrides, config_path);
    exp->add_option("-o,--out", export_path, "output file ('-' for stdout)");
    chk->add_option("--samples", check_opt.samples, "random fields per cell")->check(CLI::PositiveNumber);
    chk->add_option("--seed", check_opt.seed, "random seed");
    chk->add_option_function<double>("--tolerance", [&check_opt](double t) { check_opt.tolerance = t; },
                                     "use one tolerance for every check");
    chk->add_option("--stab-face-factor", check_opt.stabilization_face_factor,
                    "debug: weight of the face term in the stabilization (1 is consistent)");
    chk->add_flag("--no-patch", [&check_opt](std::int64_t) { check_opt.include_patch_test = false; },
                  "skip the patch tests");
    keys->callback([&list_keys] { list_keys = true; });

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? 0 : 1;
    } catch (const ConfigError &e) {
      err << "configuration error: " << e.what() << '\n';
      return 1;
    }

    try {
      if (list_keys) {
        for (const auto &[k, d] : config_keys())
          out << std::left << std::setw(22) << k << d << '\n';
        return 0;
      }
      if (chk->parsed()) {
        err << "threads " << thread_count() << ", seed " << check_opt.seed << '\n';
        return cmd_checks(check_opt, out);
      }
      const RunConfig cfg = load_config(config_path, overrides);
      if (run->parsed())
        return cmd_run(cfg, out);
      if (conv->parsed())
        return cmd_convergence(cfg, out, err);
      if (info->parsed())
        return cmd_mesh_info(cfg, out);
      if (exp->parsed())
        return cmd_export_mesh(cfg, export_path, out);
    } catch (const ConfigError &e) {
      err << "configuration error: " << e.what() << '\n';
      return 1;
    } catch (const std::invalid_argument &e) {
      err << "invalid input: " << e.what() << '\n';
      return 1;
    } catch (const MeshError &e) {
      err << "mesh error: " << e.what() << '\n';
      return 1;
    } catch (const SolverFailure &e) {
      err << "solver failure: " << e.what() << " (residual history:";
      for (double r : e.residual_history)
        err << ' ' << r;
      err << ")\n";
      return 2;
    } catch (const std::exception &e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
    return 1;
  }

} // namespace ddrc
