#include <ddrc/config.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ddrc
{

  namespace
  {
    std::string trim(const std::string &s)
    {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos)
        return "";
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    }

    double to_double(const std::string &key, const std::string &v)
    {
      std::size_t pos = 0;
      double x = 0.;
      try {
        x = std::stod(v, &pos);
      } catch (const std::exception &) {
        pos = 0;
      }
      if (pos == 0 || pos != v.size())
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
      return x;
    }

    long long to_integer(const std::string &key, const std::string &v)
    {
      std::size_t pos = 0;
      long long x = 0;
      try {
        x = std::stoll(v, &pos);
      } catch (const std::exception &) {
        pos = 0;
      }
      if (pos == 0 || pos != v.size())
        throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
      return x;
    }

    std::vector<std::string> split_list(const std::string &v)
    {
      std::vector<std::string> out;
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!trim(item).empty())
          out.push_back(trim(item));
      return out;
    }

    double positive(const std::string &key, double x)
    {
      if (!(x > 0.))
        throw ConfigError("'" + key + "' must be positive");
      return x;
    }
  } // namespace

  ConfigMap parse_config(std::istream &is, const std::string &source)
  {
    ConfigMap out;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos)
        line.erase(hash);
      line = trim(line);
      if (line.empty())
        continue;
      const std::string where = source + ":" + std::to_string(lineno);
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError(where + ": unterminated section header");
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(where + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      if (key.empty())
        throw ConfigError(where + ": empty key");
      out[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
    }
    return out;
  }

  ConfigMap parse_config_file(const std::string &path)
  {
    std::ifstream is(path);
    if (!is)
      throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(is, path);
  }

  const std::vector<std::pair<std::string, std::string>> &config_keys()
  {
    static const std::vector<std::pair<std::string, std::string>> keys{
        {"case.name", "frictionless | tresca | incompressible | quadratic | demo (default frictionless)"},
        {"mesh.family", "cartesian | tetrahedral | hexacut (default cartesian)"},
        {"mesh.n", "cells per direction for run (default 2; demo 8)"},
        {"mesh.levels", "comma-separated n values for convergence (default 2,4)"},
        {"mesh.seed", "hexa-cut perturbation seed (default 1)"},
        {"mesh.perturbation", "hexa-cut perturbation magnitude relative to the spacing (default 0.125)"},
        {"material.E", "Young modulus, with material.nu"},
        {"material.nu", "Poisson ratio, with material.E"},
        {"material.G", "shear modulus override"},
        {"material.L", "Lame L override; also sets the incompressible case parameter"},
        {"material.mu1", "stabilization weight (default 2G)"},
        {"sweep.L", "comma-separated L values; convergence runs one study per value"},
        {"contact.g", "friction threshold override"},
        {"newton.rel_tol", "relative residual tolerance (default 1e-12)"},
        {"newton.abs_tol", "absolute residual tolerance (default 1e-14)"},
        {"newton.max_iter", "iteration cap (default 50)"},
        {"newton.step_tol", "relative step size that also ends the iteration (default 1e-10)"},
        {"newton.beta", "constant penalty for both normal and tangential rows"},
        {"newton.beta_n", "constant normal penalty"},
        {"newton.beta_t", "constant tangential penalty"},
        {"newton.beta_factor", "factor in the default penalties (default 10)"},
        {"quadrature.order", "quadrature order for operators and errors (default 6)"},
        {"output.csv", "CSV output path (default stdout)"},
    };
    return keys;
  }

  RunConfig make_run_config(const ConfigMap &values)
  {
    const auto &keys = config_keys();
    for (const auto &[k, v] : values)
      if (std::none_of(keys.begin(), keys.end(), [&](const auto &p) { return p.first == k; }))
        throw ConfigError("unknown configuration key '" + k + "'");

    RunConfig c;
    const auto get = [&](const std::string &k) -> const std::string * {
      const auto it = values.find(k);
      return it == values.end() ? nullptr : &it->second;
    };

    if (const auto *v = get("case.name")) {
      static const std::vector<std::string> names{"frictionless", "tresca", "incompressible", "quadratic", "demo"};
      if (std::find(names.begin(), names.end(), *v) == names.end())
        throw ConfigError("unknown case '" + *v + "'");
      c.case_name = *v;
    }
    if (c.case_name == "demo")
      c.n = 8;
    if (const auto *v = get("mesh.family")) {
      try {
        c.family = mesh_family_from_string(*v);
      } catch (const std::exception &e) {
        throw ConfigError(e.what());
      }
    }
    if (const auto *v = get("mesh.n")) {
      const long long n = to_integer("mesh.n", *v);
      if (n < 1 || n > 512)
        throw ConfigError("'mesh.n' must be in [1, 512]");
      c.n = static_cast<int>(n);
    }
    if (const auto *v = get("mesh.levels")) {
      c.levels.clear();
      for (const auto &s : split_list(*v)) {
        const long long n = to_integer("mesh.levels", s);
        if (n < 1 || n > 512)
          throw ConfigError("'mesh.levels' entries must be in [1, 512]");
        c.levels.push_back(static_cast<int>(n));
      }
    }
    if (const auto *v = get("mesh.seed")) {
      const long long s = to_integer("mesh.seed", *v);
      if (s < 0)
        throw ConfigError("'mesh.seed' must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    }
    if (const auto *v = get("mesh.perturbation")) {
      c.perturbation = to_double("mesh.perturbation", *v);
      if (!(c.perturbation >= 0.) || c.perturbation >= 0.5)
        throw ConfigError("'mesh.perturbation' must be in [0, 0.5)");
    }

    for (const auto &[key, field] : std::vector<std::pair<std::string, std::optional<double> *>>{
             {"material.E", &c.E}, {"material.nu", &c.nu}, {"material.G", &c.G}, {"material.L", &c.L}, {"material.mu1", &c.mu1}})
      if (const auto *v = get(key))
        *field = to_double(key, *v);
    if (c.E.has_value() != c.nu.has_value())
      throw ConfigError("material.E and material.nu must be given together");
    if (c.E && (c.G || c.L))
      throw ConfigError("give either (material.E, material.nu) or (material.G, material.L), not both");
    if (c.E)
      positive("material.E", *c.E);
    if (c.nu && !(*c.nu >= 0. && *c.nu < 0.5))
      throw ConfigError("'material.nu' must be in [0, 0.5)");
    if (c.G)
      positive("material.G", *c.G);
    if (c.L && !(*c.L >= 0.))
      throw ConfigError("'material.L' must be non-negative");
    if (c.mu1)
      positive("material.mu1", *c.mu1);
    if (const auto *v = get("sweep.L"))
      for (const auto &s : split_list(*v))
        c.sweep_L.push_back(positive("sweep.L", to_double("sweep.L", s)));

    if (const auto *v = get("contact.g")) {
      c.threshold = to_double("contact.g", *v);
      if (!(*c.threshold >= 0.))
        throw ConfigError("'contact.g' must be non-negative");
    }

    if (const auto *v = get("newton.rel_tol"))
      c.newton.rel_tol = positive("newton.rel_tol", to_double("newton.rel_tol", *v));
    if (const auto *v = get("newton.abs_tol"))
      c.newton.abs_tol = positive("newton.abs_tol", to_double("newton.abs_tol", *v));
    if (const auto *v = get("newton.step_tol")) {
      c.newton.step_tol = to_double("newton.step_tol", *v);
      if (!(c.newton.step_tol >= 0.))
        throw ConfigError("'newton.step_tol' must be non-negative");
    }
    if (const auto *v = get("newton.max_iter")) {
      const long long m = to_integer("newton.max_iter", *v);
      if (m < 1)
        throw ConfigError("'newton.max_iter' must be at least 1");
      c.newton.max_iter = static_cast<int>(m);
    }
    if (const auto *v = get("newton.beta")) {
      c.newton.beta_n = positive("newton.beta", to_double("newton.beta", *v));
      c.newton.beta_t = c.newton.beta_n;
    }
    if (const auto *v = get("newton.beta_n"))
      c.newton.beta_n = positive("newton.beta_n", to_double("newton.beta_n", *v));
    if (const auto *v = get("newton.beta_t"))
      c.newton.beta_t = positive("newton.beta_t", to_double("newton.beta_t", *v));
    if (const auto *v = get("newton.beta_factor"))
      c.newton.beta_factor = positive("newton.beta_factor", to_double("newton.beta_factor", *v));

    if (const auto *v = get("quadrature.order")) {
      const long long q = to_integer("quadrature.order", *v);
      if (q < 4 || q > max_quadrature_order)
        throw ConfigError("'quadrature.order' must be in [4, " + std::to_string(max_quadrature_order) + "]");
      c.quadrature_order = static_cast<int>(q);
    }
    if (const auto *v = get("output.csv"))
      c.csv_path = *v;
    return c;
  }

  ManufacturedCase configured_case(const RunConfig &config, std::optional<double> L)
  {
    if (config.case_name == "demo")
      throw ConfigError("the demo is not a manufactured case");
    const std::optional<double> L_eff = L ? L : config.L;
    ManufacturedCase c = case_by_name(config.case_name, L_eff.value_or(1.));
    MaterialParams &m = c.material;
    if (config.E)
      m = MaterialParams::from_young(*config.E, *config.nu);
    if (config.G)
      m.G = *config.G;
    if (L_eff)
      m.L = *L_eff;
    if (config.mu1)
      m.mu1 = *config.mu1;
    if (config.threshold) {
      c.threshold = *config.threshold;
      c.plane.threshold = *config.threshold;
    }
    return c;
  }

  RunOptions run_options(const RunConfig &config)
  {
    RunOptions o;
    o.family = config.family;
    o.n = config.n;
    o.seed = config.seed;
    o.magnitude = config.perturbation;
    o.newton = config.newton;
    o.reconstruction.quadrature_order = config.quadrature_order;
    return o;
  }

} // namespace ddrc
