// Run configuration: key=value text files with dotted keys or [section]
// headers, merged with command-line overrides.

#ifndef DDRC_CONFIG_HPP
#define DDRC_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <ddrc/contact_solver.hpp>
#include <ddrc/mesh_generators.hpp>
#include <ddrc/verification.hpp>

namespace ddrc
{

  class ConfigError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  /// Flat key -> value map; later assignments win
  using ConfigMap = std::map<std::string, std::string>;

  /// Parses `key = value` lines. `[section]` prefixes later keys with "section."; '#' starts a comment.
  ConfigMap parse_config(std::istream &is, const std::string &source = "<config>");
  ConfigMap parse_config_file(const std::string &path);

  /// Every accepted key, with its default shown in the help text
  const std::vector<std::pair<std::string, std::string>> &config_keys();

  struct RunConfig
  {
    /// frictionless, tresca, incompressible, quadratic or demo
    std::string case_name = "frictionless";
    MeshFamily family = MeshFamily::Cartesian;
    int n = 2;
    std::vector<int> levels{2, 4};
    std::uint64_t seed = 1;
    double perturbation = 0.125;

    std::optional<double> E, nu, G, L, mu1;
    /// L values for a locking sweep; empty means a single run with the case default
    std::vector<double> sweep_L;
    std::optional<double> threshold;

    NewtonConfig newton;
    int quadrature_order = default_quadrature_order;

    std::string csv_path;
  };

  /// Validates keys and values; throws ConfigError on unknown keys or malformed values
  RunConfig make_run_config(const ConfigMap &values);

  /// Manufactured case with the material and threshold overrides applied; `L` replaces the case default when given
  ManufacturedCase configured_case(const RunConfig &config, std::optional<double> L = std::nullopt);
  RunOptions run_options(const RunConfig &config);

} // namespace ddrc

#endif // DDRC_CONFIG_HPP
