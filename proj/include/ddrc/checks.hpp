// Property checks on the discrete operators: polynomial consistency of the
// reconstructions, Fortin commutation of the interpolator and the patch test.

#ifndef DDRC_CHECKS_HPP
#define DDRC_CHECKS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ddrc
{

  enum class CheckStatus
  {
    Pass,
    /// Above the tolerance but within `marginal_factor` of it; typical of roundoff-limited checks
    Marginal,
    Fail
  };

  std::string to_string(CheckStatus status);

  struct CheckResult
  {
    std::string name;
    double error = 0.;
    double tolerance = 0.;
    CheckStatus status = CheckStatus::Pass;
  };

  struct CheckOptions
  {
    /// Random fields per cell
    int samples = 20;
    std::uint64_t seed = 2024;
    /// Replaces every per-check tolerance when set
    std::optional<double> tolerance;
    double marginal_factor = 1e4;
    /// Forwarded to the reconstruction; any value other than 1 breaks stabilization consistency
    double stabilization_face_factor = 1.;
    bool include_patch_test = true;
  };

  /// Identity checks on cube, Kuhn tetrahedron and perturbed hexa-cut cells
  std::vector<CheckResult> operator_identity_checks(const CheckOptions &options = {});
  /// int_K (div u - tr G_K I_h u) q for random cubic u and q in P1(K)
  CheckResult fortin_check(const CheckOptions &options = {});
  /// Exact quadratic displacement without fracture, E = 1 and nu in {0.3, 0.49}, Cartesian and tetrahedral n = 2
  std::vector<CheckResult> patch_test_checks(const CheckOptions &options = {});

  std::vector<CheckResult> run_property_checks(const CheckOptions &options = {});

  bool all_passed(const std::vector<CheckResult> &results);

} // namespace ddrc

#endif // DDRC_CHECKS_HPP
