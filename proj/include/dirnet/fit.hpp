#pragma once

#include <span>
#include <string>
#include <vector>

namespace dirnet {

enum class FitModel {
  kCubeRootLaw,  // a - b x^{1/3} + c x
  kPowerLaw,     // c x^p
};

struct FitResult {
  FitModel model = FitModel::kPowerLaw;
  std::vector<std::string> names;     // {a, b, c} or {c, p}
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  double residual_norm = 0.0;         // Euclidean norm of y residuals
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points = 0;
  /// Cube-root law: all of a, b, c strictly positive.
  bool constraints_satisfied = true;
  std::string diagnostics;

  double coefficient(const std::string& name) const;
  double standard_error(const std::string& name) const;
};

/// Linear least squares for y = a - b x^{1/3} + c x. Needs at least four
/// points; a rank-deficient design throws NumericalError.
FitResult fit_cube_root_law(std::span<const double> x, std::span<const double> y);

/// Least squares on log y = log c + p log x. Needs at least three points with
/// x, y > 0.
FitResult fit_power_law(std::span<const double> x, std::span<const double> y);

const char* to_string(FitModel model);

}  // namespace dirnet
