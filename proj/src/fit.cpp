#include "dirnet/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "dirnet/error.hpp"

namespace dirnet {

namespace {

struct LinearFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd stderr_;
  Eigen::VectorXd residual;
};

LinearFit least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < p) {
    std::ostringstream os;
    os << "rank-deficient design matrix (rank " << qr.rank() << " < " << p
       << " parameters, " << n << " points)";
    throw NumericalError(os.str());
  }
  LinearFit fit;
  fit.beta = qr.solve(y);
  fit.residual = y - design * fit.beta;
  const double dof = static_cast<double>(n - p);
  const double sigma2 = dof > 0 ? fit.residual.squaredNorm() / dof : std::nan("");
  const Eigen::MatrixXd cov =
      (design.transpose() * design).inverse() * sigma2;
  fit.stderr_ = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return fit;
}

void check_input(std::span<const double> x, std::span<const double> y,
                 std::size_t min_points, const char* what) {
  if (x.size() != y.size()) throw ConfigError(std::string(what) + ": x and y differ in length");
  if (x.size() < min_points) {
    std::ostringstream os;
    os << what << " needs at least " << min_points << " points, got " << x.size();
    throw NumericalError(os.str());
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!std::isfinite(x[k]) || !std::isfinite(y[k])) {
      throw NumericalError(std::string(what) + ": non-finite data point");
    }
  }
}

}  // namespace

double FitResult::coefficient(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ConfigError("no fit coefficient named " + name);
  return coefficients[static_cast<std::size_t>(it - names.begin())];
}

double FitResult::standard_error(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ConfigError("no fit coefficient named " + name);
  return standard_errors[static_cast<std::size_t>(it - names.begin())];
}

const char* to_string(FitModel model) {
  return model == FitModel::kCubeRootLaw ? "cube_root_law" : "power_law";
}

FitResult fit_cube_root_law(std::span<const double> x, std::span<const double> y) {
  check_input(x, y, 4, "cube-root-law fit");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    design(k, 0) = 1.0;
    design(k, 1) = -std::cbrt(x[k]);
    design(k, 2) = x[k];
    rhs(k) = y[k];
  }
  const LinearFit lf = least_squares(design, rhs);

  FitResult r;
  r.model = FitModel::kCubeRootLaw;
  r.names = {"a", "b", "c"};
  r.coefficients = {lf.beta(0), lf.beta(1), lf.beta(2)};
  r.standard_errors = {lf.stderr_(0), lf.stderr_(1), lf.stderr_(2)};
  r.residual_norm = lf.residual.norm();
  r.window_lo = *std::min_element(x.begin(), x.end());
  r.window_hi = *std::max_element(x.begin(), x.end());
  r.points = x.size();
  std::ostringstream diag;
  for (std::size_t k = 0; k < 3; ++k) {
    if (!(r.coefficients[k] > 0.0)) {
      r.constraints_satisfied = false;
      diag << r.names[k] << " = " << r.coefficients[k] << " is not positive; ";
    }
  }
  r.diagnostics = diag.str();
  return r;
}

FitResult fit_power_law(std::span<const double> x, std::span<const double> y) {
  check_input(x, y, 3, "power-law fit");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) {
      throw NumericalError("power-law fit needs strictly positive x and y");
    }
    design(k, 0) = 1.0;
    design(k, 1) = std::log(x[k]);
    rhs(k) = std::log(y[k]);
  }
  const LinearFit lf = least_squares(design, rhs);

  FitResult r;
  r.model = FitModel::kPowerLaw;
  r.names = {"c", "p"};
  const double c = std::exp(lf.beta(0));
  r.coefficients = {c, lf.beta(1)};
  // Delta method for c = exp(log c).
  r.standard_errors = {c * lf.stderr_(0), lf.stderr_(1)};
  double ss = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double e = y[k] - c * std::pow(x[k], lf.beta(1));
    ss += e * e;
  }
  r.residual_norm = std::sqrt(ss);
  r.window_lo = *std::min_element(x.begin(), x.end());
  r.window_hi = *std::max_element(x.begin(), x.end());
  r.points = x.size();
  return r;
}

}  // namespace dirnet
