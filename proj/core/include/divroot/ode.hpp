#pragma once

#include <Eigen/Dense>

#include <functional>

namespace divroot {

/// One Dormand-Prince 5(4) step: fifth-order solution plus embedded error estimate.
struct DormandPrinceStep {
  Eigen::VectorXd y;
  Eigen::VectorXd error;
  Eigen::VectorXd derivative_end;  // f(t + h, y), reusable as the next step's first stage
};

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

DormandPrinceStep dormand_prince_step(const OdeRhs& f, double t, const Eigen::VectorXd& y,
                                      const Eigen::VectorXd& dydt, double h);

/// Scaled RMS error norm used for step acceptance.
double error_norm(const Eigen::VectorXd& error, const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                  double rel_tol, double abs_tol);

}  // namespace divroot
