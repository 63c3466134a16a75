#pragma once

#include <Eigen/Dense>

namespace divroot {

/// Matrix exponential by scaling and squaring with a Taylor core.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

struct RankInfo {
  int rank = 0;
  Eigen::VectorXd singular_values;
  /// Smallest ratio sigma_k / sigma_max among the retained values, and largest among the dropped.
  double smallest_kept_ratio = 1.0;
  double largest_dropped_ratio = 0.0;
  bool ambiguous = false;
};

/// Numerical rank: sigma_k > relative * sigma_max. Flags ratios in the ambiguity band.
RankInfo numerical_rank(const Eigen::MatrixXd& m, double relative);

}  // namespace divroot
