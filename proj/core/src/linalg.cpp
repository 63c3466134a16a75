#include "divroot/linalg.hpp"

#include "divroot/tolerances.hpp"

#include <cmath>

namespace divroot {

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > tol::kExpmScaledNorm) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / tol::kExpmScaledNorm)));
  }
  const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);

  // ||scaled|| <= 1, so 30 terms bound the truncation by 1/30! ~ 4e-33.
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

RankInfo numerical_rank(const Eigen::MatrixXd& m, double relative) {
  RankInfo info;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  info.singular_values = svd.singularValues();
  const double smax = info.singular_values.size() ? info.singular_values[0] : 0.0;
  if (smax == 0.0) {
    info.smallest_kept_ratio = 0.0;
    return info;
  }
  for (Eigen::Index k = 0; k < info.singular_values.size(); ++k) {
    const double ratio = info.singular_values[k] / smax;
    if (ratio > relative) {
      ++info.rank;
      info.smallest_kept_ratio = ratio;
    } else {
      info.largest_dropped_ratio = std::max(info.largest_dropped_ratio, ratio);
    }
    if (ratio > tol::kRankAmbiguityLow && ratio < tol::kRankAmbiguityHigh) info.ambiguous = true;
  }
  return info;
}

}  // namespace divroot
