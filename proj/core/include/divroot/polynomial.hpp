#pragma once

#include "divroot/algebra.hpp"

#include <Eigen/Dense>

#include <variant>
#include <vector>

namespace divroot {

/// P(x) = sum_k a_k x^k with left coefficients a_k over a division algebra.
///
/// Trailing zero coefficients are trimmed on construction, so the leading
/// coefficient is nonzero. The zero polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  explicit Polynomial(Algebra a) : algebra_(a) {}
  Polynomial(Algebra a, std::vector<Element> coefficients);

  static Polynomial zero(Algebra a) { return Polynomial(a); }
  /// Coefficients with real values only, e.g. {1, 0, 1} -> 1 + x^2.
  static Polynomial central(Algebra a, const std::vector<double>& coefficients);
  /// The identity polynomial x.
  static Polynomial identity(Algebra a);

  Algebra algebra() const noexcept { return algebra_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<Element>& coefficients() const noexcept { return coeffs_; }
  /// a_k, or zero for k beyond the degree.
  Element coefficient(int k) const;

  /// Every coefficient has zero imaginary part.
  bool is_central() const noexcept;
  /// Exponents with nonzero coefficients, ascending.
  std::vector<int> support() const;
  /// gcd of the support (gcd with 0 is the identity); 0 for the zero polynomial.
  int support_gcd() const;
  double max_coefficient_norm() const noexcept;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(double s) const;

 private:
  void trim();

  Algebra algebra_;
  std::vector<Element> coeffs_;
};

Element evaluate(const Polynomial& p, const Element& x);

/// ||P(x)||^2
double potential(const Polynomial& p, const Element& x);

/// Real d x d Jacobian of x -> P(x); column j is the derivative along e_j.
Eigen::MatrixXd jacobian(const Polynomial& p, const Element& x);

/// grad ||P(x)||^2 = 2 J^T P(x)
Eigen::VectorXd gradient_potential(const Polynomial& p, const Element& x);

/// P(x) and the gradient of its potential in one pass.
struct PotentialAndGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};
PotentialAndGradient potential_and_gradient(const Polynomial& p, const Element& x);

/// M(x) = x^2 - trace x + normterm, the real minimal polynomial of a non-real x0.
struct CentralQuadratic {
  double trace = 0.0;
  double normterm = 0.0;

  static CentralQuadratic from_root(const Element& x0);
  double discriminant() const noexcept { return trace * trace - 4.0 * normterm; }
  Polynomial as_polynomial(Algebra a) const;
};

/// P = Q M + (A x + B).
struct CentralDivision {
  Polynomial quotient;
  Element a;
  Element b;
};

CentralDivision right_divide_central(const Polynomial& p, const CentralQuadratic& m);

/// Largest coefficient-wise difference between Q M + (A x + B) and P.
double division_reconstruction_error(const Polynomial& p, const CentralQuadratic& m,
                                     const CentralDivision& d);

/// Returned when the remainder coefficient A vanishes: M divides P and the
/// root sits on a whole sphere of roots.
struct SphericalRoot {
  CentralQuadratic factor;
  double remainder_norm = 0.0;
};

using Localization = std::variant<Element, SphericalRoot>;

/// x0 must be an approximate root (potential below `root_tolerance`).
/// Returns -A^{-1} B from the central division, or SphericalRoot when A ~ 0.
Localization localize_isolated_root(const Polynomial& p, const Element& x0,
                                    double root_tolerance = 1e-12);

struct Subalgebra {
  int dimension = 1;
  std::vector<Element> basis;  // orthonormal, basis[0] = 1

  /// Distance from x to the span of the basis.
  double distance_to(const Element& x) const;
};

/// Smallest real subalgebra containing 1 and the coefficients of P.
Subalgebra coefficient_subalgebra(const Polynomial& p);

struct PolishResult {
  Element x;
  double residual = 0.0;  // ||P(x)||
  int iterations = 0;
  bool converged = false;
};

/// Newton (least-squares where the Jacobian is singular) until ||P(x)|| < 1e-14 or 50 steps.
PolishResult polish_root(const Polynomial& p, const Element& x0);

/// P_eps = base + eps * direction with a central base.
class Deformation {
 public:
  Deformation(Polynomial base, Polynomial direction);

  const Polynomial& base() const noexcept { return base_; }
  const Polynomial& direction() const noexcept { return direction_; }
  Algebra algebra() const noexcept { return base_.algebra(); }
  Polynomial at(double epsilon) const;

  /// base x^2 + 1, direction i x + 1, over the quaternions.
  static Deformation standard_benchmark();

 private:
  Polynomial base_;
  Polynomial direction_;
};

}  // namespace divroot
