#pragma once

#include "divroot/algebra.hpp"
#include "divroot/polynomial.hpp"

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace divroot {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All roots of a complex polynomial (coefficients ascending) by Aberth-Ehrlich iteration.
/// Throws ConvergenceError if the sweeps do not settle.
std::vector<std::complex<double>> complex_roots(const std::vector<std::complex<double>>& coeffs);

/// Roots of a real polynomial; non-real roots come out as exact conjugate pairs, each
/// pair listed with the positive imaginary part first.
std::vector<std::complex<double>> complex_roots_real_poly(const std::vector<double>& coeffs);

namespace stratum {
struct IsolatedReal {
  double value = 0.0;
};
/// {re + radius u : u unit imaginary}
struct Sphere {
  double re = 0.0;
  double radius = 1.0;
};
struct IsolatedPoint {
  Element point;
};
}  // namespace stratum

/// Connected component of a root set.
struct RootStratum {
  Algebra algebra = Algebra::Quaternion;
  std::variant<stratum::IsolatedReal, stratum::Sphere, stratum::IsolatedPoint> shape;

  /// 0 for points, d - 2 for spheres.
  int dimension() const noexcept;
  bool is_sphere() const noexcept { return std::holds_alternative<stratum::Sphere>(shape); }
  std::string describe() const;
};

struct RootSet {
  std::vector<RootStratum> strata;
  int hausdorff_dimension = 0;
};

/// Root set of a central polynomial via its real auxiliary polynomial.
/// Throws std::invalid_argument for non-central input or the real algebra.
RootSet central_root_set(const Polynomial& p);

/// n points on the stratum; uniform on spheres.
std::vector<Element> sample_stratum(const RootStratum& s, int n, std::uint64_t seed);

struct SymmetryReport {
  int order = 1;  // gcd of the exponents with nonzero coefficients
  std::vector<std::complex<double>> roots;
  double max_mismatch = 0.0;
  bool invariant = false;
};

/// Rotates every root by exp(2 pi i / d) and matches it against the root set.
SymmetryReport cd_symmetry_check(const Polynomial& p);

/// potential(P, g(x)) for a root x; throws if x is not a root or g is not orthogonal and unital.
double orbit_invariance_check(const Polynomial& p, const LinearMap& g, const Element& x);

struct DimensionRow {
  double epsilon = 0.0;
  int dimension = 0;
  int roots_found = 0;
  bool flagged = false;
  std::string note;
};

/// Hausdorff dimension of the root set of D(eps) for each eps.
std::vector<DimensionRow> hausdorff_dimension_scan(const Deformation& d,
                                                   const std::vector<double>& epsilons,
                                                   std::uint64_t seed = 1);

struct RankReport {
  int rank = 0;
  bool ambiguous = false;
};
RankReport jacobian_rank(const Polynomial& p, const Element& x);

}  // namespace divroot
