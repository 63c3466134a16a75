#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace divroot {

/// The four real normed division algebras, tagged by dimension.
enum class Algebra : int { Real = 1, Complex = 2, Quaternion = 4, Octonion = 8 };

constexpr int dimension(Algebra a) noexcept { return static_cast<int>(a); }

/// Throws std::invalid_argument unless d is 1, 2, 4 or 8.
Algebra algebra_from_dimension(int d);

/// Accepts "R", "C", "H", "O" (case-insensitive).
Algebra parse_algebra(std::string_view name);
std::string_view algebra_name(Algebra a) noexcept;

class AlgebraMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Element of a division algebra in the Cayley-Dickson basis 1, e1, ..., e_{d-1}.
///
/// The product is the doubling (a,b)(c,d) = (ac - conj(d) b, da + b conj(c)),
/// which fixes i*j = k in the quaternions and e1*e4 = e5 in the octonions.
class Element {
 public:
  static constexpr int kMaxDim = 8;

  Element() noexcept : Element(Algebra::Real) {}
  explicit Element(Algebra a) noexcept : algebra_(a), c_{} {}
  /// Throws if coords.size() != dimension(a) or any coordinate is not finite.
  Element(Algebra a, std::span<const double> coords);
  Element(Algebra a, std::initializer_list<double> coords);

  static Element zero(Algebra a) noexcept { return Element(a); }
  static Element one(Algebra a) noexcept { return real(a, 1.0); }
  static Element real(Algebra a, double r) noexcept {
    Element e(a);
    e.c_[0] = r;
    return e;
  }
  /// Basis unit e_k (e_0 = 1).
  static Element unit(Algebra a, int k);

  Algebra algebra() const noexcept { return algebra_; }
  int dim() const noexcept { return dimension(algebra_); }

  double operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const noexcept {
    return {c_.data(), static_cast<std::size_t>(dim())};
  }
  std::span<double> coords() noexcept { return {c_.data(), static_cast<std::size_t>(dim())}; }

  double re() const noexcept { return c_[0]; }
  Element imag() const noexcept {
    Element e = *this;
    e.c_[0] = 0.0;
    return e;
  }
  double norm2() const noexcept;
  double norm() const noexcept;
  bool is_real(double tol = 0.0) const noexcept;
  bool is_zero() const noexcept { return norm2() == 0.0; }

  Eigen::VectorXd to_vector() const;
  static Element from_vector(Algebra a, const Eigen::Ref<const Eigen::VectorXd>& v);

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(double s) noexcept;
  Element& operator/=(double s) noexcept;

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, double s) noexcept { return a *= s; }
  friend Element operator*(double s, Element a) noexcept { return a *= s; }
  friend Element operator/(Element a, double s) noexcept { return a /= s; }
  friend Element operator-(Element a) noexcept { return a *= -1.0; }
  friend Element operator*(const Element& x, const Element& y);

  friend bool operator==(const Element&, const Element&) = default;

 private:
  Algebra algebra_;
  std::array<double, kMaxDim> c_;
};

std::ostream& operator<<(std::ostream& os, const Element& x);

Element multiply(const Element& x, const Element& y);
Element conjugate(const Element& x) noexcept;
double norm(const Element& x) noexcept;
/// Throws std::domain_error for x == 0.
Element inverse(const Element& x);
/// Left-to-right bracketing ((x x) x) ... ; power(x, 0) == 1.
Element power(const Element& x, int k);

Element commutator(const Element& a, const Element& b);
/// [a, b, c] = (ab)c - a(bc)
Element associator(const Element& a, const Element& b, const Element& c);

/// Distance between elements of the same algebra.
double distance(const Element& a, const Element& b);

/// Real-linear endomorphism of an algebra, stored as a d x d matrix acting on coordinates.
struct LinearMap {
  Algebra algebra = Algebra::Real;
  Eigen::MatrixXd matrix;

  static LinearMap identity(Algebra a);
  Element operator()(const Element& x) const;
  LinearMap compose(const LinearMap& inner) const;  // this o inner
};

struct AutomorphismReport {
  double unit_error = 0.0;            // ||g(1) - 1||
  double orthogonality_error = 0.0;   // max |G G^T - I|
  double multiplicativity_error = 0.0;
  bool ok = false;
};

/// Checks that g fixes 1, is orthogonal, and is multiplicative on `trials` random unit pairs.
AutomorphismReport check_automorphism(const LinearMap& g, std::uint64_t seed, int trials = 100);

/// q -> h q h^{-1} in the quaternions.
LinearMap conjugation_automorphism(const Element& h);

/// Octonion derivation D_{a,b}(x) = [[a,b],x] - 3[a,b,x].
LinearMap derivation(const Element& a, const Element& b);

/// exp(t D_{a,b}), an element of G2.
LinearMap automorphism_from_derivation(const Element& a, const Element& b, double t);

/// Largest Leibniz residual ||D(xy) - D(x)y - xD(y)|| over random pairs.
double leibniz_residual(const LinearMap& d, std::uint64_t seed, int trials = 100);

}  // namespace divroot
