#include "divroot/algebra.hpp"

#include "divroot/linalg.hpp"
#include "divroot/random.hpp"
#include "divroot/tolerances.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>

namespace divroot {

Algebra algebra_from_dimension(int d) {
  switch (d) {
    case 1: return Algebra::Real;
    case 2: return Algebra::Complex;
    case 4: return Algebra::Quaternion;
    case 8: return Algebra::Octonion;
    default: throw std::invalid_argument("algebra dimension must be 1, 2, 4 or 8, got " + std::to_string(d));
  }
}

Algebra parse_algebra(std::string_view name) {
  if (name.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(name[0]))) {
      case 'R': return Algebra::Real;
      case 'C': return Algebra::Complex;
      case 'H': return Algebra::Quaternion;
      case 'O': return Algebra::Octonion;
      default: break;
    }
  }
  throw std::invalid_argument("unknown algebra '" + std::string(name) + "' (expected R, C, H or O)");
}

std::string_view algebra_name(Algebra a) noexcept {
  switch (a) {
    case Algebra::Real: return "R";
    case Algebra::Complex: return "C";
    case Algebra::Quaternion: return "H";
    case Algebra::Octonion: return "O";
  }
  return "?";
}

namespace {

void require_same(const Element& x, const Element& y) {
  if (x.algebra() != y.algebra()) {
    throw AlgebraMismatch("algebra mismatch: " + std::string(algebra_name(x.algebra())) + " vs " +
                          std::string(algebra_name(y.algebra())));
  }
}

void conj_into(const double* x, double* out, int n) {
  out[0] = x[0];
  for (int i = 1; i < n; ++i) out[i] = -x[i];
}

// (a,b)(c,d) = (ac - conj(d) b, da + b conj(c)), halves of length n/2.
void cd_multiply(const double* x, const double* y, double* out, int n) {
  if (n == 1) {
    out[0] = x[0] * y[0];
    return;
  }
  const int h = n / 2;
  const double* a = x;
  const double* b = x + h;
  const double* c = y;
  const double* d = y + h;
  double t1[4], t2[4], conj_buf[4];

  cd_multiply(a, c, t1, h);
  conj_into(d, conj_buf, h);
  cd_multiply(conj_buf, b, t2, h);
  for (int i = 0; i < h; ++i) out[i] = t1[i] - t2[i];

  cd_multiply(d, a, t1, h);
  conj_into(c, conj_buf, h);
  cd_multiply(b, conj_buf, t2, h);
  for (int i = 0; i < h; ++i) out[h + i] = t1[i] + t2[i];
}

}  // namespace

Element::Element(Algebra a, std::span<const double> coords) : algebra_(a), c_{} {
  if (static_cast<int>(coords.size()) != dimension(a)) {
    throw std::invalid_argument("expected " + std::to_string(dimension(a)) + " coordinates, got " +
                                std::to_string(coords.size()));
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!std::isfinite(coords[i])) throw std::invalid_argument("non-finite coordinate");
    c_[i] = coords[i];
  }
}

Element::Element(Algebra a, std::initializer_list<double> coords)
    : Element(a, std::span<const double>(coords.begin(), coords.size())) {}

Element Element::unit(Algebra a, int k) {
  if (k < 0 || k >= dimension(a)) throw std::out_of_range("basis index out of range");
  Element e(a);
  e.c_[static_cast<std::size_t>(k)] = 1.0;
  return e;
}

double Element::norm2() const noexcept {
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) s += c_[i] * c_[i];
  return s;
}

double Element::norm() const noexcept { return std::sqrt(norm2()); }

bool Element::is_real(double tol) const noexcept {
  for (int i = 1; i < dim(); ++i) {
    if (std::abs(c_[i]) > tol) return false;
  }
  return true;
}

Eigen::VectorXd Element::to_vector() const {
  Eigen::VectorXd v(dim());
  for (int i = 0; i < dim(); ++i) v[i] = c_[i];
  return v;
}

Element Element::from_vector(Algebra a, const Eigen::Ref<const Eigen::VectorXd>& v) {
  return Element(a, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

Element& Element::operator+=(const Element& o) {
  require_same(*this, o);
  for (int i = 0; i < dim(); ++i) c_[i] += o.c_[i];
  return *this;
}

Element& Element::operator-=(const Element& o) {
  require_same(*this, o);
  for (int i = 0; i < dim(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Element& Element::operator*=(double s) noexcept {
  for (int i = 0; i < dim(); ++i) c_[i] *= s;
  return *this;
}

Element& Element::operator/=(double s) noexcept {
  for (int i = 0; i < dim(); ++i) c_[i] /= s;
  return *this;
}

Element operator*(const Element& x, const Element& y) {
  require_same(x, y);
  Element out(x.algebra_);
  cd_multiply(x.c_.data(), y.c_.data(), out.c_.data(), x.dim());
  return out;
}

std::ostream& operator<<(std::ostream& os, const Element& x) {
  os << '[';
  for (int i = 0; i < x.dim(); ++i) os << (i ? ", " : "") << x[i];
  return os << ']';
}

Element multiply(const Element& x, const Element& y) { return x * y; }

Element conjugate(const Element& x) noexcept {
  Element c = -x;
  c[0] = x[0];
  return c;
}

double norm(const Element& x) noexcept { return x.norm(); }

Element inverse(const Element& x) {
  const double n2 = x.norm2();
  if (n2 == 0.0) throw std::domain_error("inverse of zero");
  return conjugate(x) / n2;
}

Element power(const Element& x, int k) {
  if (k < 0) throw std::invalid_argument("negative exponent");
  Element p = Element::one(x.algebra());
  for (int i = 0; i < k; ++i) p = p * x;
  return p;
}

Element commutator(const Element& a, const Element& b) { return a * b - b * a; }

Element associator(const Element& a, const Element& b, const Element& c) {
  return (a * b) * c - a * (b * c);
}

double distance(const Element& a, const Element& b) { return (a - b).norm(); }

LinearMap LinearMap::identity(Algebra a) {
  return {a, Eigen::MatrixXd::Identity(dimension(a), dimension(a))};
}

Element LinearMap::operator()(const Element& x) const {
  if (x.algebra() != algebra) throw AlgebraMismatch("linear map applied to element of another algebra");
  const Eigen::VectorXd y = matrix * x.to_vector();
  return Element::from_vector(algebra, y);
}

LinearMap LinearMap::compose(const LinearMap& inner) const {
  if (inner.algebra != algebra) throw AlgebraMismatch("composing maps of different algebras");
  return {algebra, matrix * inner.matrix};
}

namespace {

template <class F>
LinearMap matrix_of(Algebra a, F&& f) {
  const int d = dimension(a);
  LinearMap m{a, Eigen::MatrixXd(d, d)};
  for (int k = 0; k < d; ++k) {
    const Element col = f(Element::unit(a, k));
    for (int r = 0; r < d; ++r) m.matrix(r, k) = col[r];
  }
  return m;
}

}  // namespace

AutomorphismReport check_automorphism(const LinearMap& g, std::uint64_t seed, int trials) {
  const Algebra a = g.algebra;
  const int d = dimension(a);
  AutomorphismReport r;
  r.unit_error = distance(g(Element::one(a)), Element::one(a));
  r.orthogonality_error =
      (g.matrix * g.matrix.transpose() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Element x = random_unit(a, rng);
    const Element y = random_unit(a, rng);
    r.multiplicativity_error = std::max(r.multiplicativity_error, distance(g(x * y), g(x) * g(y)));
  }
  r.ok = r.unit_error <= tol::kOrthogonality && r.orthogonality_error <= tol::kOrthogonality &&
         r.multiplicativity_error <= tol::kMultiplicativity;
  return r;
}

LinearMap conjugation_automorphism(const Element& h) {
  if (h.algebra() != Algebra::Quaternion) {
    throw std::invalid_argument("conjugation automorphisms are built for the quaternions only");
  }
  if (h.is_zero()) throw std::domain_error("conjugation by zero");
  const Element hinv = inverse(h);
  return matrix_of(Algebra::Quaternion, [&](const Element& q) { return (h * q) * hinv; });
}

LinearMap derivation(const Element& a, const Element& b) {
  if (a.algebra() != Algebra::Octonion || b.algebra() != Algebra::Octonion) {
    throw std::invalid_argument("derivations are built for the octonions only");
  }
  const Element ab = commutator(a, b);
  return matrix_of(Algebra::Octonion,
                   [&](const Element& x) { return commutator(ab, x) - 3.0 * associator(a, b, x); });
}

LinearMap automorphism_from_derivation(const Element& a, const Element& b, double t) {
  LinearMap d = derivation(a, b);
  return {Algebra::Octonion, expm(t * d.matrix)};
}

double leibniz_residual(const LinearMap& d, std::uint64_t seed, int trials) {
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Element x = random_element(d.algebra, rng);
    const Element y = random_element(d.algebra, rng);
    worst = std::max(worst, (d(x * y) - d(x) * y - x * d(y)).norm());
  }
  return worst;
}

}  // namespace divroot
