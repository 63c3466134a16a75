#include "divroot/polynomial.hpp"

#include "divroot/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace divroot {

Polynomial::Polynomial(Algebra a, std::vector<Element> coefficients)
    : algebra_(a), coeffs_(std::move(coefficients)) {
  for (const Element& c : coeffs_) {
    if (c.algebra() != a) throw AlgebraMismatch("coefficient from a different algebra");
  }
  trim();
}

Polynomial Polynomial::central(Algebra a, const std::vector<double>& coefficients) {
  std::vector<Element> cs;
  cs.reserve(coefficients.size());
  for (double c : coefficients) cs.push_back(Element::real(a, c));
  return Polynomial(a, std::move(cs));
}

Polynomial Polynomial::identity(Algebra a) { return central(a, {0.0, 1.0}); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Element Polynomial::coefficient(int k) const {
  if (k < 0 || k > degree()) return Element::zero(algebra_);
  return coeffs_[static_cast<std::size_t>(k)];
}

bool Polynomial::is_central() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Element& c) { return c.is_real(); });
}

std::vector<int> Polynomial::support() const {
  std::vector<int> s;
  for (int k = 0; k <= degree(); ++k) {
    if (!coeffs_[static_cast<std::size_t>(k)].is_zero()) s.push_back(k);
  }
  return s;
}

int Polynomial::support_gcd() const {
  int g = 0;
  for (int k : support()) g = std::gcd(g, k);
  return g;
}

double Polynomial::max_coefficient_norm() const noexcept {
  double m = 0.0;
  for (const Element& c : coeffs_) m = std::max(m, c.norm());
  return m;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.algebra_ != algebra_) throw AlgebraMismatch("adding polynomials over different algebras");
  const int n = std::max(degree(), o.degree());
  std::vector<Element> cs;
  for (int k = 0; k <= n; ++k) cs.push_back(coefficient(k) + o.coefficient(k));
  return Polynomial(algebra_, std::move(cs));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<Element> cs = coeffs_;
  for (Element& c : cs) c *= s;
  return Polynomial(algebra_, std::move(cs));
}

Element evaluate(const Polynomial& p, const Element& x) {
  if (x.algebra() != p.algebra()) throw AlgebraMismatch("evaluating polynomial at foreign element");
  Element sum = Element::zero(p.algebra());
  Element xk = Element::one(p.algebra());
  for (int k = 0; k <= p.degree(); ++k) {
    if (k > 0) xk = xk * x;
    sum += p.coefficients()[static_cast<std::size_t>(k)] * xk;
  }
  return sum;
}

double potential(const Polynomial& p, const Element& x) { return evaluate(p, x).norm2(); }

Eigen::MatrixXd jacobian(const Polynomial& p, const Element& x) {
  if (x.algebra() != p.algebra()) throw AlgebraMismatch("jacobian at foreign element");
  const Algebra a = p.algebra();
  const int d = dimension(a);
  const int n = p.degree();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d, d);
  if (n < 1) return jac;

  std::vector<Element> powers(static_cast<std::size_t>(n));  // x^0 .. x^{n-1}
  powers[0] = Element::one(a);
  for (int k = 1; k < n; ++k) powers[k] = powers[k - 1] * x;

  for (int j = 0; j < d; ++j) {
    const Element e = Element::unit(a, j);
    // d(x^k) = d(x^{k-1}) x + x^{k-1} e for the bracketing x^k = x^{k-1} x
    Element dxk = Element::zero(a);
    Element col = Element::zero(a);
    for (int k = 1; k <= n; ++k) {
      dxk = dxk * x + powers[k - 1] * e;
      col += p.coefficients()[static_cast<std::size_t>(k)] * dxk;
    }
    for (int r = 0; r < d; ++r) jac(r, j) = col[r];
  }
  return jac;
}

Eigen::VectorXd gradient_potential(const Polynomial& p, const Element& x) {
  return potential_and_gradient(p, x).gradient;
}

PotentialAndGradient potential_and_gradient(const Polynomial& p, const Element& x) {
  const Element value = evaluate(p, x);
  return {value.norm2(), 2.0 * jacobian(p, x).transpose() * value.to_vector()};
}

CentralQuadratic CentralQuadratic::from_root(const Element& x0) {
  return {2.0 * x0.re(), x0.norm2()};
}

Polynomial CentralQuadratic::as_polynomial(Algebra a) const {
  return Polynomial::central(a, {normterm, -trace, 1.0});
}

CentralDivision right_divide_central(const Polynomial& p, const CentralQuadratic& m) {
  const Algebra a = p.algebra();
  std::vector<Element> r = p.coefficients();
  const int n = p.degree();
  std::vector<Element> q(static_cast<std::size_t>(std::max(n - 1, 0)), Element::zero(a));
  for (int k = n; k >= 2; --k) {
    const Element lead = r[k];
    q[k - 2] = lead;
    r[k - 1] += m.trace * lead;
    r[k - 2] -= m.normterm * lead;
    r[k] = Element::zero(a);
  }
  const Element A = n >= 1 ? r[1] : Element::zero(a);
  const Element B = n >= 0 ? r[0] : Element::zero(a);
  return {Polynomial(a, std::move(q)), A, B};
}

double division_reconstruction_error(const Polynomial& p, const CentralQuadratic& m,
                                     const CentralDivision& d) {
  const Algebra a = p.algebra();
  const double mc[3] = {m.normterm, -m.trace, 1.0};
  const int n = std::max(p.degree(), d.quotient.degree() + 2);
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    Element c = Element::zero(a);
    for (int i = 0; i < 3; ++i) c += mc[i] * d.quotient.coefficient(k - i);
    if (k == 0) c += d.b;
    if (k == 1) c += d.a;
    worst = std::max(worst, distance(c, p.coefficient(k)));
  }
  return worst;
}

Localization localize_isolated_root(const Polynomial& p, const Element& x0, double root_tolerance) {
  if (potential(p, x0) >= root_tolerance) {
    throw std::invalid_argument("localize_isolated_root: x0 is not a root");
  }
  const CentralQuadratic m = CentralQuadratic::from_root(x0);
  const CentralDivision d = right_divide_central(p, m);
  const double threshold = tol::kSphericalRootScale * (1.0 + p.max_coefficient_norm());
  if (d.a.norm() < threshold) return SphericalRoot{m, d.a.norm()};
  return Element(-(inverse(d.a) * d.b));
}

double Subalgebra::distance_to(const Element& x) const {
  Element r = x;
  for (const Element& b : basis) {
    double dot = 0.0;
    for (int i = 0; i < x.dim(); ++i) dot += x[i] * b[i];
    r -= dot * b;
  }
  return r.norm();
}

namespace {

// Adds the part of x orthogonal to the basis, if it is not negligible relative to `scale`.
bool extend_basis(std::vector<Element>& basis, Element x, double scale) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Element& b : basis) {
      double dot = 0.0;
      for (int i = 0; i < x.dim(); ++i) dot += x[i] * b[i];
      x -= dot * b;
    }
  }
  const double n = x.norm();
  if (n <= tol::kSubalgebraResidual * scale) return false;
  basis.push_back(x / n);
  return true;
}

}  // namespace

Subalgebra coefficient_subalgebra(const Polynomial& p) {
  const Algebra a = p.algebra();
  std::vector<Element> basis{Element::one(a)};
  for (const Element& c : p.coefficients()) {
    if (!c.is_zero()) extend_basis(basis, c, c.norm());
  }
  bool grew = true;
  while (grew && static_cast<int>(basis.size()) < dimension(a)) {
    grew = false;
    const std::size_t n = basis.size();
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 1; j < n; ++j) {
        if (extend_basis(basis, basis[i] * basis[j], 1.0)) grew = true;
      }
    }
  }
  return {static_cast<int>(basis.size()), basis};
}

PolishResult polish_root(const Polynomial& p, const Element& x0) {
  PolishResult best{x0, evaluate(p, x0).norm(), 0, false};
  Element x = x0;
  int stagnant = 0;
  for (int it = 1; it <= tol::kNewtonMaxIter; ++it) {
    if (best.residual < tol::kNewtonResidual) break;
    const Element r = evaluate(p, x);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian(p, x), Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-10);
    const Eigen::VectorXd step = svd.solve(r.to_vector());
    x = x - Element::from_vector(p.algebra(), step);
    const double res = evaluate(p, x).norm();
    if (!std::isfinite(res)) break;
    if (res < best.residual) {
      stagnant = res < 0.5 * best.residual ? 0 : stagnant + 1;
      best = {x, res, it, false};
    } else {
      ++stagnant;
    }
    if (stagnant >= 3) break;
  }
  best.converged = best.residual < tol::kNewtonResidual;
  return best;
}

Deformation::Deformation(Polynomial base, Polynomial direction)
    : base_(std::move(base)), direction_(std::move(direction)) {
  if (base_.algebra() != direction_.algebra()) {
    throw AlgebraMismatch("deformation base and direction over different algebras");
  }
  if (!base_.is_central()) throw std::invalid_argument("deformation base must be central");
}

Polynomial Deformation::at(double epsilon) const { return base_ + direction_ * epsilon; }

Deformation Deformation::standard_benchmark() {
  const Algebra h = Algebra::Quaternion;
  return Deformation(Polynomial::central(h, {1.0, 0.0, 1.0}),
                     Polynomial(h, {Element::one(h), Element::unit(h, 1)}));
}

}  // namespace divroot
