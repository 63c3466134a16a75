#include "divroot/manifolds.hpp"
#include "divroot/polynomial.hpp"
#include "divroot/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

using namespace divroot;

namespace {

const Algebra H = Algebra::Quaternion;
const Algebra O = Algebra::Octonion;

Element unit(Algebra a, int k) { return Element::unit(a, k); }

Polynomial x2_ix_1(Algebra a, double eps = 1.0) {
  return Polynomial(a, {Element::one(a), eps * unit(a, 1), Element::one(a)});
}

Eigen::MatrixXd fd_jacobian(const Polynomial& p, const Element& x, double h = 1e-6) {
  const int d = x.dim();
  Eigen::MatrixXd j(d, d);
  for (int c = 0; c < d; ++c) {
    Element xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    j.col(c) = (evaluate(p, xp).to_vector() - evaluate(p, xm).to_vector()) / (2 * h);
  }
  return j;
}

}  // namespace

TEST_CASE("construction trims and reports structure") {
  const Polynomial p(H, {Element::one(H), Element::zero(H), Element::one(H), Element::zero(H)});
  CHECK(p.degree() == 2);
  CHECK(p.is_central());
  CHECK(Polynomial::zero(H).degree() == -1);
  CHECK(Polynomial::zero(H).is_zero());
  CHECK(Polynomial::central(H, {1, 0, 0, 0, 1}).support_gcd() == 4);
  CHECK(Polynomial::central(H, {0, 0, 1, 0, 1}).support() == std::vector<int>{2, 4});
  CHECK_FALSE(x2_ix_1(H).is_central());
  CHECK_THROWS_AS(Polynomial(H, {Element::one(O)}), AlgebraMismatch);
}

TEST_CASE("evaluation uses left coefficients") {
  const Polynomial ix(H, {Element::zero(H), unit(H, 1)});
  CHECK(evaluate(ix, unit(H, 2)) == unit(H, 3));  // i j = k, not j i
  const Polynomial p = Polynomial::central(H, {1, 0, 1});
  CHECK(evaluate(p, unit(H, 1)).norm() == 0.0);
  CHECK(evaluate(p, Element::real(H, 2.0)) == Element::real(H, 5.0));
  CHECK(potential(p, Element::real(H, 2.0)) == 25.0);
  CHECK_THROWS_AS(evaluate(p, unit(O, 1)), AlgebraMismatch);
}

TEST_CASE("Jacobian and gradient agree with finite differences") {
  Rng rng(21);
  for (Algebra a : {Algebra::Complex, H, O}) {
    std::vector<Element> c;
    for (int k = 0; k < 4; ++k) c.push_back(random_element(a, rng));
    const Polynomial p(a, c);
    for (int t = 0; t < 5; ++t) {
      const Element x = random_element(a, rng, 0.8);
      const Eigen::MatrixXd j = jacobian(p, x);
      CHECK((j - fd_jacobian(p, x)).norm() <= 1e-6 * std::max(1.0, j.norm()));

      const Eigen::VectorXd g = gradient_potential(p, x);
      Eigen::VectorXd fd(x.dim());
      for (int k = 0; k < x.dim(); ++k) {
        Element xp = x, xm = x;
        xp[k] += 1e-6;
        xm[k] -= 1e-6;
        fd(k) = (potential(p, xp) - potential(p, xm)) / 2e-6;
      }
      CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
      const PotentialAndGradient pg = potential_and_gradient(p, x);
      CHECK(pg.value == doctest::Approx(potential(p, x)));
    }
  }
}

TEST_CASE("right division by a central quadratic") {
  // x^2 + ix + 1 = 1 * (x^2 + 1) + (i x + 0)
  const CentralQuadratic m{0.0, 1.0};
  const CentralDivision d = right_divide_central(x2_ix_1(H), m);
  CHECK(d.quotient.degree() == 0);
  CHECK(d.a == unit(H, 1));
  CHECK(d.b.is_zero());

  Rng rng(4);
  std::vector<Element> c;
  for (int k = 0; k < 6; ++k) c.push_back(random_element(O, rng));
  const Polynomial p(O, c);
  const CentralQuadratic mq = CentralQuadratic::from_root(random_element(O, rng));
  CHECK(division_reconstruction_error(p, mq, right_divide_central(p, mq)) < 1e-12);

  const CentralQuadratic fr = CentralQuadratic::from_root(Element(H, {0.5, 0.0, 1.0, 0.0}));
  CHECK(fr.trace == doctest::Approx(1.0));
  CHECK(fr.normterm == doctest::Approx(1.25));
  CHECK(fr.discriminant() < 0.0);
}

TEST_CASE("localization returns the isolated root or a spherical factor") {
  const Polynomial p = x2_ix_1(H);
  const Element r = unit(H, 1) * ((std::sqrt(5.0) - 1.0) / 2.0);
  const Localization loc = localize_isolated_root(p, r);
  REQUIRE(std::holds_alternative<Element>(loc));
  CHECK(distance(std::get<Element>(loc), r) < 1e-12);

  const Localization sph = localize_isolated_root(Polynomial::central(H, {1, 0, 1}), unit(H, 2));
  REQUIRE(std::holds_alternative<SphericalRoot>(sph));
  CHECK(std::get<SphericalRoot>(sph).factor.trace == doctest::Approx(0.0));
  CHECK(std::get<SphericalRoot>(sph).factor.normterm == doctest::Approx(1.0));

  CHECK_THROWS_AS(localize_isolated_root(p, Element::zero(H)), std::invalid_argument);
}

TEST_CASE("coefficient subalgebra dimensions") {
  CHECK(coefficient_subalgebra(Polynomial::central(O, {1, 0, 1})).dimension == 1);
  CHECK(coefficient_subalgebra(x2_ix_1(O)).dimension == 2);
  CHECK(coefficient_subalgebra(Polynomial(O, {unit(O, 1), unit(O, 2)})).dimension == 4);
  CHECK(coefficient_subalgebra(Polynomial(O, {unit(O, 1), unit(O, 2), unit(O, 4)})).dimension == 8);
  const Subalgebra c = coefficient_subalgebra(x2_ix_1(H));
  CHECK(c.distance_to(Element(H, {3.0, -2.0, 0.0, 0.0})) < 1e-14);
  CHECK(c.distance_to(unit(H, 2)) == doctest::Approx(1.0));
}

TEST_CASE("Newton polish converges to nearby roots") {
  const Polynomial p = x2_ix_1(H);
  const PolishResult r = polish_root(p, Element(H, {0.01, 0.6, 0.02, -0.01}));
  CHECK(r.converged);
  CHECK(r.residual < 1e-14);
  CHECK(distance(r.x, unit(H, 1) * ((std::sqrt(5.0) - 1.0) / 2.0)) < 1e-12);
  // On a sphere the least-squares step lands on some sphere point.
  const PolishResult s = polish_root(Polynomial::central(H, {1, 0, 1}), Element(H, {0.02, 0.9, 0.3, 0.1}));
  CHECK(s.residual < 1e-14);
}

TEST_CASE("deformations") {
  const Deformation d = Deformation::standard_benchmark();
  const Polynomial p = d.at(0.5);
  CHECK(p.coefficient(0) == Element::real(H, 1.5));
  CHECK(p.coefficient(1) == unit(H, 1) * 0.5);
  CHECK(d.at(0.0).is_central());
  CHECK_THROWS_AS(Deformation(x2_ix_1(H), Polynomial::central(H, {1})), std::invalid_argument);
}

TEST_CASE("complex roots against reference values") {
  using C = std::complex<double>;
  // z^5 + (1+2i) z^3 - 3 z + (0.5 - i), reference roots from numpy.roots
  auto roots = complex_roots({C(0.5, -1), C(-3, 0), C(0, 0), C(1, 2), C(0, 0), C(1, 0)});
  std::sort(roots.begin(), roots.end(), [](C a, C b) { return a.real() < b.real(); });
  const C want[] = {{-1.1630976545147511, 0.38529581284973075},
                    {-0.42581932269519374, 1.5567913014935377},
                    {0.13564513805581455, -0.3569903147356065},
                    {0.47700900534204355, -1.4160002937671756},
                    {0.9762628338120863, -0.1690965058404853}};
  REQUIRE(roots.size() == 5);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(roots[static_cast<std::size_t>(k)] - want[k]) < 1e-12);

  const auto real = complex_roots_real_poly({-6, 11, -6, 1});
  REQUIRE(real.size() == 3);
  for (const C& z : real) CHECK(z.imag() == 0.0);

  const auto pair = complex_roots_real_poly({1, 0, 1});
  REQUIRE(pair.size() == 2);
  CHECK(pair[0] == std::conj(pair[1]));
  CHECK(pair[0].imag() > 0.0);

  const auto zeros = complex_roots({C(0), C(0), C(1)});
  CHECK(zeros.size() == 2);
  CHECK(std::abs(zeros[0]) == 0.0);
}
