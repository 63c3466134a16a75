#include "divroot/algebra.hpp"
#include "divroot/linalg.hpp"
#include "divroot/random.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <stdexcept>

using namespace divroot;

namespace {

using Quat = std::array<double, 4>;

// Hamilton's product written out, independent of the doubling code.
Quat hamilton(const Quat& p, const Quat& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

Quat qconj(const Quat& q) { return {q[0], -q[1], -q[2], -q[3]}; }
Quat qsub(const Quat& a, const Quat& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
Quat qadd(const Quat& a, const Quat& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

// Octonions as quaternion pairs: (a,b)(c,d) = (ac - conj(d) b, da + b conj(c)).
std::array<double, 8> octonion_oracle(const Element& x, const Element& y) {
  const Quat a{x[0], x[1], x[2], x[3]}, b{x[4], x[5], x[6], x[7]};
  const Quat c{y[0], y[1], y[2], y[3]}, d{y[4], y[5], y[6], y[7]};
  const Quat lo = qsub(hamilton(a, c), hamilton(qconj(d), b));
  const Quat hi = qadd(hamilton(d, a), hamilton(b, qconj(c)));
  return {lo[0], lo[1], lo[2], lo[3], hi[0], hi[1], hi[2], hi[3]};
}

double max_abs_diff(const Element& x, const Element& y) {
  double m = 0.0;
  for (int i = 0; i < x.dim(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

}  // namespace

TEST_CASE("algebra tags parse and report dimensions") {
  CHECK(dimension(parse_algebra("O")) == 8);
  CHECK(dimension(parse_algebra("H")) == 4);
  CHECK(algebra_from_dimension(2) == Algebra::Complex);
  CHECK_THROWS_AS(parse_algebra("S"), std::invalid_argument);
  CHECK_THROWS_AS(algebra_from_dimension(16), std::invalid_argument);
}

TEST_CASE("element construction validates coordinates") {
  CHECK_THROWS_AS(Element(Algebra::Quaternion, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(Element(Algebra::Complex, {1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Element::unit(Algebra::Complex, 2), std::out_of_range);
  CHECK_THROWS_AS(Element::one(Algebra::Complex) + Element::one(Algebra::Quaternion), AlgebraMismatch);
}

TEST_CASE("quaternion units") {
  const Algebra h = Algebra::Quaternion;
  const Element i = Element::unit(h, 1), j = Element::unit(h, 2), k = Element::unit(h, 3);
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * i == j);
  CHECK(i * i == Element::real(h, -1.0));
  CHECK(associator(i, j, k).is_zero());
}

TEST_CASE("octonion convention e1 e4 = e5 and nonassociativity") {
  const Algebra o = Algebra::Octonion;
  const auto e = [&](int n) { return Element::unit(o, n); };
  CHECK(e(1) * e(4) == e(5));
  CHECK(e(1) * e(2) == e(3));
  CHECK(e(4) * e(1) == -e(5));
  CHECK(associator(e(1), e(2), e(4)).norm() == doctest::Approx(2.0));
}

TEST_CASE("products agree with the Hamilton and quaternion-pair oracles") {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const Element x = random_element(Algebra::Octonion, rng), y = random_element(Algebra::Octonion, rng);
    const auto want = octonion_oracle(x, y);
    CHECK(max_abs_diff(x * y, Element(Algebra::Octonion, want)) < 1e-13);

    const Element p = random_element(Algebra::Quaternion, rng), q = random_element(Algebra::Quaternion, rng);
    const Quat hq = hamilton({p[0], p[1], p[2], p[3]}, {q[0], q[1], q[2], q[3]});
    CHECK(max_abs_diff(p * q, Element(Algebra::Quaternion, {hq[0], hq[1], hq[2], hq[3]})) < 1e-13);
  }
}

TEST_CASE("division algebra laws on random elements") {
  for (Algebra a : {Algebra::Real, Algebra::Complex, Algebra::Quaternion, Algebra::Octonion}) {
    Rng rng(derive_seed(11, static_cast<std::uint64_t>(dimension(a))));
    for (int t = 0; t < 500; ++t) {
      const Element x = random_element(a, rng), y = random_element(a, rng), z = random_element(a, rng);
      const double s = x.norm() * y.norm();
      CHECK(std::abs((x * y).norm() - s) <= 1e-12 * s);
      CHECK(((x * x) * y - x * (x * y)).norm() <= 1e-12 * x.norm2() * y.norm());
      CHECK(((y * x) * x - y * (x * x)).norm() <= 1e-12 * x.norm2() * y.norm());
      // Moufang: z(x(zy)) = ((zx)z)y
      CHECK((z * (x * (z * y)) - ((z * x) * z) * y).norm() <= 1e-12 * z.norm2() * s);
      CHECK(conjugate(x * y) == conjugate(y) * conjugate(x));
      CHECK(max_abs_diff(x * inverse(x), Element::one(a)) < 1e-13);
      CHECK(max_abs_diff(power(x, 3), (x * x) * x) == 0.0);
    }
  }
  CHECK_THROWS_AS(inverse(Element::zero(Algebra::Octonion)), std::domain_error);
}

TEST_CASE("expm matches the Pade-based reference") {
  Rng rng(3);
  std::normal_distribution<double> n;
  for (int size : {1, 3, 8}) {
    for (double scale : {1e-3, 1.0, 6.0}) {
      Eigen::MatrixXd a(size, size);
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) a(r, c) = scale * n(rng);
      const Eigen::MatrixXd want = a.exp();
      CHECK((expm(a) - want).norm() <= 1e-12 * std::max(1.0, want.norm()));
    }
  }
  CHECK(expm(Eigen::MatrixXd::Zero(4, 4)).isIdentity(0.0));
}

TEST_CASE("numerical rank and ambiguity band") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-3;
  CHECK(numerical_rank(m, 1e-8).rank == 2);
  CHECK_FALSE(numerical_rank(m, 1e-8).ambiguous);
  m(2, 2) = 1e-9;
  const RankInfo r = numerical_rank(m, 1e-8);
  CHECK(r.rank == 2);
  CHECK(r.ambiguous);
}

TEST_CASE("conjugation is an automorphism of H") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const LinearMap g = conjugation_automorphism(random_element(Algebra::Quaternion, rng));
    const AutomorphismReport r = check_automorphism(g, static_cast<std::uint64_t>(t));
    CHECK(r.ok);
    CHECK(r.multiplicativity_error < 1e-8);
  }
  CHECK_THROWS_AS(conjugation_automorphism(Element::unit(Algebra::Octonion, 1)), std::invalid_argument);
  CHECK_THROWS_AS(conjugation_automorphism(Element::zero(Algebra::Quaternion)), std::domain_error);
}

TEST_CASE("octonion derivations satisfy Leibniz and exponentiate into G2") {
  const Algebra o = Algebra::Octonion;
  const LinearMap d12 = derivation(Element::unit(o, 1), Element::unit(o, 2));
  CHECK(leibniz_residual(d12, 1) < 1e-10);
  CHECK(d12(Element::one(o)).norm() < 1e-15);
  CHECK((d12.matrix + d12.matrix.transpose()).norm() < 1e-12);

  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    const Element a = random_element(o, rng), b = random_element(o, rng);
    CHECK(leibniz_residual(derivation(a, b), static_cast<std::uint64_t>(t)) < 1e-10 * a.norm2() * b.norm2());
    const LinearMap g = automorphism_from_derivation(a, b, 0.8);
    const AutomorphismReport r = check_automorphism(g, static_cast<std::uint64_t>(t));
    CHECK(r.ok);
    CHECK(r.orthogonality_error < 1e-10);
  }
  // Commuting a and b give the zero derivation and the identity automorphism.
  const LinearMap zero = derivation(Element::unit(o, 3), Element::unit(o, 3) * 2.0);
  CHECK(zero.matrix.norm() < 1e-14);
  CHECK_THROWS_AS(derivation(Element::unit(Algebra::Quaternion, 1), Element::unit(Algebra::Quaternion, 2)),
                  std::invalid_argument);
}

TEST_CASE("a non-derivation fails the Leibniz check") {
  LinearMap scale = LinearMap::identity(Algebra::Octonion);
  scale.matrix *= 2.0;
  CHECK(leibniz_residual(scale, 1) > 1e-3);
  CHECK_FALSE(check_automorphism(scale, 1).ok);
}
