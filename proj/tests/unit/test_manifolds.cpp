#include "divroot/manifolds.hpp"
#include "divroot/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace divroot;

namespace {

const Algebra H = Algebra::Quaternion;
const Algebra O = Algebra::Octonion;

std::vector<stratum::Sphere> spheres(const RootSet& s) {
  std::vector<stratum::Sphere> out;
  for (const RootStratum& r : s.strata) {
    if (const auto* sp = std::get_if<stratum::Sphere>(&r.shape)) out.push_back(*sp);
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.re < b.re; });
  return out;
}

}  // namespace

TEST_CASE("x^2 + 1 inflates into the unit imaginary sphere") {
  for (Algebra a : {Algebra::Complex, H, O}) {
    const Polynomial p = Polynomial::central(a, {1, 0, 1});
    const RootSet s = central_root_set(p);
    REQUIRE(s.strata.size() == 1);
    CHECK(s.hausdorff_dimension == dimension(a) - 2);
    const auto sp = spheres(s);
    REQUIRE(sp.size() == 1);
    CHECK(sp[0].re == doctest::Approx(0.0));
    CHECK(sp[0].radius == doctest::Approx(1.0));
    for (const Element& x : sample_stratum(s.strata[0], 32, 5)) CHECK(potential(p, x) < 1e-18);
  }
  CHECK(central_root_set(Polynomial::central(H, {1, 0, 1})).strata[0].describe() == "Sphere re=0 radius=1 dim=2");
}

TEST_CASE("mixed strata of a quartic") {
  // x^4 - 2x^3 + 3x^2 - 4x + 5, complex roots from numpy.roots
  const RootSet s = central_root_set(Polynomial::central(H, {5, -4, 3, -2, 1}));
  const auto sp = spheres(s);
  REQUIRE(sp.size() == 2);
  CHECK(sp[0].re == doctest::Approx(-0.2878154795576478).epsilon(1e-12));
  CHECK(sp[0].radius == doctest::Approx(1.416093080171908).epsilon(1e-12));
  CHECK(sp[1].re == doctest::Approx(1.2878154795576484).epsilon(1e-12));
  CHECK(sp[1].radius == doctest::Approx(0.8578967583284913).epsilon(1e-12));
}

TEST_CASE("real roots stay isolated; spheres and points mix") {
  const RootSet s = central_root_set(Polynomial::central(O, {-1, 0, 1}));
  CHECK(s.hausdorff_dimension == 0);
  CHECK(s.strata.size() == 2);
  // (x^2 + 1)(x - 2) = x^3 - 2x^2 + x - 2
  const RootSet m = central_root_set(Polynomial::central(H, {-2, 1, -2, 1}));
  CHECK(m.strata.size() == 2);
  CHECK(m.hausdorff_dimension == 2);
  CHECK(central_root_set(Polynomial::central(H, {3})).strata.empty());
  CHECK_THROWS_AS(central_root_set(Polynomial(H, {Element::one(H), Element::unit(H, 1)})), std::invalid_argument);
  CHECK_THROWS_AS(central_root_set(Polynomial::central(Algebra::Real, {1, 0, 1})), std::invalid_argument);
}

TEST_CASE("repeated conjugate pairs merge into one stratum") {
  // (x^2 + 1)^2
  const RootSet s = central_root_set(Polynomial::central(H, {1, 0, 2, 0, 1}));
  CHECK(s.strata.size() == 1);
}

TEST_CASE("rotational symmetry of complex roots") {
  const SymmetryReport r = cd_symmetry_check(Polynomial::central(Algebra::Complex, {1, 0, 0, 0, 1}));
  CHECK(r.order == 4);
  CHECK(r.invariant);
  CHECK(r.max_mismatch < 1e-8);
  const SymmetryReport g = cd_symmetry_check(Polynomial::central(Algebra::Complex, {1, 1, 1}));
  CHECK(g.order == 1);
  CHECK_THROWS_AS(cd_symmetry_check(Polynomial::central(H, {1, 0, 1})), std::invalid_argument);
}

TEST_CASE("orbit invariance under automorphisms") {
  const Polynomial p = Polynomial::central(O, {1, 0, 1});
  const LinearMap g = automorphism_from_derivation(Element::unit(O, 1), Element::unit(O, 2), 1.0);
  Rng rng(2);
  for (int t = 0; t < 10; ++t) CHECK(orbit_invariance_check(p, g, random_unit_imaginary(O, rng)) < 1e-12);
  const Element x = random_unit_imaginary(O, rng);
  CHECK(orbit_invariance_check(p, LinearMap::identity(O), x) == potential(p, x));
  CHECK_THROWS_AS(orbit_invariance_check(p, g, Element::real(O, 2.0)), std::invalid_argument);
}

TEST_CASE("Jacobian rank drops on spheres only") {
  for (Algebra a : {H, O}) {
    const Polynomial p = Polynomial::central(a, {1, 0, 1});
    for (const Element& x : sample_stratum(central_root_set(p).strata[0], 10, 3)) {
      const RankReport r = jacobian_rank(p, x);
      CHECK(r.rank == 2);
      CHECK_FALSE(r.ambiguous);
    }
    const Polynomial q(a, {Element::one(a), Element::unit(a, 1), Element::one(a)});
    CHECK(jacobian_rank(q, Element::unit(a, 1) * ((std::sqrt(5.0) - 1.0) / 2.0)).rank == dimension(a));
  }
}

TEST_CASE("dimension scan across the collapse") {
  const auto rows = hausdorff_dimension_scan(Deformation::standard_benchmark(), {0.0, 0.1}, 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].dimension == 2);
  CHECK(rows[1].dimension == 0);
  CHECK(rows[1].roots_found == 2);
  CHECK_FALSE(rows[0].flagged);
  CHECK_FALSE(rows[1].flagged);
}
