#include "divroot/dynamics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace divroot;

TEST_CASE("discriminant") {
  CHECK(discriminant(5, 4) == 9.0);
  CHECK(discriminant(0, 0) == 0.0);
  CHECK(discriminant(2, 1) == 0.0);
}

TEST_CASE("radii from the auxiliary quadratic") {
  const Radii r = radii(5, 4, 2);
  CHECK(r.status == RadiiStatus::Valid);
  CHECK(r.inner == doctest::Approx(1.0));
  CHECK(r.outer == doctest::Approx(2.0));
  // Same values from sqrt((|a| -+ sqrt(Delta)) / 2).
  CHECK(r.inner == doctest::Approx(std::sqrt((5.0 - 3.0) / 2.0)));

  CHECK(radii(-5, 4, 2).status == RadiiStatus::RealRoots);
  CHECK(to_string(radii(-5, 4, 2).status) == "real-roots");
  CHECK(radii(1, 4, 2).status == RadiiStatus::ComplexPair);
  const Radii d = radii(2, 1, 2);
  CHECK(d.status == RadiiStatus::Degenerate);
  CHECK(d.inner == doctest::Approx(1.0));
  CHECK(d.outer == doctest::Approx(1.0));
  CHECK(radii(5, 4, 3).status == RadiiStatus::OddPower);
  CHECK(radii(5, -4, 2).status == RadiiStatus::RealRoots);

  // k = 4: r = |y|^(1/4)
  const Radii k4 = radii(5, 4, 4);
  CHECK(k4.outer == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(radii(5, 4, 0), std::invalid_argument);
}

TEST_CASE("radii stay accurate when b is tiny") {
  const Radii r = radii(1.0, 1e-12, 2);
  REQUIRE(r.valid());
  CHECK(r.inner * r.inner * r.outer * r.outer == doctest::Approx(1e-12).epsilon(1e-12));
}

TEST_CASE("radial velocity matches finite differences of R^2") {
  const Waveform a{5.0, {{0.5, 0.1, 0.0}}};
  const Waveform b{4.0, {{0.3, 0.07, 1.0}}};
  for (int k : {2, 4}) {
    for (double t : {0.3, 2.0, 7.1}) {
      const auto [vi, vo] = radial_velocity(a(t), a.derivative(t), b(t), b.derivative(t), k);
      const double h = 1e-5;
      const Radii p = radii(a(t + h), b(t + h), k), m = radii(a(t - h), b(t - h), k);
      const double fi = (p.inner * p.inner - m.inner * m.inner) / (2 * h);
      const double fo = (p.outer * p.outer - m.outer * m.outer) / (2 * h);
      CHECK(vi == doctest::Approx(fi).epsilon(1e-4));
      CHECK(vo == doctest::Approx(fo).epsilon(1e-4));
    }
  }
  const auto [si, so] = radial_velocity(5, 0, 4, 0);
  CHECK(si == 0.0);
  CHECK(so == 0.0);
  CHECK_THROWS_AS(radial_velocity(1, 0, 4, 0), std::domain_error);
}

TEST_CASE("radial velocity diverges like Delta^-1/2 at a transversal approach") {
  // b = 1 - s with a = 2: Delta = 4s, d Delta/dt = 4 for db/dt = -1.
  const auto [v1, w1] = radial_velocity(2.0, 0.0, 1.0 - 1e-4, -1.0);
  const auto [v2, w2] = radial_velocity(2.0, 0.0, 1.0 - 1e-6, -1.0);
  CHECK(std::abs(v2 / v1) == doctest::Approx(10.0).epsilon(0.01));
  CHECK(std::abs(w2 / w1) == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("breathing traces") {
  const BreathingTrace c = simulate_breathing(2, Waveform::constant(5), Waveform::constant(4), 0, 1, 0.1);
  CHECK(c.size() == 11);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c.valid(i));
    CHECK(c.r_inner[i] == doctest::Approx(1.0));
    CHECK(c.gap[i] == doctest::Approx(1.0));
  }

  const Waveform a{5.0, {{0.5, 0.1, 0.0}}};
  const BreathingTrace tr = simulate_breathing(2, a, Waveform::constant(4), 0, 10, 0.01);
  double lo = 1e9, hi = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    REQUIRE(tr.valid(i));
    CHECK(tr.r_outer[i] >= tr.r_inner[i]);
    CHECK(tr.delta[i] == doctest::Approx(tr.a[i] * tr.a[i] - 4 * tr.b[i]).epsilon(1e-14));
    const double ri2 = tr.r_inner[i] * tr.r_inner[i], ro2 = tr.r_outer[i] * tr.r_outer[i];
    CHECK(std::abs(ri2 + ro2 - std::abs(tr.a[i])) < 1e-12);
    CHECK(std::abs(ri2 * ro2 - tr.b[i]) < 1e-12);
    lo = std::min(lo, tr.gap[i]);
    hi = std::max(hi, tr.gap[i]);
  }
  CHECK(hi - lo > 0.1);

  // b rises through a^2/4 = 4: validity flips and radii go missing.
  const Waveform bb{4.0, {{0.5, 0.1, 0.0}}};
  const BreathingTrace x = simulate_breathing(2, Waveform::constant(4), bb, 0, 10, 0.01);
  bool saw_valid = false, saw_invalid = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    saw_valid |= x.valid(i);
    saw_invalid |= x.status[i] == RadiiStatus::ComplexPair;
    if (x.status[i] == RadiiStatus::ComplexPair) CHECK(std::isnan(x.r_inner[i]));
  }
  CHECK(saw_valid);
  CHECK(saw_invalid);
  CHECK_THROWS_AS(simulate_breathing(2, a, a, 0, 1, 0.0), std::invalid_argument);
}

TEST_CASE("crossing classification") {
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(-1.0 + 0.01 * i);

  const auto lin = detect_crossings([](double t) { return t; }, grid);
  REQUIRE(lin.size() == 1);
  CHECK(lin[0].time == doctest::Approx(0.0));
  CHECK(lin[0].kind == CrossingKind::Transversal);

  const auto sq = detect_crossings([](double t) { return t * t; }, grid);
  REQUIRE(sq.size() == 1);
  CHECK(sq[0].kind == CrossingKind::Tangential);

  // Touching minimum between samples.
  const auto off = detect_crossings([](double t) { return (t - 0.123) * (t - 0.123); }, grid);
  REQUIRE(off.size() == 1);
  CHECK(off[0].time == doctest::Approx(0.123).epsilon(1e-6));
  CHECK(off[0].kind == CrossingKind::Tangential);

  CHECK(detect_crossings([](double t) { return 1.0 + t * t; }, grid).empty());

  // Stable when the grid is halved.
  std::vector<double> fine;
  for (int i = 0; i <= 400; ++i) fine.push_back(-1.0 + 0.005 * i);
  const auto f = [](double t) { return std::sin(3 * t) - 0.2; };
  const auto coarse_ev = detect_crossings(f, grid), fine_ev = detect_crossings(f, fine);
  REQUIRE(coarse_ev.size() == fine_ev.size());
  for (std::size_t i = 0; i < coarse_ev.size(); ++i) {
    CHECK(coarse_ev[i].time == doctest::Approx(fine_ev[i].time).epsilon(1e-9));
    CHECK(coarse_ev[i].kind == fine_ev[i].kind);
  }
}

TEST_CASE("boundaries of a driven trace") {
  const Waveform a{1.0, {{2.0, 0.05, 0.0}}};   // crosses a = 0
  const Waveform b{0.2, {{0.5, 0.03, 0.0}}};   // crosses b = 0
  const BreathingTrace tr = simulate_breathing(2, a, b, 0, 40, 0.01);
  const BoundaryReport r = detect_boundaries(tr);
  CHECK_FALSE(r.discriminant.empty());
  CHECK_FALSE(r.a_zero.empty());
  CHECK_FALSE(r.b_zero.empty());
  for (const CrossingEvent& e : r.discriminant) {
    CHECK(std::abs(discriminant(a(e.time), b(e.time))) < 1e-10);
    CHECK(e.kind == CrossingKind::Transversal);
  }
}
