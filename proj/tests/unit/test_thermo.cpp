#include "divroot/thermo.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace divroot;

namespace {

const Algebra H = Algebra::Quaternion;

GibbsConfig small(double t, long steps = 100'000, int chains = 4) {
  GibbsConfig c;
  c.temperature = t;
  c.steps = steps;
  c.chains = chains;
  c.seed = 17;
  return c;
}

}  // namespace

TEST_CASE("Metropolis acceptance satisfies detailed balance on two states") {
  for (double t : {0.01, 0.5, 3.0}) {
    for (double dv : {0.0, 0.003, 0.2, 4.0}) {
      const double p0 = 1.0, p1 = std::exp(-dv / t);
      CHECK(p0 * metropolis_acceptance(dv, t) == doctest::Approx(p1 * metropolis_acceptance(-dv, t)));
    }
  }
  CHECK(metropolis_acceptance(-1.0, 0.1) == 1.0);
  CHECK_THROWS_AS(metropolis_acceptance(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("configuration validation") {
  GibbsConfig c;
  CHECK_NOTHROW(c.validate());
  c.temperature = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = GibbsConfig{};
  c.chains = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = GibbsConfig{};
  c.burn_in = 0.05;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = GibbsConfig{};
  c.steps = 100;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("a linear polynomial samples an exact Gaussian") {
  // V = |x + c|^2 over H: <V> = 2T and Var V = 2T^2.
  const Polynomial p(H, {Element(H, {0.3, -0.2, 0.1, 0.5}), Element::one(H)});
  const double t = 0.01;
  const EnsembleStats s = sample_gibbs(p, small(t)).stats;
  CHECK(s.ok());
  CHECK(std::abs(s.mean_v - 2 * t) < 3 * s.mean_v_stderr);
  CHECK(std::abs(s.var_v - 2 * t * t) < 3 * s.var_v_stderr);
  CHECK(s.acceptance > 0.2);
  CHECK(s.acceptance < 0.5);
  CHECK(s.rhat < 1.1);
}

TEST_CASE("central quadratic: mass concentrates on the sphere") {
  const Polynomial p = Polynomial::central(H, {1, 0, 1});
  const EnsembleStats s = sample_gibbs(p, small(1e-3)).stats;
  CHECK(s.ok());
  CHECK(s.mean_imag_norm == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s.mean_abs_real < 0.05);
}

TEST_CASE("central quadratic: no preferred imaginary axis") {
  const Polynomial p = Polynomial::central(H, {1, 0, 1});
  const EnsembleStats s = sample_gibbs(p, small(0.01, 200'000, 8)).stats;
  const double tol = 4.0 / std::sqrt(s.effective_sample_size);
  MESSAGE("ESS " << s.effective_sample_size << ", tolerance " << tol);
  const double total = s.second_moments(1, 1) + s.second_moments(2, 2) + s.second_moments(3, 3);
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(s.second_moments(k, k) / total - 1.0 / 3.0) < tol);
  CHECK(std::abs(s.order_parameter - 1.0 / 3.0) < tol);
}

TEST_CASE("an isolated root orders the imaginary part") {
  const Polynomial p(H, {Element::one(H), Element::unit(H, 1), Element::one(H)});
  const EnsembleStats s = sample_gibbs(p, small(0.01)).stats;
  CHECK(s.order_parameter > 0.95);
  CHECK(sample_gibbs(p, small(0.01), Element::unit(H, 2)).stats.order_parameter < 0.05);
}

TEST_CASE("runs are deterministic and stable under more chains") {
  const Polynomial p = Polynomial::central(H, {1, 0, 1});
  const EnsembleStats a = sample_gibbs(p, small(0.01, 50'000)).stats;
  const EnsembleStats b = sample_gibbs(p, small(0.01, 50'000)).stats;
  CHECK(a.mean_v == b.mean_v);
  CHECK(a.order_parameter == b.order_parameter);
  const EnsembleStats c = sample_gibbs(p, small(0.01, 50'000, 8)).stats;
  CHECK(std::abs(a.mean_v - c.mean_v) < 2 * std::hypot(a.mean_v_stderr, c.mean_v_stderr));
}

TEST_CASE("kept states reproduce the order parameter") {
  const Polynomial p = Polynomial::central(H, {1, 0, 1});
  GibbsConfig c = small(0.01, 20'000, 2);
  c.keep_every = 1;
  const GibbsResult r = sample_gibbs(p, c);
  REQUIRE(r.chains.size() == 2);
  CHECK(static_cast<long>(r.chains[0].size() + r.chains[1].size()) == r.stats.samples);
  CHECK(order_parameter(r.chains, Element::unit(H, 1)) == doctest::Approx(r.stats.order_parameter).epsilon(1e-9));
}

TEST_CASE("order parameter input checks") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  CHECK(order_parameter(m, Element::unit(H, 2)) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(order_parameter(m, Element::unit(H, 2) * 2.0), std::invalid_argument);
  CHECK_THROWS_AS(order_parameter(m, Element::one(H)), std::invalid_argument);
  CHECK_THROWS_AS(order_parameter(Eigen::MatrixXd::Zero(4, 4), Element::unit(H, 1)), std::domain_error);
}

TEST_CASE("entropy coefficient counts transverse directions") {
  GibbsConfig base = small(1e-3);
  const std::vector<double> ladder{1e-3, 2e-3};
  const EntropyEstimate central = entropy_coefficient(Polynomial::central(H, {1, 0, 1}), ladder, base);
  CHECK(central.alpha_fit == doctest::Approx(1.0).epsilon(0.15));
  const EntropyEstimate point =
      entropy_coefficient(Polynomial(H, {Element::one(H), Element::unit(H, 1), Element::one(H)}), ladder, base);
  CHECK(point.alpha_fit == doctest::Approx(2.0).epsilon(0.15));
  CHECK(point.alpha_mean_energy_fit == doctest::Approx(2.0).epsilon(0.15));
  CHECK_FALSE(point.regime_warning);
}

TEST_CASE("phase diagram cells") {
  const Deformation d(Polynomial::central(H, {1, 0, 1}),
                      Polynomial(H, {Element::zero(H), Element::unit(H, 1)}));
  const auto cells = phase_diagram(d, {0.0, 1.0}, {0.01, 0.05}, small(0.01, 20'000));
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].epsilon == 0.0);
  CHECK(cells[1].epsilon == 0.0);
  CHECK(cells[1].temperature == 0.05);
  CHECK(cells[2].stats.order_parameter > cells[0].stats.order_parameter);
}
