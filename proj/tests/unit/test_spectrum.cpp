#include "divroot/dynamics.hpp"
#include "divroot/random.hpp"
#include "divroot/spectrum.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

using namespace divroot;

namespace {

using cplx = std::complex<double>;

std::vector<cplx> naive_dft(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      out[k] += x[m] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * m) / static_cast<double>(n));
    }
  }
  return out;
}

std::vector<double> tone(std::size_t n, double dt, double f, double amp = 1.0) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = amp * std::sin(2 * std::numbers::pi * f * static_cast<double>(i) * dt);
  return s;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST_CASE("DFT matches the direct sum for radix-2 and Bluestein sizes") {
  Rng rng(1);
  std::normal_distribution<double> n;
  for (std::size_t size : {1u, 2u, 12u, 16u, 97u, 100u}) {
    std::vector<cplx> x(size);
    for (cplx& z : x) z = {n(rng), n(rng)};
    const auto fast = dft(x), slow = naive_dft(x);
    for (std::size_t k = 0; k < size; ++k) CHECK(std::abs(fast[k] - slow[k]) < 1e-10 * static_cast<double>(size));
  }
}

TEST_CASE("unit sinusoid peak height and location") {
  const std::size_t n = 1024;
  const double dt = 0.01;
  // Nearest on-grid frequency to 2 Hz: bin 20 of df = 1/10.24 Hz.
  const double f = 20.0 / (static_cast<double>(n) * dt);
  const Psd s = psd(tone(n, dt, f), dt);
  const std::size_t k = argmax(s.power);
  CHECK(k == 20);
  // Periodic Hann density: A^2 N dt / 3 for amplitude A.
  CHECK(s.power[k] == doctest::Approx(static_cast<double>(n) * dt / 3.0).epsilon(0.03));
  CHECK(s.integrated_power() == doctest::Approx(0.5).epsilon(0.01));

  const Psd off = psd(tone(n, dt, 2.0), dt);
  CHECK(off.frequencies[argmax(off.power)] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("two tones give exactly two dominant bins") {
  const std::size_t n = 2048;
  const double dt = 1.0 / 128.0;
  std::vector<double> s = tone(n, dt, 5.0);
  const std::vector<double> t2 = tone(n, dt, 11.0, 0.7);
  for (std::size_t i = 0; i < n; ++i) s[i] += t2[i];
  const Psd p = psd(s, dt);
  std::vector<std::size_t> order(p.power.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return p.power[a] > p.power[b]; });
  const std::size_t a = std::min(order[0], order[1]), b = std::max(order[0], order[1]);
  CHECK(p.frequencies[a] == doctest::Approx(5.0));
  CHECK(p.frequencies[b] == doctest::Approx(11.0));
  // Each on-grid tone leaks into its two neighbours only.
  CHECK(p.power[order[6]] < 1e-12 * p.power[order[0]]);
}

TEST_CASE("Parseval on white noise") {
  // One windowed realization fluctuates by ~3%; the average over many matches the unit variance.
  Rng rng(8);
  std::normal_distribution<double> n;
  double total = 0.0;
  const int runs = 64;
  for (int r = 0; r < runs; ++r) {
    std::vector<double> s(4096);
    for (double& v : s) v = n(rng);
    total += psd(s, 0.01).integrated_power();
  }
  CHECK(total / runs == doctest::Approx(1.0).epsilon(0.015));
}

TEST_CASE("psd input validation") {
  CHECK_THROWS_AS(psd(std::vector<double>(8, 1.0), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(psd(std::vector<double>(32, 1.0), 0.0), std::invalid_argument);
  std::vector<double> t(32), v(32, 1.0);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.1 * static_cast<double>(i) + (i == 7 ? 0.01 : 0.0);
  CHECK_THROWS_AS(psd(t, v), std::invalid_argument);
}

TEST_CASE("spectral lines of breathing radii") {
  const double dt = 1.0 / 64.0;
  SUBCASE("constant drive: nothing to find") {
    const BreathingTrace tr = simulate_breathing(2, Waveform::constant(5), Waveform::constant(4), 0, 64 - dt, dt);
    const PeakReport r = spectral_peaks(psd(tr.times, tr.r_inner), 1.0);
    for (const SpectralLine& l : r.lines) CHECK_FALSE(l.peak);
  }
  SUBCASE("single tone on a: second harmonic in r_inner") {
    const Waveform a{5.0, {{0.5, 1.0, 0.0}}};
    const BreathingTrace tr = simulate_breathing(2, a, Waveform::constant(4), 0, 64 - dt, dt);
    const PeakReport r = spectral_peaks(psd(tr.times, tr.r_inner), 1.0);
    CHECK(r.find("f1")->peak);
    CHECK(r.find("2f1")->peak);
    CHECK(r.find("f2") == nullptr);
  }
  SUBCASE("two tones: intermodulation") {
    const Waveform a{3.0, {{0.5, 5.0, 0.0}}};
    const Waveform b{1.0, {{0.3, 7.0, 0.0}}};
    const BreathingTrace tr = simulate_breathing(2, a, b, 0, 64 - dt, dt);
    const PeakReport r = spectral_peaks(psd(tr.times, tr.r_outer), 5.0, 7.0);
    CHECK(r.find("f1+f2")->db_above_floor >= 10.0);
    CHECK(r.find("f1-f2")->peak);
  }
}
