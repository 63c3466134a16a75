#include "divroot/spectrum.hpp"

#include "divroot/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace divroot {

namespace {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n) { return n && !(n & (n - 1)); }

void fft_radix2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx w = std::polar(1.0, angle * static_cast<double>(k));
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    for (cplx& z : a) z /= static_cast<double>(n);
  }
}

// Chirp-z: X_k = conj(w_k) sum_n (x_n conj(w_n)) w_{k-n}, w_m = exp(i pi m^2 / N).
std::vector<cplx> bluestein(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2N keeps the phase argument small.
    const auto k2 = static_cast<double>((static_cast<unsigned long long>(k) * k) % (2 * n));
    chirp[k] = std::polar(1.0, std::numbers::pi * k2 / static_cast<double>(n));
  }
  std::vector<cplx> a(m, 0.0), b(m, 0.0);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * std::conj(chirp[k]);
  b[0] = chirp[0];
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = chirp[k];
  fft_radix2(a, false);
  fft_radix2(b, false);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  fft_radix2(a, true);
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * std::conj(chirp[k]);
  return out;
}

}  // namespace

std::vector<cplx> dft(std::vector<cplx> x) {
  if (x.empty()) return x;
  if (is_power_of_two(x.size())) {
    fft_radix2(x, false);
    return x;
  }
  return bluestein(x);
}

double Psd::integrated_power() const {
  double s = 0.0;
  for (double p : power) s += p * df;
  return s;
}

std::size_t Psd::nearest_bin(double f) const {
  if (frequencies.empty()) throw std::logic_error("empty spectrum");
  const double k = std::round(f / df);
  return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(frequencies.size() - 1)));
}

Psd psd(const std::vector<double>& series, double dt) {
  const std::size_t n = series.size();
  if (n < 16) throw std::invalid_argument("psd: need at least 16 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("psd: dt must be positive");

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  std::vector<cplx> buf(n);
  double window_power = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    buf[i] = w * (series[i] - mean);
    window_power += w * w;
  }
  const std::vector<cplx> spectrum = dft(std::move(buf));

  const double fs = 1.0 / dt;
  Psd out;
  out.df = fs / static_cast<double>(n);
  const std::size_t bins = n / 2 + 1;
  for (std::size_t k = 0; k < bins; ++k) {
    const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
    out.frequencies.push_back(static_cast<double>(k) * out.df);
    out.power.push_back((edge ? 1.0 : 2.0) * std::norm(spectrum[k]) / (fs * window_power));
  }
  return out;
}

Psd psd(const std::vector<double>& times, const std::vector<double>& series) {
  if (times.size() != series.size()) throw std::invalid_argument("psd: size mismatch");
  if (times.size() < 2) throw std::invalid_argument("psd: need at least 16 samples");
  const double dt = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw std::invalid_argument("psd: sample grid is not uniform");
    }
  }
  return psd(series, dt);
}

const SpectralLine* PeakReport::find(const std::string& label) const {
  for (const SpectralLine& l : lines) {
    if (l.label == label) return &l;
  }
  return nullptr;
}

PeakReport spectral_peaks(const Psd& spectrum, double f1, std::optional<double> f2) {
  if (spectrum.power.size() < 3) throw std::invalid_argument("spectral_peaks: spectrum too short");
  PeakReport r;
  std::vector<double> body(spectrum.power.begin() + 1, spectrum.power.end());
  std::nth_element(body.begin(), body.begin() + static_cast<std::ptrdiff_t>(body.size() / 2), body.end());
  r.floor = body[body.size() / 2];

  std::vector<std::pair<std::string, double>> targets{{"f1", f1}, {"2f1", 2 * f1}, {"3f1", 3 * f1}};
  if (f2) {
    targets.emplace_back("f2", *f2);
    targets.emplace_back("f1+f2", f1 + *f2);
    targets.emplace_back("f1-f2", std::abs(f1 - *f2));
  }
  const double nyquist = spectrum.frequencies.back();
  for (const auto& [label, f] : targets) {
    SpectralLine line{label, f, 0.0, -std::numeric_limits<double>::infinity(), false};
    if (f > 0.0 && f <= nyquist) {
      const std::size_t k = spectrum.nearest_bin(f);
      const std::size_t lo = k > 0 ? k - 1 : k;
      const std::size_t hi = std::min(k + 1, spectrum.power.size() - 1);
      for (std::size_t j = lo; j <= hi; ++j) line.power = std::max(line.power, spectrum.power[j]);
      if (line.power > 0.0) {
        const double floor = std::max(r.floor, std::numeric_limits<double>::min());
        line.db_above_floor = 10.0 * std::log10(line.power / floor);
        line.peak = line.db_above_floor >= tol::kPeakThresholdDb;
      }
    }
    r.lines.push_back(line);
  }
  return r;
}

}  // namespace divroot
