#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace divroot {

/// Forward DFT, X_k = sum_n x_n exp(-2 pi i k n / N); radix-2 for powers of two, Bluestein otherwise.
std::vector<std::complex<double>> dft(std::vector<std::complex<double>> x);

/// One-sided power spectral density.
///
/// The series is mean-removed and multiplied by a periodic Hann window. Power is a
/// density (units^2 / Hz): P_k = c |X_k|^2 / (fs sum w^2), c = 2 except at DC and
/// Nyquist, so sum_k P_k df equals the window-weighted variance.
struct Psd {
  std::vector<double> frequencies;
  std::vector<double> power;
  double df = 0.0;

  /// sum_k P_k df
  double integrated_power() const;
  std::size_t nearest_bin(double f) const;
};

/// Needs >= 16 samples and dt > 0.
Psd psd(const std::vector<double>& series, double dt);

/// As above for explicit sample times; throws std::invalid_argument when the grid is not uniform.
Psd psd(const std::vector<double>& times, const std::vector<double>& series);

struct SpectralLine {
  std::string label;   // "f1", "2f1", "f1+f2", ...
  double frequency = 0.0;
  double power = 0.0;  // max over the nearest bin and its neighbours
  double db_above_floor = 0.0;
  bool peak = false;   // >= 10 dB above the median floor
};

struct PeakReport {
  double floor = 0.0;  // median of the non-DC bins
  std::vector<SpectralLine> lines;

  const SpectralLine* find(const std::string& label) const;
};

/// Power at f1, 2f1, 3f1 and, with f2, at f2, f1+f2 and |f1-f2|.
PeakReport spectral_peaks(const Psd& spectrum, double f1, std::optional<double> f2 = std::nullopt);

}  // namespace divroot
