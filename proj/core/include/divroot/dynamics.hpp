#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace divroot {

/// w(t) = offset + sum amp sin(2 pi f t + phase)
struct Waveform {
  struct Tone {
    double amplitude = 0.0;
    double frequency = 0.0;  // Hz
    double phase = 0.0;      // rad
  };

  double offset = 0.0;
  std::vector<Tone> tones;

  static Waveform constant(double c) { return {c, {}}; }
  double operator()(double t) const;
  double derivative(double t) const;
};

double discriminant(double a, double b) noexcept;

enum class RadiiStatus {
  Valid,        // two distinct spheres
  Degenerate,   // single sphere (double auxiliary root) or a vanishing auxiliary root
  RealRoots,    // an auxiliary root is a positive real: no purely imaginary sphere
  ComplexPair,  // Delta < 0
  OddPower,     // k odd: sphere extraction not defined here
};

std::string_view to_string(RadiiStatus s) noexcept;

/// Sphere radii for x^{2k} + a x^k + b = 0 via the auxiliary roots y = (-a +- sqrt(Delta)) / 2.
struct Radii {
  RadiiStatus status = RadiiStatus::ComplexPair;
  double inner = 0.0;
  double outer = 0.0;
  double aux_low = 0.0;   // real parts of the auxiliary roots
  double aux_high = 0.0;

  bool valid() const noexcept { return status == RadiiStatus::Valid; }
  /// Valid or degenerate: at least one sphere exists.
  bool has_sphere() const noexcept { return status == RadiiStatus::Valid || status == RadiiStatus::Degenerate; }
};

/// Throws std::invalid_argument for k < 1.
Radii radii(double a, double b, int k);

/// d(R^2)/dt for the inner and outer sphere; throws std::domain_error unless
/// Delta > 0 and both auxiliary roots are negative.
std::pair<double, double> radial_velocity(double a, double a_dot, double b, double b_dot, int k = 2);

struct BreathingTrace {
  int k = 2;
  Waveform a_drive;
  Waveform b_drive;
  std::vector<double> times;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> delta;
  std::vector<double> r_inner;  // NaN where no sphere
  std::vector<double> r_outer;
  std::vector<double> gap;
  std::vector<RadiiStatus> status;

  std::size_t size() const noexcept { return times.size(); }
  bool valid(std::size_t i) const noexcept { return status[i] == RadiiStatus::Valid; }
  double dt() const noexcept { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

BreathingTrace simulate_breathing(int k, const Waveform& a, const Waveform& b, double t_begin, double t_end,
                                  double dt);

enum class CrossingKind { Transversal, Tangential };
std::string_view to_string(CrossingKind k) noexcept;

struct CrossingEvent {
  double time = 0.0;
  CrossingKind kind = CrossingKind::Transversal;
  double rate = 0.0;  // dDelta/dt at the crossing
};

/// Zeros of f on a uniform grid: sign changes (bisection), zero samples, and
/// touching minima of |f| (refined on f').
std::vector<CrossingEvent> detect_crossings(const std::function<double(double)>& f,
                                            const std::vector<double>& grid);

struct BoundaryReport {
  std::vector<CrossingEvent> discriminant;  // Delta = 0
  std::vector<CrossingEvent> b_zero;
  std::vector<CrossingEvent> a_zero;
};

BoundaryReport detect_boundaries(const BreathingTrace& trace);

}  // namespace divroot
