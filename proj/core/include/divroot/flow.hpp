#pragma once

#include "divroot/algebra.hpp"
#include "divroot/polynomial.hpp"
#include "divroot/tolerances.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace divroot {

/// Stopping and accuracy settings for the gradient flow x' = -grad ||P(x)||^2.
struct FlowConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_time = 1e7;
  double stop_grad = 1e-10;
  /// Stop once ||P(x)||^2 falls below this; 0 disables.
  double stop_potential = 0.0;
  double capture_radius = tol::kCaptureRadius;
  double initial_step = 1e-3;
  bool record_samples = true;
  long max_steps = 50'000'000;

  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  Element x;
  double v = 0.0;
};

namespace terminal {
/// attractor < 0: stopped at a critical point (small gradient or potential), not a listed attractor.
struct Converged {
  int attractor = -1;
};
struct MaxTime {};
struct Stalled {
  std::string reason;
};
}  // namespace terminal

using Terminal = std::variant<terminal::Converged, terminal::MaxTime, terminal::Stalled>;

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Terminal terminal;
  Element start;
  Element end;
  double end_time = 0.0;
  /// Interpolated time at which the capture radius was first reached; NaN otherwise.
  double capture_time = std::numeric_limits<double>::quiet_NaN();
  long accepted_steps = 0;
  long rejected_steps = 0;
  /// Largest V(t_{n+1}) - V(t_n) over accepted steps (<= slack by construction).
  double max_potential_increase = 0.0;

  bool converged() const noexcept { return std::holds_alternative<terminal::Converged>(terminal); }
  int attractor() const noexcept;
};

/// Adaptive Dormand-Prince integration of the gradient flow. Steps that would raise
/// the potential by more than 1e-12 V(x0) are rejected, so V is monotone.
Trajectory integrate(const Polynomial& p, const Element& x0, const FlowConfig& cfg,
                     std::span<const Element> attractors = {});

/// Multistart flow + Newton from the given starts; returns distinct roots with
/// residual < 1e-14 and full-rank Jacobian.
std::vector<Element> find_attractors_from(const Polynomial& p, std::span<const Element> starts);

/// As above with `n_starts` Gaussian starts.
std::vector<Element> find_attractors(const Polynomial& p, int n_starts, std::uint64_t seed);

/// Attractors of D(eps), seeded from the sphere strata of the base plus Gaussian starts.
std::vector<Element> deformation_attractors(const Deformation& d, double epsilon, std::uint64_t seed);

struct CollapseResult {
  double epsilon = 0.0;
  double time = 0.0;
  bool censored = false;
  int attractor = -1;
  Element start;
  Element attractor_point;
};

/// Time to get within the capture radius of an attractor of D(eps), starting on the base
/// sphere at geodesic angle `start_angle` from the attracting axis.
CollapseResult collapse_time(const Deformation& d, double epsilon, const FlowConfig& cfg,
                             std::uint64_t seed, double start_angle = tol::kStartAngle);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log T against log eps. Needs >= 4 points spanning a decade.
ScalingFit scaling_fit(std::span<const double> epsilons, std::span<const double> times);

struct CollapseMeasurement {
  std::vector<double> epsilons;
  std::vector<double> times;
  std::vector<double> censored;  // epsilons whose runs hit max_time
  ScalingFit fit;
};

CollapseMeasurement measure_collapse(const Deformation& d, std::vector<double> epsilons,
                                     const FlowConfig& cfg, std::uint64_t seed);

enum class StartPolicy { OnStratum, Gaussian };

struct BasinSample {
  Element start;
  int label = -1;           // attractor index, -1 when not captured
  double axis_cosine = 0.0; // cosine of the start's angle to the attracting axis
  bool in_band = false;     // |axis_cosine| <= equator band
  double capture_time = std::numeric_limits<double>::quiet_NaN();
  double end_residual = 0.0;
  double max_potential_increase = 0.0;
  double displacement = 0.0;
  bool stalled = false;
};

struct BasinReport {
  std::vector<Element> attractors;
  Element axis;
  std::vector<BasinSample> samples;
  std::vector<double> fractions;  // per attractor, over all samples
  int unconverged = 0;
  double max_end_residual = 0.0;
  int hemisphere_checked = 0;  // captured samples outside the band
  int hemisphere_agree = 0;    // ... whose attractor lies on the start's side of the equator
  int outside_band = 0;
};

/// Flows samples of the base sphere (or Gaussian starts) under D(eps) and labels each by attractor.
BasinReport basin_decomposition(const Deformation& d, double epsilon, int n_samples,
                                std::uint64_t seed, const FlowConfig& cfg = {},
                                StartPolicy policy = StartPolicy::OnStratum);

struct RestrictedPoint {
  Element point;
  double value = 0.0;          // V_eps on the stratum
  double value_doubled = 0.0;  // V_{2 eps}
  double exponent = 0.0;       // log2(value_doubled / value)
};

struct RestrictedScan {
  std::vector<RestrictedPoint> points;
  Element argmin;
  Element argmax;
  double min_value = 0.0;
  double max_value = 0.0;
  double mean_exponent = 0.0;
  double max_ratio_error = 0.0;  // max |V_{2eps}/V_eps / 4 - 1|
};

RestrictedScan restricted_potential_scan(const Deformation& d, double epsilon,
                                         std::span<const Element> points);

struct RetractReport {
  int samples = 0;
  int excluded_band = 0;
  int captured = 0;
  int stationary = 0;   // converged without moving (epsilon = 0)
  int uncaptured = 0;   // outside the band, not captured
  double max_potential_increase = 0.0;
  double max_displacement = 0.0;
  bool ok = false;
};

/// Every start outside the equator band must reach an attractor; with no attractors
/// (epsilon = 0) every start must be stationary.
RetractReport retract_check(const Deformation& d, double epsilon, int n_samples, std::uint64_t seed,
                            const FlowConfig& cfg = {}, StartPolicy policy = StartPolicy::OnStratum);

}  // namespace divroot
