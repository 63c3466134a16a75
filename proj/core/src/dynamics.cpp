#include "divroot/dynamics.hpp"

#include "divroot/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace divroot {

double Waveform::operator()(double t) const {
  double w = offset;
  for (const Tone& tone : tones) w += tone.amplitude * std::sin(2.0 * std::numbers::pi * tone.frequency * t + tone.phase);
  return w;
}

double Waveform::derivative(double t) const {
  double w = 0.0;
  for (const Tone& tone : tones) {
    const double omega = 2.0 * std::numbers::pi * tone.frequency;
    w += tone.amplitude * omega * std::cos(omega * t + tone.phase);
  }
  return w;
}

double discriminant(double a, double b) noexcept { return a * a - 4.0 * b; }

std::string_view to_string(RadiiStatus s) noexcept {
  switch (s) {
    case RadiiStatus::Valid: return "valid";
    case RadiiStatus::Degenerate: return "degenerate";
    case RadiiStatus::RealRoots: return "real-roots";
    case RadiiStatus::ComplexPair: return "complex-pair";
    case RadiiStatus::OddPower: return "odd-power";
  }
  return "?";
}

std::string_view to_string(CrossingKind k) noexcept {
  return k == CrossingKind::Transversal ? "transversal" : "tangential";
}

Radii radii(double a, double b, int k) {
  if (k < 1) throw std::invalid_argument("radii: k must be >= 1");
  Radii r;
  const double delta = discriminant(a, b);
  const double delta_tol = 1e-14 * std::max(1.0, a * a);
  if (delta < -delta_tol) {
    r.status = RadiiStatus::ComplexPair;
    r.aux_low = r.aux_high = -a / 2.0;
    return r;
  }
  if (std::abs(delta) <= delta_tol) {
    r.aux_low = r.aux_high = -a / 2.0;
  } else {
    // Stable pair: q = -(a + sign(a) sqrt(Delta)) / 2, roots q and b / q.
    const double q = -0.5 * (a + std::copysign(std::sqrt(delta), a));
    const double y1 = q;
    const double y2 = q != 0.0 ? b / q : 0.0;
    r.aux_low = std::min(y1, y2);
    r.aux_high = std::max(y1, y2);
  }
  if (k % 2 != 0) {
    r.status = RadiiStatus::OddPower;
    return r;
  }
  const double inv_k = 1.0 / k;
  if (r.aux_high < 0.0) {
    r.inner = std::pow(-r.aux_high, inv_k);
    r.outer = std::pow(-r.aux_low, inv_k);
    r.status = r.aux_low == r.aux_high ? RadiiStatus::Degenerate : RadiiStatus::Valid;
  } else if (r.aux_high == 0.0 && r.aux_low < 0.0) {
    r.inner = 0.0;
    r.outer = std::pow(-r.aux_low, inv_k);
    r.status = RadiiStatus::Degenerate;
  } else {
    r.status = RadiiStatus::RealRoots;
  }
  return r;
}

std::pair<double, double> radial_velocity(double a, double a_dot, double b, double b_dot, int k) {
  const Radii r = radii(a, b, k);
  if (r.status != RadiiStatus::Valid) {
    throw std::domain_error("radial_velocity: needs Delta > 0 and two negative auxiliary roots");
  }
  const double delta = discriminant(a, b);
  const double delta_dot = 2.0 * a * a_dot - 4.0 * b_dot;
  const double root_rate = delta_dot / (2.0 * std::sqrt(delta));
  // |y_high| = (a - sqrt(Delta)) / 2 shrinks when Delta grows; |y_low| = (a + sqrt(Delta)) / 2.
  const double inner_abs_rate = 0.5 * (a_dot - root_rate);
  const double outer_abs_rate = 0.5 * (a_dot + root_rate);
  const double p = 2.0 / k;
  const double inner = p * std::pow(-r.aux_high, p - 1.0) * inner_abs_rate;
  const double outer = p * std::pow(-r.aux_low, p - 1.0) * outer_abs_rate;
  return {inner, outer};
}

BreathingTrace simulate_breathing(int k, const Waveform& a, const Waveform& b, double t_begin, double t_end,
                                  double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_breathing: dt must be positive");
  if (t_end < t_begin) throw std::invalid_argument("simulate_breathing: empty time span");
  if (k < 1) throw std::invalid_argument("simulate_breathing: k must be >= 1");
  const auto n = static_cast<std::size_t>(std::floor((t_end - t_begin) / dt + 1e-9)) + 1;
  BreathingTrace tr;
  tr.k = k;
  tr.a_drive = a;
  tr.b_drive = b;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_begin + static_cast<double>(i) * dt;
    const double av = a(t), bv = b(t);
    const Radii r = radii(av, bv, k);
    tr.times.push_back(t);
    tr.a.push_back(av);
    tr.b.push_back(bv);
    tr.delta.push_back(discriminant(av, bv));
    tr.status.push_back(r.status);
    tr.r_inner.push_back(r.has_sphere() ? r.inner : nan);
    tr.r_outer.push_back(r.has_sphere() ? r.outer : nan);
    tr.gap.push_back(r.has_sphere() ? r.outer - r.inner : nan);
  }
  return tr;
}

namespace {

double centered_derivative(const std::function<double(double)>& f, double t) {
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

template <class F>
double bisect(F&& g, double lo, double hi, double g_lo) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

int sign_of(double v) { return std::abs(v) <= tol::kCrossingResidual ? 0 : (v > 0.0 ? 1 : -1); }

}  // namespace

std::vector<CrossingEvent> detect_crossings(const std::function<double(double)>& f, const std::vector<double>& grid) {
  std::vector<CrossingEvent> events;
  const std::size_t n = grid.size();
  if (n == 0) throw std::invalid_argument("detect_crossings: empty grid");

  std::vector<double> values(n);
  std::vector<int> signs(n);
  double max_rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = f(grid[i]);
    signs[i] = sign_of(values[i]);
    max_rate = std::max(max_rate, std::abs(centered_derivative(f, grid[i])));
  }

  std::vector<double> times;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (signs[i] * signs[i + 1] < 0) times.push_back(bisect(f, grid[i], grid[i + 1], values[i]));
  }
  // Runs of samples already at zero: one event at the middle of each run.
  for (std::size_t i = 0; i < n;) {
    if (signs[i] != 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && signs[j + 1] == 0) ++j;
    times.push_back(grid[(i + j) / 2]);
    i = j + 1;
  }
  // Touching extrema: |f| has a strict local minimum without a sign change.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (signs[i] == 0 || signs[i - 1] != signs[i] || signs[i + 1] != signs[i]) continue;
    if (!(std::abs(values[i]) < std::abs(values[i - 1]) && std::abs(values[i]) <= std::abs(values[i + 1]))) continue;
    const auto fp = [&](double t) { return centered_derivative(f, t); };
    const double d_lo = fp(grid[i - 1]);
    const double d_hi = fp(grid[i + 1]);
    if (d_lo * d_hi >= 0.0) continue;
    const double tc = bisect(fp, grid[i - 1], grid[i + 1], d_lo);
    if (std::abs(f(tc)) < tol::kCrossingResidual) times.push_back(tc);
  }

  std::sort(times.begin(), times.end());
  const double v_tol = tol::kTangentialFraction * max_rate;
  for (double t : times) {
    const double rate = centered_derivative(f, t);
    events.push_back({t, std::abs(rate) < v_tol ? CrossingKind::Tangential : CrossingKind::Transversal, rate});
  }
  return events;
}

BoundaryReport detect_boundaries(const BreathingTrace& trace) {
  if (trace.size() == 0) throw std::invalid_argument("detect_boundaries: empty trace");
  const Waveform& a = trace.a_drive;
  const Waveform& b = trace.b_drive;
  BoundaryReport r;
  r.discriminant = detect_crossings([&](double t) { return discriminant(a(t), b(t)); }, trace.times);
  r.b_zero = detect_crossings([&](double t) { return b(t); }, trace.times);
  r.a_zero = detect_crossings([&](double t) { return a(t); }, trace.times);
  return r;
}

}  // namespace divroot
