#include "divroot/flow.hpp"

#include "divroot/manifolds.hpp"
#include "divroot/ode.hpp"
#include "divroot/parallel.hpp"
#include "divroot/random.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace divroot {

void FlowConfig::validate() const {
  if (!(rel_tol > 0 && abs_tol > 0 && max_time > 0 && stop_grad > 0 && capture_radius > 0 && initial_step > 0)) {
    throw std::invalid_argument("FlowConfig: tolerances, times and radii must be positive");
  }
  if (stop_potential < 0) throw std::invalid_argument("FlowConfig: stop_potential must be >= 0");
}

int Trajectory::attractor() const noexcept {
  if (const auto* c = std::get_if<terminal::Converged>(&terminal)) return c->attractor;
  return -1;
}

namespace {

int captured_by(const Element& x, std::span<const Element> attractors, double radius, double* dist_out) {
  for (std::size_t i = 0; i < attractors.size(); ++i) {
    const double dist = distance(x, attractors[i]);
    if (dist <= radius) {
      if (dist_out) *dist_out = dist;
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

Trajectory integrate(const Polynomial& p, const Element& x0, const FlowConfig& cfg,
                     std::span<const Element> attractors) {
  cfg.validate();
  for (int i = 0; i < x0.dim(); ++i) {
    if (!std::isfinite(x0[i])) throw std::invalid_argument("integrate: non-finite start");
  }
  const Algebra a = p.algebra();
  Trajectory traj;
  traj.start = x0;

  const OdeRhs rhs = [&](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return -gradient_potential(p, Element::from_vector(a, y));
  };

  Eigen::VectorXd y = x0.to_vector();
  double t = 0.0;
  double v = potential(p, x0);
  const double v0 = v;
  Eigen::VectorXd dydt = rhs(t, y);
  if (cfg.record_samples) traj.samples.push_back({t, x0, v});

  auto finish = [&](Terminal term) {
    traj.terminal = std::move(term);
    traj.end = Element::from_vector(a, y);
    traj.end_time = t;
    return traj;
  };

  if (const int hit = captured_by(x0, attractors, cfg.capture_radius, nullptr); hit >= 0) {
    traj.capture_time = 0.0;
    return finish(terminal::Converged{hit});
  }
  if (dydt.norm() < cfg.stop_grad || v < cfg.stop_potential) return finish(terminal::Converged{-1});

  std::vector<double> prev_dist(attractors.size());
  for (std::size_t i = 0; i < attractors.size(); ++i) prev_dist[i] = distance(x0, attractors[i]);

  double h = cfg.initial_step;
  const double slack = tol::kLyapunovSlack * v0;
  while (true) {
    if (t >= cfg.max_time) return finish(terminal::MaxTime{});
    if (traj.accepted_steps + traj.rejected_steps >= cfg.max_steps) {
      return finish(terminal::Stalled{"step budget exhausted"});
    }
    h = std::min(h, cfg.max_time - t);
    if (h < 1e-14 * std::max(1.0, t)) return finish(terminal::Stalled{"step size underflow"});

    DormandPrinceStep step = dormand_prince_step(rhs, t, y, dydt, h);
    const double err = error_norm(step.error, y, step.y, cfg.rel_tol, cfg.abs_tol);
    const bool finite = step.y.allFinite() && std::isfinite(err);
    if (!finite || err > 1.0) {
      ++traj.rejected_steps;
      h *= finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.1;
      continue;
    }
    const Element x_new = Element::from_vector(a, step.y);
    const double v_new = potential(p, x_new);
    if (v_new > v + slack) {
      ++traj.rejected_steps;
      h *= 0.5;
      continue;
    }

    const double t_prev = t;
    t += h;
    traj.max_potential_increase = std::max(traj.max_potential_increase, v_new - v);
    y = std::move(step.y);
    dydt = std::move(step.derivative_end);
    v = v_new;
    ++traj.accepted_steps;
    if (cfg.record_samples) traj.samples.push_back({t, x_new, v});

    for (std::size_t i = 0; i < attractors.size(); ++i) {
      const double dist = distance(x_new, attractors[i]);
      if (dist <= cfg.capture_radius) {
        const double before = prev_dist[i];
        const double frac = before > dist ? (before - cfg.capture_radius) / (before - dist) : 1.0;
        traj.capture_time = t_prev + std::clamp(frac, 0.0, 1.0) * (t - t_prev);
        return finish(terminal::Converged{static_cast<int>(i)});
      }
      prev_dist[i] = dist;
    }
    if (dydt.norm() < cfg.stop_grad || v < cfg.stop_potential) return finish(terminal::Converged{-1});

    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
  }
}

std::vector<Element> find_attractors_from(const Polynomial& p, std::span<const Element> starts) {
  FlowConfig cfg;
  cfg.stop_potential = 1e-14;
  cfg.stop_grad = 1e-11;
  cfg.max_time = 1e6;
  cfg.record_samples = false;
  std::vector<PolishResult> polished(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    const Trajectory t = integrate(p, starts[i], cfg);
    polished[i] = polish_root(p, t.end);
  });

  const int d = dimension(p.algebra());
  std::vector<Element> roots;
  for (const PolishResult& r : polished) {
    if (!r.converged) continue;
    if (jacobian_rank(p, r.x).rank != d) continue;
    const bool seen = std::any_of(roots.begin(), roots.end(),
                                  [&](const Element& q) { return distance(q, r.x) < tol::kAttractorDedup; });
    if (!seen) roots.push_back(r.x);
  }
  std::sort(roots.begin(), roots.end(), [](const Element& x, const Element& y) {
    return std::lexicographical_compare(x.coords().begin(), x.coords().end(), y.coords().begin(), y.coords().end());
  });
  return roots;
}

std::vector<Element> find_attractors(const Polynomial& p, int n_starts, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Element> starts;
  for (int i = 0; i < n_starts; ++i) starts.push_back(random_element(p.algebra(), rng));
  return find_attractors_from(p, starts);
}

namespace {

// Isolated roots lie in the coefficient subalgebra. When that subalgebra is R or a copy
// of C, they are the roots of a complex polynomial.
std::optional<std::vector<Element>> roots_in_small_subalgebra(const Polynomial& p) {
  const Subalgebra sub = coefficient_subalgebra(p);
  if (sub.dimension > 2 || p.degree() < 1) return std::nullopt;
  const Algebra a = p.algebra();
  const Element u = sub.dimension == 2 ? sub.basis[1] : Element::zero(a);

  std::vector<std::complex<double>> c;
  for (const Element& coeff : p.coefficients()) {
    double beta = 0.0;
    for (int i = 0; i < coeff.dim(); ++i) beta += coeff[i] * u[i];
    c.emplace_back(coeff.re(), beta);
  }
  std::vector<Element> candidates;
  for (const auto& z : complex_roots(c)) {
    if (sub.dimension == 1 && std::abs(z.imag()) > 1e-7 * std::max(1.0, std::abs(z))) continue;
    const Element x = Element::real(a, z.real()) + (sub.dimension == 2 ? z.imag() : 0.0) * u;
    candidates.push_back(x);
  }
  const int d = dimension(a);
  std::vector<Element> roots;
  for (const Element& x : candidates) {
    const PolishResult r = polish_root(p, x);
    if (!r.converged || jacobian_rank(p, r.x).rank != d) continue;
    const bool seen = std::any_of(roots.begin(), roots.end(),
                                  [&](const Element& q) { return distance(q, r.x) < tol::kAttractorDedup; });
    if (!seen) roots.push_back(r.x);
  }
  std::sort(roots.begin(), roots.end(), [](const Element& x, const Element& y) {
    return std::lexicographical_compare(x.coords().begin(), x.coords().end(), y.coords().begin(), y.coords().end());
  });
  return roots;
}

const stratum::Sphere& base_sphere(const RootSet& base) {
  for (const RootStratum& s : base.strata) {
    if (const auto* sp = std::get_if<stratum::Sphere>(&s.shape)) return *sp;
  }
  throw std::invalid_argument("deformation base has no sphere stratum");
}

double distance_to_sphere(const Element& x, const stratum::Sphere& s) {
  return std::hypot(x.re() - s.re, x.imag().norm() - s.radius);
}

// Unit imaginary direction of the attractor nearest to the base sphere.
std::pair<int, Element> attracting_axis(std::span<const Element> attractors, const stratum::Sphere& s) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < attractors.size(); ++i) {
    if (attractors[i].imag().norm() == 0.0) continue;
    const double dist = distance_to_sphere(attractors[i], s);
    if (dist < best_d) {
      best_d = dist;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw std::invalid_argument("no attractor with an imaginary part");
  const Element im = attractors[static_cast<std::size_t>(best)].imag();
  return {best, im / im.norm()};
}

double dot(const Element& x, const Element& y) {
  double s = 0.0;
  for (int i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

std::vector<Element> deformation_attractors(const Deformation& d, double epsilon, std::uint64_t seed) {
  const Polynomial p = d.at(epsilon);
  if (auto roots = roots_in_small_subalgebra(p)) return *roots;
  std::vector<Element> starts;
  const RootSet base = central_root_set(d.base());
  std::uint64_t k = 0;
  for (const RootStratum& s : base.strata) {
    auto pts = sample_stratum(s, s.is_sphere() ? tol::kMultistartFromStrata : 1, derive_seed(seed, k++));
    starts.insert(starts.end(), pts.begin(), pts.end());
  }
  Rng rng(derive_seed(seed, 999));
  for (int i = 0; i < tol::kMultistartGaussian; ++i) starts.push_back(random_element(p.algebra(), rng));
  return find_attractors_from(p, starts);
}

CollapseResult collapse_time(const Deformation& d, double epsilon, const FlowConfig& cfg, std::uint64_t seed,
                             double start_angle) {
  if (epsilon == 0.0) throw std::invalid_argument("collapse_time: epsilon must be nonzero");
  const RootSet base = central_root_set(d.base());
  const stratum::Sphere& sphere = base_sphere(base);
  const std::vector<Element> attractors = deformation_attractors(d, epsilon, seed);
  if (attractors.empty()) throw std::invalid_argument("collapse_time: deformation has no isolated attractors");
  const auto [axis_index, axis] = attracting_axis(attractors, sphere);

  Rng rng(derive_seed(seed, 7));
  Element w;
  do {
    w = random_unit_imaginary(d.algebra(), rng);
    w -= dot(w, axis) * axis;
  } while (w.norm() < 1e-6);
  w /= w.norm();
  const Element x0 = Element::real(d.algebra(), sphere.re) +
                     sphere.radius * (std::cos(start_angle) * axis + std::sin(start_angle) * w);

  FlowConfig run = cfg;
  run.record_samples = false;
  const Trajectory t = integrate(d.at(epsilon), x0, run, attractors);

  CollapseResult r;
  r.epsilon = epsilon;
  r.start = x0;
  r.attractor = t.attractor();
  if (r.attractor >= 0) {
    r.time = t.capture_time;
    r.attractor_point = attractors[static_cast<std::size_t>(r.attractor)];
  } else {
    r.time = t.end_time;
    r.censored = true;
  }
  (void)axis_index;
  return r;
}

ScalingFit scaling_fit(std::span<const double> epsilons, std::span<const double> times) {
  if (epsilons.size() != times.size()) throw std::invalid_argument("scaling_fit: size mismatch");
  if (epsilons.size() < 4) throw std::invalid_argument("scaling_fit: need at least 4 points");
  const auto [lo, hi] = std::minmax_element(epsilons.begin(), epsilons.end());
  if (*lo <= 0.0) throw std::invalid_argument("scaling_fit: epsilons must be positive");
  if (*hi / *lo < 10.0 * (1.0 - 1e-12)) throw std::invalid_argument("scaling_fit: epsilons span less than a decade");

  const std::size_t n = epsilons.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (times[i] <= 0.0) throw std::invalid_argument("scaling_fit: times must be positive");
    const double x = std::log(epsilons[i]);
    const double y = std::log(times[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double nn = static_cast<double>(n);
  const double cov = sxy - sx * sy / nn;
  const double varx = sxx - sx * sx / nn;
  const double vary = syy - sy * sy / nn;
  ScalingFit f;
  f.slope = cov / varx;
  f.intercept = (sy - f.slope * sx) / nn;
  f.r_squared = vary > 0.0 ? cov * cov / (varx * vary) : 1.0;
  return f;
}

CollapseMeasurement measure_collapse(const Deformation& d, std::vector<double> epsilons, const FlowConfig& cfg,
                                     std::uint64_t seed) {
  std::sort(epsilons.begin(), epsilons.end());
  std::vector<CollapseResult> results(epsilons.size());
  parallel_for(epsilons.size(), [&](std::size_t i) { results[i] = collapse_time(d, epsilons[i], cfg, seed); });
  CollapseMeasurement m;
  for (const CollapseResult& r : results) {
    if (r.censored) {
      m.censored.push_back(r.epsilon);
    } else {
      m.epsilons.push_back(r.epsilon);
      m.times.push_back(r.time);
    }
  }
  m.fit = scaling_fit(m.epsilons, m.times);
  return m;
}

namespace {

std::vector<Element> basin_starts(const Deformation& d, const stratum::Sphere& sphere, int n, std::uint64_t seed,
                                  StartPolicy policy) {
  if (policy == StartPolicy::OnStratum) {
    return sample_stratum({d.algebra(), sphere}, n, seed);
  }
  Rng rng(seed);
  std::vector<Element> starts;
  for (int i = 0; i < n; ++i) {
    starts.push_back(Element::real(d.algebra(), sphere.re) + random_element(d.algebra(), rng, sphere.radius));
  }
  return starts;
}

}  // namespace

BasinReport basin_decomposition(const Deformation& d, double epsilon, int n_samples, std::uint64_t seed,
                                const FlowConfig& cfg, StartPolicy policy) {
  if (n_samples < 1) throw std::invalid_argument("basin_decomposition: n_samples must be positive");
  const RootSet base = central_root_set(d.base());
  const stratum::Sphere& sphere = base_sphere(base);
  BasinReport report;
  report.attractors = deformation_attractors(d, epsilon, seed);
  if (report.attractors.empty()) throw std::invalid_argument("basin_decomposition: no isolated attractors");
  report.axis = attracting_axis(report.attractors, sphere).second;

  const Polynomial p = d.at(epsilon);
  const std::vector<Element> starts = basin_starts(d, sphere, n_samples, derive_seed(seed, 11), policy);
  FlowConfig run = cfg;
  run.record_samples = false;
  report.samples.resize(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    const Trajectory t = integrate(p, starts[i], run, report.attractors);
    BasinSample& s = report.samples[i];
    s.start = starts[i];
    s.label = t.attractor();
    const Element im = starts[i].imag();
    s.axis_cosine = im.norm() > 0.0 ? dot(im, report.axis) / im.norm() : 0.0;
    s.in_band = std::abs(s.axis_cosine) <= tol::kEquatorBand;
    s.capture_time = t.capture_time;
    s.end_residual = evaluate(p, t.end).norm();
    s.max_potential_increase = t.max_potential_increase;
    s.displacement = distance(t.start, t.end);
    s.stalled = std::holds_alternative<terminal::Stalled>(t.terminal);
  });

  report.fractions.assign(report.attractors.size(), 0.0);
  for (const BasinSample& s : report.samples) {
    if (s.label < 0) {
      ++report.unconverged;
    } else {
      report.fractions[static_cast<std::size_t>(s.label)] += 1.0 / static_cast<double>(n_samples);
      report.max_end_residual = std::max(report.max_end_residual, s.end_residual);
    }
    if (s.in_band) continue;
    ++report.outside_band;
    if (s.label < 0) continue;
    ++report.hemisphere_checked;
    const double side = dot(report.attractors[static_cast<std::size_t>(s.label)].imag(), report.axis);
    if ((side > 0.0) == (s.axis_cosine > 0.0)) ++report.hemisphere_agree;
  }
  return report;
}

RestrictedScan restricted_potential_scan(const Deformation& d, double epsilon, std::span<const Element> points) {
  if (points.empty()) throw std::invalid_argument("restricted_potential_scan: no points");
  const Polynomial p1 = d.at(epsilon);
  const Polynomial p2 = d.at(2.0 * epsilon);
  RestrictedScan scan;
  scan.min_value = std::numeric_limits<double>::infinity();
  scan.max_value = -std::numeric_limits<double>::infinity();
  double exponent_sum = 0.0;
  int exponent_count = 0;
  for (const Element& x : points) {
    RestrictedPoint rp{x, potential(p1, x), potential(p2, x), std::numeric_limits<double>::quiet_NaN()};
    if (rp.value > 0.0) {
      rp.exponent = std::log2(rp.value_doubled / rp.value);
      exponent_sum += rp.exponent;
      ++exponent_count;
      scan.max_ratio_error = std::max(scan.max_ratio_error, std::abs(rp.value_doubled / rp.value / 4.0 - 1.0));
    }
    if (rp.value < scan.min_value) {
      scan.min_value = rp.value;
      scan.argmin = x;
    }
    if (rp.value > scan.max_value) {
      scan.max_value = rp.value;
      scan.argmax = x;
    }
    scan.points.push_back(rp);
  }
  scan.mean_exponent = exponent_count ? exponent_sum / exponent_count : std::numeric_limits<double>::quiet_NaN();
  return scan;
}

RetractReport retract_check(const Deformation& d, double epsilon, int n_samples, std::uint64_t seed,
                            const FlowConfig& cfg, StartPolicy policy) {
  const Polynomial p = d.at(epsilon);
  RetractReport r;
  r.samples = n_samples;
  if (!p.is_central()) {
    const BasinReport b = basin_decomposition(d, epsilon, n_samples, seed, cfg, policy);
    for (const BasinSample& s : b.samples) {
      r.max_potential_increase = std::max(r.max_potential_increase, s.max_potential_increase);
      r.max_displacement = std::max(r.max_displacement, s.displacement);
      if (s.in_band) {
        ++r.excluded_band;
        continue;
      }
      if (s.label >= 0) {
        ++r.captured;
      } else {
        ++r.uncaptured;
      }
    }
    r.ok = r.uncaptured == 0;
    return r;
  }

  // No isolated attractors: starts on the root sphere must already be minima.
  const RootSet base = central_root_set(d.base());
  const stratum::Sphere& sphere = base_sphere(base);
  const std::vector<Element> starts = basin_starts(d, sphere, n_samples, derive_seed(seed, 11), policy);
  FlowConfig run = cfg;
  run.record_samples = false;
  std::vector<Trajectory> trajs(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { trajs[i] = integrate(p, starts[i], run); });
  for (const Trajectory& t : trajs) {
    r.max_potential_increase = std::max(r.max_potential_increase, t.max_potential_increase);
    const double moved = distance(t.start, t.end);
    r.max_displacement = std::max(r.max_displacement, moved);
    if (t.converged() && moved == 0.0) {
      ++r.stationary;
    } else if (!t.converged()) {
      ++r.uncaptured;
    }
  }
  r.ok = r.uncaptured == 0 && (policy != StartPolicy::OnStratum || r.stationary == n_samples);
  return r;
}

}  // namespace divroot
