#include "divroot/thermo.hpp"

#include "divroot/flow.hpp"
#include "divroot/manifolds.hpp"
#include "divroot/parallel.hpp"
#include "divroot/random.hpp"
#include "divroot/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace divroot {

namespace {

constexpr int kAdaptWindow = 100;
constexpr double kTargetAcceptance = 0.3;
constexpr double kRhatLimit = 1.1;

// Running sums for one batch of post burn-in states.
struct BatchSums {
  long n = 0;
  double v = 0.0;
  double v2 = 0.0;
  double axis2 = 0.0;
  double imag2 = 0.0;
  double abs_re = 0.0;
  double imag_norm = 0.0;
  Eigen::MatrixXd xx;

  explicit BatchSums(int d = 1) : xx(Eigen::MatrixXd::Zero(d, d)) {}

  void add(const BatchSums& o) {
    n += o.n;
    v += o.v;
    v2 += o.v2;
    axis2 += o.axis2;
    imag2 += o.imag2;
    abs_re += o.abs_re;
    imag_norm += o.imag_norm;
    xx += o.xx;
  }
};

struct ChainOutput {
  std::vector<BatchSums> batches;
  long proposals = 0;
  long accepted = 0;
  double scale = 0.0;
  std::vector<Element> kept;
};

double dot(const Element& a, const Element& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

ChainOutput run_chain(const Polynomial& p, const GibbsConfig& cfg, const Element& start, const Element& axis,
                      std::uint64_t seed) {
  const Algebra alg = p.algebra();
  const int d = dimension(alg);
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;

  ChainOutput out;
  out.batches.assign(static_cast<std::size_t>(tol::kBatchCount), BatchSums(d));
  const double temp = cfg.temperature;
  double scale = cfg.proposal_scale > 0.0 ? cfg.proposal_scale : 0.5 * std::sqrt(temp);

  const long burn = static_cast<long>(std::ceil(cfg.burn_in * static_cast<double>(cfg.steps)));
  const long post = cfg.steps - burn;
  const long batch_len = post / tol::kBatchCount;

  Element x = start;
  double v = potential(p, x);
  Element y(alg);
  int window_accepted = 0;
  long kept_counter = 0;

  for (long step = 0; step < cfg.steps; ++step) {
    for (int i = 0; i < d; ++i) y[i] = x[i] + scale * normal(rng);
    const double vy = potential(p, y);
    const double dv = vy - v;
    const bool accept = dv <= 0.0 || uniform(rng) < std::exp(-dv / temp);
    if (accept) {
      x = y;
      v = vy;
    }
    if (step < burn) {
      window_accepted += accept;
      if ((step + 1) % kAdaptWindow == 0) {
        const double rate = static_cast<double>(window_accepted) / kAdaptWindow;
        scale *= std::exp(2.0 * (rate - kTargetAcceptance));
        window_accepted = 0;
      }
      continue;
    }
    ++out.proposals;
    out.accepted += accept;
    const long k = (step - burn) / std::max(1L, batch_len);
    if (k >= tol::kBatchCount) continue;  // remainder after the last full batch
    BatchSums& b = out.batches[static_cast<std::size_t>(k)];
    const Eigen::VectorXd xv = x.to_vector();
    const double ax = dot(axis, x);
    const double im2 = x.norm2() - x.re() * x.re();
    ++b.n;
    b.v += v;
    b.v2 += v * v;
    b.axis2 += ax * ax;
    b.imag2 += im2;
    b.abs_re += std::abs(x.re());
    b.imag_norm += std::sqrt(im2);
    b.xx.noalias() += xv * xv.transpose();
    if (cfg.keep_every > 0 && kept_counter++ % cfg.keep_every == 0) out.kept.push_back(x);
  }
  out.scale = scale;
  return out;
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

Element default_axis(Algebra a) {
  if (dimension(a) < 2) return Element::zero(a);
  return Element::unit(a, 1);
}

void check_axis(const Element& axis) {
  if (std::abs(axis.re()) > 1e-12 || std::abs(axis.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("order parameter axis must be a unit imaginary element");
  }
}

// Root-set points used to start chains: samples on every stratum of a central P,
// otherwise the attractors found by multistart flow.
std::vector<Element> root_points(const Polynomial& p, int n, std::uint64_t seed) {
  std::vector<Element> pts;
  if (p.degree() < 1) return {Element::zero(p.algebra())};
  if (p.is_central() && p.algebra() != Algebra::Real) {
    const RootSet set = central_root_set(p);
    const auto strata = set.strata.size();
    if (strata == 0) return {Element::zero(p.algebra())};
    std::vector<std::vector<Element>> per(strata);
    for (std::size_t s = 0; s < strata; ++s) per[s] = sample_stratum(set.strata[s], n, derive_seed(seed, s));
    for (int i = 0; i < n; ++i) pts.push_back(per[static_cast<std::size_t>(i) % strata][static_cast<std::size_t>(i)]);
    return pts;
  }
  pts = find_attractors(p, 32, seed);
  if (pts.empty()) pts.push_back(Element::zero(p.algebra()));
  return pts;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const std::string& s : parts) {
    if (!out.empty()) out += ';';
    out += s;
  }
  return out;
}

}  // namespace

void GibbsConfig::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) throw std::invalid_argument("temperature must be positive");
  if (chains < 1) throw std::invalid_argument("need at least one chain");
  if (!(burn_in >= 0.1 && burn_in <= 0.9)) throw std::invalid_argument("burn_in must lie in [0.1, 0.9]");
  const long post = steps - static_cast<long>(std::ceil(burn_in * static_cast<double>(steps)));
  if (post < 10L * tol::kBatchCount) throw std::invalid_argument("too few post burn-in steps for batch means");
  if (proposal_scale < 0.0 || !std::isfinite(proposal_scale)) throw std::invalid_argument("proposal_scale must be >= 0");
  if (keep_every < 0) throw std::invalid_argument("keep_every must be >= 0");
}

double metropolis_acceptance(double delta_v, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("metropolis_acceptance: temperature must be positive");
  return delta_v <= 0.0 ? 1.0 : std::exp(-delta_v / temperature);
}

double order_parameter(const Eigen::MatrixXd& m, const Element& axis) {
  check_axis(axis);
  const int d = axis.dim();
  if (m.rows() != d || m.cols() != d) throw AlgebraMismatch("order_parameter: moment matrix size mismatch");
  const Eigen::VectorXd a = axis.to_vector();
  const double num = a.dot(m * a);
  double den = 0.0;
  for (int i = 1; i < d; ++i) den += m(i, i);
  if (!(den > 0.0)) throw std::domain_error("order_parameter: zero imaginary second moment");
  return std::clamp(num / den, 0.0, 1.0);
}

double order_parameter(const std::vector<std::vector<Element>>& chains, const Element& axis) {
  const int d = axis.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  long n = 0;
  for (const auto& chain : chains) {
    for (const Element& x : chain) {
      if (x.algebra() != axis.algebra()) throw AlgebraMismatch("order_parameter: chain and axis algebras differ");
      const Eigen::VectorXd v = x.to_vector();
      m.noalias() += v * v.transpose();
      ++n;
    }
  }
  if (n == 0) throw std::domain_error("order_parameter: no samples");
  return order_parameter(m / static_cast<double>(n), axis);
}

GibbsResult sample_gibbs(const Polynomial& p, const GibbsConfig& cfg, std::optional<Element> axis_opt) {
  cfg.validate();
  const Algebra alg = p.algebra();
  const int d = dimension(alg);
  const Element axis = axis_opt.value_or(default_axis(alg));
  if (axis.algebra() != alg) throw AlgebraMismatch("sample_gibbs: axis over a different algebra");
  if (d >= 2) check_axis(axis);

  std::vector<Element> seeds = cfg.initial_points;
  if (seeds.empty()) seeds = root_points(p, cfg.chains, derive_seed(cfg.seed, 0xC0FFEE));
  for (const Element& s : seeds) {
    if (s.algebra() != alg) throw AlgebraMismatch("sample_gibbs: initial point over a different algebra");
  }

  // Even chains start on the root set, odd chains from an overdispersed Gaussian around it.
  std::vector<Element> starts;
  {
    Rng rng(derive_seed(cfg.seed, 0xD15BE5));
    const double spread = 3.0 * std::sqrt(cfg.temperature);
    for (int c = 0; c < cfg.chains; ++c) {
      Element x = seeds[static_cast<std::size_t>(c) % seeds.size()];
      if (c % 2 == 1) x += random_element(alg, rng, spread);
      starts.push_back(x);
    }
  }

  std::vector<ChainOutput> outputs(static_cast<std::size_t>(cfg.chains));
  parallel_for(outputs.size(), [&](std::size_t c) {
    outputs[c] = run_chain(p, cfg, starts[c], axis, derive_seed(cfg.seed, c + 1));
  });

  GibbsResult result;
  EnsembleStats& st = result.stats;
  st.temperature = cfg.temperature;

  std::vector<BatchSums> pooled(static_cast<std::size_t>(tol::kBatchCount), BatchSums(d));
  BatchSums total(d);
  long proposals = 0, accepted = 0;
  std::vector<double> chain_mean, chain_var;
  for (std::size_t c = 0; c < outputs.size(); ++c) {
    const ChainOutput& o = outputs[c];
    BatchSums chain_total(d);
    for (std::size_t b = 0; b < o.batches.size(); ++b) {
      pooled[b].add(o.batches[b]);
      chain_total.add(o.batches[b]);
    }
    total.add(chain_total);
    proposals += o.proposals;
    accepted += o.accepted;
    st.proposal_scales.push_back(o.scale);
    const double n = static_cast<double>(chain_total.n);
    const double mean = chain_total.v / n;
    chain_mean.push_back(mean);
    chain_var.push_back(std::max(0.0, (chain_total.v2 / n - mean * mean) * n / std::max(1.0, n - 1.0)));

    const double rate = o.proposals > 0 ? static_cast<double>(o.accepted) / static_cast<double>(o.proposals) : 0.0;
    if (rate < tol::kAcceptanceFailLow || rate > tol::kAcceptanceFailHigh) {
      std::ostringstream msg;
      msg << "chain " << c << " acceptance " << rate << " outside [" << tol::kAcceptanceFailLow << ", "
          << tol::kAcceptanceFailHigh << "]";
      st.diagnostics.push_back(msg.str());
    }
    if (cfg.keep_every > 0) result.chains.push_back(o.kept);
  }

  const double n = static_cast<double>(total.n);
  st.samples = total.n;
  st.acceptance = proposals > 0 ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0;
  st.mean_v = total.v / n;
  st.var_v = std::max(0.0, total.v2 / n - st.mean_v * st.mean_v);
  st.mean_abs_real = total.abs_re / n;
  st.mean_imag_norm = total.imag_norm / n;
  st.second_moments = total.xx / n;

  std::vector<double> bm_v, bm_var, bm_m;
  for (const BatchSums& b : pooled) {
    const double bn = static_cast<double>(b.n);
    const double mv = b.v / bn;
    bm_v.push_back(mv);
    bm_var.push_back(b.v2 / bn - mv * mv);
    if (b.imag2 > 0.0) bm_m.push_back(b.axis2 / b.imag2);
  }
  const double nb = static_cast<double>(tol::kBatchCount);
  const double sd_bm = sample_sd(bm_v);
  st.mean_v_stderr = sd_bm / std::sqrt(nb);
  st.var_v_stderr = sample_sd(bm_var) / std::sqrt(nb);
  st.effective_sample_size = sd_bm > 0.0 ? std::min(n, nb * st.var_v / (sd_bm * sd_bm)) : n;

  if (d >= 2) {
    if (total.imag2 > 0.0) {
      st.order_parameter = std::clamp(total.axis2 / total.imag2, 0.0, 1.0);
      st.order_parameter_stderr = sample_sd(bm_m) / std::sqrt(static_cast<double>(bm_m.size()));
    } else {
      st.order_parameter = std::numeric_limits<double>::quiet_NaN();
      st.diagnostics.emplace_back("zero imaginary second moment");
    }
  } else {
    st.order_parameter = std::numeric_limits<double>::quiet_NaN();
  }

  if (cfg.chains > 1) {
    const double per_chain = n / cfg.chains;
    double grand = 0.0, w = 0.0;
    for (int c = 0; c < cfg.chains; ++c) {
      grand += chain_mean[static_cast<std::size_t>(c)];
      w += chain_var[static_cast<std::size_t>(c)];
    }
    grand /= cfg.chains;
    w /= cfg.chains;
    double b = 0.0;
    for (double m : chain_mean) b += (m - grand) * (m - grand);
    b *= per_chain / (cfg.chains - 1);
    st.rhat = w > 0.0 ? std::sqrt(((per_chain - 1.0) / per_chain * w + b / per_chain) / w) : 1.0;
    if (st.rhat > kRhatLimit) {
      std::ostringstream msg;
      msg << "rhat " << st.rhat << " > " << kRhatLimit;
      st.diagnostics.push_back(msg.str());
    }
  }
  return result;
}

EntropyEstimate entropy_coefficient(const Polynomial& p, const std::vector<double>& temperatures,
                                    const GibbsConfig& base) {
  if (temperatures.empty()) throw std::invalid_argument("entropy_coefficient: empty temperature ladder");
  GibbsConfig cfg = base;
  if (cfg.initial_points.empty()) cfg.initial_points = root_points(p, cfg.chains, derive_seed(base.seed, 0xC0FFEE));

  EntropyEstimate e;
  for (std::size_t i = 0; i < temperatures.size(); ++i) {
    const double t = temperatures[i];
    cfg.temperature = t;
    cfg.seed = derive_seed(base.seed, i);
    const EnsembleStats st = sample_gibbs(p, cfg).stats;
    e.temperatures.push_back(t);
    e.alpha.push_back(st.var_v / (t * t));
    e.alpha_stderr.push_back(st.var_v_stderr / (t * t));
    e.alpha_mean_energy.push_back(st.mean_v / t);
    for (const std::string& msg : st.diagnostics) {
      std::ostringstream line;
      line << "T=" << t << ": " << msg;
      e.diagnostics.push_back(line.str());
    }
  }
  const double count = static_cast<double>(e.alpha.size());
  for (std::size_t i = 0; i < e.alpha.size(); ++i) {
    e.alpha_fit += e.alpha[i] / count;
    e.alpha_mean_energy_fit += e.alpha_mean_energy[i] / count;
  }
  const auto [lo, hi] = std::minmax_element(e.alpha.begin(), e.alpha.end());
  e.regime_warning = e.alpha_fit > 0.0 && (*hi - *lo) / e.alpha_fit > tol::kEntropyDrift;
  return e;
}

std::vector<PhaseCell> phase_diagram(const Deformation& d, const std::vector<double>& epsilons,
                                     const std::vector<double>& temperatures, const GibbsConfig& base,
                                     std::optional<Element> axis) {
  if (epsilons.empty() || temperatures.empty()) throw std::invalid_argument("phase_diagram: empty grid");
  std::vector<PhaseCell> cells;
  std::size_t index = 0;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    const double eps = epsilons[i];
    const Polynomial p = d.at(eps);
    GibbsConfig cfg = base;
    if (cfg.initial_points.empty()) {
      if (p.is_central()) {
        cfg.initial_points = root_points(p, cfg.chains, derive_seed(base.seed, 0xC0FFEE + i));
      } else {
        cfg.initial_points = deformation_attractors(d, eps, derive_seed(base.seed, 0xC0FFEE + i));
      }
    }
    for (double t : temperatures) {
      cfg.temperature = t;
      cfg.seed = derive_seed(base.seed, index++);
      PhaseCell cell;
      cell.epsilon = eps;
      cell.temperature = t;
      cell.stats = sample_gibbs(p, cfg, axis).stats;
      cell.flag = join(cell.stats.diagnostics);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace divroot
