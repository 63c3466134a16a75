#pragma once

#include "divroot/algebra.hpp"
#include "divroot/polynomial.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace divroot {

struct GibbsConfig {
  double temperature = 0.01;
  int chains = 8;
  long steps = 200'000;         // per chain, burn-in included
  double burn_in = 0.25;        // fraction of steps
  double proposal_scale = 0.0;  // initial isotropic scale; 0 picks sqrt(T) / 2
  std::uint64_t seed = 1;
  /// Keep every `thin`-th post burn-in state of each chain; 0 keeps nothing.
  int keep_every = 0;
  /// Chain starting points; empty seeds them on the root set of P.
  std::vector<Element> initial_points;

  void validate() const;
};

struct EnsembleStats {
  double temperature = 0.0;
  long samples = 0;  // post burn-in, all chains
  double mean_v = 0.0;
  double mean_v_stderr = 0.0;
  double var_v = 0.0;
  double var_v_stderr = 0.0;
  double order_parameter = 0.0;
  double order_parameter_stderr = 0.0;
  double acceptance = 0.0;
  double effective_sample_size = 0.0;
  double rhat = 1.0;              // potential-scale reduction on V
  double mean_abs_real = 0.0;     // <|Re x|>
  double mean_imag_norm = 0.0;    // <||Im x||>
  Eigen::MatrixXd second_moments; // <x_i x_j>
  std::vector<double> proposal_scales;
  std::vector<std::string> diagnostics;

  bool ok() const noexcept { return diagnostics.empty(); }
};

struct GibbsResult {
  EnsembleStats stats;
  std::vector<std::vector<Element>> chains;  // only with keep_every > 0
};

/// Metropolis acceptance probability min(1, exp(-dV / T)).
double metropolis_acceptance(double delta_v, double temperature);

/// Random-walk Metropolis on exp(-||P(x)||^2 / T) with isotropic Gaussian proposals,
/// adapted per chain during burn-in towards acceptance in [0.2, 0.5] and frozen afterwards.
/// The order parameter is measured along `axis` (unit imaginary, default e1).
GibbsResult sample_gibbs(const Polynomial& p, const GibbsConfig& cfg, std::optional<Element> axis = std::nullopt);

/// <(axis . x)^2> / <||Im x||^2>; throws std::domain_error for a vanishing imaginary moment.
double order_parameter(const Eigen::MatrixXd& second_moments, const Element& axis);
double order_parameter(const std::vector<std::vector<Element>>& chains, const Element& axis);

struct EntropyEstimate {
  std::vector<double> temperatures;
  std::vector<double> alpha;             // Var(V) / T^2 per temperature
  std::vector<double> alpha_stderr;
  std::vector<double> alpha_mean_energy; // <V> / T per temperature
  double alpha_fit = 0.0;                // average of `alpha`
  double alpha_mean_energy_fit = 0.0;
  bool regime_warning = false;           // per-T estimates drift by > 25%
  std::vector<std::string> diagnostics;
};

/// Low-temperature entropy slope dS/dlnT estimated from energy fluctuations.
EntropyEstimate entropy_coefficient(const Polynomial& p, const std::vector<double>& temperatures,
                                    const GibbsConfig& base);

struct PhaseCell {
  double epsilon = 0.0;
  double temperature = 0.0;
  EnsembleStats stats;
  std::string flag;  // joined sampler diagnostics, empty when clean
};

/// m(eps, T) over the grid; cells are ordered eps-major.
std::vector<PhaseCell> phase_diagram(const Deformation& d, const std::vector<double>& epsilons,
                                     const std::vector<double>& temperatures, const GibbsConfig& base,
                                     std::optional<Element> axis = std::nullopt);

}  // namespace divroot
