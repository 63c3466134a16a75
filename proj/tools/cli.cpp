#include "cli.hpp"

#include "claims.hpp"

#include "divroot/algebra.hpp"
#include "divroot/dynamics.hpp"
#include "divroot/flow.hpp"
#include "divroot/io.hpp"
#include "divroot/manifolds.hpp"
#include "divroot/polynomial.hpp"
#include "divroot/random.hpp"
#include "divroot/spectrum.hpp"
#include "divroot/thermo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

namespace divroot::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kOutputEnv = "DIVROOT_OUT";

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

json element_json(const Element& x) { return std::vector<double>(x.coords().begin(), x.coords().end()); }

// Flat JSON config -> "--key=value" tokens placed ahead of the command-line flags,
// so that with TakeLast the flags win.
std::vector<std::string> config_tokens(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a flat JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    if (key == "config") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back("--" + key);
    } else if (value.is_string()) {
      out.push_back("--" + key + "=" + value.get<std::string>());
    } else if (value.is_number() || value.is_array()) {
      out.push_back("--" + key + "=" + value.dump());
    } else {
      throw ConfigError("config key '" + key + "' must be a string, number, boolean or array");
    }
  }
  return out;
}

// Resolved option values of a subcommand, echoed into every artifact.
std::map<std::string, std::string> echo(const CLI::App& app) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const std::string& r : opt->reduced_results()) value += (value.empty() ? "" : ",") + r;
      if (opt->get_type_size() == 0 && value.empty()) value = "true";
    } else {
      value = opt->get_default_str();
    }
    out[name] = value;
  }
  return out;
}

class Output {
 public:
  Output(std::string command, const CLI::App& app, std::string dir) : command_(std::move(command)), dir_(std::move(dir)) {
    config_ = echo(app);
  }

  json document() const {
    json j;
    j["command"] = command_;
    j["config"] = config_;
    return j;
  }

  std::vector<std::string> header() const {
    std::vector<std::string> h{"command=" + command_};
    for (const auto& [k, v] : config_) h.push_back(k + "=" + v);
    return h;
  }

  fs::path write_json(const std::string& name, const json& j) const {
    const fs::path p = fs::path(dir_) / name;
    write_file_atomic(p, j.dump(2) + "\n");
    return p;
  }

  fs::path write_csv(const std::string& name, const std::function<void(std::ostream&)>& body) const {
    std::ostringstream os;
    body(os);
    const fs::path p = fs::path(dir_) / name;
    write_file_atomic(p, os.str());
    return p;
  }

 private:
  std::string command_;
  std::string dir_;
  std::map<std::string, std::string> config_;
};

std::string default_output_dir() {
  const char* env = std::getenv(kOutputEnv);
  return env && *env ? env : ".";
}

struct DriveOptions {
  int k = 2;
  double a_offset = 3.0, a_amp = 0.5, a_freq = 5.0, a_phase = 0.0;
  double b_offset = 1.0, b_amp = 0.3, b_freq = 7.0, b_phase = 0.0;
  double t_end = 64.0 - 1.0 / 256.0;
  double dt = 1.0 / 256.0;

  void add(CLI::App* sub) {
    sub->add_option("--k", k, "power k in x^(2k) + a x^k + b")->check(CLI::PositiveNumber);
    sub->add_option("--a-offset", a_offset);
    sub->add_option("--a-amp", a_amp);
    sub->add_option("--a-freq", a_freq, "Hz");
    sub->add_option("--a-phase", a_phase, "rad");
    sub->add_option("--b-offset", b_offset);
    sub->add_option("--b-amp", b_amp);
    sub->add_option("--b-freq", b_freq, "Hz");
    sub->add_option("--b-phase", b_phase, "rad");
    sub->add_option("--t-end", t_end, "s");
    sub->add_option("--dt", dt, "s")->check(CLI::PositiveNumber);
  }

  BreathingTrace simulate() const {
    const Waveform a{a_offset, {{a_amp, a_freq, a_phase}}};
    const Waveform b{b_offset, {{b_amp, b_freq, b_phase}}};
    return simulate_breathing(k, a, b, 0.0, t_end, dt);
  }
};

struct DeformationOptions {
  std::string algebra = "H";
  std::string base = "[1,0,1]";
  std::string direction;

  void add(CLI::App* sub, std::string default_direction) {
    direction = std::move(default_direction);
    sub->add_option("--algebra", algebra, "R, C, H or O");
    sub->add_option("--base", base, "central base polynomial (JSON coefficients)");
    sub->add_option("--direction", direction, "perturbation direction (JSON coefficients)");
  }

  Deformation build() const {
    const Algebra a = parse_algebra(algebra);
    return Deformation(parse_polynomial(a, base), parse_polynomial(a, direction));
  }
};

json crossings_json(const std::vector<CrossingEvent>& events) {
  json out = json::array();
  for (const CrossingEvent& e : events) {
    out.push_back({{"time", e.time}, {"kind", std::string(to_string(e.kind))}, {"rate", e.rate}});
  }
  return out;
}

json stats_json(const EnsembleStats& s) {
  json j;
  j["temperature"] = s.temperature;
  j["samples"] = s.samples;
  j["mean_V"] = s.mean_v;
  j["mean_V_stderr"] = s.mean_v_stderr;
  j["var_V"] = s.var_v;
  j["var_V_stderr"] = s.var_v_stderr;
  j["m"] = std::isfinite(s.order_parameter) ? json(s.order_parameter) : json(nullptr);
  j["m_stderr"] = s.order_parameter_stderr;
  j["acceptance"] = s.acceptance;
  j["ess"] = s.effective_sample_size;
  j["rhat"] = s.rhat;
  j["mean_abs_real"] = s.mean_abs_real;
  j["mean_imag_norm"] = s.mean_imag_norm;
  std::vector<std::vector<double>> mom;
  for (Eigen::Index i = 0; i < s.second_moments.rows(); ++i) {
    mom.emplace_back();
    for (Eigen::Index k = 0; k < s.second_moments.cols(); ++k) mom.back().push_back(s.second_moments(i, k));
  }
  j["second_moments"] = mom;
  j["proposal_scales"] = s.proposal_scales;
  j["diagnostics"] = s.diagnostics;
  return j;
}

Element axis_element(Algebra a, int index) {
  if (index < 1 || index >= dimension(a)) throw ConfigError("--axis must index an imaginary unit");
  return Element::unit(a, index);
}

std::vector<Algebra> algebras_for(const std::string& tag) {
  if (tag == "all") return {Algebra::Real, Algebra::Complex, Algebra::Quaternion, Algebra::Octonion};
  return {parse_algebra(tag)};
}

}  // namespace

int run(const std::vector<std::string>& raw_args) {
  CLI::App app{"Root sets of polynomials over the normed division algebras", "divroot"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);

  std::string out_dir = default_output_dir();
  std::string config_file;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, std::string("output directory (default $") + kOutputEnv + " or .)");
    sub->add_option("--config", config_file, "flat JSON config; flags override");
  };

  std::uint64_t seed = 1;
  std::string algebra = "H";
  std::string poly;
  std::function<int(const CLI::App&)> action;

  // algebra-check
  int trials = 10'000;
  std::string check_algebra = "all";
  std::uint64_t check_seed = 1;
  auto* alg = app.add_subcommand("algebra-check", "algebra laws, automorphisms and derivations on random cases");
  common(alg);
  alg->add_option("--algebra", check_algebra, "R, C, H, O or all");
  alg->add_option("--trials", trials)->check(CLI::PositiveNumber);
  alg->add_option("--seed", check_seed)->required();
  alg->callback([&] {
    action = [&](const CLI::App& sub) {
      Output out("algebra-check", sub, out_dir);
      json doc = out.document();
      for (Algebra a : algebras_for(check_algebra)) {
        Rng rng(derive_seed(check_seed, static_cast<std::uint64_t>(dimension(a))));
        double mult = 0.0, left = 0.0, right = 0.0, pa = 0.0;
        for (int i = 0; i < trials; ++i) {
          const Element x = random_element(a, rng), y = random_element(a, rng);
          const double nx = x.norm(), ny = y.norm();
          const Element xx = x * x;
          mult = std::max(mult, std::abs((x * y).norm() - nx * ny) / (nx * ny));
          left = std::max(left, (xx * y - x * (x * y)).norm() / (nx * nx * ny));
          right = std::max(right, ((y * x) * x - y * xx).norm() / (nx * nx * ny));
          pa = std::max(pa, (xx * x - x * xx).norm() / (nx * nx * nx));
        }
        json r{{"multiplicativity", mult}, {"left_alternative", left}, {"right_alternative", right},
               {"power_associative", pa}};
        if (a == Algebra::Quaternion) {
          const AutomorphismReport g = check_automorphism(conjugation_automorphism(random_element(a, rng)), check_seed);
          r["conjugation_multiplicativity"] = g.multiplicativity_error;
        }
        if (a == Algebra::Octonion) {
          const Element u = random_element(a, rng), v = random_element(a, rng);
          r["leibniz"] = leibniz_residual(derivation(u, v), check_seed);
          const AutomorphismReport g = check_automorphism(automorphism_from_derivation(u, v, 1.0), check_seed);
          r["g2_multiplicativity"] = g.multiplicativity_error;
          r["g2_orthogonality"] = g.orthogonality_error;
          r["associator_e1_e2_e4"] =
              associator(Element::unit(a, 1), Element::unit(a, 2), Element::unit(a, 4)).norm();
        }
        std::cout << algebra_name(a) << ": " << r.dump() << '\n';
        doc["algebras"][std::string(algebra_name(a))] = r;
      }
      out.write_json("algebra_check.json", doc);
      return kOk;
    };
  });

  // inflate
  int samples = 32;
  auto* inflate = app.add_subcommand("inflate", "strata of a central polynomial");
  common(inflate);
  inflate->add_option("--algebra", algebra, "C, H or O");
  inflate->add_option("--poly", poly, "JSON coefficients a_0, a_1, ...")->required();
  inflate->add_option("--samples", samples, "polished samples per stratum")->check(CLI::PositiveNumber);
  inflate->add_option("--seed", seed);
  inflate->callback([&] {
    action = [&](const CLI::App& sub) {
      const Algebra a = parse_algebra(algebra);
      const Polynomial p = parse_polynomial(a, poly);
      const RootSet set = central_root_set(p);
      Output out("inflate", sub, out_dir);
      json doc = out.document();
      doc["hausdorff_dimension"] = set.hausdorff_dimension;
      doc["strata"] = json::array();
      for (std::size_t s = 0; s < set.strata.size(); ++s) {
        const RootStratum& st = set.strata[s];
        double worst = 0.0;
        for (const Element& x : sample_stratum(st, samples, derive_seed(seed, s))) {
          worst = std::max(worst, potential(p, polish_root(p, x).x));
        }
        json js{{"description", st.describe()}, {"dimension", st.dimension()}, {"max_sample_potential", worst}};
        if (const auto* sp = std::get_if<stratum::Sphere>(&st.shape)) {
          js["kind"] = "sphere";
          js["re"] = sp->re;
          js["radius"] = sp->radius;
        } else if (const auto* r = std::get_if<stratum::IsolatedReal>(&st.shape)) {
          js["kind"] = "isolated-real";
          js["value"] = r->value;
        } else {
          js["kind"] = "isolated-point";
          js["point"] = element_json(std::get<stratum::IsolatedPoint>(st.shape).point);
        }
        std::cout << st.describe() << '\n';
        doc["strata"].push_back(js);
      }
      std::cout << "hausdorff dimension " << set.hausdorff_dimension << '\n';
      out.write_json("inflate.json", doc);
      return kOk;
    };
  });

  // symmetry
  auto* symmetry = app.add_subcommand("symmetry", "rotational symmetry of complex roots");
  common(symmetry);
  symmetry->add_option("--poly", poly, "JSON coefficients over C")->required();
  symmetry->callback([&] {
    action = [&](const CLI::App& sub) {
      const SymmetryReport r = cd_symmetry_check(parse_polynomial(Algebra::Complex, poly));
      Output out("symmetry", sub, out_dir);
      json doc = out.document();
      doc["order"] = r.order;
      doc["invariant"] = r.invariant;
      doc["max_mismatch"] = r.max_mismatch;
      doc["roots"] = json::array();
      for (const auto& z : r.roots) doc["roots"].push_back({z.real(), z.imag()});
      std::cout << "order " << r.order << ", invariant " << (r.invariant ? "yes" : "no") << ", mismatch "
                << r.max_mismatch << '\n';
      out.write_json("symmetry.json", doc);
      return kOk;
    };
  });

  // breathe
  DriveOptions drive;
  auto* breathe = app.add_subcommand("breathe", "sphere radii under driven central coefficients");
  common(breathe);
  drive.add(breathe);
  breathe->callback([&] {
    action = [&](const CLI::App& sub) {
      const BreathingTrace tr = drive.simulate();
      const BoundaryReport b = detect_boundaries(tr);
      Output out("breathe", sub, out_dir);
      out.write_csv("breathe_trace.csv", [&](std::ostream& os) { write_trace_csv(os, tr, out.header()); });
      json doc = out.document();
      std::size_t valid = 0;
      for (std::size_t i = 0; i < tr.size(); ++i) valid += tr.valid(i);
      doc["samples"] = tr.size();
      doc["valid_samples"] = valid;
      doc["discriminant_crossings"] = crossings_json(b.discriminant);
      doc["b_zero_crossings"] = crossings_json(b.b_zero);
      doc["a_zero_crossings"] = crossings_json(b.a_zero);
      std::cout << valid << "/" << tr.size() << " valid samples, " << b.discriminant.size()
                << " discriminant crossings\n";
      out.write_json("breathe.json", doc);
      return kOk;
    };
  });

  // spectra
  DriveOptions sdrive;
  std::string signal = "r_outer";
  auto* spectra = app.add_subcommand("spectra", "PSD of a radius trace and its spectral lines");
  common(spectra);
  sdrive.add(spectra);
  spectra->add_option("--signal", signal)->check(CLI::IsMember({"r_inner", "r_outer", "gap"}));
  spectra->callback([&] {
    action = [&](const CLI::App& sub) {
      const BreathingTrace tr = sdrive.simulate();
      const std::vector<double>& series = signal == "r_inner" ? tr.r_inner : signal == "gap" ? tr.gap : tr.r_outer;
      for (std::size_t i = 0; i < tr.size(); ++i) {
        if (!tr.valid(i)) throw ConfigError("drive leaves the two-sphere region at t = " + std::to_string(tr.times[i]));
      }
      const Psd s = psd(tr.times, series);
      const PeakReport peaks = spectral_peaks(s, sdrive.a_freq, sdrive.b_freq);
      Output out("spectra", sub, out_dir);
      out.write_csv("spectra_psd.csv", [&](std::ostream& os) { write_psd_csv(os, s, out.header()); });
      json doc = out.document();
      doc["floor"] = peaks.floor;
      doc["integrated_power"] = s.integrated_power();
      doc["lines"] = json::array();
      for (const SpectralLine& l : peaks.lines) {
        doc["lines"].push_back({{"label", l.label},
                                {"frequency", l.frequency},
                                {"power", l.power},
                                {"db_above_floor", std::isfinite(l.db_above_floor) ? json(l.db_above_floor) : json(nullptr)},
                                {"peak", l.peak}});
        std::cout << l.label << " " << l.frequency << " Hz: " << l.db_above_floor << " dB" << (l.peak ? " peak" : "")
                  << '\n';
      }
      out.write_json("spectra.json", doc);
      return kOk;
    };
  });

  // localize
  int starts = 32;
  auto* localize = app.add_subcommand("localize", "isolated roots and their coefficient subalgebra");
  common(localize);
  localize->add_option("--algebra", algebra, "C, H or O");
  localize->add_option("--poly", poly, "JSON coefficients a_0, a_1, ...")->required();
  localize->add_option("--starts", starts, "multistart flow starts")->check(CLI::PositiveNumber);
  localize->add_option("--seed", seed);
  localize->callback([&] {
    action = [&](const CLI::App& sub) {
      const Algebra a = parse_algebra(algebra);
      const Polynomial p = parse_polynomial(a, poly);
      const Subalgebra sa = coefficient_subalgebra(p);
      Output out("localize", sub, out_dir);
      json doc = out.document();
      doc["subalgebra_dimension"] = sa.dimension;
      doc["roots"] = json::array();
      for (const Element& x : find_attractors(p, starts, seed)) {
        json r{{"root", element_json(x)}, {"residual", evaluate(p, x).norm()},
               {"subalgebra_distance", sa.distance_to(x)}};
        const Localization loc = localize_isolated_root(p, x);
        if (const Element* y = std::get_if<Element>(&loc)) {
          r["localized"] = element_json(*y);
        } else {
          const auto& sph = std::get<SphericalRoot>(loc);
          r["spherical_factor"] = {{"trace", sph.factor.trace}, {"normterm", sph.factor.normterm}};
        }
        std::cout << x << "  residual " << r["residual"].get<double>() << "  subalgebra distance "
                  << sa.distance_to(x) << '\n';
        doc["roots"].push_back(r);
      }
      out.write_json("localize.json", doc);
      return kOk;
    };
  });

  // collapse
  std::string eps_range = "0.005:0.1:log5";
  double angle = tol::kStartAngle;
  DeformationOptions cdef;
  auto* collapse = app.add_subcommand("collapse", "collapse time against eps and the power-law fit");
  common(collapse);
  cdef.add(collapse, "[[1,0,0,0],[0,1,0,0]]");
  collapse->add_option("--eps", eps_range, "lo:hi:logN, lo:hi:linN or a list");
  collapse->add_option("--angle", angle, "start angle from the attracting axis (rad)");
  collapse->add_option("--seed", seed);
  collapse->callback([&] {
    action = [&](const CLI::App& sub) {
      const Deformation d = cdef.build();
      FlowConfig cfg;
      cfg.record_samples = false;
      std::vector<double> eps = parse_range(eps_range);
      std::vector<double> times;
      std::vector<double> censored;
      std::vector<double> used;
      for (std::size_t i = 0; i < eps.size(); ++i) {
        const CollapseResult c = collapse_time(d, eps[i], cfg, seed, angle);
        if (c.censored) {
          censored.push_back(eps[i]);
          continue;
        }
        used.push_back(eps[i]);
        times.push_back(c.time);
      }
      Output out("collapse", sub, out_dir);
      json doc = out.document();
      doc["epsilons"] = used;
      doc["times"] = times;
      doc["censored"] = censored;
      if (used.size() >= 4) {
        const ScalingFit f = scaling_fit(used, times);
        doc["slope"] = f.slope;
        doc["intercept"] = f.intercept;
        doc["r2"] = f.r_squared;
        std::cout << "slope " << f.slope << ", r2 " << f.r_squared << '\n';
      } else {
        std::cout << "fewer than 4 uncensored points; no fit\n";
      }
      out.write_json("collapse.json", doc);
      return kOk;
    };
  });

  // basins
  double basin_eps = 0.1;
  int basin_samples = 500;
  std::string policy = "stratum";
  DeformationOptions bdef;
  auto* basins = app.add_subcommand("basins", "attractor labels of sphere samples under the flow");
  common(basins);
  bdef.add(basins, "[[1,0,0,0],[0,1,0,0]]");
  basins->add_option("--eps", basin_eps);
  basins->add_option("--samples", basin_samples)->check(CLI::PositiveNumber);
  basins->add_option("--policy", policy)->check(CLI::IsMember({"stratum", "gaussian"}));
  basins->add_option("--seed", seed)->required();
  basins->callback([&] {
    action = [&](const CLI::App& sub) {
      const BasinReport r = basin_decomposition(bdef.build(), basin_eps, basin_samples, seed, {},
                                                policy == "gaussian" ? StartPolicy::Gaussian : StartPolicy::OnStratum);
      Output out("basins", sub, out_dir);
      out.write_csv("basins.csv", [&](std::ostream& os) {
        for (const std::string& h : out.header()) os << "# " << h << '\n';
        os.precision(17);
        os << "index,label,axis_cosine,in_band,capture_time,end_residual";
        for (int i = 0; i < r.axis.dim(); ++i) os << ",x" << i;
        os << '\n';
        for (std::size_t i = 0; i < r.samples.size(); ++i) {
          const BasinSample& s = r.samples[i];
          os << i << ',' << s.label << ',' << s.axis_cosine << ',' << (s.in_band ? 1 : 0) << ',' << s.capture_time
             << ',' << s.end_residual;
          for (int k = 0; k < s.start.dim(); ++k) os << ',' << s.start[k];
          os << '\n';
        }
      });
      json doc = out.document();
      doc["attractors"] = json::array();
      for (const Element& a : r.attractors) doc["attractors"].push_back(element_json(a));
      doc["fractions"] = r.fractions;
      doc["unconverged"] = r.unconverged;
      doc["outside_band"] = r.outside_band;
      doc["hemisphere_checked"] = r.hemisphere_checked;
      doc["hemisphere_agree"] = r.hemisphere_agree;
      doc["max_end_residual"] = r.max_end_residual;
      std::cout << r.hemisphere_agree << "/" << r.outside_band << " out-of-band samples match their hemisphere, "
                << r.unconverged << " unconverged\n";
      out.write_json("basins.json", doc);
      return kOk;
    };
  });

  // thermo
  GibbsConfig gibbs;
  int axis = 1;
  std::string ladder;
  auto* thermo = app.add_subcommand("thermo", "Gibbs sampling, order parameter and entropy slope");
  common(thermo);
  thermo->add_option("--algebra", algebra, "C, H or O");
  thermo->add_option("--poly", poly, "JSON coefficients a_0, a_1, ...")->required();
  thermo->add_option("--T", gibbs.temperature, "temperature")->check(CLI::PositiveNumber);
  thermo->add_option("--chains", gibbs.chains)->check(CLI::PositiveNumber);
  thermo->add_option("--steps", gibbs.steps, "steps per chain, burn-in included")->check(CLI::PositiveNumber);
  thermo->add_option("--burn-in", gibbs.burn_in)->check(CLI::Range(0.1, 0.9));
  thermo->add_option("--axis", axis, "imaginary unit index of the order parameter");
  thermo->add_option("--ladder", ladder, "temperature ladder for the entropy slope");
  thermo->add_option("--seed", gibbs.seed)->required();
  thermo->callback([&] {
    action = [&](const CLI::App& sub) {
      const Algebra a = parse_algebra(algebra);
      const Polynomial p = parse_polynomial(a, poly);
      Output out("thermo", sub, out_dir);
      json doc = out.document();
      const EnsembleStats s = sample_gibbs(p, gibbs, axis_element(a, axis)).stats;
      doc["stats"] = stats_json(s);
      std::cout << "m " << s.order_parameter << " +- " << s.order_parameter_stderr << ", <V> " << s.mean_v
                << ", Var V " << s.var_v << ", acceptance " << s.acceptance << '\n';
      if (!ladder.empty()) {
        const EntropyEstimate e = entropy_coefficient(p, parse_range(ladder), gibbs);
        doc["entropy"] = {{"temperatures", e.temperatures},
                          {"alpha", e.alpha},
                          {"alpha_stderr", e.alpha_stderr},
                          {"alpha_mean_energy", e.alpha_mean_energy},
                          {"alpha_fit", e.alpha_fit},
                          {"alpha_mean_energy_fit", e.alpha_mean_energy_fit},
                          {"regime_warning", e.regime_warning},
                          {"diagnostics", e.diagnostics}};
        std::cout << "alpha " << e.alpha_fit << (e.regime_warning ? " (regime warning)" : "") << '\n';
      }
      out.write_json("thermo.json", doc);
      return kOk;
    };
  });

  // phase-diagram
  GibbsConfig pgibbs;
  std::string p_eps = "0:2.5:lin6";
  std::string p_temps = "0.01:2.5:log6";
  int paxis = 1;
  DeformationOptions pdef;
  auto* phase = app.add_subcommand("phase-diagram", "order parameter over an (eps, T) grid");
  common(phase);
  pdef.add(phase, "[[0,0,0,0],[0,1,0,0]]");
  phase->add_option("--eps", p_eps);
  phase->add_option("--T", p_temps);
  phase->add_option("--chains", pgibbs.chains)->check(CLI::PositiveNumber);
  phase->add_option("--steps", pgibbs.steps)->check(CLI::PositiveNumber);
  phase->add_option("--burn-in", pgibbs.burn_in)->check(CLI::Range(0.1, 0.9));
  phase->add_option("--axis", paxis);
  phase->add_option("--seed", pgibbs.seed)->required();
  phase->callback([&] {
    action = [&](const CLI::App& sub) {
      const Deformation d = pdef.build();
      const auto cells = phase_diagram(d, parse_range(p_eps), parse_range(p_temps), pgibbs,
                                       axis_element(d.algebra(), paxis));
      Output out("phase-diagram", sub, out_dir);
      out.write_csv("phase_diagram.csv", [&](std::ostream& os) { write_phase_csv(os, cells, out.header()); });
      for (const PhaseCell& c : cells) {
        std::cout << "eps " << c.epsilon << " T " << c.temperature << ": m " << c.stats.order_parameter
                  << (c.flag.empty() ? "" : "  [" + c.flag + "]") << '\n';
      }
      return kOk;
    };
  });

  // claims
  claims::Options copt;
  std::vector<std::string> only;
  std::vector<std::string> overrides;
  auto* cl = app.add_subcommand("claims", "acceptance suite with a JSON pass/fail summary");
  common(cl);
  cl->add_flag("--quick", copt.quick, "shorter Monte Carlo runs");
  cl->add_option("--only", only, "claim ids to run")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cl->add_option("--tolerance", overrides, "id=value overrides of a claim's primary tolerance")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cl->add_option("--seed", copt.seed);
  cl->callback([&] {
    action = [&](const CLI::App& sub) {
      for (const std::string& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError("--tolerance expects id=value, got " + o);
        copt.tolerance_overrides[o.substr(0, eq)] = parse_range(o.substr(eq + 1)).at(0);
      }
      Output out("claims", sub, out_dir);
      json doc = out.document();
      bool all = true;
      int ran = 0;
      for (const claims::Claim& c : claims::registry()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        ++ran;
        const claims::Result r = claims::run(c, copt);
        const bool pass = r.pass && r.within_time();
        all = all && pass;
        doc["claims"][r.id] = {{"expected", r.expected},
                               {"measured", r.measured},
                               {"tolerance", r.tolerance},
                               {"pass", pass},
                               {"notes", r.notes}};
        std::cout << (pass ? "PASS " : "FAIL ") << r.id << ": " << r.measured << " [" << r.seconds << " s / "
                  << r.time_limit << " s]\n";
      }
      if (ran == 0) throw ConfigError("--only matched no claim");
      doc["all_pass"] = all;
      out.write_json("claims.json", doc);
      return all ? kOk : kClaimFailure;
    };
  });

  std::vector<std::string> args = raw_args;
  try {
    // Splice config-file values in front of the flags of the chosen subcommand.
    const auto cfg = std::find(args.begin(), args.end(), "--config");
    std::string cfg_path;
    if (cfg != args.end() && cfg + 1 != args.end()) cfg_path = *(cfg + 1);
    for (const std::string& a : args) {
      if (a.rfind("--config=", 0) == 0) cfg_path = a.substr(9);
    }
    if (!cfg_path.empty() && !args.empty()) {
      const std::vector<std::string> tokens = config_tokens(cfg_path);
      args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    return action(*sub);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kClaimFailure;
  }
}

}  // namespace divroot::cli
