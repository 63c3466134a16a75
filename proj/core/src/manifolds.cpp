#include "divroot/manifolds.hpp"

#include "divroot/flow.hpp"
#include "divroot/linalg.hpp"
#include "divroot/parallel.hpp"
#include "divroot/random.hpp"
#include "divroot/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace divroot {

int RootStratum::dimension() const noexcept {
  return is_sphere() ? divroot::dimension(algebra) - 2 : 0;
}

std::string RootStratum::describe() const {
  std::ostringstream os;
  os.precision(12);
  if (const auto* s = std::get_if<stratum::Sphere>(&shape)) {
    os << "Sphere re=" << s->re << " radius=" << s->radius << " dim=" << dimension();
  } else if (const auto* r = std::get_if<stratum::IsolatedReal>(&shape)) {
    os << "IsolatedReal value=" << r->value;
  } else {
    os << "IsolatedPoint " << std::get<stratum::IsolatedPoint>(shape).point;
  }
  return os.str();
}

RootSet central_root_set(const Polynomial& p) {
  if (!p.is_central()) throw std::invalid_argument("central_root_set: polynomial is not central");
  if (p.algebra() == Algebra::Real) {
    throw std::invalid_argument("central_root_set: needs an algebra of dimension >= 2");
  }
  if (p.is_zero()) throw std::invalid_argument("central_root_set: zero polynomial vanishes everywhere");

  RootSet set;
  if (p.degree() == 0) return set;

  std::vector<double> aux;
  for (const Element& c : p.coefficients()) aux.push_back(c.re());
  const auto roots = complex_roots_real_poly(aux);

  auto push_unique = [&](RootStratum s) {
    for (const RootStratum& t : set.strata) {
      if (t.shape.index() != s.shape.index()) continue;
      if (const auto* a = std::get_if<stratum::Sphere>(&s.shape)) {
        const auto& b = std::get<stratum::Sphere>(t.shape);
        if (std::abs(a->re - b.re) < tol::kStratumMerge && std::abs(a->radius - b.radius) < tol::kStratumMerge) return;
      } else if (const auto* a = std::get_if<stratum::IsolatedReal>(&s.shape)) {
        if (std::abs(a->value - std::get<stratum::IsolatedReal>(t.shape).value) < tol::kStratumMerge) return;
      }
    }
    set.strata.push_back(std::move(s));
  };

  for (const auto& z : roots) {
    if (z.imag() == 0.0) {
      push_unique({p.algebra(), stratum::IsolatedReal{z.real()}});
    } else if (z.imag() > 0.0) {
      push_unique({p.algebra(), stratum::Sphere{z.real(), z.imag()}});
    }
  }
  for (const RootStratum& s : set.strata) set.hausdorff_dimension = std::max(set.hausdorff_dimension, s.dimension());
  return set;
}

std::vector<Element> sample_stratum(const RootStratum& s, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_stratum: n must be positive");
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(n));
  if (const auto* sphere = std::get_if<stratum::Sphere>(&s.shape)) {
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
      out.push_back(Element::real(s.algebra, sphere->re) + sphere->radius * random_unit_imaginary(s.algebra, rng));
    }
  } else if (const auto* r = std::get_if<stratum::IsolatedReal>(&s.shape)) {
    out.assign(static_cast<std::size_t>(n), Element::real(s.algebra, r->value));
  } else {
    out.assign(static_cast<std::size_t>(n), std::get<stratum::IsolatedPoint>(s.shape).point);
  }
  return out;
}

SymmetryReport cd_symmetry_check(const Polynomial& p) {
  if (p.algebra() != Algebra::Complex) throw std::invalid_argument("cd_symmetry_check: needs a complex polynomial");
  std::vector<std::complex<double>> c;
  for (const Element& a : p.coefficients()) c.emplace_back(a[0], a[1]);

  SymmetryReport r;
  r.order = std::max(1, p.support_gcd());
  r.roots = complex_roots(c);
  const std::complex<double> rotation = std::polar(1.0, 2.0 * std::numbers::pi / r.order);
  for (const auto& z : r.roots) {
    const auto image = z * rotation;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& w : r.roots) best = std::min(best, std::abs(image - w));
    r.max_mismatch = std::max(r.max_mismatch, best / std::max(1.0, std::abs(z)));
  }
  r.invariant = r.max_mismatch < tol::kSymmetryMatch;
  return r;
}

double orbit_invariance_check(const Polynomial& p, const LinearMap& g, const Element& x) {
  if (potential(p, x) >= 1e-16) throw std::invalid_argument("orbit_invariance_check: x is not a root");
  const int d = dimension(g.algebra);
  const double orth = (g.matrix * g.matrix.transpose() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (orth > tol::kOrthogonality || distance(g(Element::one(g.algebra)), Element::one(g.algebra)) > tol::kOrthogonality) {
    throw std::invalid_argument("orbit_invariance_check: map is not an automorphism candidate");
  }
  return potential(p, g(x));
}

RankReport jacobian_rank(const Polynomial& p, const Element& x) {
  const RankInfo info = numerical_rank(jacobian(p, x), tol::kRankRelative);
  return {info.rank, info.ambiguous};
}

namespace {

std::vector<Element> multistart_points(const RootSet& base, Algebra a, std::uint64_t seed) {
  std::vector<const RootStratum*> spheres;
  for (const RootStratum& s : base.strata) {
    if (s.is_sphere()) spheres.push_back(&s);
  }
  std::vector<Element> starts;
  const int per = tol::kMultistartFromStrata / static_cast<int>(spheres.size());
  for (std::size_t k = 0; k < spheres.size(); ++k) {
    const int n = k + 1 == spheres.size() ? tol::kMultistartFromStrata - per * static_cast<int>(k) : per;
    auto pts = sample_stratum(*spheres[k], n, derive_seed(seed, k));
    starts.insert(starts.end(), pts.begin(), pts.end());
  }
  Rng rng(derive_seed(seed, 1000));
  for (int i = 0; i < tol::kMultistartGaussian; ++i) starts.push_back(random_element(a, rng));
  return starts;
}

}  // namespace

std::vector<DimensionRow> hausdorff_dimension_scan(const Deformation& d, const std::vector<double>& epsilons,
                                                   std::uint64_t seed) {
  const RootSet base = central_root_set(d.base());
  if (std::none_of(base.strata.begin(), base.strata.end(), [](const RootStratum& s) { return s.is_sphere(); })) {
    throw std::invalid_argument("hausdorff_dimension_scan: base has no non-real stratum");
  }
  const int dim_a = dimension(d.algebra());
  const std::vector<Element> starts = multistart_points(base, d.algebra(), seed);

  std::vector<DimensionRow> rows;
  for (double eps : epsilons) {
    DimensionRow row{eps, 0, 0, false, {}};
    const Polynomial p = d.at(eps);
    if (p.is_central()) {
      const RootSet rs = central_root_set(p);
      row.dimension = rs.hausdorff_dimension;
      row.roots_found = static_cast<int>(rs.strata.size());
      row.note = "central";
      rows.push_back(row);
      continue;
    }

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

    std::vector<Element> roots;
    for (const PolishResult& r : polished) {
      if (r.residual > 1e-10) continue;
      const bool seen = std::any_of(roots.begin(), roots.end(),
                                    [&](const Element& q) { return distance(q, r.x) < tol::kAttractorDedup; });
      if (!seen) roots.push_back(r.x);
    }
    row.roots_found = static_cast<int>(roots.size());
    if (roots.empty()) {
      row.flagged = true;
      row.note = "no roots found";
      rows.push_back(row);
      continue;
    }
    int rank_deficiency = 0;
    for (const Element& r : roots) {
      const RankReport rr = jacobian_rank(p, r);
      rank_deficiency = std::max(rank_deficiency, dim_a - rr.rank);
      if (rr.ambiguous) {
        row.flagged = true;
        row.note = "ambiguous Jacobian rank";
      }
    }
    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i) {
      for (std::size_t j = i + 1; j < roots.size(); ++j) min_sep = std::min(min_sep, distance(roots[i], roots[j]));
    }
    row.dimension = rank_deficiency;
    if (rank_deficiency == 0 && min_sep <= tol::kIsolatedSeparation) {
      row.flagged = true;
      row.note = "roots closer than isolation threshold";
    }
    if (!row.flagged) row.note = rank_deficiency == 0 ? "isolated" : "rank-deficient roots";
    rows.push_back(row);
  }
  return rows;
}

}  // namespace divroot
