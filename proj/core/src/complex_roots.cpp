#include "divroot/manifolds.hpp"
#include "divroot/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace divroot {

namespace {

using cplx = std::complex<double>;

// p(z), p'(z) and sum |c_k| |z|^k for the relative backward error.
struct HornerResult {
  cplx value;
  cplx derivative;
  double magnitude;
};

HornerResult horner(const std::vector<cplx>& c, cplx z) {
  cplx p = c.back();
  cplx dp = 0.0;
  double mag = std::abs(c.back());
  const double az = std::abs(z);
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
    mag = mag * az + std::abs(c[k]);
  }
  return {p, dp, mag};
}

double backward_error(const std::vector<cplx>& c, cplx z) {
  const HornerResult h = horner(c, z);
  return h.magnitude > 0.0 ? std::abs(h.value) / h.magnitude : 0.0;
}

}  // namespace

std::vector<cplx> complex_roots(const std::vector<cplx>& coeffs_in) {
  std::vector<cplx> c = coeffs_in;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.empty()) throw std::invalid_argument("complex_roots: zero polynomial");

  std::vector<cplx> roots;
  std::size_t lead_zero = 0;
  while (lead_zero < c.size() && c[lead_zero] == 0.0) ++lead_zero;
  roots.assign(lead_zero, cplx(0.0));
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(lead_zero));

  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return roots;
  const cplx lead = c.back();
  for (cplx& ck : c) ck /= lead;

  // Start on a circle whose radius matches the geometric mean root modulus.
  const double radius = std::max(std::pow(std::abs(c[0]), 1.0 / n), 1e-3);
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n + 0.4;
    z[k] = std::polar(radius, angle);
  }

  const double eps = std::numeric_limits<double>::epsilon();
  bool converged = false;
  for (int sweep = 0; sweep < tol::kRootSolverMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      const HornerResult h = horner(c, z[i]);
      if (h.magnitude > 0.0 && std::abs(h.value) <= 2.0 * eps * h.magnitude) continue;
      const cplx ratio = h.value / h.derivative;
      cplx repulsion = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      }
      const cplx w = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
      z[i] -= w;
      if (std::abs(w) > 4.0 * eps * std::max(1.0, std::abs(z[i]))) converged = false;
    }
  }
  for (const cplx& r : z) {
    if (!(backward_error(c, r) < tol::kRootPolishResidual)) {
      throw ConvergenceError("complex_roots: no convergence after " +
                             std::to_string(tol::kRootSolverMaxSweeps) + " sweeps");
    }
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

std::vector<cplx> complex_roots_real_poly(const std::vector<double>& coeffs) {
  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  std::vector<cplx> raw = complex_roots(c);

  std::vector<double> reals;
  std::vector<cplx> upper, lower;
  for (const cplx& r : raw) {
    const double scale = std::max(1.0, std::abs(r));
    if (std::abs(r.imag()) <= 1e-7 * scale) {
      reals.push_back(r.real());
    } else if (r.imag() > 0.0) {
      upper.push_back(r);
    } else {
      lower.push_back(r);
    }
  }
  // Real coefficients: pair each upper root with its nearest conjugate and symmetrize.
  std::vector<cplx> pairs;
  std::vector<bool> used(lower.size(), false);
  for (const cplx& u : upper) {
    std::size_t best = lower.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(u - std::conj(lower[j]));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    cplx m = u;
    if (best < lower.size()) {
      used[best] = true;
      m = 0.5 * (u + std::conj(lower[best]));
    }
    // Rounding-level real parts (x^2 + c) are exactly zero.
    if (std::abs(m.real()) <= 8 * std::numeric_limits<double>::epsilon() * std::abs(m)) m.real(0.0);
    pairs.push_back(m);
  }
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!used[j]) pairs.push_back(std::conj(lower[j]));
  }

  std::sort(reals.begin(), reals.end());
  std::sort(pairs.begin(), pairs.end(), [](const cplx& a, const cplx& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<cplx> out;
  out.reserve(raw.size());
  for (double r : reals) out.emplace_back(r, 0.0);
  for (const cplx& p : pairs) {
    out.push_back(p);
    out.push_back(std::conj(p));
  }
  return out;
}

}  // namespace divroot
