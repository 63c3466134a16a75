#include "divroot/random.hpp"

#include <stdexcept>

namespace divroot {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Element random_element(Algebra a, Rng& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Element e(a);
  for (int i = 0; i < e.dim(); ++i) e[i] = normal(rng);
  return e;
}

Element random_unit(Algebra a, Rng& rng) {
  for (;;) {
    Element e = random_element(a, rng);
    const double n = e.norm();
    if (n > 1e-12) return e / n;
  }
}

Element random_unit_imaginary(Algebra a, Rng& rng) {
  if (dimension(a) < 2) throw std::invalid_argument("the reals have no imaginary directions");
  for (;;) {
    Element e = random_element(a, rng).imag();
    const double n = e.norm();
    if (n > 1e-12) return e / n;
  }
}

}  // namespace divroot
