#pragma once

#include "divroot/algebra.hpp"

#include <cstdint>
#include <random>

namespace divroot {

using Rng = std::mt19937_64;

/// Seed for stream `index` derived from a base seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Standard normal coordinates.
Element random_element(Algebra a, Rng& rng, double scale = 1.0);
Element random_unit(Algebra a, Rng& rng);
/// Uniform on the unit sphere of the imaginary subspace; requires dimension >= 2.
Element random_unit_imaginary(Algebra a, Rng& rng);

}  // namespace divroot
