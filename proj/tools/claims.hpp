#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace divroot::claims {

struct Options {
  std::uint64_t seed = 20240601;
  /// Shorter Monte Carlo runs; sample counts named by the criteria are kept.
  bool quick = false;
  /// Per-claim overrides of the primary tolerance, keyed by claim id.
  std::map<std::string, double> tolerance_overrides;
};

struct Result {
  std::string id;
  std::string title;
  std::string expected;
  std::string measured;
  std::string tolerance;
  bool pass = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::vector<std::string> notes;

  bool within_time() const noexcept { return seconds <= time_limit; }
};

struct Claim {
  std::string id;
  std::string title;
  double time_limit = 0.0;  // seconds
  std::function<Result(const Options&)> run;
};

/// All acceptance claims in order, one per criterion.
const std::vector<Claim>& registry();

/// Runs one claim, timing it and converting exceptions into a failed result.
Result run(const Claim& c, const Options& opt);

}  // namespace divroot::claims
