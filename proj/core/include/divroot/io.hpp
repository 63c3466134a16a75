#pragma once

#include "divroot/dynamics.hpp"
#include "divroot/flow.hpp"
#include "divroot/polynomial.hpp"
#include "divroot/spectrum.hpp"
#include "divroot/thermo.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace divroot {

/// Coefficients a_0, a_1, ... as a JSON array. Each entry is either a number (real
/// coefficient) or an array of dimension(a) coordinates.
///   "[[1,0,0,0],[0,0,0,0],[1,0,0,0]]"  ->  x^2 + 1 over H
///   "[1,0,1]"                          ->  the same, central shorthand
Polynomial parse_polynomial(Algebra a, std::string_view json);

/// JSON literal of the coefficient arrays, inverse of parse_polynomial.
std::string format_polynomial(const Polynomial& p);

/// Sweep ranges: "lo:hi:logN", "lo:hi:linN", a comma list, or a single number.
std::vector<double> parse_range(std::string_view spec);

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// CSV writers. Each `header` line is emitted first as a "# " comment.
void write_trace_csv(std::ostream& os, const BreathingTrace& tr, const std::vector<std::string>& header = {});
void write_psd_csv(std::ostream& os, const Psd& spectrum, const std::vector<std::string>& header = {});
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const std::vector<std::string>& header = {});
void write_phase_csv(std::ostream& os, const std::vector<PhaseCell>& cells,
                     const std::vector<std::string>& header = {});

}  // namespace divroot
