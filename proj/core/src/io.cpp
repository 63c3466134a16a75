#include "divroot/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace divroot {

namespace {

double to_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

void emit_header(std::ostream& os, const std::vector<std::string>& header) {
  for (const std::string& line : header) os << "# " << line << '\n';
}

std::ostream& full_precision(std::ostream& os) {
  return os << std::setprecision(std::numeric_limits<double>::max_digits10);
}

}  // namespace

Polynomial parse_polynomial(Algebra a, std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("polynomial literal: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw std::invalid_argument("polynomial literal must be a non-empty array");
  const int d = dimension(a);
  std::vector<Element> coeffs;
  for (const auto& c : j) {
    if (c.is_number()) {
      coeffs.push_back(Element::real(a, c.get<double>()));
      continue;
    }
    if (!c.is_array()) throw std::invalid_argument("polynomial coefficient must be a number or an array");
    if (static_cast<int>(c.size()) != d) {
      throw AlgebraMismatch("coefficient has " + std::to_string(c.size()) + " coordinates, algebra " +
                            std::string(algebra_name(a)) + " needs " + std::to_string(d));
    }
    std::vector<double> coords;
    for (const auto& v : c) {
      if (!v.is_number()) throw std::invalid_argument("coefficient coordinates must be numbers");
      coords.push_back(v.get<double>());
    }
    coeffs.emplace_back(a, coords);
  }
  return Polynomial(a, std::move(coeffs));
}

std::string format_polynomial(const Polynomial& p) {
  nlohmann::json j = nlohmann::json::array();
  for (const Element& c : p.coefficients()) {
    j.push_back(std::vector<double>(c.coords().begin(), c.coords().end()));
  }
  return j.dump();
}

std::vector<double> parse_range(std::string_view spec) {
  if (spec.empty()) throw std::invalid_argument("empty range");
  std::vector<std::string_view> parts;
  const char sep = spec.find(':') != std::string_view::npos ? ':' : ',';
  for (std::size_t pos = 0;;) {
    const std::size_t next = spec.find(sep, pos);
    parts.push_back(spec.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (sep == ',') {
    std::vector<double> out;
    for (std::string_view p : parts) out.push_back(to_double(p));
    return out;
  }
  if (parts.size() != 3) throw std::invalid_argument("range must be lo:hi:logN or lo:hi:linN");
  const double lo = to_double(parts[0]);
  const double hi = to_double(parts[1]);
  const std::string_view kind = parts[2].substr(0, 3);
  if (kind != "log" && kind != "lin") throw std::invalid_argument("range spacing must be log or lin");
  const double count = to_double(parts[2].substr(3));
  if (count < 1 || count != std::floor(count)) throw std::invalid_argument("range count must be a positive integer");
  const int n = static_cast<int>(count);
  if (kind == "log" && !(lo > 0.0 && hi > 0.0)) throw std::invalid_argument("log range needs positive bounds");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(kind == "log" ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo));
  }
  if (n > 1) out.back() = hi;
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_trace_csv(std::ostream& os, const BreathingTrace& tr, const std::vector<std::string>& header) {
  emit_header(os, header);
  full_precision(os) << "t,a,b,delta,r_inner,r_outer,gap,valid\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    os << tr.times[i] << ',' << tr.a[i] << ',' << tr.b[i] << ',' << tr.delta[i] << ',' << tr.r_inner[i] << ','
       << tr.r_outer[i] << ',' << tr.gap[i] << ',' << (tr.valid(i) ? 1 : 0) << '\n';
  }
}

void write_psd_csv(std::ostream& os, const Psd& spectrum, const std::vector<std::string>& header) {
  emit_header(os, header);
  full_precision(os) << "freq_hz,power\n";
  for (std::size_t k = 0; k < spectrum.power.size(); ++k) {
    os << spectrum.frequencies[k] << ',' << spectrum.power[k] << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const std::vector<std::string>& header) {
  emit_header(os, header);
  const int d = tr.start.dim();
  full_precision(os) << 't';
  for (int i = 0; i < d; ++i) os << ",x" << i;
  os << ",V\n";
  for (const TrajectorySample& s : tr.samples) {
    os << s.t;
    for (int i = 0; i < d; ++i) os << ',' << s.x[i];
    os << ',' << s.v << '\n';
  }
}

void write_phase_csv(std::ostream& os, const std::vector<PhaseCell>& cells, const std::vector<std::string>& header) {
  emit_header(os, header);
  full_precision(os) << "epsilon,T,m,m_stderr,mean_V,var_V,acceptance,flag\n";
  for (const PhaseCell& c : cells) {
    std::string flag = c.flag;
    for (char& ch : flag) {
      if (ch == ',' || ch == '\n') ch = ' ';
    }
    os << c.epsilon << ',' << c.temperature << ',' << c.stats.order_parameter << ','
       << c.stats.order_parameter_stderr << ',' << c.stats.mean_v << ',' << c.stats.var_v << ','
       << c.stats.acceptance << ',' << flag << '\n';
  }
}

}  // namespace divroot
