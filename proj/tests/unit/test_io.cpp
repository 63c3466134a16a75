#include "divroot/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace divroot;

namespace fs = std::filesystem;

TEST_CASE("polynomial JSON round trip") {
  const Algebra h = Algebra::Quaternion;
  const Polynomial p = parse_polynomial(h, "[[1,0,0,0],[0,1,0,0],1]");
  CHECK(p.degree() == 2);
  CHECK(p.coefficient(1) == Element::unit(h, 1));
  CHECK(p.coefficient(2) == Element::one(h));
  const Polynomial q = parse_polynomial(h, format_polynomial(p));
  for (int k = 0; k <= 2; ++k) CHECK(q.coefficient(k) == p.coefficient(k));
  CHECK(parse_polynomial(h, "[1,0,1]").is_central());
  CHECK_THROWS_AS(parse_polynomial(h, "[[1,0],[1,0]]"), AlgebraMismatch);
  CHECK_THROWS(parse_polynomial(h, "[1,"));
  CHECK_THROWS(parse_polynomial(h, "{\"a\":1}"));
}

TEST_CASE("range specs") {
  const auto lg = parse_range("0.005:0.1:log5");
  REQUIRE(lg.size() == 5);
  CHECK(lg.front() == doctest::Approx(0.005));
  CHECK(lg.back() == 0.1);
  CHECK(lg[1] / lg[0] == doctest::Approx(lg[4] / lg[3]));
  CHECK(parse_range("0:2.5:lin6")[1] == doctest::Approx(0.5));
  CHECK(parse_range("0.1,0.2,0.5") == std::vector<double>{0.1, 0.2, 0.5});
  CHECK(parse_range("3") == std::vector<double>{3.0});
  CHECK_THROWS_AS(parse_range("0:1:log3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("0:1:cub3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("0:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("a,b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range(""), std::invalid_argument);
}

TEST_CASE("atomic writes replace the target and leave no temporary") {
  const fs::path dir = fs::temp_directory_path() / "divroot_io_test" / "nested";
  fs::remove_all(dir.parent_path());
  const fs::path f = dir / "a.txt";
  write_file_atomic(f, "one");
  write_file_atomic(f, "two");
  std::ifstream in(f);
  std::string s;
  std::getline(in, s);
  CHECK(s == "two");
  CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
  fs::remove_all(dir.parent_path());
}

TEST_CASE("CSV writers emit headers and rows") {
  const BreathingTrace tr = simulate_breathing(2, Waveform::constant(5), Waveform::constant(4), 0, 1, 0.5);
  std::ostringstream os;
  write_trace_csv(os, tr, {"k=2"});
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# k=2");
  int rows = 0;
  std::string columns;
  std::getline(in, columns);
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
  CHECK(columns.find("r_inner") != std::string::npos);

  const Polynomial p = Polynomial::central(Algebra::Quaternion, {1, 0, 1});
  FlowConfig cfg;
  cfg.max_time = 0.1;
  const Trajectory t = integrate(p, Element::real(Algebra::Quaternion, 1.5), cfg);
  std::ostringstream ts;
  write_trajectory_csv(ts, t);
  int lines = 0;
  std::istringstream tin(ts.str());
  while (std::getline(tin, line)) ++lines;
  CHECK(lines == static_cast<int>(t.samples.size()) + 1);
}
