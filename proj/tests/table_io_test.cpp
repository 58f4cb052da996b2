// Copyright 2026 The pgg-nudge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pgg/table_io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include "pgg/error.hpp"
#include "pgg/rng.hpp"

using namespace pgg;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "pgg_table_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333");
  CHECK(format_number(36.995) == "36.995");
  CHECK(format_number(1234567.0) == "1.23457e+06");
  CHECK(format_number(2.5e-7) == "2.5e-07");
}

TEST_CASE("non-finite cells are written empty") {
  Table t({"x"});
  Table::Row r;
  r << std::numeric_limits<double>::quiet_NaN();
  t.add(std::move(r));
  CHECK(to_csv(t) == "x\n\n");
}

TEST_CASE("CSV layout") {
  Table t({"group", "games", "mean"});
  Table::Row r;
  r << "baseline" << std::size_t{10000} << 36.995;
  t.add(std::move(r));
  CHECK(to_csv(t) == "group,games,mean\nbaseline,10000,36.995\n");
  Table::Row bad;
  bad << 1.0;
  CHECK_THROWS_AS(t.add(std::move(bad)), ContractViolation);
}

TEST_CASE("CSV round trip keeps 6 significant digits") {
  Rng rng(1);
  Table t({"a", "b"});
  std::vector<std::pair<double, double>> values;
  for (int i = 0; i < 500; ++i) {
    const double a = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.uniform_index(12)) - 6.0);
    const double b = rng.uniform();
    values.emplace_back(a, b);
    Table::Row row;
    row << a << b;
    t.add(std::move(row));
  }
  const Table back = parse_csv(to_csv(t));
  REQUIRE(back.rows().size() == 500);
  for (std::size_t i = 0; i < 500; ++i) {
    const double a = back.number(i, "a");
    CHECK(std::abs(a - values[i].first) <= 5e-6 * std::abs(values[i].first));
    CHECK(std::abs(back.number(i, "b") - values[i].second) <= 5e-6 * values[i].second);
  }
}

TEST_CASE("malformed CSV reports the line") {
  try {
    parse_csv("a,b\n1,2\n3\n");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_csv(""), DataError);
  CHECK_THROWS_AS(parse_number("abc", 4), DataError);
  CHECK(parse_number("1e-3", 1) == 0.001);
}

TEST_CASE("emit_csv is byte-identical across writes") {
  Table t({"x"});
  for (int i = 0; i < 10; ++i) {
    Table::Row r;
    r << i / 7.0;
    t.add(std::move(r));
  }
  emit_csv(t, scratch("a.csv"));
  emit_csv(t, scratch("b.csv"));
  CHECK(slurp(scratch("a.csv")) == slurp(scratch("b.csv")));
  CHECK(read_csv(scratch("a.csv")).rows().size() == 10);
  CHECK_THROWS(emit_csv(t, "/nonexistent/dir/x.csv"));
}

TEST_CASE("read_numeric_column") {
  write_text_file(scratch("plain.txt"), "1\n2.5\n\n3\n");
  CHECK(read_numeric_column(scratch("plain.txt")) == std::vector<double>{1, 2.5, 3});
  write_text_file(scratch("header.csv"), "value\n4\n5\n");
  CHECK(read_numeric_column(scratch("header.csv")) == std::vector<double>{4, 5});
  write_text_file(scratch("wide.csv"), "game,sum\n0,10\n1,20\n");
  CHECK(read_numeric_column(scratch("wide.csv"), "sum") == std::vector<double>{10, 20});
  CHECK_THROWS_AS(read_numeric_column(scratch("wide.csv")), DataError);
  CHECK_THROWS_AS(read_numeric_column(scratch("wide.csv"), "missing"), DataError);
  write_text_file(scratch("broken.txt"), "1\n2\nthree\n");
  try {
    read_numeric_column(scratch("broken.txt"));
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(read_numeric_column(scratch("missing.txt")), DataError);
}

TEST_CASE("heatmap SVG has one rect per cell and is deterministic") {
  Heatmap h;
  h.title = "test";
  h.rows = 25;
  h.cols = 20;
  Rng rng(2);
  for (std::size_t i = 0; i < h.rows * h.cols; ++i) h.values.push_back(rng.uniform());
  const std::string svg = render_svg(h);
  CHECK(count_of(svg, "<rect") == 500);
  CHECK(svg == render_svg(h));
  CHECK(svg.rfind("<svg", 0) == 0);

  h.diverging = true;
  h.value_min = -1.0;
  CHECK(count_of(render_svg(h), "<rect") == 500);

  emit_svg(h, scratch("h1.svg"));
  emit_svg(h, scratch("h2.svg"));
  CHECK(slurp(scratch("h1.svg")) == slurp(scratch("h2.svg")));
}

TEST_CASE("line chart SVG") {
  LineChart c;
  c.title = "curves & <things>";
  c.series.push_back({"up", {0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}});
  c.series.push_back({"gap", {0.0, 0.5, 1.0}, {0.2, std::numeric_limits<double>::quiet_NaN(), 0.4}});
  const std::string svg = render_svg(c);
  CHECK(svg == render_svg(c));
  CHECK(svg.find("&amp;") != std::string::npos);
  CHECK(svg.find("<things>") == std::string::npos);
  CHECK(count_of(svg, "<path") >= 3);
  CHECK(count_of(svg, "<rect") == 0);
}
