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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pgg/error.hpp"

namespace pgg {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0 into 0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

Table::Row& Table::Row::operator<<(double value) {
  cells_.push_back(std::isfinite(value) ? format_number(value) : std::string());
  return *this;
}

Table::Row& Table::Row::operator<<(std::size_t value) {
  cells_.push_back(std::to_string(value));
  return *this;
}

Table::Row& Table::Row::operator<<(std::string_view text) {
  require(text.find_first_of(",\n\"") == std::string_view::npos,
          "CSV cells may not contain commas, quotes or newlines");
  cells_.emplace_back(text);
  return *this;
}

Table::Row& Table::Row::empty() {
  cells_.emplace_back();
  return *this;
}

void Table::add(Row row) {
  require(row.cells_.size() == columns_.size(),
          "row width does not match the table header");
  rows_.push_back(std::move(row.cells_));
}

std::size_t Table::column_index(std::string_view name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) {
    throw DataError("missing column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - columns_.begin());
}

double Table::number(std::size_t row, std::string_view column) const {
  // Line numbers are 1-based and count the header.
  return parse_number(rows_.at(row).at(column_index(column)), row + 2);
}

std::string to_csv(const Table& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.columns());
  for (const auto& row : table.rows()) line(row);
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string slurp(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw DataError("cannot open '" + source.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool is_number(std::string_view cell) {
  double v;
  const auto* end = cell.data() + cell.size();
  const auto res = std::from_chars(cell.data(), end, v);
  return !cell.empty() && res.ec == std::errc() && res.ptr == end;
}

}  // namespace

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Table table;
  std::size_t line_no = 0;
  bool header = true;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (header) {
      columns = std::move(cells);
      header = false;
      continue;
    }
    if (cells.size() != columns.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(columns.size()) + " fields, found " +
                      std::to_string(cells.size()));
    }
    rows.push_back(std::move(cells));
  }
  if (header) throw DataError("CSV input is empty");
  table = Table(columns);
  for (const auto& cells : rows) {
    Table::Row filled;
    for (const auto& c : cells) {
      if (c.empty()) {
        filled.empty();
      } else {
        filled << std::string_view(c);
      }
    }
    table.add(std::move(filled));
  }
  return table;
}

void write_text_file(const std::filesystem::path& destination,
                     const std::string& contents) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open '" + destination.string() + "' for writing");
  }
  out << contents;
  if (!out) throw DataError("failed writing '" + destination.string() + "'");
}

void emit_csv(const Table& table, const std::filesystem::path& destination) {
  write_text_file(destination, to_csv(table));
}

Table read_csv(const std::filesystem::path& source) {
  try {
    return parse_csv(slurp(source));
  } catch (const DataError& e) {
    throw DataError(source.string() + ": " + e.what());
  }
}

double parse_number(std::string_view cell, std::size_t line) {
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto res = std::from_chars(cell.data(), end, v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != end) {
    throw DataError("line " + std::to_string(line) + ": '" +
                    std::string(cell) + "' is not a number");
  }
  return v;
}

std::vector<double> read_numeric_column(const std::filesystem::path& source,
                                        std::string_view column) {
  const std::string text = slurp(source);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t index = 0;
  std::size_t width = 1;
  bool first = true;
  std::vector<double> values;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto cells = split_line(line);
      if (first) {
        first = false;
        width = cells.size();
        const bool header = !is_number(cells.front());
        if (!column.empty()) {
          if (!header) throw DataError("line 1: no header to select a column from");
          const auto it = std::find(cells.begin(), cells.end(), column);
          if (it == cells.end()) {
            throw DataError("line 1: no column named '" + std::string(column) + "'");
          }
          index = static_cast<std::size_t>(it - cells.begin());
        } else if (width != 1) {
          throw DataError("line 1: expected a single column, found " +
                          std::to_string(width));
        }
        if (header) continue;
      }
      if (cells.size() != width) {
        throw DataError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(width) + " fields, found " +
                        std::to_string(cells.size()));
      }
      values.push_back(parse_number(cells[index], line_no));
    }
  } catch (const DataError& e) {
    throw DataError(source.string() + ": " + e.what());
  }
  if (values.empty()) throw DataError(source.string() + ": no numeric rows");
  return values;
}

// ---------------------------------------------------------------------------
// SVG rendering. Coordinates are printed with fixed precision so identical
// inputs always produce identical bytes.

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(std::ostringstream& o, std::string_view title,
              std::string_view x_label, std::string_view y_label) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth)
    << "\" height=\"" << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth)
    << ' ' << fmt(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\""
    << " font-size=\"15\">" << escape(title) << "</text>\n";
  const double plot_mid_x = kLeft + (kWidth - kLeft - kRight) / 2;
  const double plot_mid_y = kTop + (kHeight - kTop - kBottom) / 2;
  o << "<text x=\"" << fmt(plot_mid_x) << "\" y=\"" << fmt(kHeight - 12)
    << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << fmt(plot_mid_y)
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << fmt(plot_mid_y)
    << ")\">" << escape(y_label) << "</text>\n";
}

void axes(std::ostringstream& o, double x_min, double x_max, double y_min,
          double y_max) {
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;
  o << "<path d=\"M" << fmt(x0) << ' ' << fmt(y1) << " L" << fmt(x0) << ' '
    << fmt(y0) << " L" << fmt(x1) << ' ' << fmt(y0)
    << "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double x = x0 + f * (x1 - x0);
    const double y = y0 - f * (y0 - y1);
    o << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y0 + 16)
      << "\" text-anchor=\"middle\">" << format_number(x_min + f * (x_max - x_min))
      << "</text>\n";
    o << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(y + 4)
      << "\" text-anchor=\"end\">" << format_number(y_min + f * (y_max - y_min))
      << "</text>\n";
  }
}

std::string heat_color(double v, const Heatmap& map) {
  const double span = map.value_max - map.value_min;
  double f = span > 0.0 ? (v - map.value_min) / span : 0.0;
  f = std::clamp(f, 0.0, 1.0);
  int r, g, b;
  if (map.diverging) {
    // 0 -> blue, 0.5 -> white, 1 -> red
    if (f < 0.5) {
      const double t = f / 0.5;
      r = static_cast<int>(std::lround(33 + t * (255 - 33)));
      g = static_cast<int>(std::lround(102 + t * (255 - 102)));
      b = static_cast<int>(std::lround(172 + t * (255 - 172)));
    } else {
      const double t = (f - 0.5) / 0.5;
      r = static_cast<int>(std::lround(255 + t * (178 - 255)));
      g = static_cast<int>(std::lround(255 + t * (24 - 255)));
      b = static_cast<int>(std::lround(255 + t * (43 - 255)));
    }
  } else {
    // dark navy -> yellow
    r = static_cast<int>(std::lround(13 + f * (253 - 13)));
    g = static_cast<int>(std::lround(8 + f * (231 - 8)));
    b = static_cast<int>(std::lround(135 + f * (37 - 135)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_svg(const LineChart& chart) {
  std::ostringstream o;
  open_svg(o, chart.title, chart.x_label, chart.y_label);
  axes(o, chart.x_min, chart.x_max, chart.y_min, chart.y_max);
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;
  const double xs = chart.x_max > chart.x_min ? chart.x_max - chart.x_min : 1.0;
  const double ys = chart.y_max > chart.y_min ? chart.y_max - chart.y_min : 1.0;
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const LineSeries& series = chart.series[s];
    const char* color = kPalette[s % std::size(kPalette)];
    std::string d;
    bool pen_down = false;
    for (std::size_t i = 0; i < series.x.size() && i < series.y.size(); ++i) {
      if (!std::isfinite(series.y[i]) || !std::isfinite(series.x[i])) {
        pen_down = false;
        continue;
      }
      const double px = x0 + (series.x[i] - chart.x_min) / xs * (x1 - x0);
      const double py = y0 - (series.y[i] - chart.y_min) / ys * (y0 - y1);
      d += pen_down ? " L" : (d.empty() ? "M" : " M");
      d += fmt(px) + ' ' + fmt(py);
      pen_down = true;
    }
    if (!d.empty()) {
      o << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    }
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(s);
    o << "<line x1=\"" << fmt(x1 + 10) << "\" y1=\"" << fmt(ly) << "\" x2=\""
      << fmt(x1 + 30) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << fmt(x1 + 35) << "\" y=\"" << fmt(ly + 4) << "\">"
      << escape(series.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string render_svg(const Heatmap& map) {
  require(map.values.size() == map.rows * map.cols,
          "heatmap values do not match its dimensions");
  std::ostringstream o;
  open_svg(o, map.title, map.x_label, map.y_label);
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;
  const double cw = (x1 - x0) / static_cast<double>(std::max<std::size_t>(map.cols, 1));
  const double ch = (y0 - y1) / static_cast<double>(std::max<std::size_t>(map.rows, 1));
  for (std::size_t r = 0; r < map.rows; ++r) {
    for (std::size_t c = 0; c < map.cols; ++c) {
      const double v = map.values[r * map.cols + c];
      o << "<rect x=\"" << fmt(x0 + cw * static_cast<double>(c)) << "\" y=\""
        << fmt(y0 - ch * static_cast<double>(r + 1)) << "\" width=\"" << fmt(cw)
        << "\" height=\"" << fmt(ch) << "\" fill=\"" << heat_color(v, map)
        << "\"><title>" << format_number(v) << "</title></rect>\n";
    }
  }
  // Colour scale as a gradient-free legend of labelled ticks.
  for (int i = 0; i <= 4; ++i) {
    const double v = map.value_min + (map.value_max - map.value_min) * i / 4.0;
    const double ly = y0 - (y0 - y1) * i / 4.0;
    o << "<circle cx=\"" << fmt(x1 + 20) << "\" cy=\"" << fmt(ly) << "\" r=\"7\" fill=\""
      << heat_color(v, map) << "\" stroke=\"#444\"/>\n";
    o << "<text x=\"" << fmt(x1 + 32) << "\" y=\"" << fmt(ly + 4) << "\">"
      << format_number(v) << "</text>\n";
  }
  o << "<text x=\"" << fmt(x0) << "\" y=\"" << fmt(y0 + 16) << "\">0</text>\n";
  o << "<text x=\"" << fmt(x1) << "\" y=\"" << fmt(y0 + 16)
    << "\" text-anchor=\"end\">" << map.cols << "</text>\n";
  o << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(y0 - 4)
    << "\" text-anchor=\"end\">1</text>\n";
  o << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(y1 + 10)
    << "\" text-anchor=\"end\">" << map.rows << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

void emit_svg(const LineChart& chart, const std::filesystem::path& destination) {
  write_text_file(destination, render_svg(chart));
}

void emit_svg(const Heatmap& map, const std::filesystem::path& destination) {
  write_text_file(destination, render_svg(map));
}

}  // namespace pgg
