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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pgg {

// 6 significant digits, the numeric format of every emitted CSV.
std::string format_number(double value);

// A rectangular table of preformatted cells.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  class Row {
   public:
    Row& operator<<(double value);
    Row& operator<<(std::size_t value);
    Row& operator<<(int value) { return *this << static_cast<double>(value); }
    Row& operator<<(std::string_view text);
    Row& operator<<(const char* text) { return *this << std::string_view(text); }
    Row& empty();

   private:
    friend class Table;
    std::vector<std::string> cells_;
  };

  void add(Row row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t column_index(std::string_view name) const;
  double number(std::size_t row, std::string_view column) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string to_csv(const Table& table);
// Throws DataError with the offending line number on ragged input.
Table parse_csv(const std::string& text);
void emit_csv(const Table& table, const std::filesystem::path& destination);
Table read_csv(const std::filesystem::path& source);

// Parses a numeric cell; throws DataError mentioning `line` on failure.
double parse_number(std::string_view cell, std::size_t line);

// Reads a one-column numeric file; a non-numeric first line is a header.
std::vector<double> read_numeric_column(const std::filesystem::path& source,
                                        std::string_view column = {});

struct LineSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;  // NaN entries break the polyline
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  std::vector<LineSeries> series;
};

struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major; row 0 drawn at the bottom
  double value_min = 0.0;
  double value_max = 1.0;
  bool diverging = false;  // blue-white-red around zero
};

std::string render_svg(const LineChart& chart);
std::string render_svg(const Heatmap& map);
void emit_svg(const LineChart& chart, const std::filesystem::path& destination);
void emit_svg(const Heatmap& map, const std::filesystem::path& destination);

void write_text_file(const std::filesystem::path& destination,
                     const std::string& contents);

}  // namespace pgg
