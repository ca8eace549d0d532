// Copyright 2026 The uiqa Authors. All Rights Reserved.
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

#include "uiqa/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "uiqa/error.hpp"

namespace uiqa::csv {

namespace {

std::vector<std::string> split_line(std::string_view line, const std::string& source,
                                    std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) throw Error(with_location(source, line_no, "unterminated quoted field"));
  fields.push_back(std::move(current));
  return fields;
}

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\n") != std::string_view::npos;
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(with_location(source, 1, "missing column '" + std::string(name) + "'"));
}

Table parse(std::string_view text, std::string source) {
  Table table;
  table.source = std::move(source);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = split_line(line, table.source, line_no);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(with_location(table.source, line_no,
                                "expected " + std::to_string(table.header.size()) +
                                    " fields, found " + std::to_string(fields.size())));
    }
    table.rows.push_back(Row{line_no, std::move(fields)});
  }
  if (!have_header) throw Error(with_location(table.source, 0, "missing header row"));
  return table;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(with_location(path.string(), 0, "cannot open file"));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

double to_double(const Table& table, const Row& row, std::size_t col) {
  const std::string& s = row.fields.at(col);
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw Error(with_location(table.source, row.line,
                              "column '" + table.header[col] + "': not a number: '" + s + "'"));
  }
  return value;
}

long long to_int(const Table& table, const Row& row, std::size_t col) {
  const std::string& s = row.fields.at(col);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(with_location(table.source, row.line,
                              "column '" + table.header[col] + "': not an integer: '" + s + "'"));
  }
  return value;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Writer::Writer(std::vector<std::string> header) : width_(header.size()) { add(std::move(header)); }

void Writer::add(std::vector<std::string> fields) {
  if (fields.size() != width_) throw Error("csv writer: row width mismatch");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text_.push_back(',');
    if (needs_quotes(fields[i])) {
      text_.push_back('"');
      for (char c : fields[i]) {
        if (c == '"') text_.push_back('"');
        text_.push_back(c);
      }
      text_.push_back('"');
    } else {
      text_ += fields[i];
    }
  }
  text_.push_back('\n');
}

std::string Writer::str() const { return text_; }

void Writer::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(with_location(path.string(), 0, "cannot write file"));
  out << text_;
  if (!out) throw Error(with_location(path.string(), 0, "write failed"));
}

}  // namespace uiqa::csv
