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

// Minimal CSV support for the toolkit's flat tables: UTF-8, LF line endings,
// mandatory header row, no embedded newlines. Fields may be double-quoted.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace uiqa::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source file
  std::vector<std::string> fields;
};

struct Table {
  std::string source;  // file name used in error messages
  std::vector<std::string> header;
  std::vector<Row> rows;

  // Index of a header column; throws naming the file when absent.
  std::size_t column(std::string_view name) const;
};

Table read(const std::filesystem::path& path);
Table parse(std::string_view text, std::string source = "<memory>");

// Throws with file:line context when the field is not a number / integer.
double to_double(const Table& table, const Row& row, std::size_t col);
long long to_int(const Table& table, const Row& row, std::size_t col);

// Shortest decimal text that round-trips the double ("inf"/"-inf"/"nan" for
// non-finite values).
std::string format_double(double value);

class Writer {
 public:
  explicit Writer(std::vector<std::string> header);
  void add(std::vector<std::string> fields);
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::string text_;
  std::size_t width_;
};

}  // namespace uiqa::csv
