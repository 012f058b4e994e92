// Copyright 2026 The Hatex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HATEX_CSV_H_
#define HATEX_CSV_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hatex {

// RFC-4180 table: header row plus records. Quoted fields may contain commas,
// doubled quotes and line breaks.
class CsvTable {
 public:
  static CsvTable Parse(std::istream& in);
  static CsvTable ReadFile(const std::string& path);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  // Line number (1-based) where record `row` starts.
  int line_of(size_t row) const { return lines_[row]; }

  std::optional<size_t> column(std::string_view name) const;
  // Throws FormatError naming the missing column.
  size_t require_column(std::string_view name) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<int> lines_;
};

// Writes one record, quoting fields only where required.
void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace hatex

#endif  // HATEX_CSV_H_
