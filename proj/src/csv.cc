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

#include "hatex/csv.h"

#include <fstream>

#include "hatex/common.h"

namespace hatex {
namespace {

// Reads one record; returns false at end of input.
bool ReadRecord(std::istream& in, std::vector<std::string>& fields,
                int& line) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
      continue;
    }
    if (ch == '"' && field.empty()) {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      if (in.peek() == '\n') continue;
      ++line;
      break;
    } else if (ch == '\n') {
      ++line;
      break;
    } else {
      field += ch;
    }
  }
  if (in_quotes) throw FormatError("unterminated quoted field near line " +
                                   std::to_string(line));
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

bool IsBlank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].empty();
}

}  // namespace

CsvTable CsvTable::Parse(std::istream& in) {
  CsvTable table;
  int line = 1;
  std::vector<std::string> fields;
  // Skip a UTF-8 byte order mark.
  if (in.peek() == 0xEF) {
    char bom[3];
    in.read(bom, 3);
  }
  while (true) {
    const int start = line;
    if (!ReadRecord(in, fields, line)) break;
    if (IsBlank(fields)) continue;
    if (table.header_.empty()) {
      table.header_ = fields;
      continue;
    }
    if (fields.size() != table.header_.size()) {
      throw FormatError("line " + std::to_string(start) + ": expected " +
                        std::to_string(table.header_.size()) +
                        " fields, got " + std::to_string(fields.size()));
    }
    table.rows_.push_back(fields);
    table.lines_.push_back(start);
  }
  return table;
}

CsvTable CsvTable::ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return Parse(in);
}

std::optional<size_t> CsvTable::column(std::string_view name) const {
  for (size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

size_t CsvTable::require_column(std::string_view name) const {
  if (auto col = column(name)) return *col;
  throw FormatError("missing column '" + std::string(name) + "'");
}

void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char ch : f) {
      if (ch == '"') out << '"';
      out << ch;
    }
    out << '"';
  }
  out << '\n';
}

}  // namespace hatex
