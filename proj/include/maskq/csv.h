// Copyright 2026 The maskq Authors.
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
#ifndef MASKQ_CSV_H_
#define MASKQ_CSV_H_

#include <cstdint>
#include <string>
#include <vector>

namespace maskq {

// Shortest text that parses back to the same double.
std::string FormatNumber(double x);

// Plain comma-separated tables without quoting; fields never contain commas.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws FormatError if absent.
  int Column(const std::string& name) const;
  std::vector<double> NumericColumn(const std::string& name) const;
};

std::string FormatCsv(const CsvTable& table);
CsvTable ParseCsv(const std::string& text);

CsvTable ReadCsv(const std::string& path);
void WriteCsv(const CsvTable& table, const std::string& path);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace maskq

#endif  // MASKQ_CSV_H_
