// Copyright 2026 The SRQE Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SRQE_CSV_HPP_
#define SRQE_CSV_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace srqe {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // 1-based source line of each row

  // Index of a header column, or -1.
  int column(const std::string& name) const;
};

// Comma-separated, optional double-quoted fields, first line is the header.
// Blank lines are skipped. Rows with the wrong field count raise
// InvalidInputError naming the line.
CsvTable read_csv(const std::filesystem::path& path);

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

double parse_double(const std::string& text, const std::string& where);
long long parse_count(const std::string& text, const std::string& where);

}  // namespace srqe

#endif  // SRQE_CSV_HPP_
