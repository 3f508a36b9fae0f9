// Copyright 2026 The Stylo Authors.
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

// Minimal CSV reading and writing (RFC 4180 quoting) plus number formatting
// that round-trips exactly.

#ifndef STYLO_CSV_H_
#define STYLO_CSV_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace stylo::csv {

// Shortest decimal representation that parses back to the same double.
std::string format(double value);

// Quotes the field when it contains a delimiter character.
std::string field(std::string_view value);

std::vector<std::string> split_line(std::string_view line);

double parse_double(std::string_view s);
long long parse_int(std::string_view s);

// Reads a header line and data rows; throws DataError when the header does
// not match `expected_header` or a row has the wrong column count.
class Reader {
 public:
  Reader(std::istream& in, std::vector<std::string> expected_header);

  // Returns false at end of input.
  bool next(std::vector<std::string>& row);
  size_t line_number() const { return line_; }

 private:
  std::istream& in_;
  size_t columns_;
  size_t line_ = 1;
};

void write_row(std::ostream& out, const std::vector<std::string>& row);

}  // namespace stylo::csv

#endif  // STYLO_CSV_H_
