/*
 * Copyright 2026 The XMentor Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef XMENTOR_SRC_CSV_HPP_
#define XMENTOR_SRC_CSV_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xmentor::csv {

struct Row {
  std::size_t line = 0;  // 1-based line the record starts on.
  std::vector<std::string> fields;
};

class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& message)
      : std::runtime_error(message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// RFC 4180 records: quoted fields may contain commas, doubled quotes and
// newlines. CRLF and LF line endings are accepted; blank lines are skipped.
std::vector<Row> read(std::string_view text);

// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

}  // namespace xmentor::csv

#endif  // XMENTOR_SRC_CSV_HPP_
