// Copyright 2026 The qls Authors
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

#ifndef QLS_ERRORS_HPP
#define QLS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qls {

// Malformed input text (scalar expressions, .qls/.mat files).
// `pos` is a byte offset into the offending text; `line` is 1-based when the
// source is a file, 0 otherwise.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::string msg, std::size_t pos, std::size_t line = 0)
      : std::runtime_error(std::move(msg)), pos(pos), line(line) {}
  std::size_t pos;
  std::size_t line;
};

// Well-formed input that violates an operation's contract (singular matrix,
// inhomogeneous relation in conic mode, degree-cap overflow, ...).
class precondition_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A verification that must hold by construction did not; this always
// indicates a bug rather than bad user input.
class internal_check_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qls

#endif  // QLS_ERRORS_HPP
