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

#ifndef QLS_CLI_HPP
#define QLS_CLI_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qls/presentation.hpp"

namespace qls {

enum class OutputFormat { table, machine };

// Session-wide settings shared by every verb.
struct SessionConfig {
  std::vector<std::string> field;  // extra indeterminates joined to the union
  int degree = 4;                  // degree bound D, must be >= 2
  OutputFormat format = OutputFormat::table;
};

// One parsed command line: the verb, its positional inputs (file paths, or
// preset names starting with '@'), and the named file options.
struct CommandSpec {
  std::string verb;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> options;
  bool check_equivalence = false;
};

// Input text tagged with where it came from, for error messages.
struct SourceFile {
  std::string origin;
  std::string text;
};

// Union of the `field` lines of the sources in first-occurrence order,
// followed by any extras not already present.
FieldSpec session_field(const std::vector<SourceFile>& sources,
                        const std::vector<std::string>& extras);

// Parses one presentation file against the session field. The grammar is
// line-based: `field <names>` (zero or more indeterminates), `space <name>`,
// `gens <names>`, and any number of `rel <expression>` lines; '#' starts a
// comment. Relation expressions admit + - * / ^ and parentheses, with
// generator names building words and everything else scalar. Relations must
// be homogeneous of degree at least 2 and may only use parameters declared in
// this file's own field line. Throws parse_error with origin:line:column.
Presentation parse_presentation(const SourceFile& src, const FieldSpec& session,
                                int cap);

// Parses a matrix file: first line `rows cols`, then one line per row of
// whitespace-separated scalar expressions over the session field.
LinearMap parse_matrix(const SourceFile& src, const FieldSpec& session);

// Canonical text form of a presentation, itself valid input: the field,
// space and gens lines followed by one `rel` line per echelon row, degree by
// degree in deglex order. Identical presentations give identical bytes, and
// parsing the output reproduces an equal presentation.
std::string emit_canonical(const Presentation& p);

// The same content as a JSON object (gens, hilbert profile, relation rows).
std::string emit_machine(const Presentation& p);

// Matrix in the .mat file format with canonical scalar entries.
std::string emit_matrix(const LinearMap& m, const FieldSpec& field);

// Built-in presentations addressable as '@name' inputs: qplane, k, u2, u3,
// cubic. Returns the .qls text, or nullopt for unknown names.
std::optional<std::string> preset_text(const std::string& name);

// Loads inputs, builds the session, dispatches the verb and writes the
// result. Returns 0 on success and 4 when a verification verb finds a
// failing check; throws parse_error / precondition_error for bad input.
int run_command(const CommandSpec& cmd, const SessionConfig& cfg,
                std::ostream& out);

// Full command-line entry point: argument parsing, dispatch, and the exit
// code contract (0 success, 2 parse or usage error, 3 precondition
// violation, 4 mathematical check failed).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace qls

#endif  // QLS_CLI_HPP
