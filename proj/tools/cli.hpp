// Copyright 2026 The lossyflow Authors.
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

#ifndef LOSSYFLOW_TOOLS_CLI_HPP_
#define LOSSYFLOW_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "lossyflow/errors.hpp"
#include "lossyflow/exactflow.hpp"
#include "lossyflow/genflow.hpp"

namespace lossyflow::cli {

class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Extended DIMACS:
//   c <comment>
//   p glf <n> <m> [U]
//   n <id> s | n <id> t
//   a <tail> <head> <cap> <gnum> <gden> [cost]
// Vertex ids are 1-based. Without U in the header, U is the largest
// integer in the file.
FlowNetwork parse_network(std::istream& in, const std::string& source = "<input>");
FlowNetwork parse_network_text(const std::string& text);
FlowNetwork parse_network_file(const std::string& path);
void write_network(std::ostream& out, const FlowNetwork& net);

enum class Subcommand { max_flow, min_cost_flow, exact_min_cost, exact_max_flow, solve_mmatrix, verify };
enum class Format { json, plain };

struct RunSpec {
  Subcommand subcommand = Subcommand::max_flow;
  std::string input;
  double epsilon = 1e-2;
  std::uint64_t seed = 0;
  ParameterMode mode = ParameterMode::practical;
  FlowBackend backend = FlowBackend::direct;
  Format format = Format::json;
  bool trace = false;
  int retries = 20;
  bool timing = true;
  std::optional<std::int64_t> flow_value;  // exact-min-cost target
  std::string flow_path;                   // verify
  std::string rhs_path;                    // solve-mmatrix
};

// Exit code 0 on success, 1 on usage or parse errors, 2 on solver failure.
// The result (or diagnostic) document goes to `out`; the trace to `err`.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

std::string to_string(Subcommand s);

}  // namespace lossyflow::cli

#endif  // LOSSYFLOW_TOOLS_CLI_HPP_
