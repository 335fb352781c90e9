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

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cli.hpp"

using lossyflow::cli::Format;
using lossyflow::cli::RunSpec;
using lossyflow::cli::Subcommand;

int main(int argc, char** argv) {
  CLI::App app{"Generalized flow and M-matrix solvers", "lossyflow"};
  app.require_subcommand(1);

  RunSpec spec;
  std::string mode = "practical", backend = "direct", format = "json";
  std::int64_t flow_value = -1;

  const std::map<std::string, lossyflow::ParameterMode> modes{
      {"practical", lossyflow::ParameterMode::practical},
      {"paper_exact", lossyflow::ParameterMode::paper_exact}};
  const std::map<std::string, lossyflow::FlowBackend> backends{
      {"direct", lossyflow::FlowBackend::direct},
      {"dense", lossyflow::FlowBackend::dense},
      {"iterative", lossyflow::FlowBackend::iterative},
      {"structured", lossyflow::FlowBackend::structured}};

  auto add = [&](const char* name, const char* help, Subcommand which) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", spec.input, "Input file, or - for stdin")->required();
    sub->add_option("--epsilon", spec.epsilon, "Accuracy parameter")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", spec.seed, "Random seed")->envname("LOSSYFLOW_SEED");
    sub->add_option("--mode", mode, "Parameter mode")
        ->check(CLI::IsMember({"practical", "paper_exact"}));
    sub->add_option("--backend", backend, "Linear-system backend")
        ->check(CLI::IsMember({"direct", "dense", "iterative", "structured"}));
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "plain"}));
    sub->add_flag("--trace", spec.trace, "Write the interior-point trace to stderr");
    sub->add_option("--retries", spec.retries, "Re-perturbation budget")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("!--no-timing", spec.timing, "Report wall_ms as 0");
    sub->callback([&spec, which] { spec.subcommand = which; });
    return sub;
  };

  add("max-flow", "Approximate generalized maximum flow", Subcommand::max_flow);
  add("min-cost-flow", "Approximate generalized minimum-cost flow", Subcommand::min_cost_flow);
  add("exact-min-cost", "Exact min-cost flow on a standard network", Subcommand::exact_min_cost)
      ->add_option("--flow-value", flow_value, "Target flow value (default: the maximum)")
      ->check(CLI::NonNegativeNumber);
  add("exact-max-flow", "Exact max-flow value of a standard network", Subcommand::exact_max_flow);
  add("solve-mmatrix", "Solve an SDD or A Aᵀ system from Matrix Market", Subcommand::solve_mmatrix)
      ->add_option("--rhs", spec.rhs_path, "Right-hand side vector (default: all ones)");
  add("verify", "Check a flow against a network", Subcommand::verify)
      ->add_option("--flow", spec.flow_path, "Flow document or whitespace-separated values")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  spec.mode = modes.at(mode);
  spec.backend = backends.at(backend);
  spec.format = format == "plain" ? Format::plain : Format::json;
  if (flow_value >= 0) spec.flow_value = flow_value;
  return lossyflow::cli::run(spec, std::cout, std::cerr);
}
