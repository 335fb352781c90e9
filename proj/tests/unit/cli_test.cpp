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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "generators.hpp"

namespace lossyflow::cli {
namespace {

const char* kOneEdge =
    "c one edge\n"
    "p glf 2 1 4\n"
    "n 1 s\n"
    "n 2 t\n"
    "a 1 2 4 1 2\n";

std::string temp_file(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / ("lossyflow_cli_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

void expect_parse_error(const std::string& text, int line, int column, const std::string& needle) {
  try {
    parse_network_text(text);
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.column(), column) << e.what();
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(ParseNetwork, MinimalFile) {
  FlowNetwork net = parse_network_text(kOneEdge);
  EXPECT_EQ(net.n, 2);
  EXPECT_EQ(net.m(), 1);
  EXPECT_EQ(net.s, 0);
  EXPECT_EQ(net.t, 1);
  EXPECT_EQ(net.u, 4);
  EXPECT_EQ(net.edges[0].gamma, (Rational{1, 2}));
  EXPECT_FALSE(net.edges[0].cost);
}

TEST(ParseNetwork, ImpliedBoundWithoutHeaderU) {
  FlowNetwork net = parse_network_text("p glf 2 1\nn 1 s\nn 2 t\na 1 2 7 2 3 5\n");
  EXPECT_EQ(net.u, 7);
  EXPECT_EQ(net.edges[0].cost, 5);
}

TEST(ParseNetwork, MissingSinkNamesTheLine) {
  expect_parse_error("p glf 2 1 4\nn 1 s\na 1 2 4 1 2\n", 4, 1, "missing sink");
}

TEST(ParseNetwork, Errors) {
  expect_parse_error("p glf 2 1 4\nn 1 s\nn 2 s\n", 3, 1, "duplicate source");
  expect_parse_error("p glf 2 1 4\nn 1 s\nn 2 t\na 1 2 4 3 2\n", 4, 9, "exceeds 1");
  expect_parse_error("p glf 2 1 4\nn 1 s\nn 2 t\na 1 2 5 1 2\n", 4, 7, "exceeds U");
  expect_parse_error("p glf 2 1 4\nn 1 s\nn 2 t\na 1 2 4 1 2 9\n", 4, 13, "exceeds U");
  expect_parse_error("p glf 2 1 4\nn 1 s\nn 2 t\na 1 x 4 1 2\n", 4, 5, "expected an integer");
  expect_parse_error("p max 2 1\n", 1, 3, "glf");
  expect_parse_error("a 1 2 4 1 2\n", 1, 1, "before");
  expect_parse_error("p glf 2 2 4\nn 1 s\nn 2 t\na 1 2 4 1 2\n", 5, 1, "declares 2 arcs");
  expect_parse_error("p glf 2 1 4\nn 1 s\nn 2 t\na 1 3 4 1 2\n", 4, 5, "out of range");
  expect_parse_error("p glf 2 1 4\nn 1 s\nn 2 t\nq\n", 4, 1, "unknown");
}

TEST(ParseNetwork, RoundTrip) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    FlowNetwork net = trial % 2 ? testkit::random_lossy_network(9, 20, 7, trial % 3 == 0, rng)
                                : testkit::random_standard_network(6, 11, 4, true, rng);
    std::ostringstream out;
    write_network(out, net);
    EXPECT_EQ(parse_network_text(out.str()), net);
  }
}

RunSpec spec_for(Subcommand sub, const std::string& input) {
  RunSpec spec;
  spec.subcommand = sub;
  spec.input = input;
  spec.timing = false;
  return spec;
}

nlohmann::json run_json(const RunSpec& spec, int expect_code = 0) {
  std::ostringstream out, err;
  EXPECT_EQ(run(spec, out, err), expect_code) << out.str() << err.str();
  return nlohmann::json::parse(out.str());
}

TEST(Run, MaxFlowOneEdge) {
  RunSpec spec = spec_for(Subcommand::max_flow, temp_file("one.glf", kOneEdge));
  spec.epsilon = 1e-3;
  nlohmann::json doc = run_json(spec);
  EXPECT_EQ(doc["problem"], "max-flow");
  EXPECT_EQ(doc["n"], 2);
  EXPECT_EQ(doc["m"], 1);
  EXPECT_NEAR(doc["value"].get<double>(), 2.0, 1e-3);
  EXPECT_TRUE(doc.contains("iterations"));
  EXPECT_EQ(doc["flow"].size(), 1u);
  EXPECT_EQ(doc["wall_ms"], 0.0);
}

TEST(Run, VerifyEmittedFlow) {
  std::string net = temp_file("verify.glf", kOneEdge);
  std::ostringstream out, err;
  ASSERT_EQ(run(spec_for(Subcommand::max_flow, net), out, err), 0);
  RunSpec spec = spec_for(Subcommand::verify, net);
  spec.flow_path = temp_file("verify.json", out.str());
  nlohmann::json doc = run_json(spec);
  EXPECT_EQ(doc["violations"]["capacity"], 0.0);
  EXPECT_EQ(doc["violations"]["conservation"], 0.0);
  EXPECT_EQ(doc["ok"], true);

  spec.flow_path = temp_file("verify.txt", "5\n");
  doc = run_json(spec);
  EXPECT_EQ(doc["violations"]["capacity"], 1.0);
  EXPECT_EQ(doc["ok"], false);
}

TEST(Run, EqualSeedsGiveIdenticalDocuments) {
  Rng rng(2);
  std::ostringstream text;
  write_network(text, testkit::random_lossy_network(12, 30, 6, true, rng));
  std::string path = temp_file("det.glf", text.str());
  for (Subcommand sub : {Subcommand::max_flow, Subcommand::min_cost_flow}) {
    RunSpec spec = spec_for(sub, path);
    spec.seed = 42;
    std::ostringstream a, b, err;
    ASSERT_EQ(run(spec, a, err), 0);
    ASSERT_EQ(run(spec, b, err), 0);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(Run, ExactSubcommands) {
  std::string path = temp_file("exact.glf", "p glf 3 2\nn 1 s\nn 3 t\na 1 2 2 1 1 1\na 2 3 2 1 1 1\n");
  nlohmann::json doc = run_json(spec_for(Subcommand::exact_max_flow, path));
  EXPECT_EQ(doc["value"], 2);
  doc = run_json(spec_for(Subcommand::exact_min_cost, path));
  EXPECT_EQ(doc["cost"], 4);
  EXPECT_EQ(doc["flow"], nlohmann::json::array({2, 2}));

  RunSpec spec = spec_for(Subcommand::exact_min_cost, path);
  spec.flow_value = 3;
  doc = run_json(spec, 2);
  EXPECT_TRUE(doc.contains("error"));
}

TEST(Run, SolveMMatrix) {
  std::string m = temp_file("m.mtx",
                            "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 2\n2 2 2\n2 1 -1\n");
  RunSpec spec = spec_for(Subcommand::solve_mmatrix, m);
  spec.epsilon = 1e-10;
  nlohmann::json doc = run_json(spec);
  EXPECT_NEAR(doc["x"][0].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(doc["x"][1].get<double>(), 1.0, 1e-9);

  std::string f = temp_file("f.mtx",
                            "%%MatrixMarket matrix coordinate real general\n2 3 4\n1 1 1\n2 1 -1\n1 2 1\n2 3 1\n");
  spec.input = f;
  spec.rhs_path = temp_file("b.mtx", "%%MatrixMarket matrix array real general\n2 1\n1\n1\n");
  doc = run_json(spec);
  EXPECT_NEAR(doc["x"][0].get<double>(), 1.0, 1e-8);
  EXPECT_LE(doc["residual"].get<double>(), 1e-8);
}

TEST(Run, ParseErrorExitsOne) {
  std::string path = temp_file("bad.glf", "p glf 2 1 4\nn 1 s\n");
  nlohmann::json doc = run_json(spec_for(Subcommand::max_flow, path), 1);
  EXPECT_EQ(doc["kind"], "input");
  EXPECT_NE(doc["error"].get<std::string>().find(":3:1:"), std::string::npos);
}

TEST(Run, PlainFormat) {
  RunSpec spec = spec_for(Subcommand::max_flow, temp_file("plain.glf", kOneEdge));
  spec.format = Format::plain;
  std::ostringstream out, err;
  ASSERT_EQ(run(spec, out, err), 0);
  EXPECT_NE(out.str().find("violations.capacity: 0"), std::string::npos);
  EXPECT_NE(out.str().find("\nflow: "), std::string::npos);
}

}  // namespace
}  // namespace lossyflow::cli
