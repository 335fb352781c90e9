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

#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "lossyflow/matrix_market.hpp"
#include "lossyflow/mmatrix.hpp"
#include "lossyflow/solve.hpp"

namespace lossyflow::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

class NetworkParser {
 public:
  explicit NetworkParser(std::string source) : source_(std::move(source)) {}

  FlowNetwork parse(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      auto tok = tokenize(line);
      if (tok.empty() || tok[0].text == "c") continue;
      const std::string& kind = tok[0].text;
      if (kind == "p")
        header(tok);
      else if (kind == "n")
        designation(tok);
      else if (kind == "a")
        arc(tok);
      else
        fail(tok[0].column, "unknown line type '" + kind + "'");
    }
    return finish();
  }

 private:
  [[noreturn]] void fail(int column, const std::string& what) const {
    throw ParseError(source_, line_no_, column, what);
  }

  std::int64_t integer(const Token& t, const char* what) const {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      fail(t.column, std::string("expected an integer ") + what + ", got '" + t.text + "'");
    return v;
  }

  void require_header(const Token& t) const {
    if (!have_header_) fail(t.column, "'" + t.text + "' line before the 'p glf' header");
  }

  void check_range(const Token& t, std::int64_t v, std::int64_t lo, const char* what) const {
    if (v < lo) fail(t.column, std::string(what) + " " + std::to_string(v) + " below " +
                                   std::to_string(lo));
    if (header_u_ && v > *header_u_)
      fail(t.column, std::string(what) + " " + std::to_string(v) + " exceeds U = " +
                         std::to_string(*header_u_));
  }

  void header(const std::vector<Token>& tok) {
    if (have_header_) fail(tok[0].column, "duplicate 'p' header");
    if (tok.size() < 4 || tok.size() > 5) fail(tok[0].column, "expected 'p glf <n> <m> [U]'");
    if (tok[1].text != "glf") fail(tok[1].column, "expected problem type 'glf', got '" + tok[1].text + "'");
    n_ = integer(tok[2], "vertex count");
    m_ = integer(tok[3], "arc count");
    if (n_ < 2) fail(tok[2].column, "need at least two vertices");
    if (m_ < 0) fail(tok[3].column, "negative arc count");
    if (tok.size() == 5) {
      header_u_ = integer(tok[4], "bound U");
      if (*header_u_ < 1) fail(tok[4].column, "U must be at least 1");
    }
    have_header_ = true;
  }

  void designation(const std::vector<Token>& tok) {
    require_header(tok[0]);
    if (tok.size() != 3) fail(tok[0].column, "expected 'n <id> s' or 'n <id> t'");
    std::int64_t id = integer(tok[1], "vertex id");
    if (id < 1 || id > n_) fail(tok[1].column, "vertex id " + std::to_string(id) + " out of range");
    const std::string& role = tok[2].text;
    if (role == "s") {
      if (s_) fail(tok[0].column, "duplicate source designation (first on line " +
                                      std::to_string(s_line_) + ")");
      s_ = static_cast<int>(id - 1);
      s_line_ = line_no_;
    } else if (role == "t") {
      if (t_) fail(tok[0].column, "duplicate sink designation (first on line " +
                                      std::to_string(t_line_) + ")");
      t_ = static_cast<int>(id - 1);
      t_line_ = line_no_;
    } else {
      fail(tok[2].column, "expected 's' or 't', got '" + role + "'");
    }
    if (s_ && t_ && *s_ == *t_) fail(tok[1].column, "vertex is both source and sink");
  }

  void arc(const std::vector<Token>& tok) {
    require_header(tok[0]);
    if (tok.size() != 6 && tok.size() != 7)
      fail(tok[0].column, "expected 'a <tail> <head> <cap> <gnum> <gden> [cost]'");
    if (static_cast<std::int64_t>(edges_.size()) >= m_)
      fail(tok[0].column, "more arcs than the header's " + std::to_string(m_));
    Edge e;
    std::int64_t tail = integer(tok[1], "tail"), head = integer(tok[2], "head");
    if (tail < 1 || tail > n_) fail(tok[1].column, "tail " + std::to_string(tail) + " out of range");
    if (head < 1 || head > n_) fail(tok[2].column, "head " + std::to_string(head) + " out of range");
    e.tail = static_cast<int>(tail - 1);
    e.head = static_cast<int>(head - 1);
    e.capacity = integer(tok[3], "capacity");
    check_range(tok[3], e.capacity, 1, "capacity");
    e.gamma.num = integer(tok[4], "gain numerator");
    e.gamma.den = integer(tok[5], "gain denominator");
    check_range(tok[4], e.gamma.num, 1, "gain numerator");
    check_range(tok[5], e.gamma.den, 1, "gain denominator");
    if (e.gamma.num > e.gamma.den)
      fail(tok[4].column, "gain " + tok[4].text + "/" + tok[5].text + " exceeds 1");
    const bool has_cost = tok.size() == 7;
    if (!edges_.empty() && has_cost != costs_)
      fail(tok[0].column, "either every arc has a cost or none does");
    costs_ = has_cost;
    if (has_cost) {
      e.cost = integer(tok[6], "cost");
      check_range(tok[6], *e.cost, 1, "cost");
    }
    max_seen_ = std::max({max_seen_, e.capacity, e.gamma.num, e.gamma.den, e.cost.value_or(1)});
    edges_.push_back(e);
  }

  FlowNetwork finish() {
    const int end = line_no_ + 1;
    if (!have_header_) throw ParseError(source_, end, 1, "missing 'p glf <n> <m>' header");
    if (!s_) throw ParseError(source_, end, 1, "missing source line 'n <id> s'");
    if (!t_) throw ParseError(source_, end, 1, "missing sink line 'n <id> t'");
    if (static_cast<std::int64_t>(edges_.size()) != m_)
      throw ParseError(source_, end, 1, "header declares " + std::to_string(m_) + " arcs, found " +
                                            std::to_string(edges_.size()));
    FlowNetwork net;
    net.n = static_cast<int>(n_);
    net.s = *s_;
    net.t = *t_;
    net.u = header_u_.value_or(max_seen_);
    net.edges = std::move(edges_);
    net.validate();
    return net;
  }

  std::string source_;
  int line_no_ = 0;
  bool have_header_ = false;
  std::int64_t n_ = 0, m_ = 0;
  std::optional<std::int64_t> header_u_;
  std::optional<int> s_, t_;
  int s_line_ = 0, t_line_ = 0;
  bool costs_ = false;
  std::int64_t max_seen_ = 1;
  std::vector<Edge> edges_;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json violations(const FlowReport& r) {
  return Json{{"capacity", r.capacity_violation}, {"conservation", r.conservation_violation}};
}

Json iterations(const PathStats& p) {
  return Json{{"unshift", p.unshifts}, {"shift", p.shifts}, {"solves", p.solves}};
}

PathStats add(PathStats a, const PathStats& b) {
  a.unshifts += b.unshifts;
  a.shifts += b.shifts;
  a.solves += b.solves;
  a.backend_iterations += b.backend_iterations;
  return a;
}

const char* mode_name(ParameterMode m) {
  return m == ParameterMode::paper_exact ? "paper_exact" : "practical";
}

Json header(const RunSpec& spec) {
  Json doc;
  doc["problem"] = to_string(spec.subcommand);
  return doc;
}

void add_network_fields(Json& doc, const RunSpec& spec, const FlowNetwork& net) {
  doc["n"] = net.n;
  doc["m"] = net.m();
  doc["epsilon"] = spec.epsilon;
  doc["seed"] = spec.seed;
  doc["mode"] = mode_name(spec.mode);
}

// Reads a flow: a result document with a "flow" array, or whitespace
// separated numbers.
Flow read_flow(const std::string& path) {
  std::string text = read_file(path);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  Flow f;
  if (first != std::string::npos && text[first] == '{') {
    Json doc = Json::parse(text);
    if (!doc.contains("flow") || !doc["flow"].is_array())
      throw InvalidInput("flow document '" + path + "' has no \"flow\" array");
    for (const auto& v : doc["flow"]) f.push_back(v.get<double>());
    return f;
  }
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) throw InvalidInput("flow file: bad number '" + tok + "'");
    f.push_back(v);
  }
  return f;
}

void render_plain(std::ostream& out, const Json& doc, const std::string& prefix = "") {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string key = prefix + it.key();
    if (it->is_object()) {
      render_plain(out, *it, key + ".");
    } else if (it->is_array()) {
      out << key << ":";
      for (const auto& v : *it) out << ' ' << v.dump();
      out << '\n';
    } else if (it->is_string()) {
      out << key << ": " << it->get<std::string>() << '\n';
    } else {
      out << key << ": " << it->dump() << '\n';
    }
  }
}

void emit(std::ostream& out, const Json& doc, Format format) {
  if (format == Format::json)
    out << doc.dump() << '\n';
  else
    render_plain(out, doc, "");
}

Json run_flow(const RunSpec& spec, std::ostream& err) {
  Json doc = header(spec);
  const FlowNetwork net = parse_network_file(spec.input);
  add_network_fields(doc, spec, net);
  IpmObserver observer;
  if (spec.trace) observer = trace_writer(err);
  switch (spec.subcommand) {
    case Subcommand::max_flow: {
      GenFlowConfig cfg;
      cfg.epsilon = spec.epsilon;
      cfg.mode = spec.mode;
      cfg.seed = spec.seed;
      cfg.backend = spec.backend;
      cfg.observer = observer;
      MaxFlowResult r = max_flow(net, cfg);
      doc["value"] = r.value;
      doc["violations"] = violations(r.report);
      doc["iterations"] = iterations(r.stats.ipm);
      doc["flow"] = r.flow;
      break;
    }
    case Subcommand::min_cost_flow: {
      GenFlowConfig cfg;
      cfg.epsilon = spec.epsilon;
      cfg.mode = spec.mode;
      cfg.seed = spec.seed;
      cfg.backend = spec.backend;
      cfg.observer = observer;
      MinCostResult r = min_cost_flow(net, cfg);
      doc["value"] = r.value;
      doc["cost"] = r.cost;
      doc["target"] = r.target;
      doc["violations"] = violations(r.report);
      doc["iterations"] = iterations(add(r.maxflow_stats.ipm, r.stats.ipm));
      doc["flow"] = r.flow;
      break;
    }
    case Subcommand::exact_max_flow:
    case Subcommand::exact_min_cost: {
      ExactFlowConfig cfg;
      cfg.mode = spec.mode;
      cfg.seed = spec.seed;
      cfg.backend = spec.backend;
      cfg.retries = spec.retries;
      cfg.observer = observer;
      doc.erase("epsilon");
      if (spec.subcommand == Subcommand::exact_max_flow) {
        doc["value"] = exact_max_flow_value(net, cfg);
        break;
      }
      const std::int64_t f = spec.flow_value ? *spec.flow_value : exact_max_flow_value(net, cfg);
      IntegerFlowResult r = exact_min_cost_flow(net, f, cfg);
      Flow as_double(r.flow.begin(), r.flow.end());
      doc["value"] = r.value;
      doc["cost"] = r.cost;
      doc["retries"] = r.retries;
      doc["violations"] = violations(report(net, as_double));
      doc["flow"] = r.flow;
      break;
    }
    case Subcommand::verify: {
      doc.erase("epsilon");
      doc.erase("seed");
      doc.erase("mode");
      Flow f = read_flow(spec.flow_path);
      if (static_cast<int>(f.size()) != net.m())
        throw InvalidInput("flow has " + std::to_string(f.size()) + " entries, network has " +
                           std::to_string(net.m()) + " edges");
      FlowReport r = report(net, f);
      double most_negative = 0.0;
      for (double v : f) most_negative = std::min(most_negative, v);
      doc["value"] = r.value;
      if (net.has_costs()) doc["cost"] = r.cost;
      doc["violations"] = violations(r);
      doc["negative"] = 0.0 - most_negative;
      doc["ok"] = r.capacity_violation <= 1e-9 && r.conservation_violation <= 1e-9 &&
                  most_negative >= -1e-9;
      break;
    }
    default:
      break;
  }
  return doc;
}

Json run_mmatrix(const RunSpec& spec) {
  Json doc = header(spec);
  std::string text = read_file(spec.input);
  std::istringstream probe(text);
  std::string banner;
  std::getline(probe, banner);
  const bool symmetric = banner.find("symmetric") != std::string::npos;
  std::istringstream in(text);
  Vec x, b;
  double residual = 0.0;
  auto load_rhs = [&](int n) {
    if (spec.rhs_path.empty()) return Vec(n, 1.0);
    std::istringstream rin(read_file(spec.rhs_path));
    Vec r = read_matrix_market_vector(rin);
    if (static_cast<int>(r.size()) != n) throw DimensionError("rhs length does not match the matrix");
    return r;
  };
  auto relative_residual = [&](const SparseSym& m) {
    Vec r = mat_vec(m, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    double nb = norm2(b);
    return nb > 0.0 ? norm2(r) / nb : norm2(r);
  };
  if (symmetric) {
    SparseSym m = read_matrix_market_sym(in);
    b = load_rhs(m.n());
    SolveConfig cfg;
    cfg.eps = spec.epsilon;
    cfg.seed = spec.seed;
    cfg.backend = spec.backend == FlowBackend::iterative ? Backend::iterative : Backend::direct;
    x = solve_approx(m, b, cfg);
    residual = relative_residual(m);
    doc["n"] = m.n();
    doc["matrix"] = "symmetric";
  } else {
    TwoNnzFactor f = TwoNnzFactor::from_sparse(read_matrix_market_general(in));
    b = load_rhs(f.n());
    MMatrixConfig cfg;
    cfg.mode = spec.mode;
    Rng rng(spec.seed);
    x = mmatrix_solve(f, b, spec.epsilon, cfg, rng);
    residual = relative_residual(gram(f, DiagMatrix::identity(f.m())));
    doc["n"] = f.n();
    doc["matrix"] = "factor";
  }
  doc["epsilon"] = spec.epsilon;
  doc["seed"] = spec.seed;
  doc["mode"] = mode_name(spec.mode);
  doc["residual"] = residual;
  doc["x"] = x;
  return doc;
}

}  // namespace

ParseError::ParseError(const std::string& source, int line, int column, const std::string& what)
    : InvalidInput(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

FlowNetwork parse_network(std::istream& in, const std::string& source) {
  return NetworkParser(source).parse(in);
}

FlowNetwork parse_network_text(const std::string& text) {
  std::istringstream in(text);
  return parse_network(in, "<text>");
}

FlowNetwork parse_network_file(const std::string& path) {
  std::istringstream in(read_file(path));
  return parse_network(in, path == "-" ? "<stdin>" : path);
}

void write_network(std::ostream& out, const FlowNetwork& net) {
  net.validate();
  out << "c lossyflow network\n";
  out << "p glf " << net.n << ' ' << net.m() << ' ' << net.u << '\n';
  out << "n " << net.s + 1 << " s\n";
  out << "n " << net.t + 1 << " t\n";
  for (const Edge& e : net.edges) {
    out << "a " << e.tail + 1 << ' ' << e.head + 1 << ' ' << e.capacity << ' ' << e.gamma.num << ' '
        << e.gamma.den;
    if (e.cost) out << ' ' << *e.cost;
    out << '\n';
  }
}

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::max_flow: return "max-flow";
    case Subcommand::min_cost_flow: return "min-cost-flow";
    case Subcommand::exact_min_cost: return "exact-min-cost";
    case Subcommand::exact_max_flow: return "exact-max-flow";
    case Subcommand::solve_mmatrix: return "solve-mmatrix";
    case Subcommand::verify: return "verify";
  }
  return "unknown";
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Json doc;
  int code = 0;
  try {
    if (!(spec.epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
    doc = spec.subcommand == Subcommand::solve_mmatrix ? run_mmatrix(spec) : run_flow(spec, err);
  } catch (const InvalidInput& e) {
    doc = header(spec);
    doc["error"] = e.what();
    doc["kind"] = "input";
    code = 1;
  } catch (const DimensionError& e) {
    doc = header(spec);
    doc["error"] = e.what();
    doc["kind"] = "input";
    code = 1;
  } catch (const Error& e) {
    doc = header(spec);
    doc["error"] = e.what();
    doc["kind"] = "solver";
    code = 2;
  } catch (const nlohmann::json::exception& e) {
    doc = header(spec);
    doc["error"] = e.what();
    doc["kind"] = "input";
    code = 1;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  // Flow arrays last so the scalar fields stay readable.
  Json flow;
  bool has_flow = doc.contains("flow");
  if (has_flow) {
    flow = doc["flow"];
    doc.erase("flow");
  }
  if (code == 0) doc["wall_ms"] = spec.timing ? ms : 0.0;
  if (has_flow) doc["flow"] = flow;
  emit(out, doc, spec.format);
  if (code != 0) err << "lossyflow: " << doc["error"].get<std::string>() << '\n';
  return code;
}

}  // namespace lossyflow::cli
