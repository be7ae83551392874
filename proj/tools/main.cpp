// Copyright 2026 The stabbell developers
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

#include <chrono>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stabbell/stabbell.hpp"

namespace {

using namespace stabbell;

// exit codes: 0 ok, 2 parse/input error, 3 invalid configuration,
// 4 certification mismatch, 5 refused (not self-testing / unsupported)
constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;
constexpr int kExitMismatch = 4;
constexpr int kExitRefused = 5;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RefusedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double now_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Graph graph_from_source(const std::string& source) {
  try {
    return load_graph(source);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
}

BellExpression expression_from_file(const std::string& path) {
  try {
    return load_expression(path);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    write_file(out_path, text + "\n");
  }
}

std::vector<int> parse_index_list(const std::string& csv) {
  std::vector<int> out;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) {
    if (!token.empty()) out.push_back(std::stoi(token));
  }
  return out;
}

std::string expression_text_report(const BellExpression& e) {
  std::ostringstream out;
  out << "parties: " << e.n_parties << "\n";
  out << "rotated positions:";
  for (int pos : e.ac) out << " " << pos;
  out << "\nexpression: " << expression_to_string(e) << "\n";
  out << "beta_c: " << e.beta_c << "\nbeta_q: " << e.beta_q << "\n";
  out << "ratio: " << e.beta_q / e.beta_c << "\n";
  out << "correlations: " << e.correlation_count() << "\n";
  out << "selftest: " << (e.selftest ? "yes" : "no");
  return out.str();
}

int cmd_construct(const std::string& graph_source, const std::string& strategy,
                  const std::string& pair_csv, const std::string& remainder_csv,
                  const std::string& ac_csv, const std::string& out_path,
                  const std::string& format) {
  BellExpression e = [&] {
    if (strategy.rfind("catalogue:", 0) == 0) {
      const int number = std::stoi(strategy.substr(10));
      std::optional<std::string> family;
      // built-in names select the family directly; ghz:3 shares the
      // three-qubit family defined on the path graph
      if (graph_source == "ghz:3" || graph_source == "cluster1d:3") {
        family = "ghz3";
      } else if (graph_source == "ghz:4") {
        family = "ghz4";
      } else if (graph_source == "cluster1d:4") {
        family = "cluster4";
      } else {
        family = catalogue_family_for(graph_from_source(graph_source));
      }
      if (!family) {
        throw std::invalid_argument("no catalogue for graph '" + graph_source +
                                    "' (catalogued: ghz:3, ghz:4, cluster1d:3, cluster1d:4)");
      }
      return build_expression(catalogue_lookup(*family, number).config);
    }
    Graph g = graph_from_source(graph_source);
    if (strategy == "auto") {
      return build_expression(find_suitable_ac(g, generators(g)));
    }
    if (strategy == "constant-ratio") {
      return constant_ratio_expression(g);
    }
    if (strategy == "single-pair") {
      const auto pair = parse_index_list(pair_csv);
      if (pair.size() != 2) {
        throw std::invalid_argument("--pair needs exactly two stabilizer indices, e.g. 1,2");
      }
      return single_pair_expression(g, {pair[0], pair[1]}, parse_index_list(remainder_csv),
                                    parse_index_list(ac_csv));
    }
    throw std::invalid_argument("unknown strategy '" + strategy + "'");
  }();

  emit(format == "text" ? expression_text_report(e) : expression_to_json(e).dump(2), out_path);
  return kExitOk;
}

int cmd_verify(const std::string& expr_path, const std::string& graph_source, double tol,
               bool run_search, double grid_step, int threads, int restarts, unsigned seed,
               const std::string& out_path) {
  const auto t0 = std::chrono::steady_clock::now();
  BellExpression e = expression_from_file(expr_path);

  Json report;
  report["input"] = expr_path;
  report["n"] = e.n_parties;
  report["stored"] = {{"beta_c", e.beta_c}, {"beta_q", e.beta_q}, {"selftest", e.selftest}};

  const auto classical = brute_force_classical_bound(e);
  const double beta_q_canonical = bell_spectral_max(e, canonical_angles(e.n_parties));

  Json argmax = Json::array();
  for (auto [a, b] : classical.argmax) argmax.push_back(Json::array({a, b}));

  Json certified;
  certified["beta_c"] = {{"value", classical.bound},
                         {"tol", 0.0},
                         {"strategies", classical.strategies_checked},
                         {"argmax_strategy", argmax}};
  certified["beta_q_canonical"] = {{"value", beta_q_canonical}, {"tol", 1e-10}};

  bool ok = std::abs(classical.bound - e.beta_c) <= tol &&
            std::abs(beta_q_canonical - e.beta_q) <= tol;

  if (!graph_source.empty()) {
    Graph g = graph_from_source(graph_source);
    if (g.size() != e.n_parties) {
      throw ParseError("graph has " + std::to_string(g.size()) + " vertices, expression has " +
                       std::to_string(e.n_parties) + " parties");
    }
    bool all_stabilizers = true;
    for (const auto& w : e.term_words()) all_stabilizers &= is_graph_stabilizer(g, w);
    const SelfTestResult st = expression_selftest(e, g);
    const double state_value = canonical_quantum_value(e, g);
    certified["terms_stabilize_graph"] = all_stabilizers;
    certified["canonical_state_value"] = {{"value", state_value}, {"tol", 1e-10}};
    certified["rank"] = st.rank;
    certified["connected"] = st.connected;
    certified["selftest"] = st.selftesting;
    certified["selftest_verdict"] = st.verdict();
    ok = ok && std::abs(state_value - e.beta_q) <= tol && st.selftesting == e.selftest;

    if (st.rank == e.n_parties - 1) {
      // the two-dimensional mixed state reaches the same quantum value
      CounterexampleState cx = counterexample_state(g, e.term_words());
      const double cx_value =
          (cx.rho * bell_operator(e, canonical_angles(e.n_parties))).trace().real();
      certified["counterexample"] = {{"missing_generator", cx.missing_vertex},
                                     {"value", cx_value},
                                     {"tol", 1e-9},
                                     {"reaches_beta_q", std::abs(cx_value - e.beta_q) <= 1e-9}};
    }
  }

  if (run_search) {
    QuantumSearchOptions opt;
    opt.grid_step = grid_step;
    opt.threads = threads;
    opt.extra_starts = restarts;
    opt.seed = seed;
    QuantumSearchResult sr = quantum_bound_search(e, opt);
    certified["search"] = {{"value", sr.value},
                           {"method", sr.method},
                           {"argmax_angles", sr.angles},
                           {"tol", 1e-6}};
    ok = ok && sr.value <= e.beta_q + 1e-6;
  }

  report["certified"] = certified;
  report["match"] = ok;
  report["tol"] = tol;
  report["wall_ms"] = now_ms(t0);
  emit(report.dump(2), out_path);
  return ok ? kExitOk : kExitMismatch;
}

SelfTestResult require_selftesting(const BellExpression& e, const Graph& g) {
  const SelfTestResult st = expression_selftest(e, g);
  if (!st.selftesting) {
    throw RefusedError("expression is not self-testing on this graph: rank " +
                       std::to_string(st.rank) + " of " + std::to_string(e.n_parties) +
                       ", graph " + (st.connected ? "connected" : "disconnected"));
  }
  return st;
}

int cmd_robust(const std::string& expr_path, const std::string& graph_source,
               std::optional<double> fixed_s, const std::string& curve_path, int samples,
               const std::string& compare, double grid_step, double refine_tol,
               double bisect_tol, int threads, const std::string& out_path) {
  const auto t0 = std::chrono::steady_clock::now();
  BellExpression e = expression_from_file(expr_path);
  Graph g = graph_from_source(graph_source);
  require_selftesting(e, g);

  RobustOptions opt;
  opt.grid_step = grid_step;
  opt.refine_tol = refine_tol;
  opt.bisect_tol = bisect_tol;
  opt.threads = threads;

  Json report;
  report["input"] = expr_path;
  report["graph"] = graph_source;

  if (fixed_s) {
    MuResult r = mu_for_s(e, g, *fixed_s, opt);
    report["s"] = *fixed_s;
    report["mu"] = r.mu;
    report["argmin_angles"] = r.argmin;
    report["grid_step"] = opt.grid_step;
    report["refine_tol"] = opt.refine_tol;
  } else {
    LinearFidelityBound bound = optimal_linear_bound(e, g, opt);
    report["bound"] = bound_to_json(bound);
    report["beta_c"] = bound.beta_c;
    report["beta_q"] = bound.beta_q;
    report["witness_beta_half"] = witness_threshold(bound);
    if (!curve_path.empty()) {
      write_file(curve_path, curve_to_csv(fidelity_curve(bound, samples)));
      report["curve"] = curve_path;
    }
    if (compare == "mermin") {
      const auto family = catalogue_family_for(g);
      const auto ref = family ? mermin_reference(*family) : std::nullopt;
      if (ref) {
        LinearFidelityBound mb = bound_from_constants(ref->s, ref->mu, ref->beta_c, ref->beta_q);
        report["mermin"] = {{"s", mb.s},
                            {"mu", mb.mu},
                            {"a", mb.a},
                            {"b", mb.b},
                            {"beta_half", mb.beta_half}};
        if (!curve_path.empty()) {
          const std::string mpath = curve_path + ".mermin.csv";
          write_file(mpath, curve_to_csv(fidelity_curve(mb, samples)));
          report["mermin"]["curve"] = mpath;
        }
      } else {
        report["mermin"] = "no reference constants for this graph";
      }
    }
  }
  report["wall_ms"] = now_ms(t0);
  emit(report.dump(2), out_path);
  return kExitOk;
}

int cmd_witness(const std::string& expr_path, const std::string& graph_source, double grid_step,
                double refine_tol, double bisect_tol, int threads, const std::string& out_path) {
  const auto t0 = std::chrono::steady_clock::now();
  BellExpression e = expression_from_file(expr_path);
  Graph g = graph_from_source(graph_source);
  require_selftesting(e, g);

  RobustOptions opt;
  opt.grid_step = grid_step;
  opt.refine_tol = refine_tol;
  opt.bisect_tol = bisect_tol;
  opt.threads = threads;
  LinearFidelityBound bound = optimal_linear_bound(e, g, opt);

  Json report;
  report["input"] = expr_path;
  report["graph"] = graph_source;
  report["beta_c"] = bound.beta_c;
  report["beta_q"] = bound.beta_q;
  report["beta_half"] = witness_threshold(bound);
  report["bound"] = bound_to_json(bound);
  report["note"] =
      "a Bell value above beta_half certifies genuine multipartite entanglement "
      "device-independently (extractable fidelity > 1/2)";
  report["wall_ms"] = now_ms(t0);
  emit(report.dump(2), out_path);
  return kExitOk;
}

int cmd_catalogue_list(const std::string& format, const std::string& out_path) {
  if (format == "json") {
    Json list = Json::array();
    for (const auto& entry : catalogue()) {
      BellExpression e = build_expression(entry.config);
      Json item;
      item["name"] = entry.name();
      item["graph"] = graph_to_json(entry.config.graph);
      item["ac"] = entry.config.ac;
      Json pairs = Json::array();
      for (auto [l, k] : entry.config.pairs) {
        pairs.push_back(Json::array({entry.stabilizer_labels[static_cast<std::size_t>(l) - 1],
                                     entry.stabilizer_labels[static_cast<std::size_t>(k) - 1]}));
      }
      item["pairs"] = pairs;
      Json rem = Json::array();
      for (int r : entry.config.remainder) {
        rem.push_back(entry.stabilizer_labels[static_cast<std::size_t>(r) - 1]);
      }
      item["remainder"] = rem;
      item["beta_c"] = e.beta_c;
      item["beta_q"] = e.beta_q;
      item["ratio"] = e.beta_q / e.beta_c;
      item["correlations"] = e.correlation_count();
      item["expression"] = expression_to_string(e);
      list.push_back(std::move(item));
    }
    emit(list.dump(2), out_path);
    return kExitOk;
  }
  std::ostringstream out;
  for (const auto& entry : catalogue()) {
    BellExpression e = build_expression(entry.config);
    out << entry.name() << "  ac={";
    for (std::size_t i = 0; i < entry.config.ac.size(); ++i) {
      out << (i ? "," : "") << entry.config.ac[i];
    }
    out << "}  pairs=";
    for (auto [l, k] : entry.config.pairs) {
      out << "(" << entry.stabilizer_labels[static_cast<std::size_t>(l) - 1] << ","
          << entry.stabilizer_labels[static_cast<std::size_t>(k) - 1] << ")";
    }
    out << "  remainder={";
    bool first = true;
    for (int r : entry.config.remainder) {
      out << (first ? "" : ",") << entry.stabilizer_labels[static_cast<std::size_t>(r) - 1];
      first = false;
    }
    out << "}  beta_c=" << e.beta_c << "  beta_q=" << e.beta_q
        << "  correlations=" << e.correlation_count() << "\n    " << expression_to_string(e)
        << "\n";
  }
  std::string text = out.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  emit(text, out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell inequalities from graph-state stabilizers: construction, certification, "
               "robust self-testing bounds and entanglement-witness thresholds"};
  app.require_subcommand(1);

  const double kPi = std::numbers::pi;

  // construct
  std::string c_graph, c_strategy = "auto", c_pair, c_remainder, c_ac, c_out, c_format = "json";
  auto* construct = app.add_subcommand("construct", "build a Bell expression from a graph");
  construct->add_option("graph", c_graph, "graph: ghz:<N>, cluster1d:<N>, ring:<N> or JSON file")
      ->required();
  construct->add_option("--strategy", c_strategy,
                        "auto | constant-ratio | single-pair | catalogue:<k>");
  construct->add_option("--pair", c_pair, "single-pair: the two stabilizer indices, e.g. 1,2");
  construct->add_option("--remainder", c_remainder, "single-pair: remainder indices, e.g. 5,6");
  construct->add_option("--ac", c_ac, "single-pair: rotated positions, e.g. 1");
  construct->add_option("--out", c_out, "output file (default stdout)");
  construct->add_option("--format", c_format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));

  // verify
  std::string v_expr, v_graph, v_out;
  double v_tol = 1e-8, v_grid = kPi / 32;
  int v_threads = 0, v_restarts = 0;
  unsigned v_seed = 12345;
  bool v_search = false;
  auto* verify = app.add_subcommand("verify", "re-certify the bounds stored in an expression");
  verify->add_option("expression", v_expr, "expression JSON file")->required();
  verify->add_option("--graph", v_graph, "graph source for state-level checks");
  verify->add_option("--tol", v_tol, "mismatch tolerance");
  verify->add_flag("--search", v_search, "also run the quantum bound search");
  verify->add_option("--grid-step", v_grid, "search grid step (radians)");
  verify->add_option("--threads", v_threads, "worker threads (0 = hardware)");
  verify->add_option("--restarts", v_restarts, "extra random descent starts for the search");
  verify->add_option("--seed", v_seed, "seed for the extra starts");
  verify->add_option("--out", v_out, "output file (default stdout)");

  // robust
  std::string r_expr, r_graph, r_curve, r_compare, r_out;
  double r_grid = kPi / 60, r_refine = 1e-9, r_bisect = 2e-4;
  double r_s = -1.0;
  int r_samples = 101, r_threads = 0;
  auto* robust = app.add_subcommand("robust", "fit the linear fidelity bound F >= s*beta + mu");
  robust->add_option("expression", r_expr, "expression JSON file")->required();
  robust->add_option("graph", r_graph, "graph source")->required();
  robust->add_option("--s", r_s, "fixed slope: only compute mu(s)");
  robust->add_option("--curve", r_curve, "write the fidelity curve CSV here");
  robust->add_option("--samples", r_samples, "curve sample count");
  robust->add_option("--compare", r_compare, "mermin: add the reference constants/curve");
  robust->add_option("--grid-step", r_grid, "angle grid step (radians)");
  robust->add_option("--refine-tol", r_refine, "descent refinement tolerance");
  robust->add_option("--bisect-tol", r_bisect, "bracket width on the slope");
  robust->add_option("--threads", r_threads, "worker threads (0 = hardware)");
  robust->add_option("--out", r_out, "output file (default stdout)");

  // witness
  std::string w_expr, w_graph, w_out;
  double w_grid = kPi / 60, w_refine = 1e-9, w_bisect = 2e-4;
  int w_threads = 0;
  auto* witness = app.add_subcommand(
      "witness", "device-independent genuine-entanglement threshold beta_half");
  witness->add_option("expression", w_expr, "expression JSON file")->required();
  witness->add_option("graph", w_graph, "graph source")->required();
  witness->add_option("--grid-step", w_grid, "angle grid step (radians)");
  witness->add_option("--refine-tol", w_refine, "descent refinement tolerance");
  witness->add_option("--bisect-tol", w_bisect, "bracket width on the slope");
  witness->add_option("--threads", w_threads, "worker threads (0 = hardware)");
  witness->add_option("--out", w_out, "output file (default stdout)");

  // catalogue
  std::string cat_format = "text", cat_out;
  auto* cat = app.add_subcommand("catalogue", "shipped reference constructions");
  auto* cat_list = cat->add_subcommand("list", "list all constructions");
  cat_list->add_option("--format", cat_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  cat_list->add_option("--out", cat_out, "output file (default stdout)");
  cat->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (construct->parsed()) {
      return cmd_construct(c_graph, c_strategy, c_pair, c_remainder, c_ac, c_out, c_format);
    }
    if (verify->parsed()) {
      return cmd_verify(v_expr, v_graph, v_tol, v_search, v_grid, v_threads, v_restarts, v_seed,
                        v_out);
    }
    if (robust->parsed()) {
      return cmd_robust(r_expr, r_graph, r_s >= 0 ? std::optional<double>(r_s) : std::nullopt,
                        r_curve, r_samples, r_compare, r_grid, r_refine, r_bisect, r_threads,
                        r_out);
    }
    if (witness->parsed()) {
      return cmd_witness(w_expr, w_graph, w_grid, w_refine, w_bisect, w_threads, w_out);
    }
    if (cat->parsed()) {
      return cmd_catalogue_list(cat_format, cat_out);
    }
  } catch (const ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitParse;
  } catch (const RefusedError& ex) {
    std::cerr << "refused: " << ex.what() << "\n";
    return kExitRefused;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitMismatch;
  }
  return kExitOk;
}
