#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "stabbell/catalogue.hpp"
#include "stabbell/io.hpp"

using namespace stabbell;

TEST_CASE("expression serialization round trip is byte stable", "[io]") {
  BellExpression e = build_expression(catalogue_lookup("ghz3", 1).config);
  Json j = expression_to_json(e);
  const std::string text = j.dump();

  BellExpression parsed = expression_from_json(Json::parse(text));
  REQUIRE(parsed.n_parties == e.n_parties);
  REQUIRE(parsed.ac == e.ac);
  REQUIRE(parsed.terms.size() == e.terms.size());
  for (std::size_t i = 0; i < e.terms.size(); ++i) {
    REQUIRE(parsed.terms[i].weight == e.terms[i].weight);
    REQUIRE(parsed.terms[i].seq == e.terms[i].seq);
  }
  REQUIRE(parsed.beta_c == e.beta_c);
  REQUIRE(parsed.beta_q == e.beta_q);
  REQUIRE(parsed.selftest == e.selftest);

  // reserialization reproduces the identical document
  REQUIRE(expression_to_json(parsed).dump() == text);

  // stable field order
  REQUIRE(text.rfind("{\"n\":", 0) == 0);
  REQUIRE(text.find("\"ac\":") < text.find("\"terms\":"));
  REQUIRE(text.find("\"terms\":") < text.find("\"beta_c\":"));
  REQUIRE(text.find("\"beta_c\":") < text.find("\"beta_q\":"));
  REQUIRE(text.find("\"beta_q\":") < text.find("\"selftest\":"));
}

TEST_CASE("expression parsing rejects malformed documents", "[io]") {
  Json good = expression_to_json(build_expression(catalogue_lookup("ghz3", 1).config));

  Json missing = good;
  missing.erase("beta_q");
  REQUIRE_THROWS_AS(expression_from_json(missing), std::invalid_argument);

  Json bad_seq = good;
  bad_seq["terms"][0]["seq"][0] = 3;
  REQUIRE_THROWS_AS(expression_from_json(bad_seq), std::invalid_argument);

  Json bad_len = good;
  bad_len["terms"][0]["seq"] = {1, -1};
  REQUIRE_THROWS_AS(expression_from_json(bad_len), std::invalid_argument);

  Json neg_w = good;
  neg_w["terms"][0]["w"] = -2.0;
  REQUIRE_THROWS_AS(expression_from_json(neg_w), std::invalid_argument);

  Json bad_ac = good;
  bad_ac["ac"] = {9};
  REQUIRE_THROWS_AS(expression_from_json(bad_ac), std::invalid_argument);
}

TEST_CASE("graph json and loading", "[io]") {
  Graph g = path_graph(4);
  Json j = graph_to_json(g);
  REQUIRE(j.dump() == R"({"n":4,"edges":[[1,2],[2,3],[3,4]]})");
  REQUIRE(same_graph(graph_from_json(j), g));

  const std::string path = "test_graph_tmp.json";
  write_file(path, j.dump());
  REQUIRE(same_graph(load_graph(path), g));
  std::remove(path.c_str());

  REQUIRE(same_graph(load_graph("ghz:4"), star_graph(4)));
  REQUIRE_THROWS_AS(load_graph("no_such_file.json"), std::invalid_argument);

  Json bad;
  bad["n"] = 2;
  REQUIRE_THROWS_AS(graph_from_json(bad), std::invalid_argument);
}

TEST_CASE("bound report json and curve csv", "[io]") {
  LinearFidelityBound b = bound_from_constants(0.5, -1.0, 3.0, 4.0);
  b.grid_step = 0.05;
  b.refine_tol = 1e-9;
  const std::string dump = bound_to_json(b).dump();
  REQUIRE(dump.rfind("{\"s\":", 0) == 0);
  REQUIRE(dump.find("\"beta_half\":3.0") != std::string::npos);

  auto curve = fidelity_curve(b, 3);
  const std::string csv = curve_to_csv(curve);
  REQUIRE(csv.rfind("normalized_beta,fidelity_lower_bound\n", 0) == 0);
  REQUIRE(csv.find("0.000000,0.500000") != std::string::npos);
  REQUIRE(csv.find("1.000000,1.000000") != std::string::npos);
}
