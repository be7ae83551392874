#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "stabbell/builders.hpp"
#include "stabbell/catalogue.hpp"
#include "stabbell/classical.hpp"
#include "test_util.hpp"

using namespace stabbell;
using Catch::Matchers::WithinAbs;

namespace {
BellExpression ghz3_c1() { return build_expression(catalogue_lookup("ghz3", 1).config); }
}  // namespace

TEST_CASE("classical value of fixed strategies", "[classical]") {
  // CHSH-like single pair on two qubits
  Graph g2 = path_graph(2);
  BellExpression pair = build_expression(find_suitable_ac(g2, generators(g2)));
  REQUIRE(pair.beta_c == 2.0);
  Strategy all_plus{{1, 1}, {1, 1}};
  // term 1: (a1 + b1) * ... = 2, term 2: (a1 - b1) * ... = 0
  REQUIRE_THAT(classical_value(pair, all_plus), WithinAbs(2.0, 1e-15));

  BellExpression e = ghz3_c1();
  Strategy s{{1, 1}, {1, 1}, {1, 1}};
  // (1+1)*1 + (1-1)*1*1 + 1*1 = 3
  REQUIRE_THAT(classical_value(e, s), WithinAbs(3.0, 1e-15));

  REQUIRE_THROWS_AS(classical_value(e, Strategy{{1, 1}}), std::invalid_argument);

  // an all-identity term contributes its weight whatever the strategy
  BellExpression constant;
  constant.n_parties = 2;
  constant.terms.push_back({2.5, {0, 0}});
  REQUIRE_THAT(classical_value(constant, Strategy{{-1, 1}, {1, -1}}), WithinAbs(2.5, 1e-15));
}

TEST_CASE("brute force classical bounds on the reference constructions", "[classical]") {
  REQUIRE_THAT(brute_force_classical_bound(ghz3_c1()).bound, WithinAbs(3.0, 1e-12));

  // cluster example with two pairs and one remainder term
  Graph g = path_graph(4);
  auto gen = generators(g);
  std::vector<PauliWord> st{gen[0], gen[1], gen[2], gen[3], generator_product(g, {1, 3}),
                            generator_product(g, {2, 4})};
  BellConfig fig(g, st, {{1, 2}, {5, 6}}, {3}, {1});
  REQUIRE_THAT(brute_force_classical_bound(build_expression(fig)).bound, WithinAbs(5.0, 1e-12));

  // constant-ratio three-qubit construction
  REQUIRE_THAT(brute_force_classical_bound(constant_ratio_expression(path_graph(3))).bound,
               WithinAbs(4.0, 1e-12));
}

TEST_CASE("brute force matches stored bounds on the whole catalogue", "[classical]") {
  for (const auto& entry : catalogue()) {
    INFO(entry.name());
    BellExpression e = build_expression(entry.config);
    auto r = brute_force_classical_bound(e);
    REQUIRE_THAT(r.bound, WithinAbs(e.beta_c, 1e-12));
    REQUIRE(r.strategies_checked == (std::int64_t{1} << (2 * e.n_parties)));
    // the reported maximizer actually achieves the bound
    REQUIRE_THAT(classical_value(e, r.argmax), WithinAbs(r.bound, 1e-12));
  }
}

TEST_CASE("sampled strategies never beat the enumerated bound", "[classical][property]") {
  std::mt19937 rng(71);
  BellExpression e = build_expression(catalogue_lookup("cluster4", 2).config);
  const double bound = brute_force_classical_bound(e).bound;
  for (int trial = 0; trial < 500; ++trial) {
    Strategy s;
    for (int i = 0; i < e.n_parties; ++i) {
      s.push_back({rng() % 2 ? 1 : -1, rng() % 2 ? 1 : -1});
    }
    REQUIRE(classical_value(e, s) <= bound + 1e-12);
  }
}

TEST_CASE("brute force refuses oversized systems", "[classical]") {
  BellExpression e;
  e.n_parties = 14;
  e.terms.push_back({1.0, std::vector<int>(14, 0)});
  REQUIRE_THROWS_AS(brute_force_classical_bound(e), std::invalid_argument);
}
