#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "stabbell/builders.hpp"
#include "stabbell/catalogue.hpp"
#include "stabbell/quantum.hpp"
#include "test_util.hpp"

using namespace stabbell;
using Catch::Matchers::WithinAbs;

namespace {
const double kPi = std::numbers::pi;
const double kRt2 = std::sqrt(2.0);
}  // namespace

TEST_CASE("observables at reference angles", "[quantum]") {
  SECTION("rotated party at pi/4") {
    auto [a, b] = observables_real(kPi / 4, true);
    REQUIRE((a - mats::hadamard_h()).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((b - mats::hadamard_v()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("plain party at pi/4 reduces to X and Z") {
    auto [a, b] = observables_real(kPi / 4, false);
    REQUIRE((a - mats::pauli_x()).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((b - mats::pauli_z()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("theta = 0 degenerates to a single direction") {
    auto [a, b] = observables_real(0.0, true);
    REQUIRE((a - b).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("unit eigenvalues inside the open interval") {
    for (double t : {0.2, 0.7, 1.3}) {
      for (bool ac : {true, false}) {
        auto [a, b] = observables_real(t, ac);
        REQUIRE((a * a - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
        REQUIRE((b * b - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
      }
    }
  }
  REQUIRE_THROWS_AS(observables_real(-0.3, true), std::invalid_argument);
  REQUIRE_THROWS_AS(observables_real(2.0, false), std::invalid_argument);
}

TEST_CASE("bell operator at canonical angles is the weighted stabilizer sum", "[quantum]") {
  const auto& entry = catalogue_lookup("ghz3", 1);
  BellExpression e = build_expression(entry.config);
  HermitianOperator op = bell_operator(e, canonical_angles(3));
  REQUIRE(hermiticity_error(op) < 1e-13);

  // sqrt2*(S1 + S2) + S3 term by term
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(8, 8);
  expected += kRt2 * word_matrix(entry.config.stabilizers[0]);
  expected += kRt2 * word_matrix(entry.config.stabilizers[1]);
  expected += word_matrix(entry.config.stabilizers[2]);
  REQUIRE((op - expected.cast<std::complex<double>>()).cwiseAbs().maxCoeff() < 1e-13);

  StateVector psi = graph_state_vector(path_graph(3));
  REQUIRE_THAT(psi.dot(op * psi).real(), WithinAbs(2.0 * kRt2 + 1.0, 1e-12));
  REQUIRE_THAT(bell_expectation(e, canonical_angles(3), psi), WithinAbs(e.beta_q, 1e-12));
}

TEST_CASE("zero weights give the zero operator", "[quantum]") {
  BellExpression e;
  e.n_parties = 2;
  e.ac = {1};
  e.terms.push_back({0.0, {1, -1}});
  REQUIRE(bell_operator(e, canonical_angles(2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("canonical value reaches beta_q on every catalogue construction", "[quantum]") {
  for (const auto& entry : catalogue()) {
    INFO(entry.name());
    BellExpression e = build_expression(entry.config);
    REQUIRE_THAT(canonical_quantum_value(e, entry.config.graph), WithinAbs(e.beta_q, 1e-10));
  }
}

TEST_CASE("grid search finds the canonical maximum", "[quantum][slow]") {
  SECTION("three-qubit construction 1") {
    BellExpression e = build_expression(catalogue_lookup("ghz3", 1).config);
    QuantumSearchResult r = quantum_bound_search(e);
    REQUIRE(r.method == "grid+descent");
    REQUIRE_THAT(r.value, WithinAbs(2.0 * kRt2 + 1.0, 1e-8));
    for (double t : r.angles) REQUIRE_THAT(t, WithinAbs(kPi / 4, 1e-6));
  }
  SECTION("CHSH-like single pair") {
    Graph g2 = path_graph(2);
    BellExpression e = build_expression(find_suitable_ac(g2, generators(g2)));
    QuantumSearchResult r = quantum_bound_search(e);
    REQUIRE_THAT(r.value, WithinAbs(2.0 * kRt2, 1e-8));
  }
  SECTION("cluster constant-ratio reaches 4 sqrt 2") {
    BellExpression e = constant_ratio_expression(path_graph(4));
    QuantumSearchResult r = quantum_bound_search(e);
    REQUIRE_THAT(r.value, WithinAbs(4.0 * kRt2, 1e-8));
    REQUIRE(r.value >= canonical_quantum_value(e, path_graph(4)) - 1e-9);
    REQUIRE(r.value <= e.beta_q + 1e-6);
  }
}

TEST_CASE("descent path on larger systems", "[quantum][slow]") {
  Graph g = path_graph(6);
  BellExpression e = constant_ratio_expression(g);
  QuantumSearchResult r = quantum_bound_search(e);
  REQUIRE(r.method == "descent-from-canonical");
  REQUIRE(r.value >= canonical_quantum_value(e, g) - 1e-9);
  REQUIRE(r.value <= e.beta_q + 1e-6);
}

TEST_CASE("spectral bound holds at random angles", "[quantum][property]") {
  std::mt19937 rng(83);
  std::uniform_real_distribution<double> dist(0.0, kPi / 2);
  for (const char* name : {"ghz3", "cluster4"}) {
    BellExpression e = build_expression(catalogue_lookup(name, 1).config);
    for (int trial = 0; trial < 50; ++trial) {
      AngleAssignment th(static_cast<std::size_t>(e.n_parties));
      for (auto& t : th) t = dist(rng);
      REQUIRE(bell_spectral_max(e, th) <= e.beta_q + 1e-8);
    }
  }
}

TEST_CASE("counterexample state reaches the full quantum value", "[quantum]") {
  // rank 2 of 3: drop the remainder stabilizer of the ghz3 construction
  Graph g3 = path_graph(3);
  auto gens = generators(g3);
  BellConfig reduced(g3, {gens[0], gens[1]}, {{1, 2}}, {}, {1});
  BellExpression e = build_expression(reduced);
  REQUIRE_FALSE(e.selftest);
  CounterexampleState cx = counterexample_state(reduced);
  HermitianOperator bell = bell_operator(e, canonical_angles(3));
  REQUIRE_THAT((cx.rho * bell).trace().real(), WithinAbs(e.beta_q, 1e-9));
}
