#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "stabbell/catalogue.hpp"
#include "stabbell/robust.hpp"
#include "test_util.hpp"

using namespace stabbell;
using Catch::Matchers::WithinAbs;

namespace {
const double kPi = std::numbers::pi;
const double kRt2 = std::sqrt(2.0);

Eigen::Matrix2cd random_density(std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Eigen::Matrix2cd m;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) m(r, c) = std::complex<double>(gauss(rng), gauss(rng));
  }
  Eigen::Matrix2cd rho = m * m.adjoint();
  return rho / rho.trace();
}
}  // namespace

TEST_CASE("extraction mixing profile", "[robust]") {
  REQUIRE_THAT(extraction_g(kPi / 4), WithinAbs(1.0, 1e-14));
  REQUIRE_THAT(extraction_g(0.0), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(extraction_g(kPi / 2), WithinAbs(0.0, 1e-14));
  for (int k = 0; k <= 40; ++k) {
    const double x = kPi / 2 * k / 40.0;
    const double g = extraction_g(x);
    REQUIRE(g >= -1e-12);
    REQUIRE(g <= 1.0 + 1e-12);
  }
  REQUIRE_THROWS_AS(extraction_g(-0.1), std::invalid_argument);
  REQUIRE_THROWS_AS(extraction_g(1.8), std::invalid_argument);
}

TEST_CASE("extraction channel special points", "[robust]") {
  std::mt19937 rng(91);
  SECTION("identity at pi/4") {
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::Matrix2cd rho = random_density(rng);
      REQUIRE((extraction_channel(rho, kPi / 4, true) - rho).cwiseAbs().maxCoeff() < 1e-14);
      REQUIRE((extraction_channel(rho, kPi / 4, false) - rho).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
  SECTION("full dephasing in the X basis at x = 0") {
    Eigen::Matrix2cd rho = random_density(rng);
    Eigen::Matrix2cd x = mats::pauli_x().cast<std::complex<double>>();
    Eigen::Matrix2cd expected = 0.5 * (rho + x * rho * x);
    REQUIRE((extraction_channel(rho, 0.0, true) - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("trace preserved everywhere") {
    std::uniform_real_distribution<double> xs(0.0, kPi / 2);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::Matrix2cd rho = random_density(rng);
      const double x = xs(rng);
      const bool ac = trial % 2 == 0;
      REQUIRE_THAT(extraction_channel(rho, x, ac).trace().real(),
                   WithinAbs(rho.trace().real(), 1e-13));
    }
  }
  SECTION("dephasing direction switches at pi/4") {
    REQUIRE((extraction_gamma(kPi / 4 - 1e-9, true) - mats::pauli_x()).cwiseAbs().maxCoeff() <
            1e-14);
    REQUIRE((extraction_gamma(kPi / 4, true) - mats::pauli_z()).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE((extraction_gamma(kPi / 4 - 1e-9, false) - mats::hadamard_h()).cwiseAbs().maxCoeff() <
            1e-14);
    REQUIRE((extraction_gamma(kPi / 4, false) - mats::hadamard_v()).cwiseAbs().maxCoeff() <
            1e-14);
  }
}

TEST_CASE("dual channel operator on the graph state", "[robust]") {
  Graph g3 = path_graph(3);
  const std::vector<int> ac{1};

  SECTION("canonical angles give back the projector") {
    StateVector psi = graph_state_vector(g3);
    HermitianOperator k = dual_k_operator(g3, ac, canonical_angles(3));
    REQUIRE((k - HermitianOperator(psi * psi.adjoint())).cwiseAbs().maxCoeff() < 1e-13);
  }
  SECTION("trace one and positive for random angles") {
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> dist(0.0, kPi / 2);
    for (int trial = 0; trial < 30; ++trial) {
      AngleAssignment th{dist(rng), dist(rng), dist(rng)};
      HermitianOperator k = dual_k_operator(g3, ac, th);
      REQUIRE_THAT(k.trace().real(), WithinAbs(1.0, 1e-12));
      Eigen::SelfAdjointEigenSolver<HermitianOperator> es(k, Eigen::EigenvaluesOnly);
      REQUIRE(es.eigenvalues().minCoeff() > -1e-10);
      REQUIRE(es.eigenvalues().maxCoeff() < 1.0 + 1e-10);
    }
  }
  SECTION("full dephasing strictly reduces the overlap") {
    StateVector psi = graph_state_vector(g3);
    HermitianOperator k = dual_k_operator(g3, ac, {0.0, 0.0, 0.0});
    const double overlap = psi.dot(k * psi).real();
    REQUIRE(overlap < 1.0 - 1e-3);
    // agreement with a direct single-party computation route: the channel
    // weights are all 1/2, so K = 2^-n sum over dephasing subsets
    REQUIRE(overlap > 0.0);
  }
  SECTION("matches the 2x2 channel for a single qubit") {
    Graph g1(1, {});
    StateVector plus = graph_state_vector(g1);
    Eigen::Matrix2cd proj = (plus * plus.adjoint()).eval();
    for (double x : {0.1, 0.9, kPi / 4}) {
      HermitianOperator k = dual_k_operator(g1, {}, {x});
      REQUIRE((k - extraction_channel(proj, x, false)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("grid point evaluator matches the direct route", "[robust]") {
  std::mt19937 rng(103);
  const auto& entry = catalogue_lookup("cluster4", 2);
  BellExpression e = build_expression(entry.config);
  const auto grid = detail::angle_grid(kPi / 12);
  detail::RobustObjective obj(e, entry.config.graph, 0.73, grid);
  detail::RobustObjective::Workspace ws;
  const auto npts = static_cast<std::int64_t>(grid.size());
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t outer = static_cast<std::int64_t>(rng()) % obj.outer_count();
    const int klast = static_cast<int>(rng() % npts);
    obj.load_outer(outer, ws);
    obj.assemble_inner(klast, ws);
    const double cheap_bound = detail::lambda_min_lower_bound(ws.m);
    const double fast = obj.eig_min(ws);  // clobbers ws.m
    REQUIRE(cheap_bound <= fast + 1e-12);

    AngleAssignment th(4);
    std::int64_t rem = outer;
    for (int i = 2; i >= 0; --i) {
      th[static_cast<std::size_t>(i)] = grid[static_cast<std::size_t>(rem % npts)];
      rem /= npts;
    }
    th[3] = grid[static_cast<std::size_t>(klast)];
    REQUIRE_THAT(fast, WithinAbs(obj.at_angles(th), 1e-11));
  }
}

TEST_CASE("mu for fixed slopes", "[robust][slow]") {
  const auto& entry = catalogue_lookup("ghz3", 1);
  BellExpression e = build_expression(entry.config);
  const Graph& g = entry.config.graph;

  SECTION("published slope reproduces the published intercept") {
    MuResult r = mu_for_s(e, g, 0.906);
    REQUIRE_THAT(r.mu, WithinAbs(-2.4686, 5e-3));
  }
  SECTION("s = 0 gives a nonnegative minimum") {
    MuResult r = mu_for_s(e, g, 0.0);
    REQUIRE(r.mu >= -1e-10);
  }
  SECTION("monotone non-increasing in s") {
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {0.0, 0.3, 0.6, 0.9, 1.2}) {
      const double mu = mu_for_s(e, g, s).mu;
      REQUIRE(mu <= prev + 1e-9);
      prev = mu;
    }
  }
  SECTION("negative slope rejected") {
    REQUIRE_THROWS_AS(mu_for_s(e, g, -0.5), std::invalid_argument);
  }
}

TEST_CASE("operator inequality implies the scalar one", "[robust][property]") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> dist(0.0, kPi / 2);
  std::normal_distribution<double> gauss;
  const auto& entry = catalogue_lookup("ghz3", 1);
  BellExpression e = build_expression(entry.config);
  const double s = 0.9;
  for (int trial = 0; trial < 100; ++trial) {
    AngleAssignment th{dist(rng), dist(rng), dist(rng)};
    HermitianOperator k = dual_k_operator(entry.config.graph, e.ac, th);
    HermitianOperator b = bell_operator(e, th);
    HermitianOperator m = k - s * b;
    const double lam = smallest_eigenvalue(m);

    Eigen::MatrixXcd w(8, 8);
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 8; ++c) w(r, c) = std::complex<double>(gauss(rng), gauss(rng));
    }
    Eigen::MatrixXcd sigma = w * w.adjoint();
    sigma /= sigma.trace();
    REQUIRE((sigma * m).trace().real() >= lam - 1e-9);
  }
}

TEST_CASE("optimal linear bound for the three-qubit single pair", "[robust][slow]") {
  const auto& entry = catalogue_lookup("ghz3", 1);
  BellExpression e = build_expression(entry.config);
  LinearFidelityBound b = optimal_linear_bound(e, entry.config.graph);

  REQUIRE_THAT(b.s, WithinAbs(0.906, 1e-2));
  REQUIRE_THAT(b.mu, WithinAbs(-2.4686, 5e-3));
  REQUIRE_THAT(b.s * b.beta_q + b.mu, WithinAbs(1.0, 1e-6));
  REQUIRE_THAT(witness_threshold(b), WithinAbs(3.2766, 5e-3));
  REQUIRE(b.beta_c <= b.beta_half);
  REQUIRE(b.beta_half <= b.beta_q);

  // normalized-form identity
  REQUIRE_THAT((0.5 - b.b) * (b.beta_q - b.beta_c) / b.a + b.beta_c,
               WithinAbs(witness_threshold(b), 1e-9));

  auto curve = fidelity_curve(b, 11);
  REQUIRE(curve.size() == 11);
  REQUIRE_THAT(curve.back().second, WithinAbs(1.0, 1e-6));
  const double x_half = (b.beta_half - b.beta_c) / (b.beta_q - b.beta_c);
  REQUIRE_THAT(b.s * (b.beta_c + x_half * (b.beta_q - b.beta_c)) + b.mu, WithinAbs(0.5, 1e-12));
}

TEST_CASE("non-self-testing expressions are refused", "[robust]") {
  Graph g3 = path_graph(3);
  auto gens = generators(g3);
  BellConfig reduced(g3, {gens[0], gens[1]}, {{1, 2}}, {}, {1});
  BellExpression e = build_expression(reduced);
  REQUIRE_THROWS_WITH(optimal_linear_bound(e, g3),
                      Catch::Matchers::ContainsSubstring("not self-testing"));
}

TEST_CASE("grid reductions are independent of the thread count", "[robust][quantum]") {
  const auto& entry = catalogue_lookup("ghz3", 1);
  BellExpression e = build_expression(entry.config);

  RobustOptions r1, r3;
  r1.threads = 1;
  r3.threads = 3;
  MuResult a = mu_for_s(e, entry.config.graph, 0.9, r1);
  MuResult b = mu_for_s(e, entry.config.graph, 0.9, r3);
  REQUIRE(a.mu == b.mu);
  REQUIRE(a.argmin == b.argmin);

  QuantumSearchOptions q1, q3;
  q1.threads = 1;
  q3.threads = 3;
  QuantumSearchResult sa = quantum_bound_search(e, q1);
  QuantumSearchResult sb = quantum_bound_search(e, q3);
  REQUIRE(sa.value == sb.value);
  REQUIRE(sa.angles == sb.angles);
}

TEST_CASE("bound algebra from constants", "[robust]") {
  // saturation holds exactly for the published Mermin reference constants
  auto m3 = mermin_reference("ghz3");
  REQUIRE(m3.has_value());
  REQUIRE_THAT(m3->s * m3->beta_q + m3->mu, WithinAbs(1.0, 1e-12));
  LinearFidelityBound b = bound_from_constants(m3->s, m3->mu, m3->beta_c, m3->beta_q);
  REQUIRE_THAT((0.5 - b.b) * (b.beta_q - b.beta_c) / b.a + b.beta_c,
               WithinAbs(witness_threshold(b), 1e-9));

  auto m4 = mermin_reference("ghz4");
  REQUIRE(m4.has_value());
  REQUIRE_THAT(m4->s * m4->beta_q + m4->mu, WithinAbs(1.0, 1e-12));
  REQUIRE_FALSE(mermin_reference("cluster4").has_value());

  REQUIRE_THROWS_AS(witness_threshold(bound_from_constants(0.0, 0.5, 2, 4)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(fidelity_curve(b, 1), std::invalid_argument);
}
