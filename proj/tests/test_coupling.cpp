#include "fuzzymc/coupling.hpp"
#include "fuzzymc/glued_graph.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace fuzzymc;
using namespace fuzzymc::testing;

TEST_CASE("product coupling examples") {
  const Vector one = Vector::Ones(1);
  const Coupling point = product_coupling(0, 1, one, one);
  REQUIRE(point.support.size() == 1);
  CHECK(point.support[0].mass == 1.0);

  Vector halves(2);
  halves << 0.5, 0.5;
  Vector first(2);
  first << 1.0, 0.0;
  const Coupling split = product_coupling(0, 1, halves, first);
  REQUIRE(split.support.size() == 2);
  for (const auto& atom : split.support) CHECK(atom.mass == 0.5);
  CHECK(validate_coupling(split, halves, first).empty());
}

TEST_CASE("product couplings recover their marginals") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector a(6), b(6);
    for (Index x = 0; x < 6; ++x) {
      a(x) = u(rng) < 0.3 ? 0.0 : u(rng);
      b(x) = u(rng) < 0.3 ? 0.0 : u(rng);
    }
    a(0) += 0.1;
    b(5) += 0.1;
    a /= a.sum();
    b /= b.sum();
    const auto c = product_coupling(0, 1, a, b);
    Vector row = Vector::Zero(6), col = Vector::Zero(6);
    for (const auto& atom : c.support) {
      row(atom.x) += atom.mass;
      col(atom.y) += atom.mass;
    }
    CHECK((row - a).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((col - b).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(validate_coupling(c, a, b).empty());
  }
}

TEST_CASE("validate_coupling detects perturbations and stray atoms") {
  const auto instance = build_glued_graph(figure_one_graph());
  const auto partition = canonical_partition(instance.glued);
  const auto system = decompose(instance.chain, partition);
  const auto couplings = canonical_coupling(instance.glued, instance.chain);
  const Index n = instance.chain.size();
  const Vector pi1 = system.embedded_measure(0, n), pi2 = system.embedded_measure(1, n);
  const Coupling* kappa = couplings.find(0, 1);
  REQUIRE(kappa != nullptr);
  CHECK(validate_coupling(*kappa, pi1, pi2).empty());
  CHECK(validate_coupling(*couplings.find(1, 0), pi2, pi1).empty());

  Coupling perturbed = *kappa;
  perturbed.support[0].mass += 0.01;
  const auto report = validate_coupling(perturbed, pi1, pi2);
  REQUIRE_FALSE(report.empty());
  for (const auto& v : report) CHECK(near(v.magnitude, 0.01, 1e-12));

  Coupling stray = *kappa;
  const Index copy2 = instance.chain.state_index("b#2");
  stray.support.push_back({copy2, copy2, 0.0});  // b#2 is not in Lambda_1
  CHECK_THROWS_AS(validate_coupling(stray, pi1, pi2), StructuralError);
}

TEST_CASE("quality_chi on the glued pentagon") {
  const auto instance = build_glued_graph(figure_one_graph());
  const auto partition = canonical_partition(instance.glued);
  const auto system = decompose(instance.chain, partition);
  const auto couplings = canonical_coupling(instance.glued, instance.chain);
  const auto chi = quality_chi(instance.chain, partition, system, couplings);
  CHECK(near(chi.value, 15.0 / 28.0, 1e-12));
  CHECK(near(chi.value, chi_by_enumeration(instance.chain, partition, system.q_hat(), system.pi_hat, couplings), 1e-15));
  CHECK(chi.warnings.empty());
}

TEST_CASE("quality_chi corner cases") {
  // Path 0 - 1 - 2, classes {0,1} and {1,2} overlapping on the middle state.
  Matrix adj(3, 3);
  adj << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  const auto chain = random_walk_chain(adj, {"l", "m", "r"});
  Matrix a(3, 2);
  a << 1, 0, 0.5, 0.5, 0, 1;
  const FuzzyPartition partition({"L", "R"}, a);
  const auto system = decompose(chain, partition);
  REQUIRE(system.q_hat()(0, 1) > 0.0);

  SUBCASE("coupling only on non-edges gives zero") {
    // pi_L = (1/2, 1/2) on {l, m}; pi_R on {m, r}. Put all mass on (l, r) and (m, m).
    const Vector pl = system.embedded_measure(0, 3), pr = system.embedded_measure(1, 3);
    Coupling k01{0, 1, {{0, 2, pl(0)}, {1, 1, pl(1)}}};
    CouplingSet set;
    set.add(k01);
    set.add(k01.transposed());
    CHECK(validate_coupling(k01, pl, pr).empty());
    const auto chi = quality_chi(chain, partition, system, set);
    CHECK(chi.value == 0.0);
    CHECK_FALSE(chi.warnings.empty());
  }
  SUBCASE("missing coupling is an error") {
    CouplingSet empty;
    CHECK_THROWS_AS(quality_chi(chain, partition, system, empty), MissingCouplingError);
  }
  SUBCASE("atom order does not change chi") {
    auto set = product_couplings(system, 3);
    const double before = quality_chi(chain, partition, system, set).value;
    CouplingSet reversed;
    for (auto c : set.couplings()) {
      std::reverse(c.support.begin(), c.support.end());
      reversed.add(c);
    }
    CHECK(quality_chi(chain, partition, system, reversed).value == before);
  }
}

TEST_CASE("diagonal-only coupling has infinite quality") {
  // Two classes sharing every state with equal weights: pi_1 = pi_2 = pi.
  Matrix adj = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  const auto chain = random_walk_chain(adj, {"a", "b", "c"});
  const FuzzyPartition partition({"1", "2"}, Matrix::Constant(3, 2, 0.5));
  const auto system = decompose(chain, partition);
  REQUIRE(system.q_hat()(0, 1) > 0.0);
  Coupling diag{0, 1, {}};
  for (Index x = 0; x < 3; ++x) diag.support.push_back({x, x, system.restrictions[0].chain.pi()(x)});
  CouplingSet set;
  set.add(diag);
  set = symmetric_completion(set);
  REQUIRE(set.find(1, 0) != nullptr);
  const auto chi = quality_chi(chain, partition, system, set);
  CHECK(chi.value == kInfinity);
  CHECK(chi.candidates == 0);
  CHECK(chi_times(kInfinity, 0.0) == 0.0);
  CHECK(chi_times(kInfinity, 1.0) == kInfinity);
}
