#include "fuzzymc/constants.hpp"
#include "fuzzymc/glued_graph.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fuzzymc;
using namespace fuzzymc::testing;

namespace {

BaseGraph base(std::vector<std::string> vertices, std::vector<std::pair<Index, Index>> edges,
               std::vector<Index> h) {
  return BaseGraph{Graph{std::move(vertices), std::move(edges)}, std::move(h)};
}

void check_against_definitions(const BaseGraph& g) {
  const auto instance = build_glued_graph(g);
  const auto partition = canonical_partition(instance.glued);
  const auto system = decompose(instance.chain, partition);
  const auto couplings = canonical_coupling(instance.glued, instance.chain);
  const auto closed = closed_form_quantities(g);
  const double q12 = projection_by_definition(instance.chain, partition)(0, 1);
  const double chi = quality_chi(instance.chain, partition, system, couplings).value;
  const double lambda_hat = poincare_constant(system.projection);
  CHECK(near(q12, closed.q_hat_12, 1e-12));
  CHECK(near(chi, closed.chi, 1e-12));
  CHECK(near(chi * lambda_hat, closed.projection_bound, 1e-12));
  CHECK(near(lambda_hat, 2.0 * system.q_hat()(0, 1), 1e-12));
  CHECK(near(system.pi_hat(0), 0.5, 1e-14));
  CHECK(near(system.pi_hat(1), 0.5, 1e-14));
  for (const auto& c : couplings.couplings()) {
    CHECK(validate_coupling(c, system.embedded_measure(c.i, instance.chain.size()),
                            system.embedded_measure(c.j, instance.chain.size()))
              .empty());
  }
}

}  // namespace

TEST_CASE("glued pentagon construction") {
  const auto g = figure_one_graph();
  const auto instance = build_glued_graph(g);
  CHECK(instance.chain.size() == 8);
  CHECK(instance.glued.total_degree == 30.0);
  CHECK(instance.glued.degree.sum() == 30.0);
  CHECK(validate_chain(instance.chain).empty());
  const auto adjacency = g.graph.adjacency();
  for (std::size_t x = 0; x < instance.glued.origin.size(); ++x) {
    const double d = adjacency.row(instance.glued.origin[x]).sum();
    CHECK(instance.glued.degree(static_cast<Index>(x)) == (instance.glued.copy[x] == 0 ? 2 * d : d + 1));
  }

  const auto closed = closed_form_quantities(g);
  CHECK(near(closed.q_hat_12, 7.0 / 15.0, 1e-12));
  CHECK(near(closed.chi, 15.0 / 28.0, 1e-12));
  CHECK(near(closed.projection_bound, 0.5, 1e-12));
  check_against_definitions(g);

  const auto couplings = canonical_coupling(instance.glued, instance.chain);
  const Coupling* k = couplings.find(0, 1);
  REQUIRE(k != nullptr);
  CHECK(k->support.size() == 5);
  CHECK(near(k->total_mass(), 1.0, 1e-15));
}

TEST_CASE("single edge glues into a triangle") {
  const auto g = base({"u", "v"}, {{0, 1}}, {0});
  const auto instance = build_glued_graph(g);
  CHECK(instance.chain.size() == 3);
  CHECK(instance.glued.degree == Vector::Constant(3, 2.0));
  const auto closed = closed_form_quantities(g);
  CHECK(near(closed.q_hat_12, 2.0 / 3.0, 1e-12));
  CHECK(near(closed.chi, 0.75, 1e-12));
  CHECK(near(closed.projection_bound, 1.0, 1e-12));
  check_against_definitions(g);
}

TEST_CASE("empty glue set gives the prism") {
  const auto g = base({"u", "v"}, {{0, 1}}, {});
  const auto instance = build_glued_graph(g);
  CHECK(instance.chain.size() == 4);
  CHECK(instance.glued.degree == Vector::Constant(4, 2.0));
  const auto partition = canonical_partition(instance.glued);
  CHECK(validate_partition(partition, 4).empty());
  CHECK((partition.membership().array() * (1.0 - partition.membership().array())).abs().maxCoeff() == 0.0);
  const auto closed = closed_form_quantities(g);
  CHECK(near(closed.q_hat_12, 0.5, 1e-12));
  CHECK(near(closed.chi, 1.0, 1e-12));
  CHECK(near(closed.projection_bound, 1.0, 1e-12));
  check_against_definitions(g);
}

TEST_CASE("closed forms agree with definitions on random base graphs") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) check_against_definitions(random_base_graph(rng, 5, 15));
}

TEST_CASE("copy swap maps one restriction measure onto the other") {
  const auto instance = build_glued_graph(figure_one_graph());
  const auto partition = canonical_partition(instance.glued);
  const auto system = decompose(instance.chain, partition);
  const Index n = instance.chain.size();
  const Vector p1 = system.embedded_measure(0, n), p2 = system.embedded_measure(1, n);
  for (Index x = 0; x < n; ++x) {
    const auto& name = instance.chain.states()[static_cast<std::size_t>(x)];
    const auto hash = name.find('#');
    const std::string swapped =
        hash == std::string::npos ? name : name.substr(0, hash) + (name.back() == '1' ? "#2" : "#1");
    CHECK(p1(x) == p2(instance.chain.state_index(swapped)));
  }
}

TEST_CASE("invalid base graphs") {
  CHECK_THROWS_AS(build_glued_graph(base({"u", "v"}, {{0, 1}}, {0, 1})), DomainError);
  CHECK_THROWS_AS(build_glued_graph(base({"u"}, {}, {0})), DomainError);
  CHECK_THROWS_AS(build_glued_graph(base({"u", "v", "w"}, {{0, 1}}, {})), DomainError);
  try {
    build_glued_graph(base({"a", "b", "c"}, {{0, 1}, {1, 2}}, {0, 1}));
    FAIL("expected an error");
  } catch (const DomainError& e) {
    const std::string what = e.what();
    CHECK(what.find('a') != std::string::npos);
    CHECK(what.find('b') != std::string::npos);
  }
}
