#include "fuzzymc/glued_graph.hpp"
#include "fuzzymc/json_io.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fuzzymc;
using namespace fuzzymc::testing;

TEST_CASE("chain, partition and coupling round trip") {
  const auto instance = build_glued_graph(figure_one_graph());
  const auto partition = canonical_partition(instance.glued);
  const auto couplings = canonical_coupling(instance.glued, instance.chain);

  const auto chain_text = dump_canonical(chain_to_json(instance.chain));
  const auto chain = chain_from_json(Json::parse(chain_text));
  CHECK(chain.states() == instance.chain.states());
  CHECK(chain.pi() == instance.chain.pi());
  CHECK(chain.generator() == instance.chain.generator());
  CHECK(dump_canonical(chain_to_json(chain)) == chain_text);

  const auto p = partition_from_json(partition_to_json(partition));
  CHECK(p.classes() == partition.classes());
  CHECK(p.membership() == partition.membership());

  const auto c = couplings_from_json(couplings_to_json(couplings, chain, p), chain, p);
  REQUIRE(c.couplings().size() == couplings.couplings().size());
  for (std::size_t k = 0; k < c.couplings().size(); ++k) {
    const auto& a = c.couplings()[k];
    const auto& b = couplings.couplings()[k];
    CHECK(a.i == b.i);
    CHECK(a.j == b.j);
    REQUIRE(a.support.size() == b.support.size());
    for (std::size_t t = 0; t < a.support.size(); ++t) {
      CHECK(a.support[t].x == b.support[t].x);
      CHECK(a.support[t].y == b.support[t].y);
      CHECK(a.support[t].mass == b.support[t].mass);
    }
  }
}

TEST_CASE("canonical dump") {
  Json doc = {{"b", 0.1}, {"a", number_to_json(kInfinity)}, {"c", {1, 2}}};
  const auto text = dump_canonical(doc);
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  CHECK(text.find("\"inf\"") != std::string::npos);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(number_from_json(Json("inf")) == kInfinity);
  CHECK(number_from_json(Json("-inf")) == -kInfinity);
  CHECK(std::isnan(number_from_json(Json("nan"))));
  CHECK(number_from_json(Json(0.5)) == 0.5);
}

TEST_CASE("base graph from the test data") {
  const auto base = base_graph_from_json(read_json_file(FUZZYMC_TEST_DATA "/fig1_base.json"));
  CHECK(base.graph.vertices.size() == 5);
  CHECK(base.graph.edges.size() == 6);
  CHECK(base.glued.size() == 2);
  CHECK(near(closed_form_quantities(base).chi, 15.0 / 28.0, 1e-12));
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/chain.json"), InputError);
  CHECK_THROWS_AS(chain_from_json(Json::parse(R"({"states": ["a"], "pi": [1]})")), InputError);
  CHECK_THROWS_AS(chain_from_json(Json::parse(R"({"states": ["a","b"], "pi": [0.5, 0.5], "Q": [[0, 1]]})")),
                  std::exception);
  CHECK_THROWS_AS(partition_from_json(Json::parse(R"({"classes": "x", "membership": []})")), InputError);
  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"vertices": ["a"], "edges": [["a", "z"]]})")), std::exception);
}
