#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <icc/errors.hpp>
#include <icc/graph.hpp>

using icc::Dag;

TEST_CASE("node and edge bookkeeping") {
  Dag dag;
  dag.add_node("A");
  dag.add_node("B", {"A"});
  dag.add_node("C", {"A", "B"});
  dag.check_references();

  CHECK(dag.nodes() == std::vector<std::string>{"A", "B", "C"});
  CHECK(dag.parents("C") == std::vector<std::string>{"A", "B"});
  CHECK(dag.has_edge("A", "B"));
  CHECK(!dag.has_edge("B", "A"));
  CHECK(dag.children("A") == std::vector<std::string>{"B", "C"});
  CHECK(dag.roots() == std::vector<std::string>{"A"});
}

TEST_CASE("declaration validation") {
  Dag dag;
  CHECK_THROWS_AS(dag.add_node(""), icc::ModelError);
  CHECK_THROWS_AS(dag.add_node("1bad"), icc::ModelError);
  CHECK_THROWS_AS(dag.add_node("has space"), icc::ModelError);
  CHECK_THROWS_AS(dag.add_node("loop", {"loop"}), icc::ModelError);
  dag.add_node("A");
  CHECK_THROWS_AS(dag.add_node("A"), icc::ModelError);
  CHECK_THROWS_AS(dag.add_node("B", {"A", "A"}), icc::ModelError);
  dag.add_node("B", {"missing"});
  CHECK_THROWS_AS(dag.check_references(), icc::UnknownNode);
  CHECK_THROWS_AS(dag.parents("nope"), icc::UnknownNode);
}

TEST_CASE("topological order breaks ties by declaration") {
  Dag dag;
  dag.add_node("C");
  dag.add_node("A");
  dag.add_node("B", {"C", "A"});
  auto order = icc::topo_sort(dag);
  CHECK(order == std::vector<std::string>{"C", "A", "B"});

  // Nodes may be declared before their parents.
  Dag forward;
  forward.add_node("child", {"parent"});
  forward.add_node("parent");
  CHECK(icc::topo_sort(forward) ==
        std::vector<std::string>{"parent", "child"});
}

TEST_CASE("cycles are reported with an offending node") {
  Dag dag;
  dag.add_node("A", {"C"});
  dag.add_node("B", {"A"});
  dag.add_node("C", {"B"});
  CHECK_THROWS_AS(icc::topo_sort(dag), icc::CycleError);
  try {
    icc::topo_sort(dag);
  } catch (const icc::CycleError& e) {
    CHECK(dag.has_node(e.node()));
  }
}

TEST_CASE("augmented graph adds one noise root per node") {
  Dag dag;
  dag.add_node("A");
  dag.add_node("B", {"A"});
  auto aug = icc::augment(dag);

  CHECK(aug.noise_nodes ==
        std::vector<std::string>{"noise::A", "noise::B"});
  CHECK(aug.noise_of.at("A") == "noise::A");
  CHECK(aug.graph.has_edge("noise::A", "A"));
  CHECK(aug.graph.has_edge("noise::B", "B"));
  CHECK(aug.graph.has_edge("A", "B"));
  // Every observed node now has a noise parent, so only noise nodes are roots.
  CHECK(aug.graph.roots() ==
        std::vector<std::string>{"noise::A", "noise::B"});
  // The noise parent comes after the structural parents.
  CHECK(aug.graph.parents("B") ==
        std::vector<std::string>{"A", "noise::B"});
}

TEST_CASE("ancestors and descendants") {
  Dag dag;
  dag.add_node("A");
  dag.add_node("B", {"A"});
  dag.add_node("C", {"A"});
  dag.add_node("D", {"B", "C"});
  dag.add_node("E");

  CHECK(icc::ancestors(dag, "D") == std::set<std::string>{"A", "B", "C"});
  CHECK(icc::ancestors(dag, "A").empty());
  CHECK(icc::descendants(dag, "A") == std::set<std::string>{"B", "C", "D"});
  CHECK(icc::descendants(dag, "E").empty());
}

TEST_CASE("identifier rules") {
  CHECK(icc::is_valid_identifier("abc_123"));
  CHECK(icc::is_valid_identifier("_x"));
  CHECK(!icc::is_valid_identifier("9x"));
  CHECK(!icc::is_valid_identifier(""));
  CHECK(!icc::is_valid_identifier("a-b"));
  CHECK(icc::noise_node_name("X") == "noise::X");
}
