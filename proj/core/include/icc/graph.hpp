#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace icc {

// Directed acyclic graph over string node identifiers. Node order is the
// declaration order and is used everywhere ties need breaking.
class Dag {
 public:
  Dag() = default;

  // Throws ModelError on bad identifiers, duplicate nodes/parents or
  // self-loops. Acyclicity is checked by topo_sort().
  void add_node(const std::string& name,
                const std::vector<std::string>& parents = {});

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<std::string>& parents(const std::string& node) const;
  bool has_node(const std::string& name) const;
  bool has_edge(const std::string& tail, const std::string& head) const;
  std::vector<std::string> children(const std::string& node) const;
  std::vector<std::string> roots() const;

  // Checks that all parent references resolve. add_node defers this so
  // nodes can be declared in any order.
  void check_references() const;

 private:
  std::vector<std::string> nodes_;
  std::map<std::string, std::vector<std::string>> parents_;
};

// Dag plus one synthetic noise node per base node.
struct AugmentedDag {
  Dag graph;                                    // base + noise nodes
  std::vector<std::string> noise_nodes;         // "noise::<node>" per base node
  std::map<std::string, std::string> noise_of;  // base node -> its noise node
};

bool is_valid_identifier(const std::string& name);
std::string noise_node_name(const std::string& node);

// Deterministic topological order: Kahn's algorithm with ties broken by
// declaration order. Throws CycleError naming a node on a cycle.
std::vector<std::string> topo_sort(const Dag& dag);

AugmentedDag augment(const Dag& dag);

// Transitive closure of parents, excluding the node itself.
std::set<std::string> ancestors(const Dag& dag, const std::string& node);
std::set<std::string> descendants(const Dag& dag, const std::string& node);

}  // namespace icc
