#include "icc/graph.hpp"

#include <algorithm>
#include <cctype>

#include "icc/errors.hpp"

namespace icc {

bool is_valid_identifier(const std::string& name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

std::string noise_node_name(const std::string& node) { return "noise::" + node; }

void Dag::add_node(const std::string& name,
                   const std::vector<std::string>& parents) {
  // "::" is reserved for synthetic noise nodes.
  bool synthetic = name.rfind("noise::", 0) == 0 &&
                   is_valid_identifier(name.substr(7));
  if (!synthetic && !is_valid_identifier(name))
    throw ModelError("invalid node identifier '" + name + "'");
  if (parents_.count(name))
    throw ModelError("duplicate node '" + name + "'");
  for (size_t i = 0; i < parents.size(); ++i) {
    if (parents[i] == name)
      throw ModelError("node '" + name + "' lists itself as parent");
    for (size_t j = i + 1; j < parents.size(); ++j)
      if (parents[i] == parents[j])
        throw ModelError("node '" + name + "' has duplicate parent '" +
                         parents[i] + "'");
  }
  nodes_.push_back(name);
  parents_[name] = parents;
}

const std::vector<std::string>& Dag::parents(const std::string& node) const {
  auto it = parents_.find(node);
  if (it == parents_.end()) throw UnknownNode(node);
  return it->second;
}

bool Dag::has_node(const std::string& name) const {
  return parents_.count(name) > 0;
}

bool Dag::has_edge(const std::string& tail, const std::string& head) const {
  if (!has_node(head)) return false;
  const auto& ps = parents(head);
  return std::find(ps.begin(), ps.end(), tail) != ps.end();
}

std::vector<std::string> Dag::children(const std::string& node) const {
  if (!has_node(node)) throw UnknownNode(node);
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    const auto& ps = parents_.at(n);
    if (std::find(ps.begin(), ps.end(), node) != ps.end()) out.push_back(n);
  }
  return out;
}

std::vector<std::string> Dag::roots() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_)
    if (parents_.at(n).empty()) out.push_back(n);
  return out;
}

void Dag::check_references() const {
  for (const auto& n : nodes_)
    for (const auto& p : parents_.at(n))
      if (!has_node(p)) throw UnknownNode(p);
}

std::vector<std::string> topo_sort(const Dag& dag) {
  dag.check_references();
  const auto& nodes = dag.nodes();
  std::map<std::string, size_t> indegree;
  for (const auto& n : nodes) indegree[n] = dag.parents(n).size();

  // Each step emits the first (in declaration order) node whose parents
  // have all been emitted.
  std::vector<std::string> order;
  order.reserve(nodes.size());
  std::vector<bool> emitted(nodes.size(), false);
  for (size_t done = 0; done < nodes.size(); ++done) {
    size_t pick = nodes.size();
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (!emitted[i] && indegree[nodes[i]] == 0) {
        pick = i;
        break;
      }
    }
    if (pick == nodes.size()) {
      for (size_t i = 0; i < nodes.size(); ++i)
        if (!emitted[i]) throw CycleError(nodes[i]);
    }
    emitted[pick] = true;
    order.push_back(nodes[pick]);
    for (const auto& c : dag.children(nodes[pick])) --indegree[c];
  }
  return order;
}

AugmentedDag augment(const Dag& dag) {
  dag.check_references();
  AugmentedDag out;
  for (const auto& n : dag.nodes()) {
    std::string nn = noise_node_name(n);
    out.graph.add_node(nn);
    out.noise_nodes.push_back(nn);
    out.noise_of[n] = nn;
  }
  for (const auto& n : dag.nodes()) {
    std::vector<std::string> ps = dag.parents(n);
    ps.push_back(noise_node_name(n));
    out.graph.add_node(n, ps);
  }
  return out;
}

std::set<std::string> ancestors(const Dag& dag, const std::string& node) {
  if (!dag.has_node(node)) throw UnknownNode(node);
  std::set<std::string> seen;
  std::vector<std::string> stack{node};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    for (const auto& p : dag.parents(cur))
      if (seen.insert(p).second) stack.push_back(p);
  }
  return seen;
}

std::set<std::string> descendants(const Dag& dag, const std::string& node) {
  if (!dag.has_node(node)) throw UnknownNode(node);
  std::set<std::string> seen;
  std::vector<std::string> stack{node};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    for (const auto& c : dag.children(cur))
      if (seen.insert(c).second) stack.push_back(c);
  }
  return seen;
}

}  // namespace icc
