#include "icc/shapley_flow.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "icc/enumerable.hpp"
#include "icc/errors.hpp"
#include "icc/icc.hpp"

namespace icc {

void check_boundary(const Dag& dag, const Boundary& b,
                    const std::string& target) {
  const auto& d = b.data_side;
  const auto& f = b.model_side;
  for (const auto& n : dag.nodes())
    if (d.count(n) + f.count(n) != 1)
      throw InvalidBoundary("node '" + n +
                            "' must be on exactly one side of the boundary");
  if (d.size() + f.size() != dag.nodes().size())
    throw InvalidBoundary("boundary names nodes outside the graph");
  for (const auto& r : dag.roots())
    if (!d.count(r))
      throw InvalidBoundary("root '" + r + "' must be on the data side");
  if (!f.count(target))
    throw InvalidBoundary("target '" + target +
                          "' must be on the model side");
  for (const auto& n : dag.nodes())
    for (const auto& p : dag.parents(n))
      if (f.count(p) && d.count(n))
        throw InvalidBoundary("edge " + p + " -> " + n +
                              " points from the model side into the data side");
}

std::set<std::pair<std::string, std::string>> boundary_cut(const Dag& dag,
                                                           const Boundary& b) {
  std::set<std::pair<std::string, std::string>> cut;
  for (const auto& n : dag.nodes())
    if (b.model_side.count(n))
      for (const auto& p : dag.parents(n))
        if (b.data_side.count(p)) cut.emplace(p, n);
  return cut;
}

namespace {

// --- DFS ordering machinery -------------------------------------------------

// Prefix tree of the root-to-target paths. A DFS ordering corresponds to one
// choice of child permutation at every interior node; leaves carry path ids.
// Paths never prefix each other because they all terminate at the target.
struct Tree {
  std::string label;
  int path_index = -1;
  std::vector<Tree> children;
};

Tree build_prefix_tree(const std::vector<std::vector<std::string>>& node_paths) {
  Tree root;
  for (size_t i = 0; i < node_paths.size(); ++i) {
    Tree* cur = &root;
    for (const auto& name : node_paths[i]) {
      auto it = std::find_if(cur->children.begin(), cur->children.end(),
                             [&](const Tree& t) { return t.label == name; });
      if (it == cur->children.end()) {
        cur->children.push_back(Tree{name, -1, {}});
        cur = &cur->children.back();
      } else {
        cur = &(*it);
      }
    }
    cur->path_index = static_cast<int>(i);
  }
  return root;
}

// Number of DFS orderings, saturated at limit+1.
size_t ordering_count(const Tree& t, size_t limit) {
  if (t.children.empty()) return 1;
  size_t total = 1;
  for (size_t k = 2; k <= t.children.size(); ++k) {
    if (total > limit / k) return limit + 1;
    total *= k;
  }
  for (const auto& c : t.children) {
    size_t sub = ordering_count(c, limit);
    if (sub > limit || total > limit / sub) return limit + 1;
    total *= sub;
  }
  return total;
}

std::vector<std::vector<int>> enumerate_orderings(const Tree& t) {
  if (t.children.empty()) return {{t.path_index}};
  std::vector<std::vector<std::vector<int>>> per_child;
  for (const auto& c : t.children) per_child.push_back(enumerate_orderings(c));

  std::vector<size_t> perm(t.children.size());
  std::iota(perm.begin(), perm.end(), size_t{0});
  std::vector<std::vector<int>> out;
  do {
    // Odometer over each child's own orderings, in permuted child order.
    std::vector<size_t> pick(t.children.size(), 0);
    while (true) {
      std::vector<int> combined;
      for (size_t slot = 0; slot < perm.size(); ++slot) {
        const auto& part = per_child[perm[slot]][pick[slot]];
        combined.insert(combined.end(), part.begin(), part.end());
      }
      out.push_back(std::move(combined));
      size_t slot = perm.size();
      while (slot-- > 0) {
        if (++pick[slot] < per_child[perm[slot]].size()) break;
        pick[slot] = 0;
        if (slot == 0) goto next_perm;
      }
    }
  next_perm:;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

void sample_ordering(const Tree& t, std::mt19937_64& rng,
                     std::vector<int>& out) {
  if (t.children.empty()) {
    out.push_back(t.path_index);
    return;
  }
  std::vector<size_t> order(t.children.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  for (size_t i : order) sample_ordering(t.children[i], rng, out);
}

// --- history replay ---------------------------------------------------------

struct Replay {
  const Dag& dag;
  const Boundary& boundary;
  const NodeFn& mechanism;
  const std::map<std::string, Value>& foreground;
  const std::string& target;
  std::set<std::string> root_set;

  // Parent memory per node, in dag parent order; slots start at background.
  std::map<std::string, std::vector<Value>> memory;
  std::map<std::string, std::vector<Value>> initial_memory;

  Replay(const Dag& d, const Boundary& b, const NodeFn& mech,
         const std::map<std::string, Value>& fg,
         const std::map<std::string, Value>& background_roots,
         const std::string& tgt)
      : dag(d), boundary(b), mechanism(mech), foreground(fg), target(tgt) {
    for (const auto& r : dag.roots()) root_set.insert(r);
    // Background values for every node: roots from the assignment, the rest
    // by forward evaluation.
    std::map<std::string, Value> bg;
    for (const auto& n : topo_sort(dag)) {
      if (root_set.count(n)) {
        auto it = background_roots.find(n);
        if (it == background_roots.end())
          throw ModelError("missing background value for root '" + n + "'");
        bg.emplace(n, it->second);
      } else {
        std::vector<Value> args;
        for (const auto& p : dag.parents(n)) args.push_back(bg.at(p));
        bg.emplace(n, mechanism(n, args));
      }
    }
    for (const auto& n : dag.nodes()) {
      const auto& parents = dag.parents(n);
      if (parents.empty()) continue;
      std::vector<Value> slots;
      for (const auto& p : parents) slots.push_back(bg.at(p));
      initial_memory.emplace(n, std::move(slots));
    }
    reset();
  }

  void reset() { memory = initial_memory; }

  // Value of a data-side node from its current memory.
  Value tilde(const std::string& node) const {
    if (root_set.count(node)) return foreground.at(node);
    return mechanism(node, memory.at(node));
  }

  void apply(const FlowEdge& edge) {
    const auto& [tail, head] = edge;
    if (boundary.model_side.count(tail)) return;  // instant inside the model
    Value v = tilde(tail);
    const auto& parents = dag.parents(head);
    auto& slots = memory.at(head);
    for (size_t j = 0; j < parents.size(); ++j)
      if (parents[j] == tail) slots[j] = v;
  }

  // Target value: model-side nodes evaluate live, data-side parents are read
  // from the stored memory slots.
  Value nu() const {
    std::map<std::string, Value> live;
    return value_of(target, live);
  }

  Value value_of(const std::string& node,
                 std::map<std::string, Value>& live) const {
    auto it = live.find(node);
    if (it != live.end()) return it->second;
    const auto& parents = dag.parents(node);
    std::vector<Value> args;
    for (size_t j = 0; j < parents.size(); ++j) {
      if (boundary.model_side.count(parents[j]))
        args.push_back(value_of(parents[j], live));
      else
        args.push_back(memory.at(node)[j]);
    }
    Value v = mechanism(node, args);
    live.emplace(node, v);
    return v;
  }
};

std::vector<std::vector<std::string>> target_paths(const Dag& dag,
                                                   const std::string& target,
                                                   size_t cap) {
  std::set<std::string> relevant = ancestors(dag, target);
  relevant.insert(target);
  std::vector<std::vector<std::string>> paths;
  std::vector<std::string> stack;
  std::function<void(const std::string&)> dfs = [&](const std::string& node) {
    stack.push_back(node);
    if (node == target) {
      if (paths.size() >= cap)
        throw PathCapExceeded("more than " + std::to_string(cap) +
                              " root-to-target paths");
      paths.push_back(stack);
    } else {
      for (const auto& c : dag.children(node))
        if (relevant.count(c)) dfs(c);
    }
    stack.pop_back();
  };
  for (const auto& r : dag.roots())
    if (relevant.count(r)) dfs(r);
  return paths;
}

}  // namespace

FlowAttribution shapley_flow_value(const Dag& dag, const Boundary& boundary,
                                   const NodeFn& mechanism,
                                   const std::map<std::string, Value>& foreground,
                                   const std::map<std::string, Value>& background,
                                   const std::string& target,
                                   const FlowConfig& cfg) {
  if (!dag.has_node(target)) throw UnknownNode(target);
  check_boundary(dag, boundary, target);
  for (const auto& r : dag.roots())
    if (!foreground.count(r))
      throw ModelError("missing foreground value for root '" + r + "'");

  auto node_paths = target_paths(dag, target, cfg.path_cap);
  FlowAttribution result;
  result.boundary = boundary;
  result.seed = cfg.seed;
  for (const auto& seq : node_paths) {
    FlowPath p;
    for (size_t i = 0; i + 1 < seq.size(); ++i) p.emplace_back(seq[i], seq[i + 1]);
    result.paths.push_back(std::move(p));
  }
  result.path_scores.assign(result.paths.size(), 0.0);
  if (result.paths.empty()) return result;

  Tree tree = build_prefix_tree(node_paths);
  size_t count = ordering_count(tree, cfg.ordering_cap);

  Replay replay(dag, boundary, mechanism, foreground, background, target);
  auto score_ordering = [&](const std::vector<int>& ordering) {
    replay.reset();
    double prev = replay.nu().as_real();
    for (int idx : ordering) {
      for (const auto& e : result.paths[static_cast<size_t>(idx)])
        replay.apply(e);
      double cur = replay.nu().as_real();
      result.path_scores[static_cast<size_t>(idx)] += cur - prev;
      prev = cur;
    }
  };

  if (count <= cfg.ordering_cap) {
    auto orderings = enumerate_orderings(tree);
    for (const auto& ordering : orderings) score_ordering(ordering);
    result.orderings_used = orderings.size();
  } else {
    result.sampled = true;
    result.orderings_used = cfg.sample_orderings;
    for (size_t k = 0; k < cfg.sample_orderings; ++k) {
      std::mt19937_64 rng(derive_seed(cfg.seed, "flow-ordering", k));
      std::vector<int> ordering;
      sample_ordering(tree, rng, ordering);
      score_ordering(ordering);
    }
  }
  for (double& s : result.path_scores)
    s /= static_cast<double>(result.orderings_used);

  for (size_t i = 0; i < result.paths.size(); ++i)
    for (const auto& e : result.paths[i]) result.edge_scores[e] += result.path_scores[i];
  return result;
}

FlowAttribution shapley_flow_value(const Fcm& fcm, const Boundary& boundary,
                                   const std::map<std::string, Value>& foreground,
                                   const std::map<std::string, Value>& background,
                                   const FlowConfig& cfg) {
  require_valid(fcm);
  std::set<std::string> root_set;
  for (const auto& r : fcm.dag.roots()) root_set.insert(r);
  for (const auto& n : fcm.dag.nodes()) {
    if (root_set.count(n)) continue;
    if (free_symbols(fcm.mechanism(n)).count("n"))
      throw ModelError("mechanism of '" + n +
                       "' is not deterministic in its parents");
  }
  NodeFn mechanism = [&fcm](const std::string& node,
                            const std::vector<Value>& args) {
    const auto& parents = fcm.dag.parents(node);
    std::map<std::string, Value> env;
    for (size_t j = 0; j < parents.size(); ++j) env.emplace(parents[j], args[j]);
    return eval(fcm.mechanism(node), env, Value(int64_t{0}));
  };
  return shapley_flow_value(fcm.dag, boundary, mechanism, foreground,
                            background, fcm.target, cfg);
}

FlowAttribution shapley_flow_uncertainty(const Fcm& fcm, Measure measure,
                                         const FlowConfig& cfg) {
  require_valid(fcm);
  require_target_sink(fcm);
  EnumerableModel model = enumerable_from_fcm(fcm, cfg.enumeration_cap);
  size_t n = model.players.size();
  if (n > 63) throw TooManyPlayers("at most 63 nodes supported");

  // nu(S) = -psi(target | noises in S); cached per mask.
  std::map<uint64_t, double> cache;
  auto nu = [&](uint64_t mask) {
    auto it = cache.find(mask);
    if (it != cache.end()) return it->second;
    double v = -psi_exact(model, measure, mask);
    return cache.emplace(mask, v).first->second;
  };

  // The cut carries one path noise::j -> j per node; DFS orderings over them
  // are exactly the permutations. Scores average marginal history values.
  std::vector<double> scores(n, 0.0);
  size_t factorial = 1;
  bool enumerable = true;
  for (size_t k = 2; k <= n; ++k) {
    if (factorial > cfg.ordering_cap / k) {
      enumerable = false;
      break;
    }
    factorial *= k;
  }

  size_t orderings_used = 0;
  bool sampled = false;
  auto score_permutation = [&](const std::vector<size_t>& perm) {
    uint64_t mask = 0;
    double prev = nu(0);
    for (size_t i : perm) {
      mask |= uint64_t{1} << i;
      double cur = nu(mask);
      scores[i] += cur - prev;
      prev = cur;
    }
  };

  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  if (enumerable) {
    do {
      score_permutation(perm);
      ++orderings_used;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    sampled = true;
    orderings_used = cfg.sample_orderings;
    for (size_t k = 0; k < cfg.sample_orderings; ++k) {
      std::mt19937_64 rng(derive_seed(cfg.seed, "flow-perm", k));
      std::shuffle(perm.begin(), perm.end(), rng);
      score_permutation(perm);
    }
  }
  for (double& s : scores) s /= static_cast<double>(orderings_used);

  FlowAttribution result;
  result.seed = cfg.seed;
  result.sampled = sampled;
  result.orderings_used = orderings_used;
  for (size_t i = 0; i < n; ++i) {
    FlowEdge e{noise_node_name(model.players[i]), model.players[i]};
    result.paths.push_back({e});
    result.path_scores.push_back(scores[i]);
    result.edge_scores[e] = scores[i];
    result.boundary.data_side.insert(e.first);
    result.boundary.model_side.insert(e.second);
  }
  return result;
}

FlowAttribution shapley_flow_uncertainty(const Fcm& fcm, Measure measure,
                                         const Boundary& boundary,
                                         const FlowConfig& cfg) {
  Boundary expected;
  for (const auto& n : fcm.dag.nodes()) {
    expected.data_side.insert(noise_node_name(n));
    expected.model_side.insert(n);
  }
  if (boundary.data_side != expected.data_side ||
      boundary.model_side != expected.model_side)
    throw InvalidBoundary(
        "the uncertainty metric is only defined on the augmented graph with "
        "all noise nodes on the data side and all observed nodes on the "
        "model side");
  return shapley_flow_uncertainty(fcm, measure, cfg);
}

bool boundary_consistency_check(const Dag& dag, const NodeFn& mechanism,
                                const Boundary& b1, const Boundary& b2,
                                const std::map<std::string, Value>& foreground,
                                const std::map<std::string, Value>& background,
                                const std::string& target,
                                const FlowConfig& cfg, double tolerance) {
  FlowAttribution a1 =
      shapley_flow_value(dag, b1, mechanism, foreground, background, target, cfg);
  FlowAttribution a2 =
      shapley_flow_value(dag, b2, mechanism, foreground, background, target, cfg);
  auto cut1 = boundary_cut(dag, b1);
  auto cut2 = boundary_cut(dag, b2);
  for (const auto& e : cut1) {
    if (!cut2.count(e)) continue;
    double s1 = a1.edge_scores.count(e) ? a1.edge_scores.at(e) : 0.0;
    double s2 = a2.edge_scores.count(e) ? a2.edge_scores.at(e) : 0.0;
    if (std::abs(s1 - s2) > tolerance) return false;
  }
  return true;
}

}  // namespace icc
