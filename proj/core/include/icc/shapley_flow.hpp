#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "icc/fcm.hpp"
#include "icc/graph.hpp"
#include "icc/uncertainty.hpp"

namespace icc {

// Node partition (data side, model side): roots live in D, the target in F,
// and no edge points from F back into D.
struct Boundary {
  std::set<std::string> data_side;
  std::set<std::string> model_side;
};

// Throws InvalidBoundary unless `b` partitions the dag's nodes as above.
void check_boundary(const Dag& dag, const Boundary& b,
                    const std::string& target);

// Edges with tail in D and head in F.
std::set<std::pair<std::string, std::string>> boundary_cut(const Dag& dag,
                                                           const Boundary& b);

struct FlowConfig {
  size_t path_cap = 10;
  size_t ordering_cap = 100000;   // enumerate up to this many DFS orderings
  size_t sample_orderings = 20000;  // drawn uniformly beyond the cap
  uint64_t seed = 0;
  size_t enumeration_cap = 1000000;
};

using FlowEdge = std::pair<std::string, std::string>;
using FlowPath = std::vector<FlowEdge>;

struct FlowAttribution {
  std::vector<FlowPath> paths;  // root-to-target, DFS discovery order
  std::vector<double> path_scores;
  std::map<FlowEdge, double> edge_scores;  // sum of containing path scores
  Boundary boundary;
  size_t orderings_used = 0;
  bool sampled = false;  // true when orderings were sampled, not enumerated
  uint64_t seed = 0;
};

// Evaluates a non-root node from its parent values (in dag parent order).
using NodeFn =
    std::function<Value(const std::string&, const std::vector<Value>&)>;

// Edge attribution of the change in the target's value between a foreground
// and a background setting of the root nodes. Histories of edge updates are
// replayed against per-node parent memory (initialized to background values);
// updates crossing into the model side propagate instantly. Path scores
// average the marginal change of the target over all DFS orderings of the
// root-to-target paths.
FlowAttribution shapley_flow_value(const Dag& dag, const Boundary& boundary,
                                   const NodeFn& mechanism,
                                   const std::map<std::string, Value>& foreground,
                                   const std::map<std::string, Value>& background,
                                   const std::string& target,
                                   const FlowConfig& cfg = {});

// Same, for an FCM whose non-root mechanisms are deterministic in their
// parents. Root values come from the foreground/background assignments.
FlowAttribution shapley_flow_value(const Fcm& fcm, const Boundary& boundary,
                                   const std::map<std::string, Value>& foreground,
                                   const std::map<std::string, Value>& background,
                                   const FlowConfig& cfg = {});

// Uncertainty-metric flow: defined on the augmented DAG with the boundary
// (noise nodes, observed nodes) only. The cut consists of the n edges
// noise::j -> j; orderings are the n! permutations; a history's value is
// -psi(target | included noises). The per-edge scores coincide with the
// Shapley attribution of the target's uncertainty to each node.
FlowAttribution shapley_flow_uncertainty(const Fcm& fcm, Measure measure,
                                         const FlowConfig& cfg = {});

// As above, but validates that `boundary` is exactly (noise nodes, observed
// nodes) of the augmented DAG; anything else throws InvalidBoundary.
FlowAttribution shapley_flow_uncertainty(const Fcm& fcm, Measure measure,
                                         const Boundary& boundary,
                                         const FlowConfig& cfg = {});

// True iff the two attributions agree (within `tolerance`) on every edge in
// cut(b1) ∩ cut(b2).
bool boundary_consistency_check(const Dag& dag, const NodeFn& mechanism,
                                const Boundary& b1, const Boundary& b2,
                                const std::map<std::string, Value>& foreground,
                                const std::map<std::string, Value>& background,
                                const std::string& target,
                                const FlowConfig& cfg = {},
                                double tolerance = 1e-9);

}  // namespace icc
