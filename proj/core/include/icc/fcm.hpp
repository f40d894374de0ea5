#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "icc/expr.hpp"
#include "icc/graph.hpp"
#include "icc/noise.hpp"

namespace icc {

// One value per noise term, keyed by node name.
using NoiseAssignment = std::map<std::string, Value>;

// Functional causal model: DAG, one mechanism and one noise spec per node,
// and a designated target node.
struct Fcm {
  Dag dag;
  std::map<std::string, ExprPtr> mechanisms;
  std::map<std::string, NoiseSpec> noises;
  std::string target;

  const ExprPtr& mechanism(const std::string& node) const;
  const NoiseSpec& noise(const std::string& node) const;
};

struct Diagnostic {
  std::string code;     // e.g. UnknownParentRef, BadDistribution, CycleError
  std::string message;
};

// Structural validation; empty result iff the model is well-formed.
std::vector<Diagnostic> validate(const Fcm& fcm);
void require_valid(const Fcm& fcm);  // throws ModelError listing diagnostics

// Forward-simulates all mechanisms in topological order.
std::map<std::string, Value> evaluate_all(const Fcm& fcm,
                                          const NoiseAssignment& noise);

// The target as a function of the joint noise vector (Eq-style resolution
// of the target into noise terms).
std::function<Value(const NoiseAssignment&)> resolve_target(const Fcm& fcm);

// Exhaustive product support of the joint noise distribution. Requires all
// noises finite (NotFinite) and at most `cap` assignments (CapExceeded).
std::vector<std::pair<NoiseAssignment, double>> enumerate_noise_support(
    const Fcm& fcm, size_t cap = 1000000);

struct SampleBatch {
  enum class Kind { Observational, Do, StructurePreserving };

  std::vector<std::string> columns;  // column order for serialization
  std::map<std::string, std::vector<Value>> data;
  uint64_t seed = 0;
  Kind kind = Kind::Observational;
  std::map<std::string, Value> do_assignments;
  std::vector<std::string> sp_nodes;

  size_t rows() const;
};

SampleBatch sample_observational(const Fcm& fcm, size_t count, uint64_t seed);

// Truncated-factorization semantics: intervened nodes held constant,
// descendants follow their mechanisms.
SampleBatch sample_do(const Fcm& fcm,
                      const std::map<std::string, Value>& assignments,
                      size_t count, uint64_t seed);

// For each node in `nodes`, the mechanism is fed a fresh independent copy
// of its noise. The N' draws are recorded as extra "noise::<node>" columns.
SampleBatch sample_structure_preserving(const Fcm& fcm,
                                        const std::set<std::string>& nodes,
                                        size_t count, uint64_t seed);

// Deterministic stream derivation: children streams depend only on
// (seed, tag, index), never on execution order.
uint64_t derive_seed(uint64_t seed, const std::string& tag, uint64_t index);

}  // namespace icc
