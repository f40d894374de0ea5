#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "icc/dist.hpp"
#include "icc/fcm.hpp"

namespace icc {

// A finite-noise model reduced to indexed players: player i carries a
// finite noise distribution given by probs[i]; the target is a pure
// function of the joint index tuple. Both plain FCMs and marginalized
// models (with compound noises) reduce to this form, and every exact
// computation runs on it.
struct EnumerableModel {
  std::vector<std::string> players;
  std::vector<std::vector<double>> probs;
  std::function<Value(const std::vector<size_t>&)> target;

  size_t configurations() const;
  uint64_t mask_of(const std::set<std::string>& names) const;
};

// Throws NotFinite for continuous noises, CapExceeded beyond `cap`.
EnumerableModel enumerable_from_fcm(const Fcm& fcm, size_t cap = 1000000);

// Visits every joint index tuple with its product probability.
void for_each_config(
    const EnumerableModel& model,
    const std::function<void(const std::vector<size_t>&, double)>& fn);

// Exact observational (or post-do) joint over all observed variables,
// computed by pushing the enumerated noise support through the mechanisms.
FiniteDist exact_joint(const Fcm& fcm,
                       const std::map<std::string, Value>& do_assignments = {},
                       size_t cap = 1000000);

// Exact joint over observed variables plus the fresh-copy noise columns
// induced by structure-preserving interventions at `nodes`.
FiniteDist exact_joint_structure_preserving(const Fcm& fcm,
                                            const std::set<std::string>& nodes,
                                            size_t cap = 1000000);

}  // namespace icc
