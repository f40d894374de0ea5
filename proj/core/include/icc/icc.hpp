#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "icc/enumerable.hpp"
#include "icc/fcm.hpp"
#include "icc/shapley.hpp"
#include "icc/uncertainty.hpp"

namespace icc {

// Per-node attribution of the target's uncertainty, plus enough metadata
// to reproduce the run.
struct AttributionReport {
  std::vector<std::string> nodes;          // score order
  std::map<std::string, double> scores;    // clipped at 0 within tolerance
  std::map<std::string, double> raw_scores;
  Measure measure = Measure::Entropy;
  double total = 0.0;  // psi(X_target)
  std::string method;  // "exact" | "permutation" | "monte_carlo"
  uint64_t seed = 0;
  double efficiency_residual = 0.0;
  double tolerance = 1e-9;
  size_t evaluations_used = 0;
};

struct IccRequest {
  Fcm fcm;
  Measure measure = Measure::Entropy;
  EstimatorConfig estimator;
  bool permutation_sampling = false;  // else exact subset enumeration
  size_t permutations = 2000;
  uint64_t shapley_seed = 0;
  size_t exact_player_cap = 12;
};

// Throws ModelError if the target has descendants (marginalize them first).
void require_target_sink(const Fcm& fcm);

// ICC(X_j -> X_target | T) = psi(X_target|N_T) - psi(X_target|N_j, N_T).
double icc_plain(const Fcm& fcm, Measure measure, const std::string& j,
                 const std::set<std::string>& noise_subset,
                 const EstimatorConfig& cfg);

// Plain ICC along an explicit ordering: node k is scored against the set of
// its predecessors. Scores telescope to psi(X_target).
AttributionReport icc_plain_report(const Fcm& fcm, Measure measure,
                                   const std::vector<std::string>& ordering,
                                   const EstimatorConfig& cfg);

// Shapley ICC: Shapley values of nu(S) = -psi(X_target | N_S).
AttributionReport icc_shapley(const IccRequest& request);

// Shapley ICC over an already-reduced enumerable model (exact backend).
AttributionReport icc_shapley_enumerable(const EnumerableModel& model,
                                         Measure measure,
                                         size_t exact_player_cap = 12);

// Semantic cross-check of the interventional reading: psi terms computed
// from the joint law of (X_target, N'_T) under structure-preserving
// interventions at T. Equals icc_plain exactly on finite models.
double icc_via_interventions(const Fcm& fcm, Measure measure,
                             const std::string& j,
                             const std::set<std::string>& noise_subset,
                             size_t enumeration_cap = 1000000);

struct MarginalizationComparison {
  AttributionReport original;
  AttributionReport marginalized;            // scores over retained nodes
  std::map<std::string, double> deltas;      // marginalized - original
  double retained_joint_tv = 0.0;            // sanity: must be ~0
};

// Hides `hidden` nodes by folding their noises into compound noises of the
// retained nodes they feed. Throws InvalidAbstraction when the target is
// hidden or a hidden node feeds more than one retained node.
MarginalizationComparison compare_marginalization(
    const Fcm& fcm, const std::set<std::string>& hidden, Measure measure,
    size_t enumeration_cap = 1000000);

// Splits edge tail->head into tail->copy->head; the copy is deterministic
// (point-mass noise). Used for dummy-node invariance checks.
Fcm insert_copy_node(const Fcm& fcm, const std::string& tail,
                     const std::string& head, const std::string& copy_name);

}  // namespace icc
