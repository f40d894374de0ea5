#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "icc/enumerable.hpp"
#include "icc/fcm.hpp"

namespace icc {

// Conditional uncertainty measure. Entropy is reported in bits and requires
// a finite-support target; variance is in squared target units.
enum class Measure { Entropy, Variance };

struct EstimatorConfig {
  enum class Method { Exact, MonteCarlo };
  Method method = Method::Exact;
  size_t outer_samples = 1000;  // conditioning draws
  size_t inner_samples = 1000;  // per-condition draws
  uint64_t seed = 0;
  size_t enumeration_cap = 1000000;
};

// psi(X_target | N_T) for the player subset given by `mask` over
// model.players. Inner conditional distributions are computed symbolically.
double psi_exact(const EnumerableModel& model, Measure measure, uint64_t mask);

// psi(X_target | N_T). Exact backend requires an enumerable model; the
// Monte Carlo backend is a plug-in estimate with empirical frequencies (no
// bias correction) and is deterministic given cfg.seed.
double conditional_psi(const Fcm& fcm, Measure measure,
                       const std::set<std::string>& noise_subset,
                       const EstimatorConfig& cfg);

}  // namespace icc
