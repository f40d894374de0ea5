#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

namespace icc {

// Coalition function over players 0..n-1, subsets encoded as bitmasks.
// Evaluations are memoized; the cache is transparent and safe to share
// across threads.
class CoalitionFn {
 public:
  CoalitionFn(size_t players, std::function<double(uint64_t)> evaluator);

  size_t players() const { return n_; }
  double operator()(uint64_t mask) const;
  size_t evaluations_used() const;

 private:
  size_t n_;
  std::function<double(uint64_t)> eval_;
  mutable std::map<uint64_t, double> cache_;
  mutable std::mutex mutex_;
};

struct ShapleyResult {
  enum class Method { Exact, Permutation };

  std::vector<double> values;  // one per player
  Method method = Method::Exact;
  size_t permutations = 0;
  uint64_t seed = 0;
  size_t evaluations_used = 0;
};

// Full subset enumeration with combinatorial weights |S|!(n-|S|-1)!/n!.
// Coalition evaluation is parallelized up to the ICC_THREADS env cap with a
// deterministic aggregation order. Throws TooManyPlayers beyond `cap`.
ShapleyResult shapley_exact(const CoalitionFn& fn, size_t cap = 12);

// Average marginal contribution along uniformly sampled orderings.
// Efficiency holds exactly per sampled permutation.
ShapleyResult shapley_permutation(const CoalitionFn& fn, size_t permutations,
                                  uint64_t seed);

// Verifies Lemma-style dummy invariance: extended_fn must restrict to fn on
// the original players (spot-checked; PrefixMismatch otherwise); returns
// true iff original values are preserved and all dummies get 0.
bool zero_player_check(const CoalitionFn& fn, const CoalitionFn& extended_fn,
                       double tolerance = 1e-9);

// Number of worker threads: ICC_THREADS env var, clamped to [1, hw].
size_t worker_threads();

}  // namespace icc
