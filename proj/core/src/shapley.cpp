#include "icc/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <thread>

#include "icc/errors.hpp"

namespace icc {

CoalitionFn::CoalitionFn(size_t players, std::function<double(uint64_t)> evaluator)
    : n_(players), eval_(std::move(evaluator)) {
  if (players == 0) throw TooManyPlayers("coalition function needs players");
  if (players > 63) throw TooManyPlayers("at most 63 players supported");
}

double CoalitionFn::operator()(uint64_t mask) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
  }
  double value = eval_(mask);
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(mask, value).first->second;
}

size_t CoalitionFn::evaluations_used() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

size_t worker_threads() {
  size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ICC_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return std::min(static_cast<size_t>(v), hw);
  }
  return 1;
}

namespace {

// |S|!(n-|S|-1)!/n! per subset size; log-space beyond 20 players to avoid
// factorial overflow.
std::vector<double> subset_weights(size_t n) {
  std::vector<double> w(n);
  if (n <= 20) {
    std::vector<long double> fact(n + 1, 1.0L);
    for (size_t i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
    for (size_t s = 0; s < n; ++s)
      w[s] = static_cast<double>(fact[s] * fact[n - s - 1] / fact[n]);
  } else {
    for (size_t s = 0; s < n; ++s)
      w[s] = std::exp(std::lgamma(static_cast<double>(s + 1)) +
                      std::lgamma(static_cast<double>(n - s)) -
                      std::lgamma(static_cast<double>(n + 1)));
  }
  return w;
}

void evaluate_all_masks(const CoalitionFn& fn, uint64_t count) {
  size_t threads = worker_threads();
  if (threads <= 1 || count < 64) {
    for (uint64_t mask = 0; mask < count; ++mask) fn(mask);
    return;
  }
  std::vector<std::thread> workers;
  for (size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&fn, t, threads, count] {
      for (uint64_t mask = t; mask < count; mask += threads) fn(mask);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace

ShapleyResult shapley_exact(const CoalitionFn& fn, size_t cap) {
  size_t n = fn.players();
  if (n > cap)
    throw TooManyPlayers("exact Shapley capped at " + std::to_string(cap) +
                         " players, got " + std::to_string(n));
  uint64_t full = uint64_t{1} << n;
  evaluate_all_masks(fn, full);

  std::vector<double> weights = subset_weights(n);
  ShapleyResult result;
  result.method = ShapleyResult::Method::Exact;
  result.values.assign(n, 0.0);
  for (uint64_t mask = 0; mask < full; ++mask) {
    size_t size = static_cast<size_t>(std::popcount(mask));
    for (size_t i = 0; i < n; ++i) {
      if (mask & (uint64_t{1} << i)) continue;
      result.values[i] +=
          weights[size] * (fn(mask | (uint64_t{1} << i)) - fn(mask));
    }
  }
  result.evaluations_used = fn.evaluations_used();
  return result;
}

ShapleyResult shapley_permutation(const CoalitionFn& fn, size_t permutations,
                                  uint64_t seed) {
  if (permutations < 1)
    throw ModelError("permutation sampling needs at least one permutation");
  size_t n = fn.players();
  ShapleyResult result;
  result.method = ShapleyResult::Method::Permutation;
  result.permutations = permutations;
  result.seed = seed;
  result.values.assign(n, 0.0);

  std::mt19937_64 rng(seed);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  for (size_t p = 0; p < permutations; ++p) {
    std::shuffle(order.begin(), order.end(), rng);
    uint64_t mask = 0;
    double prev = fn(0);
    for (size_t i : order) {
      mask |= uint64_t{1} << i;
      double cur = fn(mask);
      result.values[i] += cur - prev;
      prev = cur;
    }
  }
  for (double& v : result.values) v /= static_cast<double>(permutations);
  result.evaluations_used = fn.evaluations_used();
  return result;
}

bool zero_player_check(const CoalitionFn& fn, const CoalitionFn& extended_fn,
                       double tolerance) {
  size_t n = fn.players();
  size_t m = extended_fn.players();
  if (m <= n) throw PrefixMismatch("extended function adds no players");
  uint64_t base_mask = (uint64_t{1} << n) - 1;

  // Spot-check the extension property on a deterministic subset sample.
  std::mt19937_64 rng(0x5eed);
  uint64_t full = uint64_t{1} << m;
  size_t checks = std::min<uint64_t>(full, 64);
  for (size_t k = 0; k < checks; ++k) {
    uint64_t sub = rng() % full;
    if (std::fabs(extended_fn(sub) - fn(sub & base_mask)) > tolerance)
      throw PrefixMismatch("extended coalition function does not restrict to "
                           "the original on the base players");
  }

  ShapleyResult orig = shapley_exact(fn, std::max<size_t>(n, 12));
  ShapleyResult ext = shapley_exact(extended_fn, std::max<size_t>(m, 12));
  for (size_t i = 0; i < n; ++i)
    if (std::fabs(orig.values[i] - ext.values[i]) > tolerance) return false;
  for (size_t i = n; i < m; ++i)
    if (std::fabs(ext.values[i]) > tolerance) return false;
  return true;
}

}  // namespace icc
