#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "icc/value.hpp"

namespace icc {

// Exogenous noise distribution of one node. Categorical, DiscreteUniform
// and Bernoulli have finite support and admit exact enumeration; Normal and
// ContinuousUniform are sampled only.
struct Categorical {
  std::vector<Value> support;
  std::vector<double> probs;
};
struct DiscreteUniform {
  int64_t lo, hi;  // inclusive
};
struct Bernoulli {
  double p;
};
struct Normal {
  double mean, stddev;
};
struct ContinuousUniform {
  double lo, hi;
};

class NoiseSpec {
 public:
  using Variant = std::variant<Categorical, DiscreteUniform, Bernoulli, Normal,
                               ContinuousUniform>;

  NoiseSpec(Variant v) : v_(std::move(v)) {}

  // Throws BadDistribution on invalid parameters (probs not summing to 1,
  // stddev <= 0, lo >= hi, duplicate support values).
  void check() const;

  bool finite() const;
  // Support and probabilities of a finite spec; throws NotFinite otherwise.
  std::vector<Value> support() const;
  std::vector<double> probs() const;

  Value sample(std::mt19937_64& rng) const;

  const Variant& spec() const { return v_; }

 private:
  Variant v_;
};

// Point mass, used for deterministic nodes.
NoiseSpec point_mass(const Value& v);

}  // namespace icc
