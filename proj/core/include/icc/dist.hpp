#pragma once

#include <map>
#include <string>
#include <vector>

#include "icc/value.hpp"

namespace icc {

using Outcome = std::vector<Value>;

// Exact finite joint distribution over a tuple of named components.
class FiniteDist {
 public:
  FiniteDist() = default;
  explicit FiniteDist(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  void add(const Outcome& outcome, double prob);  // accumulates
  const std::map<Outcome, double>& pmf() const { return pmf_; }
  const std::vector<std::string>& vars() const { return vars_; }

  double total() const;
  // Throws BadDistribution unless total is 1 within 1e-12.
  void check_normalized() const;
  void normalize();

  size_t index_of(const std::string& var) const;

  FiniteDist marginal(const std::vector<size_t>& components) const;
  // P(remaining | components = values); second return is the probability of
  // the conditioning event (conditional is empty when that is 0).
  std::pair<FiniteDist, double> condition(const std::vector<size_t>& components,
                                          const Outcome& values) const;

  double prob(const Outcome& outcome) const;

  double total_variation(const FiniteDist& other) const;

 private:
  std::vector<std::string> vars_;
  std::map<Outcome, double> pmf_;
};

// Shannon entropy in bits of the full joint.
double entropy_bits(const FiniteDist& dist);

// Variance of a single-component numeric distribution.
double variance_of(const FiniteDist& dist);
double mean_of(const FiniteDist& dist);

// I(A : B [| C]) in bits over an exact joint; component index lists must be
// disjoint and cover existing components.
double mutual_information(const FiniteDist& joint,
                          const std::vector<size_t>& a,
                          const std::vector<size_t>& b,
                          const std::vector<size_t>& c = {});

// D(p || q) in bits. Returns +infinity when p puts mass where q does not.
// Throws SupportMismatch when the variable tuples differ.
double relative_entropy(const FiniteDist& p, const FiniteDist& q);

}  // namespace icc
