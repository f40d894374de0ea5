#include "icc/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "icc/errors.hpp"

namespace icc {

void FiniteDist::add(const Outcome& outcome, double prob) {
  if (prob < 0.0) throw BadDistribution("negative probability");
  if (!vars_.empty() && outcome.size() != vars_.size())
    throw BadDistribution("outcome arity mismatch");
  if (prob == 0.0) return;
  pmf_[outcome] += prob;
}

double FiniteDist::total() const {
  double t = 0.0;
  for (const auto& [_, p] : pmf_) t += p;
  return t;
}

void FiniteDist::check_normalized() const {
  double t = total();
  if (std::fabs(t - 1.0) > 1e-12)
    throw BadDistribution("distribution sums to " + std::to_string(t));
}

void FiniteDist::normalize() {
  double t = total();
  if (t <= 0.0) throw BadDistribution("cannot normalize zero distribution");
  for (auto& [_, p] : pmf_) p /= t;
}

size_t FiniteDist::index_of(const std::string& var) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == var) return i;
  throw UnknownNode(var);
}

FiniteDist FiniteDist::marginal(const std::vector<size_t>& components) const {
  std::vector<std::string> names;
  for (size_t c : components)
    names.push_back(c < vars_.size() ? vars_[c] : "v" + std::to_string(c));
  FiniteDist out(names);
  for (const auto& [outcome, p] : pmf_) {
    Outcome sub;
    sub.reserve(components.size());
    for (size_t c : components) sub.push_back(outcome.at(c));
    out.add(sub, p);
  }
  return out;
}

std::pair<FiniteDist, double> FiniteDist::condition(
    const std::vector<size_t>& components, const Outcome& values) const {
  std::vector<size_t> rest;
  for (size_t i = 0; i < (vars_.empty() && !pmf_.empty()
                              ? pmf_.begin()->first.size()
                              : vars_.size());
       ++i)
    if (std::find(components.begin(), components.end(), i) == components.end())
      rest.push_back(i);
  std::vector<std::string> names;
  for (size_t c : rest)
    names.push_back(c < vars_.size() ? vars_[c] : "v" + std::to_string(c));

  FiniteDist out(names);
  double weight = 0.0;
  for (const auto& [outcome, p] : pmf_) {
    bool match = true;
    for (size_t i = 0; i < components.size(); ++i)
      if (!(outcome.at(components[i]) == values.at(i))) {
        match = false;
        break;
      }
    if (!match) continue;
    weight += p;
    Outcome sub;
    sub.reserve(rest.size());
    for (size_t c : rest) sub.push_back(outcome.at(c));
    out.add(sub, p);
  }
  if (weight > 0.0) out.normalize();
  return {out, weight};
}

double FiniteDist::prob(const Outcome& outcome) const {
  auto it = pmf_.find(outcome);
  return it == pmf_.end() ? 0.0 : it->second;
}

double FiniteDist::total_variation(const FiniteDist& other) const {
  std::set<Outcome> keys;
  for (const auto& [o, _] : pmf_) keys.insert(o);
  for (const auto& [o, _] : other.pmf_) keys.insert(o);
  double tv = 0.0;
  for (const auto& o : keys) tv += std::fabs(prob(o) - other.prob(o));
  return tv / 2.0;
}

double entropy_bits(const FiniteDist& dist) {
  double h = 0.0;
  for (const auto& [_, p] : dist.pmf())
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double mean_of(const FiniteDist& dist) {
  double m = 0.0;
  for (const auto& [o, p] : dist.pmf()) {
    if (o.size() != 1)
      throw BadDistribution("mean requires a single-component distribution");
    m += p * o[0].as_real();
  }
  return m;
}

double variance_of(const FiniteDist& dist) {
  double m = mean_of(dist);
  double v = 0.0;
  for (const auto& [o, p] : dist.pmf()) {
    double d = o[0].as_real() - m;
    v += p * d * d;
  }
  return v;
}

double mutual_information(const FiniteDist& joint, const std::vector<size_t>& a,
                          const std::vector<size_t>& b,
                          const std::vector<size_t>& c) {
  joint.check_normalized();
  if (c.empty()) {
    std::vector<size_t> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    return entropy_bits(joint.marginal(a)) + entropy_bits(joint.marginal(b)) -
           entropy_bits(joint.marginal(ab));
  }
  // Conditional MI: average I(A:B) of the conditioned joints over P(C).
  FiniteDist pc = joint.marginal(c);
  double total = 0.0;
  for (const auto& [cv, pcv] : pc.pmf()) {
    auto [cond, w] = joint.condition(c, cv);
    if (w <= 0.0) continue;
    // Component indices shift after conditioning removes the C components.
    auto reindex = [&](const std::vector<size_t>& comps) {
      std::vector<size_t> out;
      for (size_t comp : comps) {
        size_t shift = 0;
        for (size_t cc : c)
          if (cc < comp) ++shift;
        out.push_back(comp - shift);
      }
      return out;
    };
    total += pcv * mutual_information(cond, reindex(a), reindex(b));
  }
  return total;
}

double relative_entropy(const FiniteDist& p, const FiniteDist& q) {
  if (p.vars() != q.vars())
    throw SupportMismatch("distributions over different variable tuples");
  p.check_normalized();
  q.check_normalized();
  double d = 0.0;
  for (const auto& [o, pp] : p.pmf()) {
    if (pp <= 0.0) continue;
    double qq = q.prob(o);
    if (qq <= 0.0) return std::numeric_limits<double>::infinity();
    d += pp * std::log2(pp / qq);
  }
  return d;
}

}  // namespace icc
