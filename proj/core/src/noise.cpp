#include "icc/noise.hpp"

#include <cmath>

#include "icc/errors.hpp"

namespace icc {

void NoiseSpec::check() const {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          if (s.support.empty())
            throw BadDistribution("categorical support is empty");
          if (s.support.size() != s.probs.size())
            throw BadDistribution("categorical support/probs length mismatch");
          double total = 0.0;
          for (double p : s.probs) {
            if (p < 0.0) throw BadDistribution("negative probability");
            total += p;
          }
          if (std::fabs(total - 1.0) > 1e-12)
            throw BadDistribution("categorical probs sum to " +
                                  std::to_string(total) + ", expected 1");
          for (size_t i = 0; i < s.support.size(); ++i)
            for (size_t j = i + 1; j < s.support.size(); ++j)
              if (s.support[i] == s.support[j])
                throw BadDistribution("duplicate support value " +
                                      s.support[i].str());
        } else if constexpr (std::is_same_v<T, DiscreteUniform>) {
          if (s.lo >= s.hi)
            throw BadDistribution("discrete uniform requires lo < hi");
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          if (s.p < 0.0 || s.p > 1.0)
            throw BadDistribution("bernoulli p outside [0, 1]");
        } else if constexpr (std::is_same_v<T, Normal>) {
          if (!(s.stddev > 0.0))
            throw BadDistribution("normal requires stddev > 0");
        } else {
          if (!(s.lo < s.hi))
            throw BadDistribution("continuous uniform requires lo < hi");
        }
      },
      v_);
}

bool NoiseSpec::finite() const {
  return std::holds_alternative<Categorical>(v_) ||
         std::holds_alternative<DiscreteUniform>(v_) ||
         std::holds_alternative<Bernoulli>(v_);
}

std::vector<Value> NoiseSpec::support() const {
  if (const auto* c = std::get_if<Categorical>(&v_)) return c->support;
  if (const auto* d = std::get_if<DiscreteUniform>(&v_)) {
    std::vector<Value> out;
    for (int64_t v = d->lo; v <= d->hi; ++v) out.push_back(Value(v));
    return out;
  }
  if (std::holds_alternative<Bernoulli>(v_))
    return {Value(int64_t{0}), Value(int64_t{1})};
  throw NotFinite("continuous noise has no finite support");
}

std::vector<double> NoiseSpec::probs() const {
  if (const auto* c = std::get_if<Categorical>(&v_)) return c->probs;
  if (const auto* d = std::get_if<DiscreteUniform>(&v_)) {
    size_t k = static_cast<size_t>(d->hi - d->lo + 1);
    return std::vector<double>(k, 1.0 / static_cast<double>(k));
  }
  if (const auto* b = std::get_if<Bernoulli>(&v_)) return {1.0 - b->p, b->p};
  throw NotFinite("continuous noise has no finite support");
}

Value NoiseSpec::sample(std::mt19937_64& rng) const {
  return std::visit(
      [&rng](const auto& s) -> Value {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          std::uniform_real_distribution<double> u(0.0, 1.0);
          double x = u(rng), acc = 0.0;
          for (size_t i = 0; i < s.support.size(); ++i) {
            acc += s.probs[i];
            if (x < acc) return s.support[i];
          }
          return s.support.back();
        } else if constexpr (std::is_same_v<T, DiscreteUniform>) {
          std::uniform_int_distribution<int64_t> u(s.lo, s.hi);
          return Value(u(rng));
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          std::uniform_real_distribution<double> u(0.0, 1.0);
          return Value(int64_t{u(rng) < s.p});
        } else if constexpr (std::is_same_v<T, Normal>) {
          std::normal_distribution<double> g(s.mean, s.stddev);
          return Value(g(rng));
        } else {
          std::uniform_real_distribution<double> u(s.lo, s.hi);
          return Value(u(rng));
        }
      },
      v_);
}

NoiseSpec point_mass(const Value& v) {
  return NoiseSpec(Categorical{{v}, {1.0}});
}

}  // namespace icc
