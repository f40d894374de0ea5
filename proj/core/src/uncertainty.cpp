#include "icc/uncertainty.hpp"

#include <cmath>
#include <map>

#include "icc/errors.hpp"

namespace icc {
namespace {

double psi_of_dist(const FiniteDist& dist, Measure measure) {
  if (measure == Measure::Entropy) return entropy_bits(dist);
  return variance_of(dist);
}

bool has_continuous_noise(const Fcm& fcm) {
  for (const auto& node : fcm.dag.nodes())
    if (!fcm.noise(node).finite()) return true;
  return false;
}

double plug_in_psi(const std::vector<Value>& samples, Measure measure) {
  if (samples.empty()) return 0.0;
  if (measure == Measure::Entropy) {
    std::map<Value, size_t> counts;
    for (const auto& v : samples) ++counts[v];
    double n = static_cast<double>(samples.size());
    double h = 0.0;
    for (const auto& [_, c] : counts) {
      double p = static_cast<double>(c) / n;
      h -= p * std::log2(p);
    }
    return h;
  }
  double mean = 0.0;
  for (const auto& v : samples) mean += v.as_real();
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (const auto& v : samples) {
    double d = v.as_real() - mean;
    var += d * d;
  }
  return var / static_cast<double>(samples.size());
}

double conditional_psi_mc(const Fcm& fcm, Measure measure,
                          const std::set<std::string>& T,
                          const EstimatorConfig& cfg) {
  if (measure == Measure::Entropy && has_continuous_noise(fcm))
    throw ContinuousEntropyUnsupported();
  if (cfg.outer_samples < 1 || cfg.inner_samples < 1)
    throw ModelError("monte carlo sample counts must be >= 1");
  require_valid(fcm);
  auto order = topo_sort(fcm.dag);

  double total = 0.0;
  for (size_t outer = 0; outer < cfg.outer_samples; ++outer) {
    std::mt19937_64 outer_rng(derive_seed(cfg.seed, "psi-outer", outer));
    NoiseAssignment conditioned;
    for (const auto& node : order)
      if (T.count(node)) conditioned.emplace(node, fcm.noise(node).sample(outer_rng));

    std::vector<Value> targets;
    targets.reserve(cfg.inner_samples);
    for (size_t inner = 0; inner < cfg.inner_samples; ++inner) {
      std::mt19937_64 inner_rng(derive_seed(
          cfg.seed, "psi-inner", outer * cfg.inner_samples + inner));
      NoiseAssignment assignment = conditioned;
      for (const auto& node : order)
        if (!T.count(node))
          assignment.emplace(node, fcm.noise(node).sample(inner_rng));
      targets.push_back(evaluate_all(fcm, assignment).at(fcm.target));
    }
    total += plug_in_psi(targets, measure);
  }
  return total / static_cast<double>(cfg.outer_samples);
}

}  // namespace

double psi_exact(const EnumerableModel& model, Measure measure,
                 uint64_t mask) {
  // Group configurations by the conditioned players' indices; psi is the
  // probability-weighted uncertainty of the conditional target law.
  std::map<std::vector<size_t>, FiniteDist> groups;
  std::map<std::vector<size_t>, double> weights;
  for_each_config(model, [&](const std::vector<size_t>& idx, double p) {
    if (p <= 0.0) return;
    std::vector<size_t> key;
    for (size_t i = 0; i < model.players.size(); ++i)
      if (mask & (uint64_t{1} << i)) key.push_back(idx[i]);
    auto [it, inserted] = groups.try_emplace(
        key, FiniteDist(std::vector<std::string>{"target"}));
    it->second.add({model.target(idx)}, p);
    weights[key] += p;
  });

  double psi = 0.0;
  for (auto& [key, dist] : groups) {
    double w = weights.at(key);
    if (w <= 0.0) continue;
    dist.normalize();
    psi += w * psi_of_dist(dist, Measure(measure));
  }
  return psi;
}

double conditional_psi(const Fcm& fcm, Measure measure,
                       const std::set<std::string>& noise_subset,
                       const EstimatorConfig& cfg) {
  for (const auto& node : noise_subset)
    if (!fcm.dag.has_node(node)) throw UnknownNode(node);
  if (cfg.method == EstimatorConfig::Method::MonteCarlo)
    return conditional_psi_mc(fcm, measure, noise_subset, cfg);
  EnumerableModel model = enumerable_from_fcm(fcm, cfg.enumeration_cap);
  return psi_exact(model, measure, model.mask_of(noise_subset));
}

}  // namespace icc
