#include "icc/icc.hpp"

#include <algorithm>
#include <cmath>

#include "icc/errors.hpp"

namespace icc {
namespace {

std::set<std::string> mask_to_names(const EnumerableModel& model,
                                    uint64_t mask) {
  std::set<std::string> names;
  for (size_t i = 0; i < model.players.size(); ++i)
    if (mask & (uint64_t{1} << i)) names.insert(model.players[i]);
  return names;
}

void clip_scores(AttributionReport& report) {
  for (auto& [node, score] : report.scores) {
    report.raw_scores[node] = score;
    if (score < 0.0 && score > -report.tolerance) score = 0.0;
  }
}

// psi(target | conditioned components) of an exact joint.
double psi_given_components(const FiniteDist& joint, size_t target_component,
                            const std::vector<size_t>& conditioned,
                            Measure measure) {
  std::map<Outcome, FiniteDist> groups;
  std::map<Outcome, double> weights;
  for (const auto& [outcome, p] : joint.pmf()) {
    if (p <= 0.0) continue;
    Outcome key;
    for (size_t c : conditioned) key.push_back(outcome.at(c));
    auto [it, inserted] = groups.try_emplace(
        key, FiniteDist(std::vector<std::string>{"target"}));
    it->second.add({outcome.at(target_component)}, p);
    weights[key] += p;
  }
  double psi = 0.0;
  for (auto& [key, dist] : groups) {
    dist.normalize();
    psi += weights.at(key) * (measure == Measure::Entropy ? entropy_bits(dist)
                                                          : variance_of(dist));
  }
  return psi;
}

}  // namespace

void require_target_sink(const Fcm& fcm) {
  if (!fcm.dag.has_node(fcm.target)) throw UnknownNode(fcm.target);
  auto desc = descendants(fcm.dag, fcm.target);
  if (!desc.empty())
    throw ModelError("target '" + fcm.target +
                     "' has descendants; marginalize them out of the model "
                     "before attributing");
}

double icc_plain(const Fcm& fcm, Measure measure, const std::string& j,
                 const std::set<std::string>& noise_subset,
                 const EstimatorConfig& cfg) {
  if (noise_subset.count(j))
    throw ModelError("node '" + j + "' already in the conditioning set");
  require_target_sink(fcm);
  std::set<std::string> with = noise_subset;
  with.insert(j);
  return conditional_psi(fcm, measure, noise_subset, cfg) -
         conditional_psi(fcm, measure, with, cfg);
}

AttributionReport icc_plain_report(const Fcm& fcm, Measure measure,
                                   const std::vector<std::string>& ordering,
                                   const EstimatorConfig& cfg) {
  require_target_sink(fcm);
  std::vector<std::string> sorted = ordering;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> nodes = fcm.dag.nodes();
  std::vector<std::string> nodes_sorted = nodes;
  std::sort(nodes_sorted.begin(), nodes_sorted.end());
  if (sorted != nodes_sorted)
    throw ModelError("plain ordering must be a permutation of all nodes");

  AttributionReport report;
  report.nodes = ordering;
  report.measure = measure;
  report.seed = cfg.seed;
  report.method = cfg.method == EstimatorConfig::Method::Exact ? "exact"
                                                               : "monte_carlo";
  report.total = conditional_psi(fcm, measure, {}, cfg);
  std::set<std::string> context;
  for (const auto& node : ordering) {
    report.scores[node] = icc_plain(fcm, measure, node, context, cfg);
    context.insert(node);
  }
  double sum = 0.0;
  for (const auto& [_, s] : report.scores) sum += s;
  report.efficiency_residual = sum - report.total;
  clip_scores(report);
  return report;
}

AttributionReport icc_shapley_enumerable(const EnumerableModel& model,
                                         Measure measure,
                                         size_t exact_player_cap) {
  CoalitionFn nu(model.players.size(), [&model, measure](uint64_t mask) {
    return -psi_exact(model, measure, mask);
  });
  ShapleyResult shap = shapley_exact(nu, exact_player_cap);

  AttributionReport report;
  report.nodes = model.players;
  report.measure = measure;
  report.method = "exact";
  report.total = psi_exact(model, measure, 0);
  report.evaluations_used = shap.evaluations_used;
  double sum = 0.0;
  for (size_t i = 0; i < model.players.size(); ++i) {
    report.scores[model.players[i]] = shap.values[i];
    sum += shap.values[i];
  }
  report.efficiency_residual = sum - report.total;
  clip_scores(report);
  return report;
}

AttributionReport icc_shapley(const IccRequest& request) {
  const Fcm& fcm = request.fcm;
  require_valid(fcm);
  require_target_sink(fcm);

  bool mc = request.estimator.method == EstimatorConfig::Method::MonteCarlo;
  if (!mc && !request.permutation_sampling) {
    EnumerableModel model =
        enumerable_from_fcm(fcm, request.estimator.enumeration_cap);
    AttributionReport report = icc_shapley_enumerable(
        model, request.measure, request.exact_player_cap);
    report.seed = request.estimator.seed;
    return report;
  }

  EnumerableModel model;  // only populated for the exact-nu path
  if (!mc) model = enumerable_from_fcm(fcm, request.estimator.enumeration_cap);
  std::vector<std::string> players = fcm.dag.nodes();
  CoalitionFn nu(players.size(), [&](uint64_t mask) {
    if (!mc) return -psi_exact(model, request.measure, mask);
    std::set<std::string> names;
    for (size_t i = 0; i < players.size(); ++i)
      if (mask & (uint64_t{1} << i)) names.insert(players[i]);
    return -conditional_psi(fcm, request.measure, names, request.estimator);
  });

  ShapleyResult shap =
      request.permutation_sampling
          ? shapley_permutation(nu, request.permutations, request.shapley_seed)
          : shapley_exact(nu, request.exact_player_cap);

  AttributionReport report;
  report.nodes = players;
  report.measure = request.measure;
  report.method = mc ? "monte_carlo" : "permutation";
  report.seed = mc ? request.estimator.seed : request.shapley_seed;
  report.total = -nu(0);
  report.evaluations_used = shap.evaluations_used;
  // The exact-nu permutation path keeps the exact tolerance on efficiency
  // (it telescopes); the MC path gets a loose plug-in tolerance.
  report.tolerance = mc ? 3.0 * report.total /
                              std::sqrt(static_cast<double>(
                                  request.estimator.outer_samples *
                                  request.estimator.inner_samples)) +
                              0.05
                        : 1e-9;
  double sum = 0.0;
  for (size_t i = 0; i < players.size(); ++i) {
    report.scores[players[i]] = shap.values[i];
    sum += shap.values[i];
  }
  report.efficiency_residual = sum - report.total;
  clip_scores(report);
  return report;
}

double icc_via_interventions(const Fcm& fcm, Measure measure,
                             const std::string& j,
                             const std::set<std::string>& noise_subset,
                             size_t enumeration_cap) {
  if (noise_subset.count(j))
    throw ModelError("node '" + j + "' already in the conditioning set");
  require_target_sink(fcm);

  auto psi_sp = [&](const std::set<std::string>& intervened) {
    FiniteDist joint =
        exact_joint_structure_preserving(fcm, intervened, enumeration_cap);
    size_t target_idx = joint.index_of(fcm.target);
    std::vector<size_t> cond;
    for (const auto& node : intervened)
      cond.push_back(joint.index_of(noise_node_name(node)));
    return psi_given_components(joint, target_idx, cond, measure);
  };

  std::set<std::string> with = noise_subset;
  with.insert(j);
  return psi_sp(noise_subset) - psi_sp(with);
}

MarginalizationComparison compare_marginalization(
    const Fcm& fcm, const std::set<std::string>& hidden, Measure measure,
    size_t enumeration_cap) {
  require_valid(fcm);
  require_target_sink(fcm);
  for (const auto& h : hidden)
    if (!fcm.dag.has_node(h)) throw UnknownNode(h);
  if (hidden.count(fcm.target))
    throw InvalidAbstraction("cannot hide the target node");

  std::vector<std::string> retained;
  for (const auto& n : fcm.dag.nodes())
    if (!hidden.count(n)) retained.push_back(n);

  // Each hidden node's noise folds into the unique retained node it reaches
  // through hidden nodes only.
  std::map<std::string, std::vector<std::string>> folded;  // retained -> hidden
  for (const auto& h : fcm.dag.nodes()) {
    if (!hidden.count(h)) continue;
    std::set<std::string> reachable_retained;
    std::set<std::string> seen;
    std::vector<std::string> stack{h};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      for (const auto& c : fcm.dag.children(cur)) {
        if (!hidden.count(c)) {
          reachable_retained.insert(c);
        } else if (seen.insert(c).second) {
          stack.push_back(c);
        }
      }
    }
    if (reachable_retained.size() > 1)
      throw InvalidAbstraction("hidden node '" + h +
                               "' feeds more than one retained node; its "
                               "noise cannot be folded unambiguously");
    if (reachable_retained.size() == 1)
      folded[*reachable_retained.begin()].push_back(h);
    // Hidden nodes that reach no retained node are irrelevant and dropped.
  }

  // Build the marginalized model on compound noises.
  struct Component {
    std::string node;
    std::vector<Value> support;
    std::vector<double> probs;
  };
  std::vector<std::vector<Component>> compounds(retained.size());
  EnumerableModel marg;
  marg.players = retained;
  for (size_t i = 0; i < retained.size(); ++i) {
    std::vector<std::string> members = folded.count(retained[i])
                                           ? folded.at(retained[i])
                                           : std::vector<std::string>{};
    members.push_back(retained[i]);
    size_t size = 1;
    for (const auto& m : members) {
      const auto& spec = fcm.noise(m);
      if (!spec.finite())
        throw NotFinite("node '" + m + "' has continuous noise");
      compounds[i].push_back({m, spec.support(), spec.probs()});
      size *= compounds[i].back().support.size();
    }
    std::vector<double> probs(size);
    for (size_t code = 0; code < size; ++code) {
      size_t rest = code;
      double p = 1.0;
      for (const auto& comp : compounds[i]) {
        p *= comp.probs[rest % comp.support.size()];
        rest /= comp.support.size();
      }
      probs[code] = p;
    }
    marg.probs.push_back(std::move(probs));
  }

  auto decode = [&fcm, compounds, retained](const std::vector<size_t>& idx) {
    NoiseAssignment a;
    for (size_t i = 0; i < retained.size(); ++i) {
      size_t rest = idx[i];
      for (const auto& comp : compounds[i]) {
        a.emplace(comp.node, comp.support[rest % comp.support.size()]);
        rest /= comp.support.size();
      }
    }
    // Irrelevant hidden nodes cannot influence retained nodes; pin them.
    for (const auto& n : fcm.dag.nodes())
      if (!a.count(n)) a.emplace(n, fcm.noise(n).support().front());
    return a;
  };
  Fcm copy = fcm;
  marg.target = [copy, decode](const std::vector<size_t>& idx) {
    return evaluate_all(copy, decode(idx)).at(copy.target);
  };
  if (marg.configurations() > enumeration_cap)
    throw CapExceeded("marginalized joint support exceeds cap");

  MarginalizationComparison out;
  IccRequest req;
  req.fcm = fcm;
  req.measure = measure;
  req.estimator.enumeration_cap = enumeration_cap;
  out.original = icc_shapley(req);
  out.marginalized = icc_shapley_enumerable(marg, measure);
  for (const auto& r : retained)
    out.deltas[r] = out.marginalized.scores.at(r) - out.original.scores.at(r);

  // Sanity: the two descriptions induce the same joint over retained nodes.
  FiniteDist original_joint = exact_joint(fcm, {}, enumeration_cap);
  std::vector<size_t> retained_idx;
  for (const auto& r : retained)
    retained_idx.push_back(original_joint.index_of(r));
  FiniteDist marg_joint(retained);
  for_each_config(marg, [&](const std::vector<size_t>& idx, double p) {
    if (p <= 0.0) return;
    auto values = evaluate_all(fcm, decode(idx));
    Outcome o;
    for (const auto& r : retained) o.push_back(values.at(r));
    marg_joint.add(o, p);
  });
  out.retained_joint_tv =
      original_joint.marginal(retained_idx).total_variation(marg_joint);
  return out;
}

Fcm insert_copy_node(const Fcm& fcm, const std::string& tail,
                     const std::string& head, const std::string& copy_name) {
  if (!fcm.dag.has_edge(tail, head)) throw UnknownEdge(tail, head);
  if (fcm.dag.has_node(copy_name))
    throw ModelError("node '" + copy_name + "' already exists");

  Fcm out;
  for (const auto& n : fcm.dag.nodes()) {
    if (n == head) {
      std::vector<std::string> parents = fcm.dag.parents(n);
      std::replace(parents.begin(), parents.end(), tail, copy_name);
      out.dag.add_node(copy_name, {tail});
      out.mechanisms.emplace(copy_name, parse("pa." + tail));
      out.noises.emplace(copy_name, point_mass(Value(int64_t{0})));
      out.dag.add_node(n, parents);
      out.mechanisms.emplace(n,
                             substitute_parent(fcm.mechanism(n), tail, copy_name));
      out.noises.emplace(n, fcm.noise(n));
    } else {
      out.dag.add_node(n, fcm.dag.parents(n));
      out.mechanisms.emplace(n, fcm.mechanism(n));
      out.noises.emplace(n, fcm.noise(n));
    }
  }
  out.target = fcm.target;
  return out;
}

}  // namespace icc
