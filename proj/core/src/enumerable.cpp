#include "icc/enumerable.hpp"

#include "icc/errors.hpp"

namespace icc {

size_t EnumerableModel::configurations() const {
  size_t total = 1;
  for (const auto& p : probs) total *= p.size();
  return total;
}

uint64_t EnumerableModel::mask_of(const std::set<std::string>& names) const {
  uint64_t mask = 0;
  for (const auto& name : names) {
    bool found = false;
    for (size_t i = 0; i < players.size(); ++i) {
      if (players[i] == name) {
        mask |= uint64_t{1} << i;
        found = true;
        break;
      }
    }
    if (!found) throw UnknownNode(name);
  }
  return mask;
}

EnumerableModel enumerable_from_fcm(const Fcm& fcm, size_t cap) {
  require_valid(fcm);
  EnumerableModel model;
  model.players = fcm.dag.nodes();
  std::vector<std::vector<Value>> supports;
  size_t total = 1;
  for (const auto& node : model.players) {
    const auto& spec = fcm.noise(node);
    if (!spec.finite())
      throw NotFinite("node '" + node + "' has continuous noise");
    supports.push_back(spec.support());
    model.probs.push_back(spec.probs());
    size_t k = supports.back().size();
    if (total > cap / k && total * k > cap)
      throw CapExceeded("joint noise support exceeds cap");
    total *= k;
  }
  auto order = topo_sort(fcm.dag);
  Fcm copy = fcm;
  model.target = [copy = std::move(copy), supports,
                  players = model.players](const std::vector<size_t>& idx) {
    NoiseAssignment a;
    for (size_t i = 0; i < players.size(); ++i)
      a.emplace(players[i], supports[i][idx[i]]);
    return evaluate_all(copy, a).at(copy.target);
  };
  return model;
}

void for_each_config(
    const EnumerableModel& model,
    const std::function<void(const std::vector<size_t>&, double)>& fn) {
  size_t n = model.probs.size();
  std::vector<size_t> idx(n, 0);
  size_t total = model.configurations();
  for (size_t k = 0; k < total; ++k) {
    double p = 1.0;
    for (size_t i = 0; i < n; ++i) p *= model.probs[i][idx[i]];
    fn(idx, p);
    for (size_t i = n; i-- > 0;) {
      if (++idx[i] < model.probs[i].size()) break;
      idx[i] = 0;
    }
  }
}

FiniteDist exact_joint(const Fcm& fcm,
                       const std::map<std::string, Value>& do_assignments,
                       size_t cap) {
  require_valid(fcm);
  for (const auto& [node, _] : do_assignments)
    if (!fcm.dag.has_node(node)) throw UnknownNode(node);

  auto order = topo_sort(fcm.dag);
  FiniteDist out(fcm.dag.nodes());
  for (const auto& [assignment, prob] : enumerate_noise_support(fcm, cap)) {
    std::map<std::string, Value> values;
    for (const auto& node : order) {
      auto dit = do_assignments.find(node);
      if (dit != do_assignments.end()) {
        values.emplace(node, dit->second);
        continue;
      }
      std::map<std::string, Value> parent_values;
      for (const auto& p : fcm.dag.parents(node))
        parent_values.emplace(p, values.at(p));
      values.emplace(node, eval(fcm.mechanism(node), parent_values,
                                assignment.at(node)));
    }
    Outcome o;
    for (const auto& node : fcm.dag.nodes()) o.push_back(values.at(node));
    out.add(o, prob);
  }
  return out;
}

FiniteDist exact_joint_structure_preserving(const Fcm& fcm,
                                            const std::set<std::string>& nodes,
                                            size_t cap) {
  require_valid(fcm);
  for (const auto& node : nodes)
    if (!fcm.dag.has_node(node)) throw UnknownNode(node);

  auto order = topo_sort(fcm.dag);
  std::vector<std::string> vars = fcm.dag.nodes();
  std::vector<std::string> sp(nodes.begin(), nodes.end());
  for (const auto& n : sp) vars.push_back(noise_node_name(n));
  FiniteDist out(vars);

  // Enumerate the base noises jointly with an independent fresh copy per
  // intervened node.
  std::vector<std::string> fresh_players;
  std::vector<std::vector<Value>> fresh_support;
  std::vector<std::vector<double>> fresh_probs;
  size_t fresh_total = 1;
  for (const auto& n : sp) {
    const auto& spec = fcm.noise(n);
    if (!spec.finite())
      throw NotFinite("node '" + n + "' has continuous noise");
    fresh_players.push_back(n);
    fresh_support.push_back(spec.support());
    fresh_probs.push_back(spec.probs());
    fresh_total *= fresh_support.back().size();
  }

  for (const auto& [assignment, base_prob] : enumerate_noise_support(fcm, cap)) {
    std::vector<size_t> idx(sp.size(), 0);
    for (size_t k = 0; k < fresh_total; ++k) {
      double prob = base_prob;
      std::map<std::string, Value> fresh;
      for (size_t i = 0; i < sp.size(); ++i) {
        fresh.emplace(fresh_players[i], fresh_support[i][idx[i]]);
        prob *= fresh_probs[i][idx[i]];
      }
      std::map<std::string, Value> values;
      for (const auto& node : order) {
        std::map<std::string, Value> parent_values;
        for (const auto& p : fcm.dag.parents(node))
          parent_values.emplace(p, values.at(p));
        const Value& noise =
            fresh.count(node) ? fresh.at(node) : assignment.at(node);
        values.emplace(node, eval(fcm.mechanism(node), parent_values, noise));
      }
      Outcome o;
      for (const auto& node : fcm.dag.nodes()) o.push_back(values.at(node));
      for (const auto& n : sp) o.push_back(fresh.at(n));
      out.add(o, prob);

      for (size_t i = sp.size(); i-- > 0;) {
        if (++idx[i] < fresh_support[i].size()) break;
        idx[i] = 0;
      }
      if (sp.empty()) break;
    }
  }
  return out;
}

}  // namespace icc
