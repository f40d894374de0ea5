#include "icc/fcm.hpp"

#include <algorithm>

#include "icc/errors.hpp"

namespace icc {

const ExprPtr& Fcm::mechanism(const std::string& node) const {
  auto it = mechanisms.find(node);
  if (it == mechanisms.end()) throw UnknownNode(node);
  return it->second;
}

const NoiseSpec& Fcm::noise(const std::string& node) const {
  auto it = noises.find(node);
  if (it == noises.end()) throw UnknownNode(node);
  return it->second;
}

std::vector<Diagnostic> validate(const Fcm& fcm) {
  std::vector<Diagnostic> out;
  try {
    fcm.dag.check_references();
  } catch (const Error& e) {
    out.push_back({"UnknownParent", e.what()});
    return out;
  }
  try {
    topo_sort(fcm.dag);
  } catch (const CycleError& e) {
    out.push_back({"CycleError", e.what()});
    return out;
  }
  if (!fcm.dag.has_node(fcm.target))
    out.push_back({"UnknownTarget", "target '" + fcm.target + "' not in dag"});
  for (const auto& node : fcm.dag.nodes()) {
    if (!fcm.mechanisms.count(node)) {
      out.push_back({"MissingMechanism", "node '" + node + "'"});
      continue;
    }
    if (!fcm.noises.count(node)) {
      out.push_back({"MissingNoise", "node '" + node + "'"});
      continue;
    }
    try {
      fcm.noise(node).check();
    } catch (const Error& e) {
      out.push_back({"BadDistribution",
                     "node '" + node + "': " + std::string(e.what())});
    }
    const auto& parents = fcm.dag.parents(node);
    for (const auto& sym : free_symbols(fcm.mechanism(node))) {
      if (sym == "n") continue;
      std::string ref = sym.substr(3);  // strip "pa."
      if (std::find(parents.begin(), parents.end(), ref) == parents.end())
        out.push_back({"UnknownParentRef",
                       "node '" + node + "' references pa." + ref +
                           " which is not a parent"});
    }
  }
  return out;
}

void require_valid(const Fcm& fcm) {
  auto diags = validate(fcm);
  if (diags.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& d : diags) msg += "\n  " + d.code + ": " + d.message;
  throw ModelError(msg);
}

std::map<std::string, Value> evaluate_all(const Fcm& fcm,
                                          const NoiseAssignment& noise) {
  std::map<std::string, Value> values;
  for (const auto& node : topo_sort(fcm.dag)) {
    auto nit = noise.find(node);
    if (nit == noise.end())
      throw ModelError("noise assignment missing node '" + node + "'");
    std::map<std::string, Value> parent_values;
    for (const auto& p : fcm.dag.parents(node))
      parent_values.emplace(p, values.at(p));
    try {
      values.emplace(node, eval(fcm.mechanism(node), parent_values, nit->second));
    } catch (const Error& e) {
      throw ModelError("evaluating node '" + node + "': " +
                       std::string(e.what()));
    }
  }
  return values;
}

std::function<Value(const NoiseAssignment&)> resolve_target(const Fcm& fcm) {
  require_valid(fcm);
  // Precompute the order once; evaluation then walks mechanisms directly.
  auto order = topo_sort(fcm.dag);
  Fcm copy = fcm;
  return [copy = std::move(copy), order](const NoiseAssignment& noise) {
    std::map<std::string, Value> values;
    for (const auto& node : order) {
      auto nit = noise.find(node);
      if (nit == noise.end())
        throw ModelError("noise assignment missing node '" + node + "'");
      std::map<std::string, Value> parent_values;
      for (const auto& p : copy.dag.parents(node))
        parent_values.emplace(p, values.at(p));
      try {
        values.emplace(node,
                       eval(copy.mechanism(node), parent_values, nit->second));
      } catch (const Error& e) {
        throw ModelError("evaluating node '" + node + "': " +
                         std::string(e.what()));
      }
    }
    return values.at(copy.target);
  };
}

std::vector<std::pair<NoiseAssignment, double>> enumerate_noise_support(
    const Fcm& fcm, size_t cap) {
  const auto& nodes = fcm.dag.nodes();
  std::vector<std::vector<Value>> supports;
  std::vector<std::vector<double>> probs;
  size_t total = 1;
  for (const auto& node : nodes) {
    const auto& spec = fcm.noise(node);
    if (!spec.finite())
      throw NotFinite("node '" + node + "' has continuous noise");
    supports.push_back(spec.support());
    probs.push_back(spec.probs());
    if (total > cap / supports.back().size() &&
        total * supports.back().size() > cap)
      throw CapExceeded("joint noise support exceeds cap of " +
                        std::to_string(cap));
    total *= supports.back().size();
  }

  std::vector<std::pair<NoiseAssignment, double>> out;
  out.reserve(total);
  std::vector<size_t> idx(nodes.size(), 0);
  for (size_t k = 0; k < total; ++k) {
    NoiseAssignment a;
    double p = 1.0;
    for (size_t i = 0; i < nodes.size(); ++i) {
      a.emplace(nodes[i], supports[i][idx[i]]);
      p *= probs[i][idx[i]];
    }
    out.emplace_back(std::move(a), p);
    for (size_t i = nodes.size(); i-- > 0;) {
      if (++idx[i] < supports[i].size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

size_t SampleBatch::rows() const {
  if (columns.empty()) return 0;
  return data.at(columns.front()).size();
}

uint64_t derive_seed(uint64_t seed, const std::string& tag, uint64_t index) {
  // splitmix64 over a FNV-1a combination of the inputs.
  uint64_t h = 1469598103934665603ull;
  auto mix_byte = [&h](uint8_t b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<uint8_t>(seed >> (8 * i)));
  for (char c : tag) mix_byte(static_cast<uint8_t>(c));
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<uint8_t>(index >> (8 * i)));
  uint64_t z = h + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

SampleBatch sample_impl(const Fcm& fcm,
                        const std::map<std::string, Value>& do_assignments,
                        const std::set<std::string>& sp_nodes, size_t count,
                        uint64_t seed, SampleBatch::Kind kind,
                        const std::string& tag) {
  require_valid(fcm);
  for (const auto& [node, value] : do_assignments)
    if (!fcm.dag.has_node(node)) throw UnknownNode(node);
  for (const auto& node : sp_nodes)
    if (!fcm.dag.has_node(node)) throw UnknownNode(node);

  auto order = topo_sort(fcm.dag);
  SampleBatch batch;
  batch.seed = seed;
  batch.kind = kind;
  batch.do_assignments = do_assignments;
  batch.sp_nodes.assign(sp_nodes.begin(), sp_nodes.end());
  batch.columns = fcm.dag.nodes();
  for (const auto& n : batch.sp_nodes)
    batch.columns.push_back(noise_node_name(n));
  for (const auto& c : batch.columns) batch.data[c] = {};

  for (size_t row = 0; row < count; ++row) {
    std::mt19937_64 rng(derive_seed(seed, tag, row));
    std::map<std::string, Value> values;
    std::map<std::string, Value> fresh;
    for (const auto& node : order) {
      // The base draw happens for every node so that interventions never
      // shift the stream of downstream nodes.
      Value noise = fcm.noise(node).sample(rng);
      if (sp_nodes.count(node)) {
        noise = fcm.noise(node).sample(rng);
        fresh.emplace(node, noise);
      }
      auto dit = do_assignments.find(node);
      if (dit != do_assignments.end()) {
        values.emplace(node, dit->second);
        continue;
      }
      std::map<std::string, Value> parent_values;
      for (const auto& p : fcm.dag.parents(node))
        parent_values.emplace(p, values.at(p));
      try {
        values.emplace(node, eval(fcm.mechanism(node), parent_values, noise));
      } catch (const Error& e) {
        throw ModelError("evaluating node '" + node + "': " +
                         std::string(e.what()));
      }
    }
    for (const auto& node : fcm.dag.nodes())
      batch.data[node].push_back(values.at(node));
    for (const auto& node : batch.sp_nodes)
      batch.data[noise_node_name(node)].push_back(fresh.at(node));
  }
  return batch;
}

}  // namespace

SampleBatch sample_observational(const Fcm& fcm, size_t count, uint64_t seed) {
  return sample_impl(fcm, {}, {}, count, seed,
                     SampleBatch::Kind::Observational, "sample");
}

SampleBatch sample_do(const Fcm& fcm,
                      const std::map<std::string, Value>& assignments,
                      size_t count, uint64_t seed) {
  return sample_impl(fcm, assignments, {}, count, seed, SampleBatch::Kind::Do,
                     "sample");
}

SampleBatch sample_structure_preserving(const Fcm& fcm,
                                        const std::set<std::string>& nodes,
                                        size_t count, uint64_t seed) {
  return sample_impl(fcm, {}, nodes, count, seed,
                     SampleBatch::Kind::StructurePreserving, "sample");
}

}  // namespace icc
