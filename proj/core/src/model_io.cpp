#include "icc/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "icc/errors.hpp"

namespace icc {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void reject_unknown_fields(const json& obj, const char* ctx,
                           std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw ModelError(std::string("unknown field '") + key + "' in " + ctx);
  }
}

Value parse_value(const json& j) {
  if (j.is_number_integer()) return Value(j.get<int64_t>());
  if (j.is_number_float()) return Value(j.get<double>());
  if (j.is_string()) return Value(j.get<std::string>());
  throw ModelError("values must be integers, reals or strings, got " +
                   j.dump());
}

json value_to_json(const Value& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_real()) return v.as_real();
  return v.as_label();
}

NoiseSpec parse_noise(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw ModelError("noise must be an object with a 'type' field");
  std::string type = j.at("type").get<std::string>();
  if (type == "categorical") {
    reject_unknown_fields(j, "noise", {"type", "support", "probs"});
    Categorical c;
    for (const auto& v : j.at("support")) c.support.push_back(parse_value(v));
    c.probs = j.at("probs").get<std::vector<double>>();
    return NoiseSpec(c);
  }
  if (type == "discrete_uniform") {
    reject_unknown_fields(j, "noise", {"type", "lo", "hi"});
    return NoiseSpec(
        DiscreteUniform{j.at("lo").get<int64_t>(), j.at("hi").get<int64_t>()});
  }
  if (type == "bernoulli") {
    reject_unknown_fields(j, "noise", {"type", "p"});
    return NoiseSpec(Bernoulli{j.at("p").get<double>()});
  }
  if (type == "normal") {
    reject_unknown_fields(j, "noise", {"type", "mean", "stddev"});
    return NoiseSpec(
        Normal{j.at("mean").get<double>(), j.at("stddev").get<double>()});
  }
  if (type == "continuous_uniform") {
    reject_unknown_fields(j, "noise", {"type", "lo", "hi"});
    return NoiseSpec(
        ContinuousUniform{j.at("lo").get<double>(), j.at("hi").get<double>()});
  }
  throw ModelError("unknown noise type '" + type + "'");
}

json noise_to_json(const NoiseSpec& spec) {
  json out;
  std::visit(
      [&out](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          out["type"] = "categorical";
          out["support"] = json::array();
          for (const auto& v : s.support)
            out["support"].push_back(value_to_json(v));
          out["probs"] = s.probs;
        } else if constexpr (std::is_same_v<T, DiscreteUniform>) {
          out["type"] = "discrete_uniform";
          out["lo"] = s.lo;
          out["hi"] = s.hi;
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          out["type"] = "bernoulli";
          out["p"] = s.p;
        } else if constexpr (std::is_same_v<T, Normal>) {
          out["type"] = "normal";
          out["mean"] = s.mean;
          out["stddev"] = s.stddev;
        } else {
          out["type"] = "continuous_uniform";
          out["lo"] = s.lo;
          out["hi"] = s.hi;
        }
      },
      spec.spec());
  return out;
}

}  // namespace

Fcm parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0, 0);
  }
  try {
    if (!doc.is_object()) throw ModelError("model must be a JSON object");
    reject_unknown_fields(doc, "model", {"version", "nodes", "target"});
    if (doc.at("version").get<int>() != 1)
      throw ModelError("unsupported model version");

    Fcm fcm;
    for (const auto& node : doc.at("nodes")) {
      reject_unknown_fields(node, "node",
                            {"name", "parents", "mechanism", "noise"});
      std::string name = node.at("name").get<std::string>();
      std::vector<std::string> parents;
      if (node.contains("parents"))
        parents = node.at("parents").get<std::vector<std::string>>();
      fcm.dag.add_node(name, parents);
      fcm.mechanisms.emplace(name,
                             parse(node.at("mechanism").get<std::string>()));
      fcm.noises.emplace(name, parse_noise(node.at("noise")));
    }
    fcm.target = doc.at("target").get<std::string>();
    return fcm;
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model document: ") + e.what());
  }
}

Fcm load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot read model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string serialize_model(const Fcm& fcm) {
  ordered_json doc;
  doc["version"] = 1;
  doc["nodes"] = ordered_json::array();
  for (const auto& name : fcm.dag.nodes()) {
    ordered_json node;
    node["name"] = name;
    node["parents"] = fcm.dag.parents(name);
    node["mechanism"] = print(fcm.mechanism(name));
    node["noise"] = noise_to_json(fcm.noise(name));
    doc["nodes"].push_back(node);
  }
  doc["target"] = fcm.target;
  return doc.dump(2);
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot read file '" + path + "'");
  uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<uint8_t>(c);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace icc
