// Command-line front end: validate models, draw samples, compute
// attributions and baseline measures, emit deterministic JSON/CSV reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <icc/baselines.hpp>
#include <icc/errors.hpp>
#include <icc/icc.hpp>
#include <icc/model_io.hpp>
#include <icc/shapley_flow.hpp>

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kReportVersion = 1;

// 17 significant digits round-trip any double.
std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json value_to_json(const icc::Value& v) {
  if (v.is_int()) return v.as_int();
  if (v.is_real()) return v.as_real();
  return v.as_label();
}

// "node=value" with value parsed as int, then real, then label.
std::pair<std::string, icc::Value> parse_assignment(const std::string& text) {
  auto pos = text.find('=');
  if (pos == std::string::npos || pos == 0)
    throw icc::ModelError("expected node=value, got '" + text + "'");
  std::string node = text.substr(0, pos);
  std::string raw = text.substr(pos + 1);
  try {
    size_t used = 0;
    long long i = std::stoll(raw, &used);
    if (used == raw.size()) return {node, icc::Value(int64_t{i})};
  } catch (const std::exception&) {
  }
  try {
    size_t used = 0;
    double d = std::stod(raw, &used);
    if (used == raw.size()) return {node, icc::Value(d)};
  } catch (const std::exception&) {
  }
  return {node, icc::Value(raw)};
}

std::map<std::string, icc::Value> parse_assignments(
    const std::vector<std::string>& items) {
  std::map<std::string, icc::Value> out;
  for (const auto& item : items) out.insert(parse_assignment(item));
  return out;
}

json report_header(const std::string& command, const std::string& model_path) {
  json j;
  j["report_version"] = kReportVersion;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["model_hash"] = icc::file_hash(model_path);
  return j;
}

json attribution_to_json(const icc::AttributionReport& report) {
  json j;
  j["measure"] =
      report.measure == icc::Measure::Entropy ? "entropy" : "variance";
  j["method"] = report.method;
  j["seed"] = report.seed;
  j["tolerance"] = report.tolerance;
  j["total"] = report.total;
  json scores = json::object();
  json raw = json::object();
  for (const auto& n : report.nodes) {
    scores[n] = report.scores.at(n);
    raw[n] = report.raw_scores.at(n);
  }
  j["scores"] = scores;
  j["raw_scores"] = raw;
  j["efficiency_residual"] = report.efficiency_residual;
  j["evaluations_used"] = report.evaluations_used;
  return j;
}

json flow_to_json(const icc::FlowAttribution& flow) {
  json j;
  json paths = json::array();
  for (size_t i = 0; i < flow.paths.size(); ++i) {
    json edges = json::array();
    for (const auto& [t, h] : flow.paths[i]) edges.push_back({t, h});
    paths.push_back({{"edges", edges}, {"score", flow.path_scores[i]}});
  }
  j["paths"] = paths;
  json edges = json::array();
  for (const auto& [e, s] : flow.edge_scores)
    edges.push_back({{"tail", e.first}, {"head", e.second}, {"score", s}});
  j["edge_scores"] = edges;
  j["data_side"] = flow.boundary.data_side;
  j["model_side"] = flow.boundary.model_side;
  j["orderings_used"] = flow.orderings_used;
  j["sampled"] = flow.sampled;
  j["seed"] = flow.seed;
  return j;
}

void emit(const json& j, const std::string& output_path) {
  std::string text = j.dump(2);
  text.push_back('\n');
  if (output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw icc::ModelError("cannot write '" + output_path + "'");
    out << text;
  }
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += "\"\"";
    else quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

std::string value_to_csv(const icc::Value& v) {
  if (v.is_real()) return format_real(v.as_real());
  return csv_quote(v.str());
}

void emit_csv(const icc::SampleBatch& batch, const std::string& output_path) {
  std::ostringstream out;
  for (size_t c = 0; c < batch.columns.size(); ++c) {
    if (c) out << ',';
    out << csv_quote(batch.columns[c]);
  }
  out << "\r\n";
  for (size_t r = 0; r < batch.rows(); ++r) {
    for (size_t c = 0; c < batch.columns.size(); ++c) {
      if (c) out << ',';
      out << value_to_csv(batch.data.at(batch.columns[c])[r]);
    }
    out << "\r\n";
  }
  if (output_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(output_path, std::ios::binary);
    if (!f) throw icc::ModelError("cannot write '" + output_path + "'");
    f << out.str();
  }
}

int cmd_validate(const std::string& model_path) {
  icc::Fcm fcm = icc::load_model(model_path);
  auto diagnostics = icc::validate(fcm);
  if (diagnostics.empty()) {
    json j = report_header("validate", model_path);
    j["valid"] = true;
    emit(j, "");
    return 0;
  }
  json out;
  out["valid"] = false;
  json list = json::array();
  for (const auto& d : diagnostics)
    list.push_back({{"code", d.code}, {"message", d.message}});
  out["diagnostics"] = list;
  std::cerr << out.dump(2) << "\n";
  return 1;
}

struct IccFlags {
  std::string model_path;
  std::string measure = "entropy";
  std::string method = "exact";
  uint64_t seed = 0;
  size_t permutations = 2000;
  size_t samples = 1000;
  std::string output;
};

int cmd_icc(const IccFlags& flags) {
  icc::IccRequest request;
  request.fcm = icc::load_model(flags.model_path);
  request.measure = flags.measure == "variance" ? icc::Measure::Variance
                                                : icc::Measure::Entropy;
  request.shapley_seed = flags.seed;
  request.permutations = flags.permutations;
  request.estimator.seed = flags.seed;
  request.estimator.outer_samples = flags.samples;
  request.estimator.inner_samples = flags.samples;
  if (flags.method == "exact") {
    request.estimator.method = icc::EstimatorConfig::Method::Exact;
  } else if (flags.method == "permutation") {
    request.estimator.method = icc::EstimatorConfig::Method::Exact;
    request.permutation_sampling = true;
  } else {  // mc
    request.estimator.method = icc::EstimatorConfig::Method::MonteCarlo;
  }
  icc::AttributionReport report = icc::icc_shapley(request);

  json j = report_header("icc", flags.model_path);
  j.update(attribution_to_json(report));
  emit(j, flags.output);
  return 0;
}

struct BaselineFlags {
  std::string model_path;
  std::string which;
  std::vector<std::string> a, b, s;
  std::vector<std::string> set;  // fixed x_S values for info-flow
  bool do_average = false;
  std::string edge;  // tail:head
  std::string variant = "uncertainty";
  std::string measure = "entropy";
  std::vector<std::string> observation;
  std::vector<std::string> foreground, background;
  std::string uncertainty;  // entropy|variance selects the augmented flow
  std::vector<std::string> data_side, model_side;
  uint64_t seed = 0;
  std::string output;
};

int cmd_baseline(const BaselineFlags& flags) {
  icc::Fcm fcm = icc::load_model(flags.model_path);
  icc::require_valid(fcm);
  json j = report_header("baseline", flags.model_path);
  j["which"] = flags.which;

  if (flags.which == "info-flow") {
    std::set<std::string> a(flags.a.begin(), flags.a.end());
    std::set<std::string> b(flags.b.begin(), flags.b.end());
    std::set<std::string> s(flags.s.begin(), flags.s.end());
    double bits;
    if (flags.do_average || s.empty()) {
      bits = icc::information_flow_averaged(fcm, a, b, s);
      j["averaged"] = true;
    } else {
      bits = icc::information_flow(fcm, a, b, s, parse_assignments(flags.set));
      j["averaged"] = false;
    }
    j["bits"] = bits;
  } else if (flags.which == "strength") {
    auto pos = flags.edge.find(':');
    if (pos == std::string::npos)
      throw icc::ModelError("--edge expects tail:head");
    std::string tail = flags.edge.substr(0, pos);
    std::string head = flags.edge.substr(pos + 1);
    j["edge"] = {tail, head};
    j["bits"] = icc::causal_strength_edge(fcm, tail, head);
  } else if (flags.which == "causal-shapley") {
    icc::AttributionReport report;
    if (flags.variant == "expectation") {
      report = icc::causal_shapley_expectation(
          fcm, parse_assignments(flags.observation));
    } else {
      report = icc::causal_shapley_uncertainty(
          fcm, flags.measure == "variance" ? icc::Measure::Variance
                                           : icc::Measure::Entropy);
    }
    j["variant"] = flags.variant;
    j.update(attribution_to_json(report));
  } else if (flags.which == "shapley-flow") {
    icc::FlowConfig cfg;
    cfg.seed = flags.seed;
    icc::FlowAttribution flow;
    if (!flags.uncertainty.empty()) {
      flow = icc::shapley_flow_uncertainty(
          fcm,
          flags.uncertainty == "variance" ? icc::Measure::Variance
                                          : icc::Measure::Entropy,
          cfg);
      j["metric"] = "uncertainty-" + flags.uncertainty;
    } else {
      icc::Boundary boundary;
      if (flags.data_side.empty() && flags.model_side.empty()) {
        for (const auto& r : fcm.dag.roots()) boundary.data_side.insert(r);
        for (const auto& n : fcm.dag.nodes())
          if (!boundary.data_side.count(n)) boundary.model_side.insert(n);
      } else {
        boundary.data_side.insert(flags.data_side.begin(), flags.data_side.end());
        boundary.model_side.insert(flags.model_side.begin(),
                                   flags.model_side.end());
      }
      flow = icc::shapley_flow_value(fcm, boundary,
                                     parse_assignments(flags.foreground),
                                     parse_assignments(flags.background), cfg);
      j["metric"] = "value";
    }
    j.update(flow_to_json(flow));
  } else {
    throw icc::ModelError("unknown baseline '" + flags.which + "'");
  }
  j["seed"] = flags.seed;
  j["tolerance"] = 1e-9;
  emit(j, flags.output);
  return 0;
}

struct SampleFlags {
  std::string model_path;
  size_t count = 10;
  uint64_t seed = 0;
  std::vector<std::string> do_assignments;
  std::vector<std::string> structure_preserving;
  std::string format = "csv";
  std::string output;
};

int cmd_sample(const SampleFlags& flags) {
  icc::Fcm fcm = icc::load_model(flags.model_path);
  icc::require_valid(fcm);
  if (!flags.do_assignments.empty() && !flags.structure_preserving.empty())
    throw icc::ModelError(
        "--do and --structure-preserving are mutually exclusive");

  icc::SampleBatch batch;
  if (!flags.do_assignments.empty()) {
    batch = icc::sample_do(fcm, parse_assignments(flags.do_assignments),
                           flags.count, flags.seed);
  } else if (!flags.structure_preserving.empty()) {
    std::set<std::string> nodes(flags.structure_preserving.begin(),
                                flags.structure_preserving.end());
    batch = icc::sample_structure_preserving(fcm, nodes, flags.count, flags.seed);
  } else {
    batch = icc::sample_observational(fcm, flags.count, flags.seed);
  }

  if (flags.format == "csv") {
    emit_csv(batch, flags.output);
    return 0;
  }
  json j = report_header("sample", flags.model_path);
  j["seed"] = batch.seed;
  j["count"] = batch.rows();
  j["columns"] = batch.columns;
  json rows = json::array();
  for (size_t r = 0; r < batch.rows(); ++r) {
    json row = json::array();
    for (const auto& c : batch.columns)
      row.push_back(value_to_json(batch.data.at(c)[r]));
    rows.push_back(row);
  }
  j["rows"] = rows;
  emit(j, flags.output);
  return 0;
}

json error_json(const std::string& type, const std::string& message) {
  return json{{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal attribution toolkit"};
  app.require_subcommand(1);

  std::string validate_model;
  auto* validate =
      app.add_subcommand("validate", "Check a model file for problems");
  validate->add_option("model", validate_model, "Model JSON file")->required();

  IccFlags icc_flags;
  auto* icc_cmd =
      app.add_subcommand("icc", "Per-node contribution to target uncertainty");
  icc_cmd->add_option("model", icc_flags.model_path)->required();
  icc_cmd->add_option("--measure", icc_flags.measure)
      ->check(CLI::IsMember({"entropy", "variance"}));
  icc_cmd->add_option("--method", icc_flags.method)
      ->check(CLI::IsMember({"exact", "permutation", "mc"}));
  icc_cmd->add_option("--seed", icc_flags.seed);
  icc_cmd->add_option("--permutations", icc_flags.permutations);
  icc_cmd->add_option("--samples", icc_flags.samples);
  icc_cmd->add_option("--output", icc_flags.output);

  BaselineFlags bl;
  auto* baseline = app.add_subcommand("baseline", "Comparison measures");
  baseline->add_option("model", bl.model_path)->required();
  baseline->add_option("--which", bl.which)
      ->required()
      ->check(CLI::IsMember(
          {"info-flow", "strength", "causal-shapley", "shapley-flow"}));
  baseline->add_option("--A", bl.a);
  baseline->add_option("--B", bl.b);
  baseline->add_option("--S", bl.s);
  baseline->add_option("--set", bl.set, "Fixed node=value for the S nodes");
  baseline->add_flag("--do-average", bl.do_average);
  baseline->add_option("--edge", bl.edge, "tail:head");
  baseline->add_option("--variant", bl.variant)
      ->check(CLI::IsMember({"uncertainty", "expectation"}));
  baseline->add_option("--measure", bl.measure)
      ->check(CLI::IsMember({"entropy", "variance"}));
  baseline->add_option("--observation", bl.observation, "node=value ...");
  baseline->add_option("--foreground", bl.foreground, "root=value ...");
  baseline->add_option("--background", bl.background, "root=value ...");
  baseline->add_option("--uncertainty", bl.uncertainty,
                       "Augmented-graph flow with this measure")
      ->check(CLI::IsMember({"entropy", "variance"}));
  baseline->add_option("--data-side", bl.data_side);
  baseline->add_option("--model-side", bl.model_side);
  baseline->add_option("--seed", bl.seed);
  baseline->add_option("--output", bl.output);

  SampleFlags sf;
  auto* sample = app.add_subcommand("sample", "Draw rows from a model");
  sample->add_option("model", sf.model_path)->required();
  sample->add_option("--count", sf.count);
  sample->add_option("--seed", sf.seed);
  sample->add_option("--do", sf.do_assignments, "node=value ...");
  sample->add_option("--structure-preserving", sf.structure_preserving);
  sample->add_option("--format", sf.format)
      ->check(CLI::IsMember({"csv", "json"}));
  sample->add_option("--output", sf.output);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(validate_model);
    if (icc_cmd->parsed()) return cmd_icc(icc_flags);
    if (baseline->parsed()) return cmd_baseline(bl);
    if (sample->parsed()) return cmd_sample(sf);
  } catch (const icc::ParseError& e) {
    std::cerr << error_json("ParseError", e.what()).dump(2) << "\n";
    return 2;
  } catch (const icc::Error& e) {
    std::string type = "Error";
    if (dynamic_cast<const icc::ModelError*>(&e)) type = "ModelError";
    else if (dynamic_cast<const icc::CycleError*>(&e)) type = "CycleError";
    else if (dynamic_cast<const icc::NotFinite*>(&e)) type = "NotFinite";
    else if (dynamic_cast<const icc::CapExceeded*>(&e)) type = "CapExceeded";
    else if (dynamic_cast<const icc::InvalidBoundary*>(&e)) type = "InvalidBoundary";
    else if (dynamic_cast<const icc::ContinuousEntropyUnsupported*>(&e))
      type = "ContinuousEntropyUnsupported";
    std::cerr << error_json(type, e.what()).dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << error_json("InternalError", e.what()).dump(2) << "\n";
    return 1;
  }
  return 0;
}
