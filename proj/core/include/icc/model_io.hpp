#pragma once

#include <string>

#include "icc/fcm.hpp"

namespace icc {

// Model file format: JSON with fields {version, nodes, target}; each node
// is {name, parents, mechanism, noise}. Unknown fields are rejected.
// Structural/JSON/DSL problems throw ParseError or ModelError here;
// semantic problems (bad probabilities, unknown parent refs, cycles) are
// left for validate().
Fcm parse_model(const std::string& text);
Fcm load_model(const std::string& path);

std::string serialize_model(const Fcm& fcm);

// FNV-1a hash of the model file bytes, hex-encoded; embedded in reports.
std::string file_hash(const std::string& path);

}  // namespace icc
