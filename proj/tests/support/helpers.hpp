#pragma once

// Small builders shared by the test suites.

#include <string>
#include <vector>

#include <icc/expr.hpp>
#include <icc/fcm.hpp>
#include <icc/noise.hpp>

namespace testsup {

struct NodeDef {
  std::string name;
  std::vector<std::string> parents;
  std::string mechanism;
  icc::NoiseSpec noise;
};

inline icc::Fcm make_fcm(const std::vector<NodeDef>& nodes,
                         const std::string& target) {
  icc::Fcm fcm;
  for (const auto& n : nodes) {
    fcm.dag.add_node(n.name, n.parents);
    fcm.mechanisms.emplace(n.name, icc::parse(n.mechanism));
    fcm.noises.emplace(n.name, n.noise);
  }
  fcm.target = target;
  return fcm;
}

inline icc::NoiseSpec coin(double p = 0.5) {
  return icc::NoiseSpec(icc::Bernoulli{p});
}

inline icc::NoiseSpec det(int64_t v = 0) {
  return icc::point_mass(icc::Value(v));
}

inline icc::NoiseSpec cat(std::vector<int64_t> values,
                          std::vector<double> probs) {
  icc::Categorical c;
  for (int64_t v : values) c.support.push_back(icc::Value(v));
  c.probs = std::move(probs);
  return icc::NoiseSpec(c);
}

// X := n, Y := X xor n, both fair coins.
inline icc::Fcm xor_model() {
  return make_fcm({{"X", {}, "n", coin()}, {"Y", {"X"}, "pa.X xor n", coin()}},
                  "Y");
}

// Observationally identical to xor_model, but Y ignores X.
inline icc::Fcm independent_model() {
  return make_fcm({{"X", {}, "n", coin()}, {"Y", {}, "n", coin()}}, "Y");
}

// X1 fair coin, X2 and X3 deterministic copies.
inline icc::Fcm copy_chain() {
  return make_fcm({{"X1", {}, "n", coin()},
                   {"X2", {"X1"}, "pa.X1", det()},
                   {"X3", {"X2"}, "pa.X2", det()}},
                  "X3");
}

// X3 := X1 xor X2 with independent fair causes.
inline icc::Fcm xor_collider() {
  return make_fcm({{"X1", {}, "n", coin()},
                   {"X2", {}, "n", coin()},
                   {"X3", {"X1", "X2"}, "pa.X1 xor pa.X2", det()}},
                  "X3");
}

// A -> B -> Y, A -> C -> Y with Y = (B + C) / 2; deterministic except A.
inline icc::Fcm diamond() {
  return make_fcm({{"A", {}, "n", coin()},
                   {"B", {"A"}, "pa.A", det()},
                   {"C", {"A"}, "pa.A", det()},
                   {"Y", {"B", "C"}, "(pa.B + pa.C) / 2", det()}},
                  "Y");
}

// X -> Y -> Z with unit-variance Gaussian noises summed along the chain.
inline icc::Fcm gauss_chain() {
  icc::NoiseSpec normal = icc::NoiseSpec(icc::Normal{0.0, 1.0});
  return make_fcm({{"X", {}, "n", normal},
                   {"Y", {"X"}, "pa.X + n", normal},
                   {"Z", {"Y"}, "pa.Y + n", normal}},
                  "Z");
}

}  // namespace testsup
