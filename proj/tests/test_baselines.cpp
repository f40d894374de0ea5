#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <icc/baselines.hpp>
#include <icc/dist.hpp>
#include <icc/errors.hpp>
#include <icc/icc.hpp>
#include <icc/uncertainty.hpp>

#include "support/helpers.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

using icc::Measure;
using icc::Value;
using testsup::coin;
using testsup::det;
using testsup::make_fcm;

namespace {

Value iv(int64_t x) { return Value(x); }

// X2 copies X1 with probability k/100, otherwise flips a fresh coin.
icc::Fcm mixing_model(int k) {
  return make_fcm(
      {{"X1", {}, "n", coin()},
       {"X2",
        {"X1"},
        "if(n < " + std::to_string(k) + ", pa.X1, n mod 2)",
        icc::NoiseSpec(icc::DiscreteUniform{0, 99})},
       {"X3", {"X1", "X2"}, "pa.X1 xor pa.X2", det()}},
      "X3");
}

}  // namespace

TEST_CASE("information flow on the worked examples") {
  // Copy chain: fixing X1 freezes X2, nothing can flow to X3.
  auto chain = testsup::copy_chain();
  CHECK(icc::information_flow(chain, {"X2"}, {"X3"}, {"X1"},
                              {{"X1", iv(0)}}) == doctest::Approx(0.0));
  CHECK(icc::information_flow(chain, {"X2"}, {"X3"}, {"X1"},
                              {{"X1", iv(1)}}) == doctest::Approx(0.0));

  // XOR collider: nothing flows unconditionally, a full bit flows once the
  // other cause is pinned.
  auto collider = testsup::xor_collider();
  CHECK(icc::information_flow(collider, {"X2"}, {"X3"}, {}, {}) ==
        doctest::Approx(0.0));
  CHECK(icc::information_flow(collider, {"X2"}, {"X3"}, {"X1"},
                              {{"X1", iv(0)}}) == doctest::Approx(1.0));
  CHECK(icc::information_flow_averaged(collider, {"X2"}, {"X3"}, {"X1"}) ==
        doctest::Approx(1.0));

  // A target ignoring its parent receives zero flow.
  CHECK(icc::information_flow(testsup::independent_model(), {"X"}, {"Y"}, {},
                              {}) == doctest::Approx(0.0));
}

TEST_CASE("information flow rejects overlapping node sets") {
  auto collider = testsup::xor_collider();
  CHECK_THROWS_AS(
      icc::information_flow(collider, {"X2"}, {"X2"}, {}, {}),
      icc::OverlapError);
  CHECK_THROWS_AS(
      icc::information_flow(collider, {"X2"}, {"X3"}, {"X2"},
                            {{"X2", iv(0)}}),
      icc::OverlapError);
}

TEST_CASE("information flow is nonnegative on random models") {
  std::mt19937_64 rng(61);
  int done = 0;
  for (int trial = 0; trial < 30 && done < 15; ++trial) {
    icc::Fcm fcm = testsup::random_fcm(rng, 4, 3);
    const auto& nodes = fcm.dag.nodes();
    if (nodes.size() < 2) continue;
    ++done;
    std::set<std::string> a{nodes[rng() % (nodes.size() - 1)]};
    std::set<std::string> b{fcm.target};
    if (a.count(fcm.target)) continue;
    std::set<std::string> s;
    for (const auto& n : nodes)
      if (!a.count(n) && !b.count(n) && rng() % 2 == 0) s.insert(n);
    CHECK(icc::information_flow_averaged(fcm, a, b, s) >= -1e-12);
  }
  CHECK(done >= 10);
}

TEST_CASE("the mixing edge makes conditional flow jump at zero weight") {
  // With the X1->X2 edge weight at zero, X2 is a fresh coin, yet pinning X1
  // still uncovers a full bit of flow into the collider.
  auto fcm = mixing_model(0);
  double unconditional =
      icc::information_flow(fcm, {"X2"}, {"X3"}, {}, {});
  double conditional =
      icc::information_flow_averaged(fcm, {"X2"}, {"X3"}, {"X1"});
  CHECK(conditional - unconditional >= 0.9);

  // A heavily mixed copy keeps both readings close to each other.
  auto copyish = mixing_model(100);
  double u2 = icc::information_flow(copyish, {"X2"}, {"X3"}, {}, {});
  double c2 = icc::information_flow_averaged(copyish, {"X2"}, {"X3"}, {"X1"});
  CHECK(std::abs(c2 - u2) <= 0.1);
}

TEST_CASE("edge strength on copies and constants") {
  // Cutting the only informative edge of a perfect copy costs I(X:Y) = 1 bit.
  auto copy = make_fcm({{"X", {}, "n", coin()}, {"Y", {"X"}, "pa.X", det()}},
                       "Y");
  CHECK(icc::causal_strength_edge(copy, "X", "Y") == doctest::Approx(1.0));

  // A constant tail feeds the same point mass before and after the cut.
  auto constant = make_fcm(
      {{"X", {}, "n", det()}, {"Y", {"X"}, "pa.X xor n", coin()}}, "Y");
  CHECK(icc::causal_strength_edge(constant, "X", "Y") ==
        doctest::Approx(0.0));

  CHECK_THROWS_AS(icc::causal_strength_edge(copy, "Y", "X"),
                  icc::UnknownEdge);
}

TEST_CASE("edge strength equals conditional mutual information on colliders") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    // Independent root causes feeding one sink.
    size_t causes = 2 + rng() % 2;
    std::vector<testsup::NodeDef> defs;
    std::vector<std::string> parents;
    for (size_t i = 0; i < causes; ++i) {
      std::string name = "X" + std::to_string(i);
      defs.push_back({name, {}, "n", testsup::random_noise(rng, 3)});
      parents.push_back(name);
    }
    defs.push_back({"Y", parents, testsup::random_mechanism(rng, parents),
                    testsup::random_noise(rng, 3)});
    icc::Fcm fcm = make_fcm(defs, "Y");

    icc::FiniteDist joint = icc::exact_joint(fcm);
    size_t y = joint.index_of("Y");
    for (size_t i = 0; i < causes; ++i) {
      std::string name = "X" + std::to_string(i);
      std::vector<size_t> rest;
      for (size_t k = 0; k < causes; ++k)
        if (k != i) rest.push_back(joint.index_of("X" + std::to_string(k)));
      double mi = icc::mutual_information(joint, {joint.index_of(name)}, {y},
                                          rest);
      double strength = icc::causal_strength_edge(fcm, name, "Y");
      CHECK(strength == doctest::Approx(mi).epsilon(1e-9));
      CHECK(strength >= -1e-12);
    }
  }
}

TEST_CASE("do-average attribution credits deterministic intermediates") {
  // The copy chain: intervening on X2 alone pins X3, so X2 earns a strictly
  // positive share here even though its own noise explains nothing.
  auto report =
      icc::causal_shapley_uncertainty(testsup::copy_chain(), Measure::Entropy);
  CHECK(report.scores.at("X2") > 0.1);
  CHECK(report.total == doctest::Approx(1.0));
  double sum = 0.0;
  for (const auto& [_, v] : report.raw_scores) sum += v;
  CHECK(sum == doctest::Approx(report.total).epsilon(1e-9));

  icc::IccRequest request;
  request.fcm = testsup::copy_chain();
  request.measure = Measure::Entropy;
  auto noise_view = icc::icc_shapley(request);
  CHECK(noise_view.scores.at("X2") == doctest::Approx(0.0));
}

TEST_CASE("do-average attribution agrees with the noise view on colliders") {
  auto fcm = testsup::xor_collider();
  auto report = icc::causal_shapley_uncertainty(fcm, Measure::Entropy);
  icc::IccRequest request;
  request.fcm = fcm;
  request.measure = Measure::Entropy;
  auto noise_view = icc::icc_shapley(request);
  for (const auto& node : fcm.dag.nodes())
    CHECK(report.raw_scores.at(node) ==
          doctest::Approx(noise_view.raw_scores.at(node)).epsilon(1e-9));
}

TEST_CASE("single-node models keep all uncertainty at the target") {
  auto fcm = make_fcm({{"X", {}, "n", coin()}}, "X");
  auto report = icc::causal_shapley_uncertainty(fcm, Measure::Entropy);
  CHECK(report.scores.at("X") == doctest::Approx(1.0));
  CHECK(report.total == doctest::Approx(1.0));
}

TEST_CASE("per-observation attribution explains the deviation from the mean") {
  auto fcm = make_fcm({{"A", {}, "n", testsup::cat({0, 1}, {0.6, 0.4})},
                       {"B", {"A"}, "2 * pa.A + n", coin()}},
                      "B");
  std::map<std::string, Value> obs{{"A", iv(1)}, {"B", iv(3)}};
  auto report = icc::causal_shapley_expectation(fcm, obs);
  // E[B] = 2*0.4 + 0.5 = 1.3; this observation sits 1.7 above it.
  CHECK(report.total == doctest::Approx(3.0 - 1.3));
  double sum = 0.0;
  for (const auto& [_, v] : report.raw_scores) sum += v;
  CHECK(sum == doctest::Approx(report.total).epsilon(1e-9));
  // One non-target player: its score is E[B|do(A=1)] - E[B] = 1.2.
  CHECK(report.raw_scores.at("A") == doctest::Approx(1.2).epsilon(1e-9));
  CHECK(report.raw_scores.at("B") == doctest::Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_AS(icc::causal_shapley_expectation(fcm, {{"A", iv(1)}}),
                  icc::ModelError);
}

TEST_CASE("per-observation attribution matches the subset-formula oracle") {
  auto fcm = testsup::xor_collider();
  std::map<std::string, Value> obs{
      {"X1", iv(1)}, {"X2", iv(0)}, {"X3", iv(1)}};
  auto report = icc::causal_shapley_expectation(fcm, obs);

  // Two players X1, X2; nu(S) = E[X3 | do(observed values on S)].
  auto mean_do = [&](const std::map<std::string, Value>& forced) {
    icc::FiniteDist joint = icc::exact_joint(fcm, forced);
    return icc::mean_of(joint.marginal({joint.index_of("X3")}));
  };
  double nu0 = mean_do({});
  double nu1 = mean_do({{"X1", iv(1)}});
  double nu2 = mean_do({{"X2", iv(0)}});
  double nu12 = mean_do({{"X1", iv(1)}, {"X2", iv(0)}});
  double phi1 = 0.5 * ((nu1 - nu0) + (nu12 - nu2));
  double phi2 = 0.5 * ((nu2 - nu0) + (nu12 - nu1));
  CHECK(report.raw_scores.at("X1") == doctest::Approx(phi1).epsilon(1e-9));
  CHECK(report.raw_scores.at("X2") == doctest::Approx(phi2).epsilon(1e-9));
  CHECK(report.raw_scores.at("X3") ==
        doctest::Approx(1.0 - nu12).epsilon(1e-9));
}

TEST_CASE("per-observation totals average to zero over the law") {
  // The attribution total is the deviation x_target - E[target], so its
  // expectation over the observational law vanishes; so does the target's
  // own residual share. Intermediate players need not average to zero:
  // their do-average E_{x_S ~ p} E[target | do(x_S)] can differ from
  // E[target] when the intervened set is correlated with the rest.
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 8; ++trial) {
    icc::Fcm fcm = testsup::random_fcm(rng, 4, 3);
    icc::FiniteDist joint = icc::exact_joint(fcm);
    double averaged_total = 0.0;
    double averaged_residual = 0.0;
    for (const auto& [outcome, p] : joint.pmf()) {
      if (p == 0.0) continue;
      std::map<std::string, Value> obs;
      for (size_t k = 0; k < joint.vars().size(); ++k)
        obs[joint.vars()[k]] = outcome[k];
      auto report = icc::causal_shapley_expectation(fcm, obs);
      averaged_total += p * report.total;
      averaged_residual += p * report.raw_scores.at(fcm.target);
    }
    CHECK(std::abs(averaged_total) <= 1e-9);
    CHECK(std::abs(averaged_residual) <= 1e-9);
  }
}

TEST_CASE("per-observation attribution needs a numeric target") {
  auto fcm = make_fcm(
      {{"X", {}, "n",
        icc::NoiseSpec(icc::Categorical{{Value("red"), Value("blue")},
                                        {0.5, 0.5}})}},
      "X");
  CHECK_THROWS_AS(
      icc::causal_shapley_expectation(fcm, {{"X", Value("red")}}),
      icc::NonNumericTarget);
}
