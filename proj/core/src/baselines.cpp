#include "icc/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "icc/errors.hpp"

namespace icc {
namespace {

void check_disjoint(const std::set<std::string>& a,
                    const std::set<std::string>& b, const char* what) {
  for (const auto& x : a)
    if (b.count(x)) throw OverlapError("sets overlap at '" + x + "' (" + what + ")");
}

std::vector<size_t> indices_of(const FiniteDist& dist,
                               const std::set<std::string>& names) {
  std::vector<size_t> out;
  for (const auto& n : names) out.push_back(dist.index_of(n));
  return out;
}

// I(X_A -> X_B | do(x_S)) for one fixed x_S.
double info_flow_at(const Fcm& fcm, const std::set<std::string>& a,
                    const std::set<std::string>& b,
                    const std::map<std::string, Value>& s_values, size_t cap) {
  // Randomization density q(x_A) = p(x_A | do(x_S)).
  FiniteDist joint_s = exact_joint(fcm, s_values, cap);
  FiniteDist q = joint_s.marginal(indices_of(joint_s, a));

  std::vector<std::string> a_order(a.begin(), a.end());
  std::map<Outcome, FiniteDist> response;  // x_A -> p(x_B | do(x_A, x_S))
  FiniteDist mix;                          // sum_a q(x_A) p(x_B | do(..))
  bool mix_init = false;
  for (const auto& [xa, qa] : q.pmf()) {
    if (qa <= 0.0) continue;
    std::map<std::string, Value> do_values = s_values;
    for (size_t i = 0; i < a_order.size(); ++i)
      do_values[a_order[i]] = xa.at(i);
    FiniteDist joint_as = exact_joint(fcm, do_values, cap);
    FiniteDist r = joint_as.marginal(indices_of(joint_as, b));
    if (!mix_init) {
      mix = FiniteDist(r.vars());
      mix_init = true;
    }
    for (const auto& [xb, rp] : r.pmf()) mix.add(xb, qa * rp);
    response.emplace(xa, std::move(r));
  }

  double flow = 0.0;
  for (const auto& [xa, qa] : q.pmf()) {
    if (qa <= 0.0) continue;
    const FiniteDist& r = response.at(xa);
    for (const auto& [xb, rp] : r.pmf()) {
      if (rp <= 0.0) continue;
      flow += qa * rp * std::log2(rp / mix.prob(xb));
    }
  }
  return std::max(0.0, flow);
}

}  // namespace

double information_flow(const Fcm& fcm, const std::set<std::string>& a,
                        const std::set<std::string>& b,
                        const std::set<std::string>& s,
                        const std::map<std::string, Value>& s_values,
                        size_t enumeration_cap) {
  check_disjoint(a, b, "A/B");
  check_disjoint(a, s, "A/S");
  check_disjoint(b, s, "B/S");
  for (const auto& n : s)
    if (!s_values.count(n))
      throw ModelError("missing value for conditioning node '" + n + "'");
  return info_flow_at(fcm, a, b, s_values, enumeration_cap);
}

double information_flow_averaged(const Fcm& fcm, const std::set<std::string>& a,
                                 const std::set<std::string>& b,
                                 const std::set<std::string>& s,
                                 size_t enumeration_cap) {
  check_disjoint(a, b, "A/B");
  check_disjoint(a, s, "A/S");
  check_disjoint(b, s, "B/S");
  if (s.empty()) return info_flow_at(fcm, a, b, {}, enumeration_cap);

  FiniteDist joint = exact_joint(fcm, {}, enumeration_cap);
  FiniteDist ps = joint.marginal(indices_of(joint, s));
  std::vector<std::string> s_order(s.begin(), s.end());
  double total = 0.0;
  for (const auto& [xs, p] : ps.pmf()) {
    if (p <= 0.0) continue;
    std::map<std::string, Value> s_values;
    for (size_t i = 0; i < s_order.size(); ++i) s_values[s_order[i]] = xs.at(i);
    total += p * info_flow_at(fcm, a, b, s_values, enumeration_cap);
  }
  return total;
}

double causal_strength_edge(const Fcm& fcm, const std::string& tail,
                            const std::string& head, size_t enumeration_cap) {
  if (!fcm.dag.has_edge(tail, head)) throw UnknownEdge(tail, head);
  FiniteDist joint = exact_joint(fcm, {}, enumeration_cap);
  const auto& nodes = fcm.dag.nodes();

  // Observed marginal supports per node.
  std::map<std::string, std::vector<Value>> supports;
  for (const auto& n : nodes) {
    FiniteDist m = joint.marginal({joint.index_of(n)});
    std::vector<Value> sup;
    for (const auto& [o, p] : m.pmf())
      if (p > 0.0) sup.push_back(o[0]);
    supports[n] = std::move(sup);
  }
  FiniteDist tail_marginal = joint.marginal({joint.index_of(tail)});

  // p(x_node | parent values) read off the observational joint.
  auto conditional = [&](const std::string& node,
                         const std::vector<std::string>& given,
                         const Outcome& given_values, const Value& x) -> double {
    std::vector<size_t> gidx;
    for (const auto& g : given) gidx.push_back(joint.index_of(g));
    auto [cond, w] = joint.condition(gidx, given_values);
    if (w <= 0.0) return -1.0;  // undefined
    FiniteDist m = cond.marginal({cond.index_of(node)});
    return m.prob({x});
  };

  // Post-cutting joint over the product of observed supports.
  FiniteDist post_cut(nodes);
  std::vector<size_t> idx(nodes.size(), 0);
  size_t total_configs = 1;
  for (const auto& n : nodes) total_configs *= supports[n].size();
  for (size_t k = 0; k < total_configs; ++k) {
    std::map<std::string, Value> values;
    for (size_t i = 0; i < nodes.size(); ++i)
      values.emplace(nodes[i], supports[nodes[i]][idx[i]]);

    double p = 1.0;
    for (const auto& n : nodes) {
      const auto& parents = fcm.dag.parents(n);
      double factor;
      if (n == head) {
        // Feed the cut edge an independent copy of the tail's marginal.
        std::vector<std::string> rest;
        Outcome rest_values;
        for (const auto& pa : parents)
          if (pa != tail) {
            rest.push_back(pa);
            rest_values.push_back(values.at(pa));
          }
        factor = 0.0;
        for (const auto& [xt, pt] : tail_marginal.pmf()) {
          std::vector<std::string> given = rest;
          Outcome given_values = rest_values;
          given.push_back(tail);
          given_values.push_back(xt[0]);
          double c = conditional(n, given, given_values, values.at(n));
          if (c >= 0.0) factor += pt * c;
        }
      } else {
        Outcome parent_values;
        for (const auto& pa : parents) parent_values.push_back(values.at(pa));
        factor = conditional(n, parents, parent_values, values.at(n));
        if (factor < 0.0) factor = 0.0;  // unreachable parent config
      }
      p *= factor;
      if (p == 0.0) break;
    }
    if (p > 0.0) {
      Outcome o;
      for (const auto& n : nodes) o.push_back(values.at(n));
      post_cut.add(o, p);
    }
    for (size_t i = nodes.size(); i-- > 0;) {
      if (++idx[i] < supports[nodes[i]].size()) break;
      idx[i] = 0;
    }
  }
  post_cut.normalize();
  return relative_entropy(joint, post_cut);
}

AttributionReport causal_shapley_uncertainty(const Fcm& fcm, Measure measure,
                                             size_t enumeration_cap,
                                             size_t exact_player_cap) {
  require_valid(fcm);
  require_target_sink(fcm);
  FiniteDist joint = exact_joint(fcm, {}, enumeration_cap);

  // The coalition game is played by the target's potential causes; the
  // target itself keeps the uncertainty left after adjusting all of them.
  std::vector<std::string> players;
  for (const auto& n : fcm.dag.nodes())
    if (n != fcm.target) players.push_back(n);

  // -avg_x_T psi(X_target | do(x_T)), weighted by the observational p(x_T).
  auto do_average = [&](const std::vector<std::string>& t) {
    if (t.empty()) {
      FiniteDist m = joint.marginal({joint.index_of(fcm.target)});
      return -(measure == Measure::Entropy ? entropy_bits(m) : variance_of(m));
    }
    std::vector<size_t> t_idx;
    for (const auto& n : t) t_idx.push_back(joint.index_of(n));
    FiniteDist pt = joint.marginal(t_idx);
    double psi = 0.0;
    for (const auto& [xt, p] : pt.pmf()) {
      if (p <= 0.0) continue;
      std::map<std::string, Value> do_values;
      for (size_t i = 0; i < t.size(); ++i) do_values[t[i]] = xt.at(i);
      FiniteDist jd = exact_joint(fcm, do_values, enumeration_cap);
      FiniteDist m = jd.marginal({jd.index_of(fcm.target)});
      psi +=
          p * (measure == Measure::Entropy ? entropy_bits(m) : variance_of(m));
    }
    return -psi;
  };

  AttributionReport report;
  report.nodes = fcm.dag.nodes();
  report.measure = measure;
  report.method = "exact";

  double total;
  double sum = 0.0;
  if (players.empty()) {
    // Single-node model: all uncertainty belongs to the target.
    total = -do_average({});
    report.scores[fcm.target] = total;
    report.raw_scores[fcm.target] = total;
    report.evaluations_used = 1;
    sum = total;
  } else {
    CoalitionFn nu(players.size(), [&](uint64_t mask) {
      std::vector<std::string> t;
      for (size_t i = 0; i < players.size(); ++i)
        if (mask & (uint64_t{1} << i)) t.push_back(players[i]);
      return do_average(t);
    });
    ShapleyResult shap = shapley_exact(nu, exact_player_cap);
    total = -nu(0);
    double residual_uncertainty = -nu((uint64_t{1} << players.size()) - 1);
    report.evaluations_used = shap.evaluations_used;
    for (size_t i = 0; i < players.size(); ++i) {
      report.scores[players[i]] = shap.values[i];
      report.raw_scores[players[i]] = shap.values[i];
      sum += shap.values[i];
    }
    report.scores[fcm.target] = residual_uncertainty;
    report.raw_scores[fcm.target] = residual_uncertainty;
    sum += residual_uncertainty;
  }
  report.total = total;
  report.efficiency_residual = sum - total;
  return report;
}

AttributionReport causal_shapley_expectation(
    const Fcm& fcm, const std::map<std::string, Value>& observation,
    size_t enumeration_cap, size_t exact_player_cap) {
  require_valid(fcm);
  require_target_sink(fcm);
  for (const auto& n : fcm.dag.nodes())
    if (!observation.count(n))
      throw ModelError("observation missing node '" + n + "'");
  if (!observation.at(fcm.target).is_numeric())
    throw NonNumericTarget("expectation attribution needs a numeric target");

  // The causes explain the shift of E[target] under do(observed values);
  // the target keeps the remainder of its own observed deviation.
  std::vector<std::string> players;
  for (const auto& n : fcm.dag.nodes())
    if (n != fcm.target) players.push_back(n);

  auto do_mean = [&](uint64_t mask) {
    std::map<std::string, Value> do_values;
    for (size_t i = 0; i < players.size(); ++i)
      if (mask & (uint64_t{1} << i))
        do_values.emplace(players[i], observation.at(players[i]));
    FiniteDist jd = exact_joint(fcm, do_values, enumeration_cap);
    return mean_of(jd.marginal({jd.index_of(fcm.target)}));
  };

  AttributionReport report;
  report.nodes = fcm.dag.nodes();
  report.method = "expectation-exact";
  double x_target = observation.at(fcm.target).as_real();
  double sum = 0.0;
  double adjusted_mean;
  if (players.empty()) {
    adjusted_mean = do_mean(0);
    report.evaluations_used = 1;
  } else {
    CoalitionFn nu(players.size(), do_mean);
    ShapleyResult shap = shapley_exact(nu, exact_player_cap);
    adjusted_mean = nu((uint64_t{1} << players.size()) - 1);
    report.evaluations_used = shap.evaluations_used;
    for (size_t i = 0; i < players.size(); ++i) {
      report.scores[players[i]] = shap.values[i];
      report.raw_scores[players[i]] = shap.values[i];
      sum += shap.values[i];
    }
  }
  double target_share = x_target - adjusted_mean;
  report.scores[fcm.target] = target_share;
  report.raw_scores[fcm.target] = target_share;
  sum += target_share;
  report.total = x_target - do_mean(0);  // full observed deviation
  report.efficiency_residual = sum - report.total;
  return report;
}

}  // namespace icc
