#pragma once

#include <map>
#include <set>
#include <string>

#include "icc/icc.hpp"

namespace icc {

// Information flow I(X_A -> X_B | do(x_S)): mutual information under
// randomized interventions, with randomization density p(x_A | do(x_S)).
// Exact, via truncated factorization over the enumerated noise support.
double information_flow(const Fcm& fcm, const std::set<std::string>& a,
                        const std::set<std::string>& b,
                        const std::set<std::string>& s,
                        const std::map<std::string, Value>& s_values,
                        size_t enumeration_cap = 1000000);

// Average of information_flow over the observational law of X_S.
double information_flow_averaged(const Fcm& fcm, const std::set<std::string>& a,
                                 const std::set<std::string>& b,
                                 const std::set<std::string>& s,
                                 size_t enumeration_cap = 1000000);

// Edge strength D(P || P_cut): the cut edge is fed an independent copy of
// its tail's marginal, the head's factor is replaced accordingly.
double causal_strength_edge(const Fcm& fcm, const std::string& tail,
                            const std::string& head,
                            size_t enumeration_cap = 1000000);

// Shapley attribution of nu(T) = -avg_x_T psi(X_target | do(x_T)); the
// do-average runs over the observational law of X_T.
AttributionReport causal_shapley_uncertainty(const Fcm& fcm, Measure measure,
                                             size_t enumeration_cap = 1000000,
                                             size_t exact_player_cap = 12);

// Shapley attribution of nu(T) = E[X_target | do(x_T)] for one observation;
// scores sum to x_target - E[X_target].
AttributionReport causal_shapley_expectation(
    const Fcm& fcm, const std::map<std::string, Value>& observation,
    size_t enumeration_cap = 1000000, size_t exact_player_cap = 12);

}  // namespace icc
