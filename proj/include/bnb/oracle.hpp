#pragma once

#include "bnb/belief.hpp"
#include "bnb/loss.hpp"
#include "bnb/policies.hpp"

#include <cstdint>
#include <vector>

namespace bnb {

// Exhaustive expected-loss search for tiny instances.

struct OracleLimits {
    std::int64_t max_budget = 8;
    std::size_t max_features = 4;
    int max_arity = 4;
    std::size_t max_classes = 3;
    double max_node_visits = 1e7;
};

struct OracleOptions {
    OracleLimits limits;
    bool memoize = true;
    // Experimental: lets optimal_value stop early and keep the current loss.
    bool allow_stop = false;
    // Restricts optimal_value to these action indices; empty allows all.
    std::vector<std::size_t> allowed_actions;
};

// Upper estimate of recursion nodes for `budget` on `spec`. With memoization
// the estimate counts distinct (belief, budget) pairs times their children.
double oracle_work_estimate(const ProblemSpec& spec, std::int64_t budget, bool memoize);

// V(s, 0) = L(NB(s)); V(s, b) = min over affordable actions a of
// sum_k theta-hat_k(s) V(update(s, a, k), b - c_a). A state where nothing is
// affordable keeps its loss. Throws LimitsExceeded when over the limits and
// std::invalid_argument when `loss` would need Monte Carlo.
double optimal_value(const BeliefState& belief, std::int64_t budget, const LossKind& loss,
                     const OracleOptions& options = {});

// Expected final loss of running `policy` from `belief` until the budget is
// spent, with outcomes drawn from the belief's predictive distribution and no
// pool limits. The policy's loss must be exact.
double policy_value(const PolicyConfig& policy, const BeliefState& belief, std::int64_t budget,
                    const OracleOptions& options = {});

// Random tiny belief for gap tables: alpha_ijk in {1, ..., 4}, class counts in {1, ..., 5}.
BeliefState random_tiny_belief(std::shared_ptr<const ProblemSpec> spec, Rng& rng);

} // namespace bnb
