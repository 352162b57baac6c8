#pragma once

#include "bnb/belief.hpp"
#include "bnb/ledger.hpp"
#include "bnb/loss.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bnb {

enum class PolicyKind { round_robin, uniform_expenditure, biased_robin, greedy, sfl };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);

struct PolicyConfig {
    PolicyKind kind = PolicyKind::round_robin;
    // SFL lookahead cap, in purchases of the candidate action.
    int max_depth = 0;
    LossKind loss;
    // SFL enumerates outcome compositions up to this many states per action,
    // and switches to the equivalent per-value marginal sum above it.
    std::uint64_t enumeration_cap = 64;
    // Label used in output files; derived from kind and depth when empty.
    std::string name;
};

std::string display_name(const PolicyConfig& config);
void validate(const PolicyConfig& config);

// Everything a policy may look at when choosing the next purchase.
struct DecisionContext {
    const BeliefState& belief;
    const Availability& availability;
    const BudgetLedger& ledger;
    Rng& rng; // loss Monte-Carlo stream
};

// A purchase policy. next() returns the action to buy, or nullopt when no
// available action is affordable. The caller buys exactly the returned action.
// Policies are copyable values (clone) so outcome trees can branch them.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::optional<Action> next(const DecisionContext& ctx) = 0;
    virtual std::unique_ptr<Policy> clone() const = 0;
};

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, const ProblemSpec& spec,
                                    std::int64_t initial_budget);

// Indices (feature-major) of actions that are available and affordable.
std::vector<std::size_t> candidate_actions(const ProblemSpec& spec, const Availability& availability,
                                           const BudgetLedger& ledger);

// Lowest index among the minima.
std::size_t argmin_lowest(std::span<const double> scores);

// Cycles (0,0), (0,1), ..., (n-1,|Y|-1) regardless of outcomes, skipping
// unavailable or unaffordable actions.
class RoundRobinPolicy : public Policy {
public:
    explicit RoundRobinPolicy(std::size_t num_actions) : num_actions_(num_actions) {}
    std::optional<Action> next(const DecisionContext& ctx) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<RoundRobinPolicy>(*this); }

private:
    std::size_t num_actions_;
    std::size_t position_ = 0;
};

// Spends about b / n on every feature: always buys the feature with the lowest
// spent / target ratio, rotating through class labels within a feature.
class UniformExpenditurePolicy : public Policy {
public:
    UniformExpenditurePolicy(const ProblemSpec& spec, std::int64_t initial_budget);
    std::optional<Action> next(const DecisionContext& ctx) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<UniformExpenditurePolicy>(*this); }

    std::span<const std::int64_t> spent_per_feature() const { return spent_; }

private:
    double target_;
    std::vector<std::int64_t> spent_;
    std::vector<std::size_t> next_label_;
};

// Keeps buying the current action while each purchase strictly lowers the
// loss estimate; moves to the next action in round-robin order otherwise.
class BiasedRobinPolicy : public Policy {
public:
    using LossFn = std::function<double(const BeliefState&)>;

    // `loss_override` replaces the configured loss estimate (used by tests).
    BiasedRobinPolicy(std::size_t num_actions, LossKind loss, LossFn loss_override = {});
    std::optional<Action> next(const DecisionContext& ctx) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<BiasedRobinPolicy>(*this); }

private:
    double estimate(const BeliefState& belief, Rng& rng);

    std::size_t num_actions_;
    LossKind loss_;
    LossFn loss_override_;
    std::size_t current_ = 0;
    std::optional<double> last_loss_;
    std::optional<std::uint64_t> crn_seed_;
};

// One-step lookahead: buys argmin_a sum_k theta-hat_k L(NB(update(s, a, k))).
class GreedyPolicy : public Policy {
public:
    explicit GreedyPolicy(LossKind loss) : loss_(loss) {}
    std::optional<Action> next(const DecisionContext& ctx) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<GreedyPolicy>(*this); }

private:
    LossKind loss_;
};

// Single feature lookahead: scores each action by the expected loss of
// spending the whole (depth-capped) remaining budget on it, then buys the best
// action once.
class SflPolicy : public Policy {
public:
    SflPolicy(int max_depth, LossKind loss, std::uint64_t enumeration_cap)
        : max_depth_(max_depth), loss_(loss), enumeration_cap_(enumeration_cap)
    {
    }
    std::optional<Action> next(const DecisionContext& ctx) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<SflPolicy>(*this); }

private:
    int max_depth_;
    LossKind loss_;
    std::uint64_t enumeration_cap_;
};

// Expected one-step losses of every candidate (greedy's scores).
std::vector<double> greedy_scores(const RowLossScorer& scorer, const ProblemSpec& spec,
                                  std::span<const std::size_t> candidates);

// min(floor(remaining / c_i), max_depth, availability of a).
int sfl_horizon(const ProblemSpec& spec, Action action, const BudgetLedger& ledger, int max_depth,
                const Availability& availability);

// Expected full-allocation losses of every candidate (SFL's scores).
std::vector<double> sfl_scores(const RowLossScorer& scorer, const ProblemSpec& spec,
                               std::span<const std::size_t> candidates, const Availability& availability,
                               const BudgetLedger& ledger, int max_depth, std::uint64_t enumeration_cap);

std::optional<Action> greedy_next(const BeliefState& belief, const Availability& availability,
                                  const BudgetLedger& ledger, const LossKind& loss, Rng& rng);
std::optional<Action> sfl_next(const BeliefState& belief, const Availability& availability,
                               const BudgetLedger& ledger, const PolicyConfig& config, Rng& rng);

} // namespace bnb
