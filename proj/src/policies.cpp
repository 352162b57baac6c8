#include "bnb/policies.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace bnb {

std::string to_string(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::round_robin:
        return "round_robin";
    case PolicyKind::uniform_expenditure:
        return "uniform_expenditure";
    case PolicyKind::biased_robin:
        return "biased_robin";
    case PolicyKind::greedy:
        return "greedy";
    case PolicyKind::sfl:
        return "sfl";
    }
    return "?";
}

PolicyKind policy_kind_from_string(const std::string& name)
{
    for (PolicyKind k : {PolicyKind::round_robin, PolicyKind::uniform_expenditure, PolicyKind::biased_robin,
                         PolicyKind::greedy, PolicyKind::sfl}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown policy '" + name + "'");
}

std::string display_name(const PolicyConfig& config)
{
    if (!config.name.empty()) {
        return config.name;
    }
    if (config.kind == PolicyKind::sfl) {
        return "sfl_depth" + std::to_string(config.max_depth);
    }
    return to_string(config.kind);
}

void validate(const PolicyConfig& config)
{
    if (config.kind == PolicyKind::sfl && config.max_depth < 1) {
        throw std::invalid_argument("SFL needs max_depth >= 1");
    }
    if (config.loss.mc_samples < 1) {
        throw std::invalid_argument("mc_samples must be at least 1");
    }
    if (!(config.loss.exact_threshold >= 1)) {
        throw std::invalid_argument("exact_threshold must be at least 1");
    }
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, const ProblemSpec& spec,
                                    std::int64_t initial_budget)
{
    validate(config);
    switch (config.kind) {
    case PolicyKind::round_robin:
        return std::make_unique<RoundRobinPolicy>(spec.num_actions());
    case PolicyKind::uniform_expenditure:
        return std::make_unique<UniformExpenditurePolicy>(spec, initial_budget);
    case PolicyKind::biased_robin:
        return std::make_unique<BiasedRobinPolicy>(spec.num_actions(), config.loss);
    case PolicyKind::greedy:
        return std::make_unique<GreedyPolicy>(config.loss);
    case PolicyKind::sfl:
        return std::make_unique<SflPolicy>(config.max_depth, config.loss, config.enumeration_cap);
    }
    throw std::invalid_argument("unknown policy kind");
}

std::vector<std::size_t> candidate_actions(const ProblemSpec& spec, const Availability& availability,
                                           const BudgetLedger& ledger)
{
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < spec.num_actions(); ++a) {
        if (availability.available(a) && ledger.can_afford(spec.cost(spec.action_at(a).feature))) {
            out.push_back(a);
        }
    }
    return out;
}

std::size_t argmin_lowest(std::span<const double> scores)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] < scores[best]) {
            best = i;
        }
    }
    return best;
}

namespace {

bool usable(const ProblemSpec& spec, const DecisionContext& ctx, std::size_t a)
{
    return ctx.availability.available(a) && ctx.ledger.can_afford(spec.cost(spec.action_at(a).feature));
}

// First usable action at or after `start` in cyclic order.
std::optional<std::size_t> next_usable(const ProblemSpec& spec, const DecisionContext& ctx, std::size_t start)
{
    const std::size_t n = spec.num_actions();
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t a = (start + step) % n;
        if (usable(spec, ctx, a)) {
            return a;
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<Action> RoundRobinPolicy::next(const DecisionContext& ctx)
{
    const ProblemSpec& spec = ctx.belief.spec();
    const auto a = next_usable(spec, ctx, position_ % num_actions_);
    if (!a) {
        return std::nullopt;
    }
    position_ = (*a + 1) % num_actions_;
    return spec.action_at(*a);
}

UniformExpenditurePolicy::UniformExpenditurePolicy(const ProblemSpec& spec, std::int64_t initial_budget)
    : target_(static_cast<double>(initial_budget) / static_cast<double>(spec.num_features())),
      spent_(spec.num_features(), 0),
      next_label_(spec.num_features(), 0)
{
}

std::optional<Action> UniformExpenditurePolicy::next(const DecisionContext& ctx)
{
    const ProblemSpec& spec = ctx.belief.spec();
    const std::size_t classes = spec.num_classes();
    std::optional<std::size_t> best_feature;
    std::size_t best_label = 0;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.num_features(); ++i) {
        if (!ctx.ledger.can_afford(spec.cost(i))) {
            continue;
        }
        std::optional<std::size_t> label;
        for (std::size_t step = 0; step < classes; ++step) {
            const std::size_t j = (next_label_[i] + step) % classes;
            if (ctx.availability.available(spec.action_index({i, j}))) {
                label = j;
                break;
            }
        }
        if (!label) {
            continue;
        }
        const double ratio = target_ > 0.0 ? static_cast<double>(spent_[i]) / target_ : static_cast<double>(spent_[i]);
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best_feature = i;
            best_label = *label;
        }
    }
    if (!best_feature) {
        return std::nullopt;
    }
    spent_[*best_feature] += spec.cost(*best_feature);
    next_label_[*best_feature] = (best_label + 1) % classes;
    return Action{*best_feature, best_label};
}

BiasedRobinPolicy::BiasedRobinPolicy(std::size_t num_actions, LossKind loss, LossFn loss_override)
    : num_actions_(num_actions), loss_(loss), loss_override_(std::move(loss_override))
{
}

double BiasedRobinPolicy::estimate(const BeliefState& belief, Rng& rng)
{
    if (loss_override_) {
        return loss_override_(belief);
    }
    if (!crn_seed_) {
        crn_seed_ = rng();
    }
    // Every estimate replays the same stream so consecutive values are comparable.
    Rng crn(*crn_seed_);
    return estimate_loss(snapshot_classifier(belief), loss_, crn);
}

std::optional<Action> BiasedRobinPolicy::next(const DecisionContext& ctx)
{
    const ProblemSpec& spec = ctx.belief.spec();
    if (candidate_actions(spec, ctx.availability, ctx.ledger).empty()) {
        return std::nullopt;
    }
    const double now = estimate(ctx.belief, ctx.rng);
    if (last_loss_ && !(now < *last_loss_)) {
        current_ = (current_ + 1) % num_actions_;
    }
    last_loss_ = now;
    const auto a = next_usable(spec, ctx, current_);
    if (!a) {
        return std::nullopt;
    }
    current_ = *a;
    return spec.action_at(*a);
}

std::vector<double> greedy_scores(const RowLossScorer& scorer, const ProblemSpec& spec,
                                  std::span<const std::size_t> candidates)
{
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (std::size_t a : candidates) {
        scores.push_back(scorer.one_step_expected_loss(spec.action_at(a)));
    }
    return scores;
}

int sfl_horizon(const ProblemSpec& spec, Action action, const BudgetLedger& ledger, int max_depth,
                const Availability& availability)
{
    const std::int64_t by_budget = ledger.remaining() / spec.cost(action.feature);
    const std::int64_t by_pool = availability.count(spec.action_index(action));
    return static_cast<int>(std::min({by_budget, static_cast<std::int64_t>(max_depth), by_pool}));
}

std::vector<double> sfl_scores(const RowLossScorer& scorer, const ProblemSpec& spec,
                               std::span<const std::size_t> candidates, const Availability& availability,
                               const BudgetLedger& ledger, int max_depth, std::uint64_t enumeration_cap)
{
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (std::size_t a : candidates) {
        const Action action = spec.action_at(a);
        const int m = sfl_horizon(spec, action, ledger, max_depth, availability);
        scores.push_back(scorer.expected_loss(action, m, enumeration_cap));
    }
    return scores;
}

std::optional<Action> greedy_next(const BeliefState& belief, const Availability& availability,
                                  const BudgetLedger& ledger, const LossKind& loss, Rng& rng)
{
    const ProblemSpec& spec = belief.spec();
    const auto candidates = candidate_actions(spec, availability, ledger);
    if (candidates.empty()) {
        return std::nullopt;
    }
    if (candidates.size() == 1) {
        return spec.action_at(candidates.front());
    }
    const RowLossScorer scorer(belief, loss, rng);
    const auto scores = greedy_scores(scorer, spec, candidates);
    return spec.action_at(candidates[argmin_lowest(scores)]);
}

std::optional<Action> sfl_next(const BeliefState& belief, const Availability& availability,
                               const BudgetLedger& ledger, const PolicyConfig& config, Rng& rng)
{
    const ProblemSpec& spec = belief.spec();
    const auto candidates = candidate_actions(spec, availability, ledger);
    if (candidates.empty()) {
        return std::nullopt;
    }
    if (candidates.size() == 1) {
        return spec.action_at(candidates.front());
    }
    const RowLossScorer scorer(belief, config.loss, rng);
    const auto scores =
        sfl_scores(scorer, spec, candidates, availability, ledger, config.max_depth, config.enumeration_cap);
    return spec.action_at(candidates[argmin_lowest(scores)]);
}

std::optional<Action> GreedyPolicy::next(const DecisionContext& ctx)
{
    return greedy_next(ctx.belief, ctx.availability, ctx.ledger, loss_, ctx.rng);
}

std::optional<Action> SflPolicy::next(const DecisionContext& ctx)
{
    PolicyConfig config;
    config.kind = PolicyKind::sfl;
    config.max_depth = max_depth_;
    config.loss = loss_;
    config.enumeration_cap = enumeration_cap_;
    return sfl_next(ctx.belief, ctx.availability, ctx.ledger, config, ctx.rng);
}

} // namespace bnb
