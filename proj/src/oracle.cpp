#include "bnb/oracle.hpp"

#include "bnb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace bnb {

double oracle_work_estimate(const ProblemSpec& spec, std::int64_t budget, bool memoize)
{
    double cells = 0.0;
    for (std::size_t i = 0; i < spec.num_features(); ++i) {
        cells += static_cast<double>(spec.arity(i)) * static_cast<double>(spec.num_classes());
    }
    const std::int64_t depth = budget / spec.min_cost();
    if (memoize) {
        // Distinct outcome grids reachable in at most `depth` purchases, C(depth + K, K),
        // each expanding K children.
        double states = 1.0;
        for (std::int64_t t = 1; t <= depth; ++t) {
            states *= (cells + static_cast<double>(t)) / static_cast<double>(t);
        }
        return states * cells;
    }
    double total = 0.0;
    double level = 1.0;
    for (std::int64_t t = 0; t <= depth; ++t) {
        total += level;
        level *= cells;
    }
    return total;
}

namespace {

void check_limits(const ProblemSpec& spec, std::int64_t budget, const OracleOptions& options)
{
    if (budget < 0) {
        throw std::invalid_argument("budget must be nonnegative");
    }
    const OracleLimits& lim = options.limits;
    const double estimate = oracle_work_estimate(spec, budget, options.memoize);
    auto refuse = [&](const std::string& why) {
        throw LimitsExceeded("oracle refused: " + why + " (estimated " + std::to_string(estimate) + " node visits)",
                             estimate);
    };
    if (budget > lim.max_budget) {
        refuse("budget " + std::to_string(budget) + " exceeds " + std::to_string(lim.max_budget));
    }
    if (spec.num_features() > lim.max_features) {
        refuse(std::to_string(spec.num_features()) + " features exceed " + std::to_string(lim.max_features));
    }
    if (spec.max_arity() > lim.max_arity) {
        refuse("arity " + std::to_string(spec.max_arity()) + " exceeds " + std::to_string(lim.max_arity));
    }
    if (spec.num_classes() > lim.max_classes) {
        refuse(std::to_string(spec.num_classes()) + " classes exceed " + std::to_string(lim.max_classes));
    }
    if (estimate > lim.max_node_visits) {
        refuse("state space too large");
    }
}

void check_exact(const ProblemSpec& spec, const LossKind& loss)
{
    if (!uses_exact(spec, loss)) {
        throw std::invalid_argument("oracle needs an exact loss; raise exact_threshold");
    }
}

class Search {
public:
    Search(const LossKind& loss, const OracleOptions& options) : loss_(loss), options_(options) {}

    double leaf(const BeliefState& s) const
    {
        return exact_loss(snapshot_classifier(s), loss_.type, loss_.exact_threshold);
    }

    void visit()
    {
        if (++visits_ > options_.limits.max_node_visits) {
            throw LimitsExceeded("oracle exceeded its node visit limit", visits_);
        }
    }

    double optimal(const BeliefState& s, std::int64_t budget)
    {
        visit();
        const bool use_memo = options_.memoize && options_.allowed_actions.empty();
        std::vector<double> key;
        if (use_memo) {
            key = canonical_key(s, budget);
            const auto hit = memo_.find(key);
            if (hit != memo_.end()) {
                return hit->second;
            }
        }
        const double value = expand(s, budget);
        if (use_memo) {
            memo_.emplace(std::move(key), value);
        }
        return value;
    }

private:
    bool allowed(std::size_t a) const
    {
        const auto& mask = options_.allowed_actions;
        return mask.empty() || std::find(mask.begin(), mask.end(), a) != mask.end();
    }

    double expand(const BeliefState& s, std::int64_t budget)
    {
        const ProblemSpec& spec = s.spec();
        double best = 0.0;
        bool any = false;
        for (std::size_t a = 0; a < spec.num_actions(); ++a) {
            const Action action = spec.action_at(a);
            const int cost = spec.cost(action.feature);
            if (!allowed(a) || cost > budget) {
                continue;
            }
            double expected = 0.0;
            for (int k = 0; k < spec.arity(action.feature); ++k) {
                expected += s.predictive(action, k) * optimal(update(s, action, k), budget - cost);
            }
            // Strict comparison keeps the lowest action index on ties.
            if (!any || expected < best) {
                best = expected;
                any = true;
            }
        }
        if (!any) {
            return leaf(s);
        }
        if (options_.allow_stop) {
            best = std::min(best, leaf(s));
        }
        return best;
    }

    // Relabelling features, classes, or the values inside one feature leaves
    // the value unchanged, so states are keyed by the smallest relabelled grid.
    static std::vector<double> canonical_key(const BeliefState& s, std::int64_t budget)
    {
        const ProblemSpec& spec = s.spec();
        const std::size_t classes = spec.num_classes();
        std::vector<std::size_t> perm(classes);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<double> best;
        do {
            std::vector<std::vector<double>> blocks;
            for (std::size_t i = 0; i < spec.num_features(); ++i) {
                std::vector<std::vector<double>> columns(static_cast<std::size_t>(spec.arity(i)));
                for (int k = 0; k < spec.arity(i); ++k) {
                    for (std::size_t j = 0; j < classes; ++j) {
                        columns[static_cast<std::size_t>(k)].push_back(s.alpha(i, perm[j], k));
                    }
                }
                std::sort(columns.begin(), columns.end());
                std::vector<double> block = {static_cast<double>(spec.cost(i)), static_cast<double>(spec.arity(i))};
                for (const auto& c : columns) {
                    block.insert(block.end(), c.begin(), c.end());
                }
                blocks.push_back(std::move(block));
            }
            std::sort(blocks.begin(), blocks.end());
            std::vector<double> key;
            for (const auto& b : blocks) {
                key.insert(key.end(), b.begin(), b.end());
            }
            for (std::size_t j = 0; j < classes; ++j) {
                key.push_back(static_cast<double>(s.class_counts()[perm[j]]));
            }
            key.push_back(static_cast<double>(budget));
            if (best.empty() || key < best) {
                best = std::move(key);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    LossKind loss_;
    const OracleOptions& options_;
    double visits_ = 0.0;
    std::map<std::vector<double>, double> memo_;
};

} // namespace

double optimal_value(const BeliefState& belief, std::int64_t budget, const LossKind& loss,
                     const OracleOptions& options)
{
    check_exact(belief.spec(), loss);
    check_limits(belief.spec(), budget, options);
    for (std::size_t a : options.allowed_actions) {
        if (a >= belief.spec().num_actions()) {
            throw std::out_of_range("allowed action index out of range");
        }
    }
    Search search(loss, options);
    return search.optimal(belief, budget);
}

namespace {

class PolicyTree {
public:
    PolicyTree(const LossKind& loss, const OracleOptions& options) : search_(loss, options) {}

    double value(const BeliefState& s, const BudgetLedger& ledger, Policy& policy)
    {
        search_.visit();
        const Availability availability = Availability::unlimited(s.spec().num_actions());
        // Exact losses never read the stream; it only has to exist.
        Rng rng(0);
        const DecisionContext ctx{s, availability, ledger, rng};
        const auto action = policy.next(ctx);
        if (!action) {
            return search_.leaf(s);
        }
        const ProblemSpec& spec = s.spec();
        BudgetLedger next_ledger = ledger;
        next_ledger.spend(spec.cost(action->feature));
        double expected = 0.0;
        for (int k = 0; k < spec.arity(action->feature); ++k) {
            auto child = policy.clone();
            expected += s.predictive(*action, k) * value(update(s, *action, k), next_ledger, *child);
        }
        return expected;
    }

private:
    Search search_;
};

} // namespace

double policy_value(const PolicyConfig& config, const BeliefState& belief, std::int64_t budget,
                    const OracleOptions& options)
{
    check_exact(belief.spec(), config.loss);
    OracleOptions unmemoized = options;
    unmemoized.memoize = false;
    check_limits(belief.spec(), budget, unmemoized);
    auto policy = make_policy(config, belief.spec(), budget);
    PolicyTree tree(config.loss, unmemoized);
    return tree.value(belief, BudgetLedger(budget), *policy);
}

BeliefState random_tiny_belief(std::shared_ptr<const ProblemSpec> spec, Rng& rng)
{
    std::vector<double> alpha(spec->grid_size());
    for (double& a : alpha) {
        a = 1.0 + static_cast<double>(uniform_index(4, rng));
    }
    std::vector<std::int64_t> counts(spec->num_classes());
    for (auto& c : counts) {
        c = 1 + static_cast<std::int64_t>(uniform_index(5, rng));
    }
    return BeliefState(std::move(spec), std::move(alpha), std::move(counts));
}

} // namespace bnb
