#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bnb {

class BudgetLedger {
public:
    explicit BudgetLedger(std::int64_t initial) : initial_(initial)
    {
        if (initial < 0) {
            throw std::invalid_argument("budget must be nonnegative");
        }
    }

    std::int64_t initial() const { return initial_; }
    std::int64_t spent() const { return spent_; }
    std::int64_t remaining() const { return initial_ - spent_; }
    bool can_afford(std::int64_t cost) const { return cost <= remaining(); }

    void spend(std::int64_t cost)
    {
        if (cost < 0 || !can_afford(cost)) {
            throw std::logic_error("purchase would overspend the budget");
        }
        spent_ += cost;
    }

private:
    std::int64_t initial_;
    std::int64_t spent_ = 0;
};

// Remaining purchasable cells per action index (feature-major).
class Availability {
public:
    static constexpr std::int64_t unlimited_count = std::numeric_limits<std::int64_t>::max();

    Availability() = default;
    explicit Availability(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {}

    // Pool-free mode: every action can always be purchased.
    static Availability unlimited(std::size_t num_actions)
    {
        return Availability(std::vector<std::int64_t>(num_actions, unlimited_count));
    }

    std::size_t size() const { return counts_.size(); }
    std::int64_t count(std::size_t action_index) const { return counts_.at(action_index); }
    bool available(std::size_t action_index) const { return counts_.at(action_index) > 0; }
    void set(std::size_t action_index, std::int64_t value) { counts_.at(action_index) = value; }
    void decrement(std::size_t action_index)
    {
        if (counts_.at(action_index) != unlimited_count) {
            --counts_[action_index];
        }
    }

private:
    std::vector<std::int64_t> counts_;
};

} // namespace bnb
