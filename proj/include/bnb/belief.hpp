#pragma once

#include "bnb/problem.hpp"
#include "bnb/rng.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace bnb {

// Dirichlet hyperparameters alpha_ijk over every (feature, label) value row,
// plus the per-label counts behind the empirical class prior. This is the
// state of the budgeted learning MDP.
class BeliefState {
public:
    BeliefState(std::shared_ptr<const ProblemSpec> spec, std::vector<double> alpha,
                std::vector<std::int64_t> class_counts);

    // Every alpha_ijk set to `alpha0` (Dir(1, ..., 1) by default).
    static BeliefState uniform(std::shared_ptr<const ProblemSpec> spec, std::vector<std::int64_t> class_counts,
                               double alpha0 = 1.0);

    const ProblemSpec& spec() const { return *spec_; }
    const std::shared_ptr<const ProblemSpec>& shared_spec() const { return spec_; }

    double alpha(std::size_t feature, std::size_t label, int value) const
    {
        return alpha_[spec_->row_offset(feature, label) + static_cast<std::size_t>(value)];
    }
    std::span<const double> row(Action a) const
    {
        return {alpha_.data() + spec_->row_offset(a.feature, a.label),
                static_cast<std::size_t>(spec_->arity(a.feature))};
    }
    double row_total(Action a) const;
    std::span<const double> grid() const { return alpha_; }
    const std::vector<std::int64_t>& class_counts() const { return class_counts_; }

    // Posterior mean theta-hat_ijk: the probability that the next purchase of
    // `a` reveals `value`.
    double predictive(Action a, int value) const;

    // In-place conjugate update: alpha_ijk += 1.
    void observe(Action a, int value);
    // In-place update by a whole count vector for one row.
    void observe_counts(Action a, std::span<const int> counts);

    friend bool operator==(const BeliefState&, const BeliefState&);

private:
    std::shared_ptr<const ProblemSpec> spec_;
    std::vector<double> alpha_;
    std::vector<std::int64_t> class_counts_;
};

// Returns a copy of `belief` with alpha_{feature, label, value} raised by one.
BeliefState update(const BeliefState& belief, Action action, int value);

// The Naive Bayes model a belief induces: theta-hat grid and class prior.
class NBClassifier {
public:
    NBClassifier(std::shared_ptr<const ProblemSpec> spec, std::vector<double> theta, std::vector<double> prior);

    const ProblemSpec& spec() const { return *spec_; }
    const std::shared_ptr<const ProblemSpec>& shared_spec() const { return spec_; }
    double theta(std::size_t feature, std::size_t label, int value) const
    {
        return theta_[spec_->row_offset(feature, label) + static_cast<std::size_t>(value)];
    }
    std::span<const double> theta_row(std::size_t feature, std::size_t label) const
    {
        return {theta_.data() + spec_->row_offset(feature, label), static_cast<std::size_t>(spec_->arity(feature))};
    }
    double log_theta(std::size_t feature, std::size_t label, int value) const
    {
        return log_theta_[spec_->row_offset(feature, label) + static_cast<std::size_t>(value)];
    }
    std::span<const double> prior() const { return prior_; }
    std::span<const double> log_prior() const { return log_prior_; }

    // log p_j + sum_i log theta_{i, j, x_i} for every class j.
    void log_joint(std::span<const int> x, std::span<double> out) const;

private:
    std::shared_ptr<const ProblemSpec> spec_;
    std::vector<double> theta_;
    std::vector<double> prior_;
    std::vector<double> log_theta_;
    std::vector<double> log_prior_;
};

NBClassifier snapshot_classifier(const BeliefState& belief);

// argmax_j P(Y = j | x); ties go to the lowest class index.
std::size_t classify(const NBClassifier& model, std::span<const int> x);

// P(Y | x), normalised in log space.
std::vector<double> posterior_distribution(const NBClassifier& model, std::span<const int> x);

struct LabeledInstance {
    std::size_t label = 0;
    std::vector<int> values;

    friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

LabeledInstance sample_instance(const NBClassifier& model, Rng& rng);

// Probability that m = sum(counts) purchases of `action` reveal exactly
// `counts` (in any order) under the Dirichlet-multinomial predictive.
double allocation_outcome_prob(const BeliefState& belief, Action action, std::span<const int> counts);
double log_allocation_outcome_prob(std::span<const double> alpha, std::span<const int> counts);

// Beta-binomial pmf: probability that c of m draws hit a value with Dirichlet
// mass `alpha_k` out of row total `alpha_total`.
double beta_binomial_pmf(int m, int c, double alpha_k, double alpha_total);

} // namespace bnb
