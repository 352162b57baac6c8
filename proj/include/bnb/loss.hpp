#pragma once

#include "bnb/belief.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bnb {

enum class LossType { gini, entropy, zero_one };

std::string to_string(LossType type);
LossType loss_type_from_string(const std::string& name);

struct LossKind {
    LossType type = LossType::gini;
    // Sample count for Monte-Carlo estimates.
    int mc_samples = 1000;
    // Largest joint-configuration count evaluated exactly.
    double exact_threshold = 4096;
};

// True when the configured threshold allows exact evaluation for `spec`.
bool uses_exact(const ProblemSpec& spec, const LossKind& kind);

struct ValidationSet {
    std::vector<LabeledInstance> instances;
};

// Per-instance impurity of a class posterior: GINI sum_y p(1 - p),
// entropy -sum_y p log2 p (0 log 0 = 0), or 0/1 1 - max_y p.
double impurity(LossType type, std::span<const double> posterior);

// sum_x P(x) sum_y P(y|x)(1 - P(y|x)) over every joint configuration.
// Throws std::length_error when the configuration count exceeds the threshold.
double gini_exact(const NBClassifier& model, double exact_threshold = 4096);
double entropy_exact(const NBClassifier& model, double exact_threshold = 4096);
// Expected misclassification rate of the model under its own joint.
double expected_zero_one_exact(const NBClassifier& model, double exact_threshold = 4096);
double exact_loss(const NBClassifier& model, LossType type, double exact_threshold = 4096);

// Plain Monte Carlo with x drawn from the model's own joint.
double gini_mc(const NBClassifier& model, int samples, Rng& rng);
double entropy_mc(const NBClassifier& model, int samples, Rng& rng);
double expected_zero_one_mc(const NBClassifier& model, int samples, Rng& rng);
double mc_loss(const NBClassifier& model, LossType type, int samples, Rng& rng);

// Exact when the configuration count is within the threshold, Monte Carlo otherwise.
double estimate_loss(const NBClassifier& model, const LossKind& kind, Rng& rng);

// Fraction of validation instances the model misclassifies.
double zero_one_error(const NBClassifier& model, const ValidationSet& validation);

// Scores the loss of beliefs that differ from a base belief s in a single
// (feature, label) row, which is all that greedy and single-feature lookahead
// ever ask for.
//
// The loss is held as a weighted sum over support points x. In exact mode the
// points are every joint configuration with weight P'(x); in sampled mode they
// are draws from NB(s) reweighted by P'(x) / P_s(x). Either way a point only
// sees the changed row through theta'_{i, j, x_i}, so the contribution of x
// after a row change is its base class masses with class j rescaled by
// theta'_{i, j, x_i} / theta-hat_{i, j, x_i}.
class RowLossScorer {
public:
    RowLossScorer(const BeliefState& belief, const LossKind& kind, Rng& rng);

    bool exact() const { return exact_; }
    std::size_t num_points() const { return num_points_; }

    // Loss of NB(s) itself.
    double base_loss() const { return base_loss_; }

    // Loss after replacing theta-hat for `action` by the probability vector `row`.
    double loss_with_row(Action action, std::span<const double> row) const;

    // sum_k theta-hat_k * L(NB(update(s, action, k))): one purchase lookahead.
    double one_step_expected_loss(Action action) const;

    // Expected loss after m purchases of `action`, summing allocation_outcome_prob
    // times loss over every outcome composition.
    double expected_loss_enumerated(Action action, int m) const;

    // The same expectation through per-value beta-binomial marginals; cost is
    // linear in m and independent of the arity.
    double expected_loss_marginal(Action action, int m) const;

    // Enumerates while the composition count is at most `enumeration_cap`,
    // otherwise marginalises. m = 0 returns base_loss().
    double expected_loss(Action action, int m, std::uint64_t enumeration_cap) const;

private:
    double point_loss(std::size_t point, std::size_t label, double ratio) const;
    double group_loss(Action action, int value, double ratio) const;

    std::shared_ptr<const ProblemSpec> spec_;
    std::vector<double> alpha_;
    LossType type_;
    bool exact_ = false;
    std::size_t num_points_ = 0;
    std::size_t num_classes_ = 0;
    std::vector<int> values_;                        // num_points x n
    std::vector<double> mass_;                       // num_points x |Y|
    std::vector<std::vector<std::uint32_t>> groups_; // by row_offset(i, 0) + k
    double base_loss_ = 0.0;
};

} // namespace bnb
