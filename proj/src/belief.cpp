#include "bnb/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bnb {

namespace {

void check_row_index(const ProblemSpec& spec, Action a, int value)
{
    if (a.feature >= spec.num_features() || a.label >= spec.num_classes()) {
        throw std::out_of_range("action out of range");
    }
    if (value < 0 || value >= spec.arity(a.feature)) {
        throw std::out_of_range("value " + std::to_string(value) + " out of range for feature '" +
                                spec.feature(a.feature).name + "'");
    }
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity(); }

} // namespace

BeliefState::BeliefState(std::shared_ptr<const ProblemSpec> spec, std::vector<double> alpha,
                         std::vector<std::int64_t> class_counts)
    : spec_(std::move(spec)), alpha_(std::move(alpha)), class_counts_(std::move(class_counts))
{
    if (!spec_) {
        throw std::invalid_argument("belief needs a problem spec");
    }
    if (alpha_.size() != spec_->grid_size()) {
        throw std::invalid_argument("alpha grid does not match the problem shape");
    }
    if (class_counts_.size() != spec_->num_classes()) {
        throw std::invalid_argument("class count vector does not match the number of labels");
    }
    for (double a : alpha_) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw std::invalid_argument("Dirichlet hyperparameters must be positive and finite");
        }
    }
    for (std::int64_t c : class_counts_) {
        if (c < 0) {
            throw std::invalid_argument("class counts must be nonnegative");
        }
    }
}

BeliefState BeliefState::uniform(std::shared_ptr<const ProblemSpec> spec, std::vector<std::int64_t> class_counts,
                                 double alpha0)
{
    std::vector<double> alpha(spec->grid_size(), alpha0);
    return BeliefState(std::move(spec), std::move(alpha), std::move(class_counts));
}

double BeliefState::row_total(Action a) const
{
    const auto r = row(a);
    return std::accumulate(r.begin(), r.end(), 0.0);
}

double BeliefState::predictive(Action a, int value) const
{
    check_row_index(*spec_, a, value);
    return row(a)[static_cast<std::size_t>(value)] / row_total(a);
}

void BeliefState::observe(Action a, int value)
{
    check_row_index(*spec_, a, value);
    alpha_[spec_->row_offset(a.feature, a.label) + static_cast<std::size_t>(value)] += 1.0;
}

void BeliefState::observe_counts(Action a, std::span<const int> counts)
{
    if (counts.size() != static_cast<std::size_t>(spec_->arity(a.feature))) {
        throw std::out_of_range("count vector length does not match feature arity");
    }
    const std::size_t base = spec_->row_offset(a.feature, a.label);
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] < 0) {
            throw std::invalid_argument("negative outcome count");
        }
        alpha_[base + k] += counts[k];
    }
}

bool operator==(const BeliefState& a, const BeliefState& b)
{
    return *a.spec_ == *b.spec_ && a.alpha_ == b.alpha_ && a.class_counts_ == b.class_counts_;
}

BeliefState update(const BeliefState& belief, Action action, int value)
{
    BeliefState next = belief;
    next.observe(action, value);
    return next;
}

NBClassifier::NBClassifier(std::shared_ptr<const ProblemSpec> spec, std::vector<double> theta,
                           std::vector<double> prior)
    : spec_(std::move(spec)), theta_(std::move(theta)), prior_(std::move(prior))
{
    constexpr double tol = 1e-12;
    if (theta_.size() != spec_->grid_size() || prior_.size() != spec_->num_classes()) {
        throw std::invalid_argument("classifier tables do not match the problem shape");
    }
    for (double t : theta_) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw std::invalid_argument("theta entries must lie in [0, 1]");
        }
    }
    for (std::size_t i = 0; i < spec_->num_features(); ++i) {
        for (std::size_t j = 0; j < spec_->num_classes(); ++j) {
            const auto r = theta_row(i, j);
            if (std::abs(std::accumulate(r.begin(), r.end(), 0.0) - 1.0) > tol) {
                throw std::invalid_argument("theta row does not sum to one");
            }
        }
    }
    for (double p : prior_) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("class prior entries must lie in [0, 1]");
        }
    }
    if (std::abs(std::accumulate(prior_.begin(), prior_.end(), 0.0) - 1.0) > tol) {
        throw std::invalid_argument("class prior does not sum to one");
    }
    log_theta_.resize(theta_.size());
    std::transform(theta_.begin(), theta_.end(), log_theta_.begin(), safe_log);
    log_prior_.resize(prior_.size());
    std::transform(prior_.begin(), prior_.end(), log_prior_.begin(), safe_log);
}

void NBClassifier::log_joint(std::span<const int> x, std::span<double> out) const
{
    const std::size_t n = spec_->num_features();
    if (x.size() != n) {
        throw std::invalid_argument("feature vector has the wrong length");
    }
    for (std::size_t j = 0; j < spec_->num_classes(); ++j) {
        double s = log_prior_[j];
        for (std::size_t i = 0; i < n; ++i) {
            s += log_theta_[spec_->row_offset(i, j) + static_cast<std::size_t>(x[i])];
        }
        out[j] = s;
    }
}

NBClassifier snapshot_classifier(const BeliefState& belief)
{
    const ProblemSpec& spec = belief.spec();
    const auto& counts = belief.class_counts();
    const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    if (total <= 0) {
        throw std::domain_error("empty prior: every class count is zero");
    }

    std::vector<double> theta(spec.grid_size());
    const auto alpha = belief.grid();
    for (std::size_t i = 0; i < spec.num_features(); ++i) {
        for (std::size_t j = 0; j < spec.num_classes(); ++j) {
            const std::size_t base = spec.row_offset(i, j);
            const std::size_t r = static_cast<std::size_t>(spec.arity(i));
            double sum = 0.0;
            for (std::size_t k = 0; k < r; ++k) {
                sum += alpha[base + k];
            }
            for (std::size_t k = 0; k < r; ++k) {
                theta[base + k] = alpha[base + k] / sum;
            }
        }
    }
    std::vector<double> prior(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
        prior[j] = static_cast<double>(counts[j]) / static_cast<double>(total);
    }
    return NBClassifier(belief.shared_spec(), std::move(theta), std::move(prior));
}

std::size_t classify(const NBClassifier& model, std::span<const int> x)
{
    std::vector<double> scores(model.spec().num_classes());
    model.log_joint(x, scores);
    std::size_t best = 0;
    for (std::size_t j = 1; j < scores.size(); ++j) {
        if (scores[j] > scores[best]) {
            best = j;
        }
    }
    return best;
}

std::vector<double> posterior_distribution(const NBClassifier& model, std::span<const int> x)
{
    std::vector<double> p(model.spec().num_classes());
    model.log_joint(x, p);
    const double top = *std::max_element(p.begin(), p.end());
    if (!std::isfinite(top)) {
        // x has probability zero under the model.
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
        return p;
    }
    double z = 0.0;
    for (double& v : p) {
        v = std::exp(v - top);
        z += v;
    }
    for (double& v : p) {
        v /= z;
    }
    return p;
}

LabeledInstance sample_instance(const NBClassifier& model, Rng& rng)
{
    const ProblemSpec& spec = model.spec();
    LabeledInstance out;
    out.label = sample_categorical(model.prior(), rng);
    out.values.resize(spec.num_features());
    for (std::size_t i = 0; i < spec.num_features(); ++i) {
        out.values[i] = static_cast<int>(sample_categorical(model.theta_row(i, out.label), rng));
    }
    return out;
}

double log_allocation_outcome_prob(std::span<const double> alpha, std::span<const int> counts)
{
    if (counts.size() != alpha.size()) {
        throw std::invalid_argument("count vector length does not match feature arity");
    }
    double a_before = 0.0;
    int m = 0;
    double log_p = 0.0;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (counts[k] < 0) {
            throw std::invalid_argument("negative outcome count");
        }
        a_before += alpha[k];
        m += counts[k];
        log_p += std::lgamma(alpha[k] + counts[k]) - std::lgamma(alpha[k]) - std::lgamma(counts[k] + 1.0);
    }
    log_p += std::lgamma(m + 1.0) + std::lgamma(a_before) - std::lgamma(a_before + m);
    return log_p;
}

double allocation_outcome_prob(const BeliefState& belief, Action action, std::span<const int> counts)
{
    if (action.feature >= belief.spec().num_features() || action.label >= belief.spec().num_classes()) {
        throw std::out_of_range("action out of range");
    }
    const auto alpha = belief.row(action);
    if (std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0; }) && counts.size() == alpha.size()) {
        return 1.0;
    }
    return std::exp(log_allocation_outcome_prob(alpha, counts));
}

double beta_binomial_pmf(int m, int c, double alpha_k, double alpha_total)
{
    if (c < 0 || c > m) {
        return 0.0;
    }
    const double beta = alpha_total - alpha_k;
    const double log_choose = std::lgamma(m + 1.0) - std::lgamma(c + 1.0) - std::lgamma(m - c + 1.0);
    const double log_b = std::lgamma(c + alpha_k) + std::lgamma(m - c + beta) - std::lgamma(m + alpha_total) -
                         (std::lgamma(alpha_k) + std::lgamma(beta) - std::lgamma(alpha_total));
    return std::exp(log_choose + log_b);
}

} // namespace bnb
