#include "bnb/loss.hpp"

#include "bnb/compositions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace bnb {

std::string to_string(LossType type)
{
    switch (type) {
    case LossType::gini:
        return "gini";
    case LossType::entropy:
        return "entropy";
    case LossType::zero_one:
        return "zero_one";
    }
    return "?";
}

LossType loss_type_from_string(const std::string& name)
{
    if (name == "gini") {
        return LossType::gini;
    }
    if (name == "entropy") {
        return LossType::entropy;
    }
    if (name == "zero_one") {
        return LossType::zero_one;
    }
    throw std::invalid_argument("unknown loss '" + name + "'");
}

bool uses_exact(const ProblemSpec& spec, const LossKind& kind)
{
    return spec.joint_configurations() <= kind.exact_threshold;
}

double impurity(LossType type, std::span<const double> p)
{
    switch (type) {
    case LossType::gini: {
        double s = 0.0;
        for (double v : p) {
            s += v * (1.0 - v);
        }
        return s;
    }
    case LossType::entropy: {
        double s = 0.0;
        for (double v : p) {
            if (v > 0.0) {
                s -= v * std::log2(v);
            }
        }
        return s;
    }
    case LossType::zero_one:
        return 1.0 - *std::max_element(p.begin(), p.end());
    }
    return 0.0;
}

namespace {

// Calls visit(x) for every joint configuration in odometer order.
void for_each_configuration(const ProblemSpec& spec, const std::function<void(std::span<const int>)>& visit)
{
    std::vector<int> x(spec.num_features(), 0);
    while (true) {
        visit(x);
        std::size_t i = 0;
        while (i < x.size()) {
            if (++x[i] < spec.arity(i)) {
                break;
            }
            x[i] = 0;
            ++i;
        }
        if (i == x.size()) {
            return;
        }
    }
}

void check_exact_size(const ProblemSpec& spec, double threshold)
{
    if (spec.joint_configurations() > threshold) {
        throw std::length_error("joint configuration count exceeds the exact threshold; use Monte Carlo");
    }
}

double exact_impl(const NBClassifier& model, LossType type, double threshold)
{
    const ProblemSpec& spec = model.spec();
    check_exact_size(spec, threshold);
    std::vector<double> joint(spec.num_classes());
    double total = 0.0;
    for_each_configuration(spec, [&](std::span<const int> x) {
        model.log_joint(x, joint);
        double px = 0.0;
        for (double& v : joint) {
            v = std::exp(v);
            px += v;
        }
        if (px <= 0.0) {
            return;
        }
        for (double& v : joint) {
            v /= px;
        }
        total += px * impurity(type, joint);
    });
    return total;
}

// The draws shared by the plain estimators and RowLossScorer: x ~ NB(s).
std::vector<LabeledInstance> draw_points(const NBClassifier& model, int samples, Rng& rng)
{
    if (samples < 1) {
        throw std::invalid_argument("Monte-Carlo sample count must be at least 1");
    }
    std::vector<LabeledInstance> points;
    points.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        points.push_back(sample_instance(model, rng));
    }
    return points;
}

double mc_impl(const NBClassifier& model, LossType type, int samples, Rng& rng)
{
    const auto points = draw_points(model, samples, rng);
    double total = 0.0;
    for (const LabeledInstance& p : points) {
        total += impurity(type, posterior_distribution(model, p.values));
    }
    return total / samples;
}

} // namespace

double gini_exact(const NBClassifier& model, double threshold) { return exact_impl(model, LossType::gini, threshold); }
double entropy_exact(const NBClassifier& model, double threshold)
{
    return exact_impl(model, LossType::entropy, threshold);
}
double expected_zero_one_exact(const NBClassifier& model, double threshold)
{
    return exact_impl(model, LossType::zero_one, threshold);
}
double exact_loss(const NBClassifier& model, LossType type, double threshold)
{
    return exact_impl(model, type, threshold);
}

double gini_mc(const NBClassifier& model, int samples, Rng& rng) { return mc_impl(model, LossType::gini, samples, rng); }
double entropy_mc(const NBClassifier& model, int samples, Rng& rng)
{
    return mc_impl(model, LossType::entropy, samples, rng);
}
double expected_zero_one_mc(const NBClassifier& model, int samples, Rng& rng)
{
    return mc_impl(model, LossType::zero_one, samples, rng);
}
double mc_loss(const NBClassifier& model, LossType type, int samples, Rng& rng)
{
    return mc_impl(model, type, samples, rng);
}

double estimate_loss(const NBClassifier& model, const LossKind& kind, Rng& rng)
{
    if (uses_exact(model.spec(), kind)) {
        return exact_impl(model, kind.type, kind.exact_threshold);
    }
    return mc_impl(model, kind.type, kind.mc_samples, rng);
}

double zero_one_error(const NBClassifier& model, const ValidationSet& validation)
{
    if (validation.instances.empty()) {
        throw std::invalid_argument("validation set is empty");
    }
    std::size_t wrong = 0;
    for (const LabeledInstance& inst : validation.instances) {
        if (classify(model, inst.values) != inst.label) {
            ++wrong;
        }
    }
    return static_cast<double>(wrong) / static_cast<double>(validation.instances.size());
}

// ---------------------------------------------------------------------------
// RowLossScorer

namespace {

// P * impurity(E / P) for unnormalised class masses E; degree-one homogeneous.
double weighted_impurity(LossType type, std::span<const double> e)
{
    double total = 0.0;
    for (double v : e) {
        total += v;
    }
    if (!(total > 0.0)) {
        return 0.0;
    }
    switch (type) {
    case LossType::gini: {
        double sq = 0.0;
        for (double v : e) {
            sq += v * v;
        }
        return total - sq / total;
    }
    case LossType::entropy: {
        double s = 0.0;
        for (double v : e) {
            if (v > 0.0) {
                s += v * std::log2(total / v);
            }
        }
        return s;
    }
    case LossType::zero_one:
        return total - *std::max_element(e.begin(), e.end());
    }
    return 0.0;
}

} // namespace

RowLossScorer::RowLossScorer(const BeliefState& belief, const LossKind& kind, Rng& rng)
    : spec_(belief.shared_spec()),
      alpha_(belief.grid().begin(), belief.grid().end()),
      type_(kind.type),
      exact_(uses_exact(belief.spec(), kind)),
      num_classes_(belief.spec().num_classes())
{
    const ProblemSpec& spec = *spec_;
    const NBClassifier model = snapshot_classifier(belief);
    const std::size_t n = spec.num_features();
    std::vector<double> joint(num_classes_);

    auto add_point = [&](std::span<const int> x, double weight, bool normalise) {
        values_.insert(values_.end(), x.begin(), x.end());
        model.log_joint(x, joint);
        double log_ref = 0.0;
        if (normalise) {
            const double top = *std::max_element(joint.begin(), joint.end());
            double z = 0.0;
            for (double v : joint) {
                z += std::exp(v - top);
            }
            log_ref = top + std::log(z);
        }
        for (double v : joint) {
            mass_.push_back(weight * std::exp(v - log_ref));
        }
        ++num_points_;
    };

    if (exact_) {
        std::vector<int> x(n, 0);
        while (true) {
            add_point(x, 1.0, false);
            std::size_t i = 0;
            while (i < n) {
                if (++x[i] < spec.arity(i)) {
                    break;
                }
                x[i] = 0;
                ++i;
            }
            if (i == n) {
                break;
            }
        }
    } else {
        const auto points = draw_points(model, kind.mc_samples, rng);
        const double w = 1.0 / static_cast<double>(points.size());
        for (const LabeledInstance& p : points) {
            add_point(p.values, w, true);
        }
    }

    groups_.assign(spec.row_offset(n - 1, 0) + static_cast<std::size_t>(spec.arity(n - 1)), {});
    for (std::size_t p = 0; p < num_points_; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            groups_[spec.row_offset(i, 0) + static_cast<std::size_t>(values_[p * n + i])].push_back(
                static_cast<std::uint32_t>(p));
        }
    }

    double total = 0.0;
    for (std::size_t p = 0; p < num_points_; ++p) {
        total += weighted_impurity(type_, std::span<const double>(mass_.data() + p * num_classes_, num_classes_));
    }
    base_loss_ = total;
}

double RowLossScorer::point_loss(std::size_t point, std::size_t label, double ratio) const
{
    double buf[16];
    std::vector<double> heap;
    double* e = buf;
    if (num_classes_ > 16) {
        heap.resize(num_classes_);
        e = heap.data();
    }
    const double* src = mass_.data() + point * num_classes_;
    std::copy(src, src + num_classes_, e);
    e[label] *= ratio;
    return weighted_impurity(type_, std::span<const double>(e, num_classes_));
}

double RowLossScorer::group_loss(Action action, int value, double ratio) const
{
    const auto& group = groups_[spec_->row_offset(action.feature, 0) + static_cast<std::size_t>(value)];
    double total = 0.0;
    for (std::uint32_t p : group) {
        total += point_loss(p, action.label, ratio);
    }
    return total;
}

double RowLossScorer::loss_with_row(Action action, std::span<const double> row) const
{
    const std::size_t r = static_cast<std::size_t>(spec_->arity(action.feature));
    if (row.size() != r) {
        throw std::invalid_argument("replacement row has the wrong length");
    }
    const double* alpha = alpha_.data() + spec_->row_offset(action.feature, action.label);
    double a_total = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
        a_total += alpha[k];
    }
    double total = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
        total += group_loss(action, static_cast<int>(k), row[k] / (alpha[k] / a_total));
    }
    return total;
}

double RowLossScorer::one_step_expected_loss(Action action) const
{
    const std::size_t r = static_cast<std::size_t>(spec_->arity(action.feature));
    const double* alpha = alpha_.data() + spec_->row_offset(action.feature, action.label);
    double a_total = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
        a_total += alpha[k];
    }
    std::vector<double> child(r);
    double expected = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t v = 0; v < r; ++v) {
            child[v] = (alpha[v] + (v == k ? 1.0 : 0.0)) / (a_total + 1.0);
        }
        expected += (alpha[k] / a_total) * loss_with_row(action, child);
    }
    return expected;
}

double RowLossScorer::expected_loss_enumerated(Action action, int m) const
{
    const std::size_t r = static_cast<std::size_t>(spec_->arity(action.feature));
    const std::span<const double> alpha(alpha_.data() + spec_->row_offset(action.feature, action.label), r);
    double a_total = 0.0;
    for (double a : alpha) {
        a_total += a;
    }
    std::vector<double> next(r);
    double expected = 0.0;
    for_each_composition(m, static_cast<int>(r), [&](std::span<const int> counts) {
        const double prob = std::exp(log_allocation_outcome_prob(alpha, counts));
        for (std::size_t k = 0; k < r; ++k) {
            next[k] = (alpha[k] + counts[k]) / (a_total + m);
        }
        expected += prob * loss_with_row(action, next);
    });
    return expected;
}

double RowLossScorer::expected_loss_marginal(Action action, int m) const
{
    const std::size_t r = static_cast<std::size_t>(spec_->arity(action.feature));
    const double* alpha = alpha_.data() + spec_->row_offset(action.feature, action.label);
    double a_total = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
        a_total += alpha[k];
    }
    double expected = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
        if (groups_[spec_->row_offset(action.feature, 0) + k].empty()) {
            continue;
        }
        const double theta_hat = alpha[k] / a_total;
        for (int c = 0; c <= m; ++c) {
            const double prob = beta_binomial_pmf(m, c, alpha[k], a_total);
            if (prob == 0.0) {
                continue;
            }
            const double ratio = ((alpha[k] + c) / (a_total + m)) / theta_hat;
            expected += prob * group_loss(action, static_cast<int>(k), ratio);
        }
    }
    return expected;
}

double RowLossScorer::expected_loss(Action action, int m, std::uint64_t enumeration_cap) const
{
    if (m < 0) {
        throw std::invalid_argument("negative lookahead horizon");
    }
    if (m == 0) {
        return base_loss_;
    }
    const int r = spec_->arity(action.feature);
    std::uint64_t count = 0;
    try {
        count = composition_count(m, r);
    } catch (const std::overflow_error&) {
        count = UINT64_MAX;
    }
    if (count <= enumeration_cap) {
        return expected_loss_enumerated(action, m);
    }
    return expected_loss_marginal(action, m);
}

} // namespace bnb
