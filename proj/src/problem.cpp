#include "bnb/problem.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bnb {

ProblemSpec::ProblemSpec(std::vector<FeatureSpec> features, std::vector<std::string> class_labels)
    : features_(std::move(features)), class_labels_(std::move(class_labels))
{
    if (features_.empty()) {
        throw std::invalid_argument("problem needs at least one feature");
    }
    if (class_labels_.size() < 2) {
        throw std::invalid_argument("problem needs at least two class labels");
    }
    std::set<std::string> names;
    for (const FeatureSpec& f : features_) {
        if (f.arity < 2) {
            throw std::invalid_argument("feature '" + f.name + "' has arity < 2");
        }
        if (f.cost < 1) {
            throw std::invalid_argument("feature '" + f.name + "' has cost < 1");
        }
        if (!f.value_names.empty() && f.value_names.size() != static_cast<std::size_t>(f.arity)) {
            throw std::invalid_argument("feature '" + f.name + "' value names do not match arity");
        }
        if (!names.insert(f.name).second) {
            throw std::invalid_argument("duplicate feature name '" + f.name + "'");
        }
    }
    std::set<std::string> labels(class_labels_.begin(), class_labels_.end());
    if (labels.size() != class_labels_.size()) {
        throw std::invalid_argument("duplicate class label");
    }

    feature_offset_.reserve(features_.size());
    for (const FeatureSpec& f : features_) {
        feature_offset_.push_back(grid_size_);
        grid_size_ += class_labels_.size() * static_cast<std::size_t>(f.arity);
    }
}

int ProblemSpec::max_arity() const
{
    int m = 0;
    for (const FeatureSpec& f : features_) {
        m = std::max(m, f.arity);
    }
    return m;
}

int ProblemSpec::min_cost() const
{
    int m = features_.front().cost;
    for (const FeatureSpec& f : features_) {
        m = std::min(m, f.cost);
    }
    return m;
}

bool ProblemSpec::uniform_costs() const
{
    return std::all_of(features_.begin(), features_.end(),
                       [&](const FeatureSpec& f) { return f.cost == features_.front().cost; });
}

double ProblemSpec::joint_configurations() const
{
    double n = 1.0;
    for (const FeatureSpec& f : features_) {
        n *= f.arity;
    }
    return n;
}

std::string ProblemSpec::value_name(std::size_t feature, int value) const
{
    const FeatureSpec& f = features_.at(feature);
    if (f.value_names.empty()) {
        return std::to_string(value);
    }
    return f.value_names.at(static_cast<std::size_t>(value));
}

std::size_t ProblemSpec::feature_index(const std::string& name) const
{
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (features_[i].name == name) {
            return i;
        }
    }
    throw std::out_of_range("unknown feature '" + name + "'");
}

bool operator==(const FeatureSpec& a, const FeatureSpec& b)
{
    return a.name == b.name && a.arity == b.arity && a.cost == b.cost && a.value_names == b.value_names;
}

bool operator==(const ProblemSpec& a, const ProblemSpec& b)
{
    return a.features_ == b.features_ && a.class_labels_ == b.class_labels_;
}

ProblemSpec make_uniform_spec(std::size_t num_features, std::size_t num_classes, int arity, int cost)
{
    std::vector<FeatureSpec> features;
    for (std::size_t i = 0; i < num_features; ++i) {
        features.push_back({"f" + std::to_string(i), arity, cost, {}});
    }
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < num_classes; ++j) {
        labels.push_back("c" + std::to_string(j));
    }
    return ProblemSpec(std::move(features), std::move(labels));
}

} // namespace bnb
