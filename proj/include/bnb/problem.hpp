#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bnb {

struct FeatureSpec {
    std::string name;
    int arity = 2;
    int cost = 1;
    // Display names for the values; empty means "0", "1", ...
    std::vector<std::string> value_names;
};

// A purchase request: the value of `feature` from an instance labelled `label`.
struct Action {
    std::size_t feature = 0;
    std::size_t label = 0;

    friend bool operator==(const Action&, const Action&) = default;
};

// The features, their costs and the class labels of a budgeted learning task.
// Also fixes the flat layout used by every (feature, label, value) grid: the
// row for (i, j) starts at row_offset(i, j) and has arity(i) entries.
class ProblemSpec {
public:
    ProblemSpec(std::vector<FeatureSpec> features, std::vector<std::string> class_labels);

    std::size_t num_features() const { return features_.size(); }
    std::size_t num_classes() const { return class_labels_.size(); }
    std::size_t num_actions() const { return features_.size() * class_labels_.size(); }

    const FeatureSpec& feature(std::size_t i) const { return features_.at(i); }
    const std::vector<FeatureSpec>& features() const { return features_; }
    const std::vector<std::string>& class_labels() const { return class_labels_; }
    int arity(std::size_t i) const { return features_[i].arity; }
    int cost(std::size_t i) const { return features_[i].cost; }
    int max_arity() const;
    int min_cost() const;
    bool uniform_costs() const;

    std::size_t row_offset(std::size_t feature, std::size_t label) const
    {
        return feature_offset_[feature] + label * static_cast<std::size_t>(features_[feature].arity);
    }
    std::size_t grid_size() const { return grid_size_; }

    // Number of joint feature configurations, as a double so it cannot overflow.
    double joint_configurations() const;

    std::size_t action_index(Action a) const { return a.feature * num_classes() + a.label; }
    Action action_at(std::size_t index) const { return {index / num_classes(), index % num_classes()}; }

    std::string value_name(std::size_t feature, int value) const;
    std::size_t feature_index(const std::string& name) const;

    friend bool operator==(const ProblemSpec& a, const ProblemSpec& b);

private:
    std::vector<FeatureSpec> features_;
    std::vector<std::string> class_labels_;
    std::vector<std::size_t> feature_offset_;
    std::size_t grid_size_ = 0;
};

bool operator==(const FeatureSpec& a, const FeatureSpec& b);

// Binary features with unit costs named f0..f{n-1}, classes c0..c{k-1}.
ProblemSpec make_uniform_spec(std::size_t num_features, std::size_t num_classes, int arity = 2, int cost = 1);

} // namespace bnb
