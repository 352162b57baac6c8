#pragma once

#include "bnb/belief.hpp"
#include "bnb/ledger.hpp"
#include "bnb/loss.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bnb {

// Labelled training instances whose feature values stay hidden until bought.
// This is the simulator's object: ground truth is reachable through
// ground_truth(), which learner code never receives. Learners see a PoolView.
class InstancePool {
public:
    InstancePool(std::shared_ptr<const ProblemSpec> spec, std::vector<std::size_t> labels,
                 std::vector<int> values);

    const ProblemSpec& spec() const { return *spec_; }
    const std::shared_ptr<const ProblemSpec>& shared_spec() const { return spec_; }
    std::size_t num_rows() const { return labels_.size(); }
    std::size_t label(std::size_t row) const { return labels_.at(row); }
    const std::vector<std::size_t>& labels() const { return labels_; }

    std::optional<int> revealed(std::size_t row, std::size_t feature) const;
    std::size_t revealed_count() const { return revealed_count_; }
    std::int64_t availability(Action a) const;
    Availability availability() const;
    std::vector<std::int64_t> class_counts() const;

    // Reveals the feature of a uniformly chosen instance with the action's
    // label whose value is still hidden. Throws ActionExhausted if none is left.
    int purchase(Action action, Rng& rng);

    // Simulator side.
    LabeledInstance ground_truth(std::size_t row) const;
    void reveal_all();

    // Rows in the given order, all hidden.
    InstancePool subset(std::span<const std::size_t> rows) const;

    // Pool snapshot. Hidden values are withheld unless include_hidden is set.
    nlohmann::json to_json(bool include_hidden) const;
    static InstancePool from_json(const nlohmann::json& j);

    // Same spec, labels, values and revealed mask.
    friend bool operator==(const InstancePool& a, const InstancePool& b);

private:
    std::size_t cell(std::size_t row, std::size_t feature) const { return row * spec_->num_features() + feature; }
    void rebuild_hidden_lists();

    std::shared_ptr<const ProblemSpec> spec_;
    std::vector<std::size_t> labels_;
    std::vector<int> values_;
    std::vector<char> revealed_;
    std::size_t revealed_count_ = 0;
    // Rows with hidden (feature, label) cells, by action index.
    std::vector<std::vector<std::uint32_t>> hidden_rows_;
};

// What a learner may know about a pool: labels, revealed cells and
// availability counts. It has no way to reach hidden values.
class PoolView {
public:
    explicit PoolView(const InstancePool& pool) : pool_(&pool) {}

    const ProblemSpec& spec() const { return pool_->spec(); }
    std::size_t num_rows() const { return pool_->num_rows(); }
    std::size_t label(std::size_t row) const { return pool_->label(row); }
    std::optional<int> revealed(std::size_t row, std::size_t feature) const { return pool_->revealed(row, feature); }
    Availability availability() const { return pool_->availability(); }
    std::vector<std::int64_t> class_counts() const { return pool_->class_counts(); }

private:
    const InstancePool* pool_;
};

enum class SyntheticRegime { all_uniform, one_discriminative };

std::string to_string(SyntheticRegime regime);
SyntheticRegime synthetic_regime_from_string(const std::string& name);

struct SyntheticSpec {
    int n_features = 10;
    SyntheticRegime regime = SyntheticRegime::all_uniform;
    // P(X_d = value 0 | class 0) = P(X_d = value 1 | class 1) for the discriminative feature.
    double discriminative_prob = 0.9;
    int n_instances = 1000;
    // P(class 0).
    double class_prob = 0.5;
};

struct SyntheticData {
    InstancePool pool;
    NBClassifier model;
    // Index of the discriminative feature (one_discriminative only).
    std::optional<std::size_t> discriminative_feature;
};

// Binary features and classes. all_uniform: theta_ij ~ Dir(1, 1) per class.
// one_discriminative: theta_i ~ Dir(1, 1) shared by both classes, then one
// uniformly chosen feature is set to (p, 1-p) vs (1-p, p).
SyntheticData generate_synthetic(const SyntheticSpec& spec, Rng& rng);

struct CsvSchema {
    std::string class_column;
    std::string missing_token = "?";
    // Per-feature integer costs; unlisted features cost 1.
    std::map<std::string, int> costs;
    // Explicit label order; empty means sorted distinct labels.
    std::vector<std::string> class_labels;
};

CsvSchema load_schema(const std::filesystem::path& path);
CsvSchema parse_schema(const nlohmann::json& j);
nlohmann::json schema_to_json(const CsvSchema& schema);

// Header line, comma separated, every non-class column categorical. Arities
// are the distinct values seen (sorted; the missing token is one of them),
// padded to at least two. All cells start hidden.
InstancePool load_csv(const std::filesystem::path& path, const CsvSchema& schema);

// Writes `pool` (ground truth) back out in the load_csv format.
void write_csv(const InstancePool& pool, const std::filesystem::path& path);

struct PoolSplit {
    InstancePool training;
    ValidationSet validation;
};

// Positional: the first (1 - fraction) of rows train, the rest validate.
// Balanced: every class contributes round(fraction * class size) random rows
// to validation; training keeps the remaining rows in their original order.
PoolSplit split(const InstancePool& pool, double validation_fraction, bool balanced, Rng& rng);

} // namespace bnb
