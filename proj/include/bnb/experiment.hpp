#pragma once

#include "bnb/policies.hpp"
#include "bnb/pool.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bnb {

struct DataSource {
    // Exactly one of `synthetic` and `csv` is set.
    std::optional<SyntheticSpec> synthetic;
    std::filesystem::path csv;
    std::filesystem::path schema;
};

struct ExperimentConfig {
    std::string name = "experiment";
    DataSource data;
    std::vector<PolicyConfig> policies;
    std::int64_t budget = 0;
    int trials = 50;
    std::uint64_t base_seed = 0;
    double validation_fraction = 0.2;
    // Class-balanced random split; false splits by position.
    bool balanced_split = true;
    // Grid step, in purchases under uniform costs and in spend otherwise.
    std::int64_t record_every = 1;
    // Also estimate the decision loss of NB(s) at every grid point.
    bool record_loss = true;
    LossKind record_loss_kind;
};

// Parses a config object. Relative data paths resolve against `base_dir`.
// Unknown keys and invalid values raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

// The trial seed and one independent stream per (trial, policy, purpose).
enum class StreamPurpose : std::uint64_t { pool = 1, split = 2, purchase = 3, loss_mc = 4, record = 5 };
std::uint64_t trial_seed(std::uint64_t base_seed, int trial_index);
std::uint64_t stream_seed(std::uint64_t trial_seed, std::uint64_t policy_key, StreamPurpose purpose);
// Stable per-policy key derived from the display name.
std::uint64_t policy_key(const PolicyConfig& config);

// Grid points in spend units, first 0 and last at most the budget.
std::vector<std::int64_t> recording_grid(const ProblemSpec& spec, std::int64_t budget, std::int64_t record_every);

// Training pool, validation set and (synthetic runs) the generating model of one trial.
struct TrialData {
    InstancePool training;
    ValidationSet validation;
    std::optional<std::size_t> discriminative_feature;
};

// Source pool loaded once (CSV) or nothing (synthetic, generated per trial).
class DataProvider {
public:
    explicit DataProvider(const ExperimentConfig& config);
    TrialData trial(std::uint64_t trial_seed) const;

private:
    const ExperimentConfig& config_;
    std::optional<InstancePool> source_;
};

struct PolicyTrace {
    // One entry per grid point.
    std::vector<std::int64_t> purchases;
    std::vector<double> error;
    std::vector<double> loss;
    // Actions bought per feature over the whole run.
    std::vector<std::int64_t> feature_purchases;
    std::vector<Action> sequence;
    std::int64_t spent = 0;
    std::optional<BeliefState> final_belief;
};

// Runs one policy to budget exhaustion on a private copy of the trial pool.
PolicyTrace run_policy(const PolicyConfig& policy, const TrialData& data, const ExperimentConfig& config,
                       std::uint64_t trial_seed, const std::vector<std::int64_t>& grid);

// Validation error of Dir(1) plus every training value.
double baseline_error(const TrialData& data);

struct TrialResult {
    int trial = 0;
    double baseline = 0.0;
    std::vector<PolicyTrace> policies;
    std::optional<std::size_t> discriminative_feature;
};

TrialResult run_trial(const ExperimentConfig& config, int trial_index);

struct CurvePoint {
    std::int64_t spend = 0;
    double mean_error = 0.0;
    double stderr_error = 0.0;
    double mean_loss = 0.0;
};

struct PolicyCurve {
    std::string policy;
    std::vector<CurvePoint> points;
    std::vector<double> mean_feature_purchases;
};

struct RawRow {
    std::string policy;
    int trial = 0;
    std::int64_t purchase_index = 0;
    std::int64_t spend = 0;
    double error = 0.0;

    friend bool operator==(const RawRow&, const RawRow&) = default;
};

struct ErrorCurve {
    std::vector<PolicyCurve> policies;
    double baseline_error = 0.0;
    std::vector<double> trial_baselines;
    std::vector<RawRow> raw;
    std::vector<std::string> feature_names;
};

// Runs every trial (BNB_THREADS worker threads, default 1) and aggregates them
// in trial order, so the result does not depend on the thread count.
ErrorCurve run_experiment(const ExperimentConfig& config);
ErrorCurve aggregate(const ExperimentConfig& config, const std::vector<TrialResult>& trials,
                     const std::vector<std::int64_t>& grid, const std::vector<std::string>& feature_names);

// Worker count from the BNB_THREADS environment variable (1 when unset).
int thread_count_from_env();

// File names written by emit_curves inside the output directory.
inline constexpr const char* kAggregateFile = "aggregate.csv";
inline constexpr const char* kRawFile = "raw.csv";
inline constexpr const char* kFeatureFile = "feature_purchases.csv";

inline constexpr const char* kAggregateHeader = "policy,spend,mean_error,stderr,mean_loss,baseline_error";
inline constexpr const char* kRawHeader = "policy,trial,purchase_index,spend,error";
inline constexpr const char* kFeatureHeader = "policy,feature,mean_purchases";

void emit_curves(const ErrorCurve& curve, const std::filesystem::path& out_dir);

// Readers for the files above.
struct AggregateRow {
    std::string policy;
    std::int64_t spend = 0;
    double mean_error = 0.0;
    double stderr_error = 0.0;
    double mean_loss = 0.0;
    double baseline_error = 0.0;
};
std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path);
std::vector<RawRow> read_raw_csv(const std::filesystem::path& path);

// Round-trip text for a double (17 significant digits).
std::string format_double(double v);

// Gap table: expected final loss of every policy against the optimum on
// random tiny instances.
struct GapRow {
    int instance = 0;
    std::string policy;
    double policy_value = 0.0;
    double optimal_value = 0.0;
};

struct GapConfig {
    std::size_t features = 2;
    std::size_t classes = 2;
    int arity = 2;
    std::int64_t budget = 3;
    int instances = 5;
    std::uint64_t seed = 0;
    LossType loss = LossType::gini;
    int sfl_depth = 0; // 0 means the budget
};

std::vector<GapRow> oracle_gap_table(const GapConfig& config);

} // namespace bnb
