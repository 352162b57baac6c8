#include "bnb/experiment.hpp"

#include "bnb/errors.hpp"
#include "bnb/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace bnb {

// ---------------------------------------------------------------------------
// Config

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where)
{
    if (!j.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback, const std::string& where)
{
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
    }
}

LossKind parse_loss(const nlohmann::json& j, const std::string& where)
{
    reject_unknown_keys(j, {"type", "mc_samples", "exact_threshold"}, where);
    LossKind kind;
    try {
        kind.type = loss_type_from_string(get_or<std::string>(j, "type", "gini", where));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + " in " + where);
    }
    kind.mc_samples = get_or<int>(j, "mc_samples", kind.mc_samples, where);
    kind.exact_threshold = get_or<double>(j, "exact_threshold", kind.exact_threshold, where);
    if (kind.mc_samples < 1 || !(kind.exact_threshold >= 1)) {
        throw ConfigError("mc_samples and exact_threshold must be at least 1 in " + where);
    }
    return kind;
}

nlohmann::json loss_to_json(const LossKind& kind)
{
    return {{"type", to_string(kind.type)}, {"mc_samples", kind.mc_samples}, {"exact_threshold", kind.exact_threshold}};
}

PolicyConfig parse_policy(const nlohmann::json& j, std::size_t index)
{
    const std::string where = "policies[" + std::to_string(index) + "]";
    reject_unknown_keys(j, {"kind", "max_depth", "loss", "enumeration_cap", "name"}, where);
    PolicyConfig p;
    if (!j.contains("kind")) {
        throw ConfigError(where + " needs a kind");
    }
    try {
        p.kind = policy_kind_from_string(get_or<std::string>(j, "kind", "", where));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + " in " + where);
    }
    p.max_depth = get_or<int>(j, "max_depth", 0, where);
    if (j.contains("loss")) {
        p.loss = parse_loss(j.at("loss"), where + ".loss");
    }
    p.enumeration_cap = get_or<std::uint64_t>(j, "enumeration_cap", p.enumeration_cap, where);
    p.name = get_or<std::string>(j, "name", "", where);
    try {
        validate(p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + " in " + where);
    }
    return p;
}

SyntheticSpec parse_synthetic(const nlohmann::json& j)
{
    const std::string where = "data.synthetic";
    reject_unknown_keys(j, {"n_features", "regime", "discriminative_prob", "n_instances", "class_prob"}, where);
    SyntheticSpec s;
    s.n_features = get_or<int>(j, "n_features", s.n_features, where);
    try {
        s.regime = synthetic_regime_from_string(get_or<std::string>(j, "regime", to_string(s.regime), where));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(e.what()) + " in " + where);
    }
    s.discriminative_prob = get_or<double>(j, "discriminative_prob", s.discriminative_prob, where);
    s.n_instances = get_or<int>(j, "n_instances", s.n_instances, where);
    s.class_prob = get_or<double>(j, "class_prob", s.class_prob, where);
    if (s.n_features < 1 || s.n_instances < 2) {
        throw ConfigError("synthetic data needs n_features >= 1 and n_instances >= 2");
    }
    if (!(s.class_prob >= 0.0 && s.class_prob <= 1.0) ||
        !(s.discriminative_prob >= 0.0 && s.discriminative_prob <= 1.0)) {
        throw ConfigError("synthetic probabilities must lie in [0, 1]");
    }
    return s;
}

} // namespace

ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir)
{
    reject_unknown_keys(j,
                        {"name", "notes", "data", "policies", "budget", "trials", "base_seed", "validation_fraction",
                         "balanced_split", "record_every", "record_loss", "record_loss_kind"},
                        "config");
    ExperimentConfig c;
    c.name = get_or<std::string>(j, "name", c.name, "config");
    if (!j.contains("data")) {
        throw ConfigError("config needs a data section");
    }
    const auto& data = j.at("data");
    reject_unknown_keys(data, {"synthetic", "csv", "schema"}, "data");
    if (data.contains("synthetic") == data.contains("csv")) {
        throw ConfigError("data needs exactly one of 'synthetic' and 'csv'");
    }
    if (data.contains("synthetic")) {
        c.data.synthetic = parse_synthetic(data.at("synthetic"));
    } else {
        if (!data.contains("schema")) {
            throw ConfigError("csv data needs a schema file");
        }
        auto resolve = [&](const std::string& p) {
            std::filesystem::path path(p);
            return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
        };
        c.data.csv = resolve(get_or<std::string>(data, "csv", "", "data"));
        c.data.schema = resolve(get_or<std::string>(data, "schema", "", "data"));
    }

    if (!j.contains("policies") || !j.at("policies").is_array() || j.at("policies").empty()) {
        throw ConfigError("config needs a nonempty policies list");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < j.at("policies").size(); ++i) {
        PolicyConfig p = parse_policy(j.at("policies")[i], i);
        const std::string name = display_name(p);
        if (name.empty() || name.find_first_of(",\n\"") != std::string::npos) {
            throw ConfigError("policy name '" + name + "' cannot be written to CSV");
        }
        if (!names.insert(name).second) {
            throw ConfigError("duplicate policy name '" + name + "'");
        }
        c.policies.push_back(std::move(p));
    }

    c.budget = get_or<std::int64_t>(j, "budget", 0, "config");
    c.trials = get_or<int>(j, "trials", c.trials, "config");
    c.base_seed = get_or<std::uint64_t>(j, "base_seed", c.base_seed, "config");
    c.validation_fraction = get_or<double>(j, "validation_fraction", c.validation_fraction, "config");
    c.balanced_split = get_or<bool>(j, "balanced_split", c.balanced_split, "config");
    c.record_every = get_or<std::int64_t>(j, "record_every", c.record_every, "config");
    c.record_loss = get_or<bool>(j, "record_loss", c.record_loss, "config");
    if (j.contains("record_loss_kind")) {
        c.record_loss_kind = parse_loss(j.at("record_loss_kind"), "record_loss_kind");
    }
    if (c.budget < 1) {
        throw ConfigError("budget must be at least 1");
    }
    if (c.trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (!(c.validation_fraction > 0.0 && c.validation_fraction < 1.0)) {
        throw ConfigError("validation_fraction must lie strictly between 0 and 1");
    }
    if (c.record_every < 1) {
        throw ConfigError("record_every must be at least 1");
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

nlohmann::json config_to_json(const ExperimentConfig& c)
{
    nlohmann::json data;
    if (c.data.synthetic) {
        const SyntheticSpec& s = *c.data.synthetic;
        data["synthetic"] = {{"n_features", s.n_features},
                             {"regime", to_string(s.regime)},
                             {"discriminative_prob", s.discriminative_prob},
                             {"n_instances", s.n_instances},
                             {"class_prob", s.class_prob}};
    } else {
        data["csv"] = c.data.csv.string();
        data["schema"] = c.data.schema.string();
    }
    nlohmann::json policies = nlohmann::json::array();
    for (const PolicyConfig& p : c.policies) {
        nlohmann::json pj = {{"kind", to_string(p.kind)}, {"loss", loss_to_json(p.loss)}};
        if (p.kind == PolicyKind::sfl) {
            pj["max_depth"] = p.max_depth;
            pj["enumeration_cap"] = p.enumeration_cap;
        }
        if (!p.name.empty()) {
            pj["name"] = p.name;
        }
        policies.push_back(std::move(pj));
    }
    return {{"name", c.name},
            {"data", data},
            {"policies", policies},
            {"budget", c.budget},
            {"trials", c.trials},
            {"base_seed", c.base_seed},
            {"validation_fraction", c.validation_fraction},
            {"balanced_split", c.balanced_split},
            {"record_every", c.record_every},
            {"record_loss", c.record_loss},
            {"record_loss_kind", loss_to_json(c.record_loss_kind)}};
}

// ---------------------------------------------------------------------------
// Seeds and grid

std::uint64_t trial_seed(std::uint64_t base_seed, int trial_index)
{
    return base_seed ^ static_cast<std::uint64_t>(trial_index);
}

std::uint64_t stream_seed(std::uint64_t trial, std::uint64_t policy, StreamPurpose purpose)
{
    return mix_seed(trial, policy, static_cast<std::uint64_t>(purpose));
}

std::uint64_t policy_key(const PolicyConfig& config)
{
    // FNV-1a over the display name.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : display_name(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<std::int64_t> recording_grid(const ProblemSpec& spec, std::int64_t budget, std::int64_t record_every)
{
    if (budget < 0 || record_every < 1) {
        throw std::invalid_argument("grid needs budget >= 0 and record_every >= 1");
    }
    const std::int64_t unit = spec.uniform_costs() ? spec.cost(0) : 1;
    const std::int64_t step = record_every * unit;
    std::vector<std::int64_t> grid;
    for (std::int64_t g = 0; g <= budget; g += step) {
        grid.push_back(g);
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Trials

DataProvider::DataProvider(const ExperimentConfig& config) : config_(config)
{
    if (!config.data.synthetic) {
        source_ = load_csv(config.data.csv, load_schema(config.data.schema));
    }
}

TrialData DataProvider::trial(std::uint64_t seed) const
{
    Rng split_rng(stream_seed(seed, 0, StreamPurpose::split));
    if (config_.data.synthetic) {
        Rng pool_rng(stream_seed(seed, 0, StreamPurpose::pool));
        SyntheticData data = generate_synthetic(*config_.data.synthetic, pool_rng);
        PoolSplit parts = split(data.pool, config_.validation_fraction, config_.balanced_split, split_rng);
        return {std::move(parts.training), std::move(parts.validation), data.discriminative_feature};
    }
    PoolSplit parts = split(*source_, config_.validation_fraction, config_.balanced_split, split_rng);
    return {std::move(parts.training), std::move(parts.validation), std::nullopt};
}

PolicyTrace run_policy(const PolicyConfig& config, const TrialData& data, const ExperimentConfig& experiment,
                       std::uint64_t seed, const std::vector<std::int64_t>& grid)
{
    InstancePool pool = data.training;
    const auto spec = pool.shared_spec();
    BeliefState belief = BeliefState::uniform(spec, pool.class_counts());
    BudgetLedger ledger(experiment.budget);
    Availability availability = pool.availability();
    auto policy = make_policy(config, *spec, experiment.budget);

    const std::uint64_t key = policy_key(config);
    Rng purchase_rng(stream_seed(seed, key, StreamPurpose::purchase));
    Rng loss_rng(stream_seed(seed, key, StreamPurpose::loss_mc));
    Rng record_rng(stream_seed(seed, key, StreamPurpose::record));

    PolicyTrace trace;
    trace.feature_purchases.assign(spec->num_features(), 0);
    std::int64_t purchases = 0;
    std::int64_t cached_at = -1;
    double cached_error = 0.0;
    double cached_loss = 0.0;
    std::size_t next_point = 0;

    auto record_through = [&](std::int64_t spend_limit) {
        while (next_point < grid.size() && grid[next_point] < spend_limit) {
            if (cached_at != purchases) {
                const NBClassifier model = snapshot_classifier(belief);
                cached_error = zero_one_error(model, data.validation);
                cached_loss = experiment.record_loss ? estimate_loss(model, experiment.record_loss_kind, record_rng)
                                                     : 0.0;
                cached_at = purchases;
            }
            trace.purchases.push_back(purchases);
            trace.error.push_back(cached_error);
            trace.loss.push_back(cached_loss);
            ++next_point;
        }
    };

    while (true) {
        const DecisionContext ctx{belief, availability, ledger, loss_rng};
        const auto action = policy->next(ctx);
        if (!action) {
            break;
        }
        const std::size_t index = spec->action_index(*action);
        const int cost = spec->cost(action->feature);
        if (!availability.available(index) || !ledger.can_afford(cost)) {
            throw std::logic_error("policy chose an unavailable or unaffordable action");
        }
        record_through(ledger.spent() + cost);
        const int value = pool.purchase(*action, purchase_rng);
        ledger.spend(cost);
        belief.observe(*action, value);
        availability.decrement(index);
        ++purchases;
        ++trace.feature_purchases[action->feature];
        trace.sequence.push_back(*action);
    }
    record_through(std::numeric_limits<std::int64_t>::max());
    trace.spent = ledger.spent();
    trace.final_belief = std::move(belief);
    return trace;
}

double baseline_error(const TrialData& data)
{
    const InstancePool& pool = data.training;
    BeliefState belief = BeliefState::uniform(pool.shared_spec(), pool.class_counts());
    for (std::size_t row = 0; row < pool.num_rows(); ++row) {
        const LabeledInstance inst = pool.ground_truth(row);
        for (std::size_t i = 0; i < inst.values.size(); ++i) {
            belief.observe({i, inst.label}, inst.values[i]);
        }
    }
    return zero_one_error(snapshot_classifier(belief), data.validation);
}

TrialResult run_trial(const ExperimentConfig& config, int trial_index)
{
    const DataProvider provider(config);
    const std::uint64_t seed = trial_seed(config.base_seed, trial_index);
    const TrialData data = provider.trial(seed);
    const auto grid = recording_grid(data.training.spec(), config.budget, config.record_every);
    TrialResult result;
    result.trial = trial_index;
    result.baseline = baseline_error(data);
    result.discriminative_feature = data.discriminative_feature;
    for (const PolicyConfig& p : config.policies) {
        result.policies.push_back(run_policy(p, data, config, seed, grid));
    }
    return result;
}

int thread_count_from_env()
{
    const char* raw = std::getenv("BNB_THREADS");
    if (raw == nullptr || *raw == '\0') {
        return 1;
    }
    char* end = nullptr;
    const long n = std::strtol(raw, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024) {
        throw ConfigError("BNB_THREADS must be a positive integer");
    }
    return static_cast<int>(n);
}

ErrorCurve aggregate(const ExperimentConfig& config, const std::vector<TrialResult>& trials,
                     const std::vector<std::int64_t>& grid, const std::vector<std::string>& feature_names)
{
    ErrorCurve curve;
    curve.feature_names = feature_names;
    const double t = static_cast<double>(trials.size());
    for (const TrialResult& tr : trials) {
        curve.trial_baselines.push_back(tr.baseline);
        curve.baseline_error += tr.baseline;
    }
    curve.baseline_error /= t;

    for (std::size_t p = 0; p < config.policies.size(); ++p) {
        PolicyCurve pc;
        pc.policy = display_name(config.policies[p]);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            double sum = 0.0;
            double loss = 0.0;
            for (const TrialResult& tr : trials) {
                sum += tr.policies[p].error[g];
                loss += tr.policies[p].loss[g];
            }
            const double mean = sum / t;
            double var = 0.0;
            for (const TrialResult& tr : trials) {
                const double d = tr.policies[p].error[g] - mean;
                var += d * d;
            }
            const double se = trials.size() > 1 ? std::sqrt(var / (t - 1.0) / t) : 0.0;
            pc.points.push_back({grid[g], mean, se, loss / t});
        }
        pc.mean_feature_purchases.assign(feature_names.size(), 0.0);
        for (const TrialResult& tr : trials) {
            for (std::size_t i = 0; i < feature_names.size(); ++i) {
                pc.mean_feature_purchases[i] += static_cast<double>(tr.policies[p].feature_purchases[i]);
            }
        }
        for (double& m : pc.mean_feature_purchases) {
            m /= t;
        }
        for (const TrialResult& tr : trials) {
            for (std::size_t g = 0; g < grid.size(); ++g) {
                curve.raw.push_back({pc.policy, tr.trial, tr.policies[p].purchases[g], grid[g], tr.policies[p].error[g]});
            }
        }
        curve.policies.push_back(std::move(pc));
    }
    return curve;
}

ErrorCurve run_experiment(const ExperimentConfig& config)
{
    const DataProvider provider(config);
    const std::size_t num_trials = static_cast<std::size_t>(config.trials);
    const std::size_t num_policies = config.policies.size();

    std::vector<std::optional<TrialData>> data(num_trials);
    std::vector<TrialResult> results(num_trials);
    for (std::size_t t = 0; t < num_trials; ++t) {
        const std::uint64_t seed = trial_seed(config.base_seed, static_cast<int>(t));
        data[t] = provider.trial(seed);
        results[t].trial = static_cast<int>(t);
        results[t].baseline = baseline_error(*data[t]);
        results[t].discriminative_feature = data[t]->discriminative_feature;
        results[t].policies.resize(num_policies);
    }
    const ProblemSpec& spec = data.front()->training.spec();
    const auto grid = recording_grid(spec, config.budget, config.record_every);

    // Work items are (trial, policy) pairs; each writes only its own slot.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t item = next.fetch_add(1);
            if (item >= num_trials * num_policies) {
                return;
            }
            const std::size_t t = item / num_policies;
            const std::size_t p = item % num_policies;
            try {
                results[t].policies[p] = run_policy(config.policies[p], *data[t], config,
                                                    trial_seed(config.base_seed, static_cast<int>(t)), grid);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(num_trials * num_policies);
                return;
            }
        }
    };
    const int threads = std::min<int>(thread_count_from_env(), static_cast<int>(num_trials * num_policies));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<std::string> feature_names;
    for (const FeatureSpec& f : spec.features()) {
        feature_names.push_back(f.name);
    }
    return aggregate(config, results, grid, feature_names);
}

// ---------------------------------------------------------------------------
// Files

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_curves(const ErrorCurve& curve, const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw DataError("cannot create " + out_dir.string() + ": " + ec.message());
    }
    auto open = [&](const char* name) {
        std::ofstream out(out_dir / name);
        if (!out) {
            throw DataError("cannot write " + (out_dir / name).string());
        }
        return out;
    };
    {
        auto out = open(kAggregateFile);
        out << kAggregateHeader << '\n';
        for (const PolicyCurve& pc : curve.policies) {
            for (const CurvePoint& pt : pc.points) {
                out << pc.policy << ',' << pt.spend << ',' << format_double(pt.mean_error) << ','
                    << format_double(pt.stderr_error) << ',' << format_double(pt.mean_loss) << ','
                    << format_double(curve.baseline_error) << '\n';
            }
        }
    }
    {
        auto out = open(kRawFile);
        out << kRawHeader << '\n';
        for (const RawRow& r : curve.raw) {
            out << r.policy << ',' << r.trial << ',' << r.purchase_index << ',' << r.spend << ','
                << format_double(r.error) << '\n';
        }
    }
    {
        auto out = open(kFeatureFile);
        out << kFeatureHeader << '\n';
        for (const PolicyCurve& pc : curve.policies) {
            for (std::size_t i = 0; i < pc.mean_feature_purchases.size(); ++i) {
                out << pc.policy << ',' << curve.feature_names[i] << ','
                    << format_double(pc.mean_feature_purchases[i]) << '\n';
            }
        }
    }
}

namespace {

std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path, const std::string& header)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw DataError(path.string() + ": header does not match '" + header + "'");
    }
    const auto columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',') + 1);
    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            fields.push_back(f);
        }
        if (fields.size() != columns) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                            " fields");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

double to_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

} // namespace

std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path)
{
    std::vector<AggregateRow> out;
    for (const auto& f : read_table(path, kAggregateHeader)) {
        out.push_back({f[0], std::stoll(f[1]), to_double(f[2]), to_double(f[3]), to_double(f[4]), to_double(f[5])});
    }
    return out;
}

std::vector<RawRow> read_raw_csv(const std::filesystem::path& path)
{
    std::vector<RawRow> out;
    for (const auto& f : read_table(path, kRawHeader)) {
        out.push_back({f[0], std::stoi(f[1]), std::stoll(f[2]), std::stoll(f[3]), to_double(f[4])});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Oracle gap table

std::vector<GapRow> oracle_gap_table(const GapConfig& config)
{
    auto spec = std::make_shared<const ProblemSpec>(make_uniform_spec(config.features, config.classes, config.arity));
    LossKind loss;
    loss.type = config.loss;
    loss.exact_threshold = std::max(loss.exact_threshold, spec->joint_configurations());

    std::vector<PolicyConfig> policies;
    for (PolicyKind kind : {PolicyKind::round_robin, PolicyKind::uniform_expenditure, PolicyKind::biased_robin,
                            PolicyKind::greedy, PolicyKind::sfl}) {
        PolicyConfig p;
        p.kind = kind;
        p.loss = loss;
        if (kind == PolicyKind::sfl) {
            p.max_depth = config.sfl_depth > 0 ? config.sfl_depth : static_cast<int>(std::max<std::int64_t>(1, config.budget));
        }
        policies.push_back(p);
    }

    std::vector<GapRow> rows;
    for (int inst = 0; inst < config.instances; ++inst) {
        Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(inst)));
        const BeliefState belief = random_tiny_belief(spec, rng);
        const double best = optimal_value(belief, config.budget, loss);
        for (const PolicyConfig& p : policies) {
            rows.push_back({inst, display_name(p), policy_value(p, belief, config.budget), best});
        }
    }
    return rows;
}

} // namespace bnb
