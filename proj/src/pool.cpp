#include "bnb/pool.hpp"

#include "bnb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bnb {

InstancePool::InstancePool(std::shared_ptr<const ProblemSpec> spec, std::vector<std::size_t> labels,
                           std::vector<int> values)
    : spec_(std::move(spec)), labels_(std::move(labels)), values_(std::move(values))
{
    const std::size_t n = spec_->num_features();
    if (values_.size() != labels_.size() * n) {
        throw std::invalid_argument("pool value table does not match rows x features");
    }
    for (std::size_t row = 0; row < labels_.size(); ++row) {
        if (labels_[row] >= spec_->num_classes()) {
            throw std::invalid_argument("pool label out of range");
        }
        for (std::size_t i = 0; i < n; ++i) {
            const int v = values_[row * n + i];
            if (v < 0 || v >= spec_->arity(i)) {
                throw std::invalid_argument("pool value out of range for feature '" + spec_->feature(i).name + "'");
            }
        }
    }
    revealed_.assign(values_.size(), 0);
    rebuild_hidden_lists();
}

void InstancePool::rebuild_hidden_lists()
{
    const std::size_t n = spec_->num_features();
    hidden_rows_.assign(spec_->num_actions(), {});
    revealed_count_ = 0;
    for (std::size_t row = 0; row < labels_.size(); ++row) {
        for (std::size_t i = 0; i < n; ++i) {
            if (revealed_[cell(row, i)]) {
                ++revealed_count_;
            } else {
                hidden_rows_[spec_->action_index({i, labels_[row]})].push_back(static_cast<std::uint32_t>(row));
            }
        }
    }
}

std::optional<int> InstancePool::revealed(std::size_t row, std::size_t feature) const
{
    if (row >= labels_.size() || feature >= spec_->num_features()) {
        throw std::out_of_range("pool cell out of range");
    }
    if (!revealed_[cell(row, feature)]) {
        return std::nullopt;
    }
    return values_[cell(row, feature)];
}

std::int64_t InstancePool::availability(Action a) const
{
    return static_cast<std::int64_t>(hidden_rows_.at(spec_->action_index(a)).size());
}

Availability InstancePool::availability() const
{
    std::vector<std::int64_t> counts;
    counts.reserve(hidden_rows_.size());
    for (const auto& rows : hidden_rows_) {
        counts.push_back(static_cast<std::int64_t>(rows.size()));
    }
    return Availability(std::move(counts));
}

std::vector<std::int64_t> InstancePool::class_counts() const
{
    std::vector<std::int64_t> counts(spec_->num_classes(), 0);
    for (std::size_t label : labels_) {
        ++counts[label];
    }
    return counts;
}

int InstancePool::purchase(Action action, Rng& rng)
{
    if (action.feature >= spec_->num_features() || action.label >= spec_->num_classes()) {
        throw std::out_of_range("action out of range");
    }
    auto& rows = hidden_rows_[spec_->action_index(action)];
    if (rows.empty()) {
        throw ActionExhausted("action exhausted: no hidden '" + spec_->feature(action.feature).name +
                              "' value left for label '" + spec_->class_labels()[action.label] + "'");
    }
    const std::size_t pick = uniform_index(rows.size(), rng);
    const std::size_t row = rows[pick];
    rows[pick] = rows.back();
    rows.pop_back();
    revealed_[cell(row, action.feature)] = 1;
    ++revealed_count_;
    return values_[cell(row, action.feature)];
}

LabeledInstance InstancePool::ground_truth(std::size_t row) const
{
    const std::size_t n = spec_->num_features();
    LabeledInstance out;
    out.label = labels_.at(row);
    out.values.assign(values_.begin() + static_cast<std::ptrdiff_t>(row * n),
                      values_.begin() + static_cast<std::ptrdiff_t>((row + 1) * n));
    return out;
}

void InstancePool::reveal_all()
{
    std::fill(revealed_.begin(), revealed_.end(), 1);
    rebuild_hidden_lists();
}

InstancePool InstancePool::subset(std::span<const std::size_t> rows) const
{
    const std::size_t n = spec_->num_features();
    std::vector<std::size_t> labels;
    std::vector<int> values;
    labels.reserve(rows.size());
    values.reserve(rows.size() * n);
    for (std::size_t row : rows) {
        labels.push_back(labels_.at(row));
        values.insert(values.end(), values_.begin() + static_cast<std::ptrdiff_t>(row * n),
                      values_.begin() + static_cast<std::ptrdiff_t>((row + 1) * n));
    }
    return InstancePool(spec_, std::move(labels), std::move(values));
}

namespace {

nlohmann::json spec_to_json(const ProblemSpec& spec)
{
    nlohmann::json features = nlohmann::json::array();
    for (const FeatureSpec& f : spec.features()) {
        features.push_back({{"name", f.name}, {"arity", f.arity}, {"cost", f.cost}, {"values", f.value_names}});
    }
    return {{"features", features}, {"class_labels", spec.class_labels()}};
}

std::shared_ptr<const ProblemSpec> spec_from_json(const nlohmann::json& j)
{
    std::vector<FeatureSpec> features;
    for (const auto& f : j.at("features")) {
        features.push_back({f.at("name").get<std::string>(), f.at("arity").get<int>(), f.at("cost").get<int>(),
                            f.value("values", std::vector<std::string>{})});
    }
    return std::make_shared<const ProblemSpec>(std::move(features),
                                               j.at("class_labels").get<std::vector<std::string>>());
}

} // namespace

nlohmann::json InstancePool::to_json(bool include_hidden) const
{
    const std::size_t n = spec_->num_features();
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t row = 0; row < labels_.size(); ++row) {
        nlohmann::json cells = nlohmann::json::array();
        for (std::size_t i = 0; i < n; ++i) {
            if (revealed_[cell(row, i)] || include_hidden) {
                cells.push_back(values_[cell(row, i)]);
            } else {
                cells.push_back(nullptr);
            }
        }
        nlohmann::json r = {{"label", labels_[row]}, {"cells", cells}};
        if (include_hidden) {
            std::vector<std::size_t> shown;
            for (std::size_t i = 0; i < n; ++i) {
                if (revealed_[cell(row, i)]) {
                    shown.push_back(i);
                }
            }
            r["revealed"] = shown;
        }
        rows.push_back(std::move(r));
    }
    return {{"spec", spec_to_json(*spec_)}, {"ground_truth", include_hidden}, {"rows", rows}};
}

InstancePool InstancePool::from_json(const nlohmann::json& j)
{
    if (!j.value("ground_truth", false)) {
        throw DataError("pool snapshot withholds hidden values; a full export is needed to rebuild a pool");
    }
    auto spec = spec_from_json(j.at("spec"));
    const std::size_t n = spec->num_features();
    std::vector<std::size_t> labels;
    std::vector<int> values;
    std::vector<std::pair<std::size_t, std::size_t>> shown;
    for (const auto& r : j.at("rows")) {
        const std::size_t row = labels.size();
        labels.push_back(r.at("label").get<std::size_t>());
        const auto& cells = r.at("cells");
        if (cells.size() != n) {
            throw DataError("pool snapshot row " + std::to_string(row) + " has the wrong cell count");
        }
        for (const auto& c : cells) {
            values.push_back(c.get<int>());
        }
        for (const auto& i : r.value("revealed", nlohmann::json::array())) {
            shown.emplace_back(row, i.get<std::size_t>());
        }
    }
    InstancePool pool(std::move(spec), std::move(labels), std::move(values));
    for (const auto& [row, i] : shown) {
        pool.revealed_.at(pool.cell(row, i)) = 1;
    }
    pool.rebuild_hidden_lists();
    return pool;
}

bool operator==(const InstancePool& a, const InstancePool& b)
{
    return *a.spec_ == *b.spec_ && a.labels_ == b.labels_ && a.values_ == b.values_ && a.revealed_ == b.revealed_;
}

std::string to_string(SyntheticRegime regime)
{
    return regime == SyntheticRegime::all_uniform ? "all_uniform" : "one_discriminative";
}

SyntheticRegime synthetic_regime_from_string(const std::string& name)
{
    if (name == "all_uniform") {
        return SyntheticRegime::all_uniform;
    }
    if (name == "one_discriminative") {
        return SyntheticRegime::one_discriminative;
    }
    throw std::invalid_argument("unknown synthetic regime '" + name + "'");
}

SyntheticData generate_synthetic(const SyntheticSpec& s, Rng& rng)
{
    if (s.n_features < 1 || s.n_instances < 1) {
        throw std::invalid_argument("synthetic spec needs at least one feature and one instance");
    }
    if (!(s.class_prob >= 0.0 && s.class_prob <= 1.0) ||
        !(s.discriminative_prob >= 0.0 && s.discriminative_prob <= 1.0)) {
        throw std::invalid_argument("synthetic probabilities must lie in [0, 1]");
    }
    auto spec = std::make_shared<const ProblemSpec>(make_uniform_spec(static_cast<std::size_t>(s.n_features), 2));
    const std::size_t n = spec->num_features();
    std::vector<double> theta(spec->grid_size());
    std::optional<std::size_t> discriminative;

    if (s.regime == SyntheticRegime::all_uniform) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                sample_flat_dirichlet(std::span<double>(theta.data() + spec->row_offset(i, j), 2), rng);
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double shared[2];
            sample_flat_dirichlet(shared, rng);
            for (std::size_t j = 0; j < 2; ++j) {
                theta[spec->row_offset(i, j)] = shared[0];
                theta[spec->row_offset(i, j) + 1] = shared[1];
            }
        }
        discriminative = uniform_index(n, rng);
        const double p = s.discriminative_prob;
        theta[spec->row_offset(*discriminative, 0)] = p;
        theta[spec->row_offset(*discriminative, 0) + 1] = 1.0 - p;
        theta[spec->row_offset(*discriminative, 1)] = 1.0 - p;
        theta[spec->row_offset(*discriminative, 1) + 1] = p;
    }
    NBClassifier model(spec, std::move(theta), {s.class_prob, 1.0 - s.class_prob});

    std::vector<std::size_t> labels;
    std::vector<int> values;
    labels.reserve(static_cast<std::size_t>(s.n_instances));
    values.reserve(static_cast<std::size_t>(s.n_instances) * n);
    for (int r = 0; r < s.n_instances; ++r) {
        LabeledInstance inst = sample_instance(model, rng);
        labels.push_back(inst.label);
        values.insert(values.end(), inst.values.begin(), inst.values.end());
    }
    return {InstancePool(spec, std::move(labels), std::move(values)), std::move(model), discriminative};
}

CsvSchema parse_schema(const nlohmann::json& j)
{
    CsvSchema s;
    if (!j.contains("class_column")) {
        throw ConfigError("schema must name the class column");
    }
    s.class_column = j.at("class_column").get<std::string>();
    s.missing_token = j.value("missing_token", std::string("?"));
    if (j.contains("costs")) {
        for (const auto& [name, cost] : j.at("costs").items()) {
            const int c = cost.get<int>();
            if (c < 1) {
                throw ConfigError("schema cost for '" + name + "' must be a positive integer");
            }
            s.costs[name] = c;
        }
    }
    s.class_labels = j.value("class_labels", std::vector<std::string>{});
    return s;
}

CsvSchema load_schema(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open schema file " + path.string());
    }
    try {
        return parse_schema(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("schema " + path.string() + ": " + e.what());
    }
}

nlohmann::json schema_to_json(const CsvSchema& schema)
{
    nlohmann::json j = {{"class_column", schema.class_column}, {"missing_token", schema.missing_token}};
    if (!schema.costs.empty()) {
        j["costs"] = schema.costs;
    }
    if (!schema.class_labels.empty()) {
        j["class_labels"] = schema.class_labels;
    }
    return j;
}

namespace {

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

constexpr const char* kUnseenValue = "<unseen>";

} // namespace

InstancePool load_csv(const std::filesystem::path& path, const CsvSchema& schema)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw DataError(path.string() + ": empty file (no header)");
    }
    const auto header = split_fields(line);
    const auto class_it = std::find(header.begin(), header.end(), schema.class_column);
    if (class_it == header.end()) {
        throw ConfigError(path.string() + ": class column '" + schema.class_column + "' not in header");
    }
    const std::size_t class_col = static_cast<std::size_t>(class_it - header.begin());
    for (const auto& [name, cost] : schema.costs) {
        if (std::find(header.begin(), header.end(), name) == header.end() || name == schema.class_column) {
            throw ConfigError("schema assigns a cost to unknown feature '" + name + "'");
        }
    }

    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (fields[c].empty()) {
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": empty field in column '" +
                                header[c] + "'");
            }
        }
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) {
        throw DataError(path.string() + ": empty file (header only)");
    }

    std::vector<std::string> labels = schema.class_labels;
    if (labels.empty()) {
        std::set<std::string> seen;
        for (const auto& r : rows) {
            seen.insert(r[class_col]);
        }
        labels.assign(seen.begin(), seen.end());
    }

    std::vector<FeatureSpec> features;
    std::vector<std::size_t> columns;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == class_col) {
            continue;
        }
        std::set<std::string> seen;
        for (const auto& r : rows) {
            seen.insert(r[c]);
        }
        FeatureSpec f;
        f.name = header[c];
        f.value_names.assign(seen.begin(), seen.end());
        if (f.value_names.size() < 2) {
            f.value_names.push_back(kUnseenValue);
        }
        f.arity = static_cast<int>(f.value_names.size());
        const auto cost = schema.costs.find(f.name);
        f.cost = cost == schema.costs.end() ? 1 : cost->second;
        features.push_back(std::move(f));
        columns.push_back(c);
    }
    if (labels.size() < 2) {
        throw DataError(path.string() + ": need at least two class labels");
    }
    auto spec = std::make_shared<const ProblemSpec>(std::move(features), labels);

    std::vector<std::size_t> label_ids;
    std::vector<int> values;
    label_ids.reserve(rows.size());
    values.reserve(rows.size() * columns.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto it = std::find(labels.begin(), labels.end(), rows[r][class_col]);
        if (it == labels.end()) {
            throw DataError(path.string() + ": data row " + std::to_string(r + 1) + ": unknown class label '" +
                            rows[r][class_col] + "'");
        }
        label_ids.push_back(static_cast<std::size_t>(it - labels.begin()));
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const auto& names = spec->feature(i).value_names;
            const auto v = std::find(names.begin(), names.end(), rows[r][columns[i]]);
            values.push_back(static_cast<int>(v - names.begin()));
        }
    }
    return InstancePool(std::move(spec), std::move(label_ids), std::move(values));
}

void write_csv(const InstancePool& pool, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    const ProblemSpec& spec = pool.spec();
    out << "class";
    for (const FeatureSpec& f : spec.features()) {
        out << ',' << f.name;
    }
    out << '\n';
    for (std::size_t row = 0; row < pool.num_rows(); ++row) {
        const LabeledInstance inst = pool.ground_truth(row);
        out << spec.class_labels()[inst.label];
        for (std::size_t i = 0; i < inst.values.size(); ++i) {
            out << ',' << spec.value_name(i, inst.values[i]);
        }
        out << '\n';
    }
}

PoolSplit split(const InstancePool& pool, double fraction, bool balanced, Rng& rng)
{
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("validation fraction must lie strictly between 0 and 1");
    }
    const std::size_t n = pool.num_rows();
    std::vector<char> is_validation(n, 0);

    if (!balanced) {
        const auto n_val = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
        if (n_val == 0 || n_val >= n) {
            throw std::invalid_argument("split leaves an empty training or validation part");
        }
        for (std::size_t row = n - n_val; row < n; ++row) {
            is_validation[row] = 1;
        }
    } else {
        const ProblemSpec& spec = pool.spec();
        for (std::size_t j = 0; j < spec.num_classes(); ++j) {
            std::vector<std::size_t> rows;
            for (std::size_t row = 0; row < n; ++row) {
                if (pool.label(row) == j) {
                    rows.push_back(row);
                }
            }
            const auto quota = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size()))));
            if (rows.size() <= quota) {
                throw DataError("class '" + spec.class_labels()[j] + "' has " + std::to_string(rows.size()) +
                                " instances, not enough for a validation quota of " + std::to_string(quota) +
                                " plus training");
            }
            // Partial Fisher-Yates: the first `quota` slots become validation.
            for (std::size_t t = 0; t < quota; ++t) {
                const std::size_t pick = t + uniform_index(rows.size() - t, rng);
                std::swap(rows[t], rows[pick]);
                is_validation[rows[t]] = 1;
            }
        }
    }

    std::vector<std::size_t> train_rows;
    ValidationSet validation;
    for (std::size_t row = 0; row < n; ++row) {
        if (is_validation[row]) {
            validation.instances.push_back(pool.ground_truth(row));
        } else {
            train_rows.push_back(row);
        }
    }
    return {pool.subset(train_rows), std::move(validation)};
}

} // namespace bnb
