#pragma once

// Test-only generators and brute-force references. Nothing here calls into the
// library's loss or probability code paths.

#include "bnb/belief.hpp"
#include "bnb/problem.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

namespace testkit {

// Small LCG-free generator: plain mt19937 with its own helpers so tests do not
// lean on the library's sampling code.
struct Gen {
    explicit Gen(std::uint32_t seed) : eng(seed) {}
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng); }
    int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
    std::mt19937 eng;
};

inline std::shared_ptr<const bnb::ProblemSpec> spec_of(std::vector<int> arities, std::size_t classes,
                                                       std::vector<int> costs = {})
{
    std::vector<bnb::FeatureSpec> fs;
    for (std::size_t i = 0; i < arities.size(); ++i) {
        fs.push_back({"x" + std::to_string(i), arities[i], costs.empty() ? 1 : costs[i], {}});
    }
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < classes; ++j) {
        labels.push_back("y" + std::to_string(j));
    }
    return std::make_shared<const bnb::ProblemSpec>(fs, labels);
}

// alpha in (0.5, 5), class counts in [1, 9].
inline bnb::BeliefState random_belief(std::shared_ptr<const bnb::ProblemSpec> spec, Gen& g)
{
    std::vector<double> alpha(spec->grid_size());
    for (double& a : alpha) {
        a = 0.5 + 4.5 * g.unit();
    }
    std::vector<std::int64_t> counts(spec->num_classes());
    for (auto& c : counts) {
        c = g.between(1, 9);
    }
    return bnb::BeliefState(spec, alpha, counts);
}

// Integer alpha in [1, 4] (integer states reach identical grids by several paths).
inline bnb::BeliefState random_integer_belief(std::shared_ptr<const bnb::ProblemSpec> spec, Gen& g)
{
    std::vector<double> alpha(spec->grid_size());
    for (double& a : alpha) {
        a = g.between(1, 4);
    }
    std::vector<std::int64_t> counts(spec->num_classes());
    for (auto& c : counts) {
        c = g.between(1, 6);
    }
    return bnb::BeliefState(spec, alpha, counts);
}

// A plain table model: theta[i][j][k], prior[j].
struct TableModel {
    std::vector<int> arity;
    std::vector<std::vector<std::vector<double>>> theta;
    std::vector<double> prior;

    std::size_t classes() const { return prior.size(); }
};

inline TableModel random_table(const std::vector<int>& arity, std::size_t classes, Gen& g)
{
    TableModel m;
    m.arity = arity;
    m.prior.resize(classes);
    double z = 0.0;
    for (double& p : m.prior) {
        p = 0.05 + g.unit();
        z += p;
    }
    for (double& p : m.prior) {
        p /= z;
    }
    for (int r : arity) {
        std::vector<std::vector<double>> rows;
        for (std::size_t j = 0; j < classes; ++j) {
            std::vector<double> row(static_cast<std::size_t>(r));
            double s = 0.0;
            for (double& v : row) {
                v = 0.05 + g.unit();
                s += v;
            }
            for (double& v : row) {
                v /= s;
            }
            rows.push_back(row);
        }
        m.theta.push_back(rows);
    }
    return m;
}

// From a belief, straight from the definition alpha / sum(alpha) and counts / total.
inline TableModel table_from_belief(const bnb::BeliefState& s)
{
    const auto& spec = s.spec();
    TableModel m;
    double total = 0.0;
    for (auto c : s.class_counts()) {
        total += static_cast<double>(c);
    }
    for (auto c : s.class_counts()) {
        m.prior.push_back(static_cast<double>(c) / total);
    }
    for (std::size_t i = 0; i < spec.num_features(); ++i) {
        m.arity.push_back(spec.arity(i));
        std::vector<std::vector<double>> rows;
        for (std::size_t j = 0; j < spec.num_classes(); ++j) {
            std::vector<double> row;
            double z = 0.0;
            for (int k = 0; k < spec.arity(i); ++k) {
                z += s.alpha(i, j, k);
            }
            for (int k = 0; k < spec.arity(i); ++k) {
                row.push_back(s.alpha(i, j, k) / z);
            }
            rows.push_back(row);
        }
        m.theta.push_back(rows);
    }
    return m;
}

inline bnb::NBClassifier to_classifier(const TableModel& m, std::shared_ptr<const bnb::ProblemSpec> spec)
{
    std::vector<double> theta;
    for (std::size_t i = 0; i < m.arity.size(); ++i) {
        for (std::size_t j = 0; j < m.classes(); ++j) {
            theta.insert(theta.end(), m.theta[i][j].begin(), m.theta[i][j].end());
        }
    }
    return bnb::NBClassifier(std::move(spec), theta, m.prior);
}

// Linear-space joint p(y) prod_i theta[i][y][x_i].
inline std::vector<double> joint(const TableModel& m, const std::vector<int>& x)
{
    std::vector<double> out(m.classes());
    for (std::size_t y = 0; y < m.classes(); ++y) {
        double p = m.prior[y];
        for (std::size_t i = 0; i < x.size(); ++i) {
            p *= m.theta[i][y][static_cast<std::size_t>(x[i])];
        }
        out[y] = p;
    }
    return out;
}

template <typename F>
void each_config(const std::vector<int>& arity, F&& f)
{
    std::vector<int> x(arity.size(), 0);
    while (true) {
        f(x);
        std::size_t i = arity.size();
        while (i > 0) {
            --i;
            if (++x[i] < arity[i]) {
                goto next;
            }
            x[i] = 0;
        }
        return;
    next:;
    }
}

enum class Impurity { gini, entropy, zero_one };

// sum_x P(x) * impurity(P(. | x)), from the definition.
inline double brute_loss(const TableModel& m, Impurity kind)
{
    double total = 0.0;
    each_config(m.arity, [&](const std::vector<int>& x) {
        const auto j = joint(m, x);
        double px = 0.0;
        for (double v : j) {
            px += v;
        }
        if (px == 0.0) {
            return;
        }
        double term = 0.0;
        if (kind == Impurity::gini) {
            for (double v : j) {
                term += (v / px) * (1.0 - v / px);
            }
        } else if (kind == Impurity::entropy) {
            for (double v : j) {
                if (v > 0.0) {
                    term -= (v / px) * std::log(v / px) / std::log(2.0);
                }
            }
        } else {
            double best = 0.0;
            for (double v : j) {
                best = std::max(best, v / px);
            }
            term = 1.0 - best;
        }
        total += px * term;
    });
    return total;
}

inline double brute_gini(const bnb::BeliefState& s) { return brute_loss(table_from_belief(s), Impurity::gini); }

// Probability of an ordered outcome sequence: product of predictive means
// recomputed after each observation.
inline double sequence_prob(std::vector<double> alpha, const std::vector<int>& seq)
{
    double p = 1.0;
    for (int k : seq) {
        double total = 0.0;
        for (double a : alpha) {
            total += a;
        }
        p *= alpha[static_cast<std::size_t>(k)] / total;
        alpha[static_cast<std::size_t>(k)] += 1.0;
    }
    return p;
}

// Every ordered sequence of m outcomes over r values, bucketed by count vector.
inline std::map<std::vector<int>, double> outcome_distribution_by_sequences(const std::vector<double>& alpha, int m)
{
    const int r = static_cast<int>(alpha.size());
    std::map<std::vector<int>, double> out;
    std::vector<int> seq(static_cast<std::size_t>(m), 0);
    std::vector<int> arity(static_cast<std::size_t>(m), r);
    if (m == 0) {
        out[std::vector<int>(alpha.size(), 0)] = 1.0;
        return out;
    }
    each_config(arity, [&](const std::vector<int>& s) {
        std::vector<int> counts(alpha.size(), 0);
        for (int k : s) {
            ++counts[static_cast<std::size_t>(k)];
        }
        out[counts] += sequence_prob(alpha, s);
    });
    return out;
}

// Expected GINI after m purchases of `a`, summed over ordered sequences.
inline double brute_lookahead(const bnb::BeliefState& s, bnb::Action a, int m)
{
    const auto row = s.row(a);
    const std::vector<double> alpha(row.begin(), row.end());
    double total = 0.0;
    for (const auto& [counts, p] : outcome_distribution_by_sequences(alpha, m)) {
        bnb::BeliefState next = s;
        next.observe_counts(a, counts);
        total += p * brute_gini(next);
    }
    return total;
}

// sum_k theta-hat_k * GINI(child k).
inline double brute_one_step(const bnb::BeliefState& s, bnb::Action a) { return brute_lookahead(s, a, 1); }

// Plain recursive optimum over every action, no memo, no canonical keys.
inline double brute_optimal(const bnb::BeliefState& s, std::int64_t budget)
{
    const auto& spec = s.spec();
    double best = -1.0;
    for (std::size_t idx = 0; idx < spec.num_actions(); ++idx) {
        const bnb::Action a = spec.action_at(idx);
        if (spec.cost(a.feature) > budget) {
            continue;
        }
        double total = 0.0;
        double z = 0.0;
        for (int k = 0; k < spec.arity(a.feature); ++k) {
            z += s.alpha(a.feature, a.label, k);
        }
        for (int k = 0; k < spec.arity(a.feature); ++k) {
            bnb::BeliefState next = s;
            next.observe(a, k);
            total += s.alpha(a.feature, a.label, k) / z * brute_optimal(next, budget - spec.cost(a.feature));
        }
        if (best < 0.0 || total < best) {
            best = total;
        }
    }
    return best < 0.0 ? brute_gini(s) : best;
}

} // namespace testkit
