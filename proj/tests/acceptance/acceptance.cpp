// Acceptance run: one PASS/FAIL line per primary criterion. Tolerances are
// fixed here; nothing is read from the environment except BNB_THREADS.

#include "bnb/compositions.hpp"
#include "bnb/experiment.hpp"
#include "bnb/loss.hpp"
#include "bnb/oracle.hpp"
#include "bnb/policies.hpp"

#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace bnb;

namespace {

const std::filesystem::path source_dir = BNB_SOURCE_DIR;

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail, double seconds)
{
    std::printf("%s %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) {
        ++failures;
    }
}

template <typename F>
void criterion(const std::string& id, F&& body)
{
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(id, pass, detail, secs);
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

const PolicyCurve& curve_of(const ErrorCurve& c, const std::string& name)
{
    for (const auto& p : c.policies) {
        if (p.policy == name) {
            return p;
        }
    }
    throw std::runtime_error("no policy named " + name);
}

const CurvePoint& at_spend(const PolicyCurve& p, std::int64_t spend)
{
    for (const auto& pt : p.points) {
        if (pt.spend == spend) {
            return pt;
        }
    }
    throw std::runtime_error("no grid point at spend " + std::to_string(spend));
}

double pooled_se(double a, double b) { return std::sqrt(a * a + b * b); }

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path out_dir(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("bnb_acceptance_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

ErrorCurve run_config(const std::string& file, const std::string& tag)
{
    const auto config = load_config(source_dir / "configs" / file);
    const auto start = std::chrono::steady_clock::now();
    auto curve = run_experiment(config);
    emit_curves(curve, out_dir(tag));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("  ran %s: %d trials, %zu policies, budget %lld (%.1fs)\n", file.c_str(), config.trials,
                config.policies.size(), static_cast<long long>(config.budget), secs);
    std::fflush(stdout);
    return curve;
}

} // namespace

int main()
{
    criterion("outcome-probabilities-normalize", [](std::string& detail) {
        testkit::Gen g(2024);
        double worst_sum = 0.0;
        double worst_term = 0.0;
        for (int rep = 0; rep < 50; ++rep) {
            for (int r : {2, 3, 4}) {
                auto spec = testkit::spec_of({r}, 2);
                const auto s = testkit::random_belief(spec, g);
                const Action a{0, static_cast<std::size_t>(rep % 2)};
                const auto row = s.row(a);
                const std::vector<double> alpha(row.begin(), row.end());
                for (int m = 0; m <= 6; ++m) {
                    const auto brute = testkit::outcome_distribution_by_sequences(alpha, m);
                    double sum = 0.0;
                    for_each_composition(m, r, [&](std::span<const int> counts) {
                        const double p = allocation_outcome_prob(s, a, counts);
                        sum += p;
                        const std::vector<int> key(counts.begin(), counts.end());
                        const auto it = brute.find(key);
                        const double ref = it == brute.end() ? 0.0 : it->second;
                        worst_term = std::max(worst_term, std::abs(p - ref));
                    });
                    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
                }
            }
        }
        detail = "max |sum - 1| = " + fmt("%.3g", worst_sum) + " (tol 1e-9), max |p - brute| = " +
                 fmt("%.3g", worst_term) + " (tol 1e-10)";
        return worst_sum <= 1e-9 && worst_term <= 1e-10;
    });

    criterion("composition-counts-binomial", [](std::string& detail) {
        int checked = 0;
        bool ok = true;
        for (int m = 0; m <= 8; ++m) {
            for (int r = 1; r <= 5; ++r) {
                // C(m + r - 1, r - 1) by the multiplicative formula.
                std::uint64_t binom = 1;
                for (int t = 1; t <= r - 1; ++t) {
                    binom = binom * static_cast<std::uint64_t>(m + t) / static_cast<std::uint64_t>(t);
                }
                std::uint64_t visited = 0;
                for_each_composition(m, r, [&](std::span<const int>) { ++visited; });
                ok = ok && composition_count(m, r) == binom && visited == binom;
                ++checked;
            }
        }
        detail = std::to_string(checked) + " (m, r) pairs, count and enumeration against the binomial";
        return ok;
    });

    criterion("depth-one-lookahead-equals-greedy", [](std::string& detail) {
        testkit::Gen g(77);
        int same = 0;
        for (int rep = 0; rep < 20; ++rep) {
            const std::vector<int> arity = {2 + rep % 2, 2, 3 - rep % 2};
            auto spec = testkit::spec_of(arity, 2 + static_cast<std::size_t>(rep % 3 == 0));
            const auto s = testkit::random_belief(spec, g);
            PolicyConfig c;
            c.kind = PolicyKind::sfl;
            c.max_depth = 1;
            c.loss.exact_threshold = 1e6;
            const BudgetLedger ledger(10);
            const auto avail = Availability::unlimited(spec->num_actions());
            Rng r1(rep);
            Rng r2(rep);
            same += sfl_next(s, avail, ledger, c, r1) == greedy_next(s, avail, ledger, c.loss, r2) ? 1 : 0;
        }
        detail = std::to_string(same) + " of 20 beliefs pick the same action";
        return same == 20;
    });

    criterion("oracle-dominance", [](std::string& detail) {
        Rng rng(555);
        auto spec = testkit::spec_of({2, 2}, 2);
        LossKind exact;
        exact.exact_threshold = 1e6;
        double worst = 1e9;
        int compared = 0;
        for (int inst = 0; inst < 10; ++inst) {
            const auto s = random_tiny_belief(spec, rng);
            const std::int64_t budget = 1 + inst % 4;
            const double best = optimal_value(s, budget, exact);
            for (PolicyKind k :
                 {PolicyKind::round_robin, PolicyKind::biased_robin, PolicyKind::greedy, PolicyKind::sfl}) {
                PolicyConfig c;
                c.kind = k;
                c.max_depth = static_cast<int>(budget);
                c.loss = exact;
                worst = std::min(worst, policy_value(c, s, budget) - best);
                ++compared;
            }
        }
        detail = std::to_string(compared) + " policy values, min(policy - optimal) = " + fmt("%.3g", worst) +
                 " (tol -1e-9)";
        return worst >= -1e-9;
    });

    criterion("gini-estimator-accuracy", [](std::string& detail) {
        testkit::Gen g(6);
        const std::vector<int> arity(6, 2);
        auto spec = testkit::spec_of(arity, 2);
        const auto model = testkit::to_classifier(testkit::random_table(arity, 2, g), spec);
        const double truth = gini_exact(model);
        int close = 0;
        for (int rep = 0; rep < 100; ++rep) {
            Rng rng(static_cast<std::uint64_t>(rep) + 10000);
            close += std::abs(gini_mc(model, 10000, rng) - truth) <= 0.01 ? 1 : 0;
        }
        detail = std::to_string(close) + " of 100 estimates within 0.01 of " + fmt("%.4f", truth) + " (need 95)";
        return close >= 95;
    });

    criterion("synthetic-all-uniform-comparable", [](std::string& detail) {
        const auto curve = run_config("synthetic_all_uniform.json", "all_uniform");
        double lo = 1.0;
        double hi = 0.0;
        std::string values;
        for (const char* name : {"round_robin", "biased_robin", "greedy", "sfl_depth10"}) {
            const double e = at_spend(curve_of(curve, name), 80).mean_error;
            lo = std::min(lo, e);
            hi = std::max(hi, e);
            values += std::string(values.empty() ? "" : ", ") + name + " " + fmt("%.4f", e);
        }
        detail = "errors at 80: " + values + "; max gap " + fmt("%.4f", hi - lo) + " (tol 0.05)";
        return hi - lo <= 0.05;
    });

    criterion("synthetic-one-discriminative-half-budget", [](std::string& detail) {
        const auto one_disc = run_config("synthetic_one_discriminative.json", "one_discriminative");
        const auto& rr = at_spend(curve_of(one_disc, "round_robin"), 80);
        bool ok = true;
        detail = "round_robin@80 " + fmt("%.4f", rr.mean_error) + " (se " + fmt("%.4f", rr.stderr_error) + ")";
        for (const char* name : {"sfl_depth10", "biased_robin"}) {
            const auto& pt = at_spend(curve_of(one_disc, name), 40);
            const double bound = rr.mean_error + pooled_se(rr.stderr_error, pt.stderr_error);
            ok = ok && pt.mean_error <= bound;
            detail += std::string("; ") + name + "@40 " + fmt("%.4f", pt.mean_error) + " vs bound " +
                      fmt("%.4f", bound);
        }
        return ok;
    });

    criterion("mushroom-feature-focus-and-error-ratio", [](std::string& detail) {
        const auto curve = run_config("mushroom.json", "mushroom");
        const auto& sfl = curve_of(curve, "sfl_depth30");
        const auto& rr = curve_of(curve, "round_robin");
        // Features 5 and 18 counted from one: odor and ring-number.
        const double odor = sfl.mean_feature_purchases.at(4);
        const double ring = sfl.mean_feature_purchases.at(17);
        double best_ratio = 1e9;
        std::int64_t best_at = -1;
        for (std::size_t t = 0; t < sfl.points.size(); ++t) {
            const double base = rr.points[t].mean_error;
            if (base > 0.0) {
                const double ratio = sfl.points[t].mean_error / base;
                if (ratio < best_ratio) {
                    best_ratio = ratio;
                    best_at = sfl.points[t].spend;
                }
            }
        }
        const bool focus = odor >= 10.0 * ring;
        const bool ratio = best_ratio <= 0.75;
        detail = curve.feature_names.at(4) + " bought " + fmt("%.2f", odor) + " times vs " +
                 curve.feature_names.at(17) + " " + fmt("%.2f", ring) + " (need 10x: " + (focus ? "met" : "not met") +
                 "); min SFL/RR error ratio " + fmt("%.3f", best_ratio) + " at spend " + std::to_string(best_at) +
                 " (need <= 0.75: " + (ratio ? "met" : "not met") + ")";
        return focus && ratio;
    });

    criterion("votes-reach-baseline", [](std::string& detail) {
        const auto curve = run_config("votes.json", "votes");
        bool ok = true;
        detail = "baseline " + fmt("%.4f", curve.baseline_error);
        for (const char* name : {"round_robin", "biased_robin", "greedy", "sfl_depth30"}) {
            const double e = at_spend(curve_of(curve, name), 200).mean_error;
            ok = ok && e <= curve.baseline_error + 0.05;
            detail += std::string("; ") + name + "@200 " + fmt("%.4f", e);
        }
        detail += " (tol baseline + 0.05)";
        return ok;
    });

    criterion("rerun-is-byte-identical", [](std::string& detail) {
        const auto config = load_config(source_dir / "configs" / "synthetic_one_discriminative.json");
        const auto again = run_experiment(config);
        const auto dir = out_dir("one_discriminative_rerun");
        emit_curves(again, dir);
        const auto a = slurp(std::filesystem::temp_directory_path() / "bnb_acceptance_one_discriminative" / kRawFile);
        const auto b = slurp(dir / kRawFile);
        detail = "raw CSV of the one-discriminative run, " + std::to_string(a.size()) + " bytes, re-run " +
                 std::to_string(b.size()) + " bytes";
        return !a.empty() && a == b;
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
