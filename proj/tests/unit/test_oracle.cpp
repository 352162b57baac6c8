#include "bnb/errors.hpp"
#include "bnb/oracle.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace bnb;

namespace {

LossKind exact_gini()
{
    LossKind k;
    k.exact_threshold = 1e6;
    return k;
}

PolicyConfig exact_policy(PolicyKind kind, int depth = 0)
{
    PolicyConfig c;
    c.kind = kind;
    c.max_depth = depth;
    c.loss = exact_gini();
    return c;
}

// Same belief with features and classes relabelled.
BeliefState permuted(const BeliefState& s, const std::vector<std::size_t>& feature_of,
                     const std::vector<std::size_t>& class_of)
{
    const auto& spec = s.spec();
    std::vector<FeatureSpec> fs(spec.num_features());
    for (std::size_t i = 0; i < spec.num_features(); ++i) {
        fs[feature_of[i]] = spec.feature(i);
    }
    auto out_spec = std::make_shared<const ProblemSpec>(fs, spec.class_labels());
    std::vector<double> alpha(spec.grid_size());
    std::vector<std::int64_t> counts(spec.num_classes());
    for (std::size_t j = 0; j < spec.num_classes(); ++j) {
        counts[class_of[j]] = s.class_counts()[j];
    }
    for (std::size_t i = 0; i < spec.num_features(); ++i) {
        for (std::size_t j = 0; j < spec.num_classes(); ++j) {
            for (int k = 0; k < spec.arity(i); ++k) {
                alpha[out_spec->row_offset(feature_of[i], class_of[j]) + static_cast<std::size_t>(k)] =
                    s.alpha(i, j, k);
            }
        }
    }
    return BeliefState(out_spec, alpha, counts);
}

} // namespace

TEST_SUITE("oracle")
{
    TEST_CASE("budget zero is the current loss")
    {
        testkit::Gen g(41);
        auto spec = testkit::spec_of({2, 3}, 2);
        for (int rep = 0; rep < 5; ++rep) {
            const auto s = testkit::random_belief(spec, g);
            CHECK(optimal_value(s, 0, exact_gini()) == doctest::Approx(testkit::brute_gini(s)).epsilon(1e-12));
        }
    }

    TEST_CASE("one binary feature, flat belief, budget one: 17/35")
    {
        // Worked by hand: each outcome leaves GINI 2/7 + 1/5.
        auto spec = testkit::spec_of({2}, 2);
        const auto s = BeliefState::uniform(spec, {1, 1});
        CHECK(optimal_value(s, 0, exact_gini()) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(optimal_value(s, 1, exact_gini()) == doctest::Approx(17.0 / 35.0).epsilon(1e-13));
    }

    TEST_CASE("memoized search equals plain recursion")
    {
        testkit::Gen g(42);
        for (const auto& arity : std::vector<std::vector<int>>{{2, 2}, {2, 3}, {3}}) {
            auto spec = testkit::spec_of(arity, 2);
            for (int rep = 0; rep < 4; ++rep) {
                const auto s = testkit::random_integer_belief(spec, g);
                for (std::int64_t b = 1; b <= 3; ++b) {
                    const double brute = testkit::brute_optimal(s, b);
                    OracleOptions plain;
                    plain.memoize = false;
                    CHECK(optimal_value(s, b, exact_gini()) == doctest::Approx(brute).epsilon(1e-11));
                    CHECK(optimal_value(s, b, exact_gini(), plain) == doctest::Approx(brute).epsilon(1e-11));
                }
            }
        }
    }

    TEST_CASE("feature costs are respected")
    {
        testkit::Gen g(43);
        auto spec = testkit::spec_of({2, 2}, 2, {1, 3});
        for (int rep = 0; rep < 4; ++rep) {
            const auto s = testkit::random_integer_belief(spec, g);
            for (std::int64_t b = 1; b <= 4; ++b) {
                CHECK(optimal_value(s, b, exact_gini()) == doctest::Approx(testkit::brute_optimal(s, b)).epsilon(1e-11));
            }
        }
    }

    TEST_CASE("relabelling features or classes leaves the value unchanged")
    {
        testkit::Gen g(44);
        auto spec = testkit::spec_of({2, 3, 2}, 3);
        for (int rep = 0; rep < 3; ++rep) {
            const auto s = testkit::random_integer_belief(spec, g);
            const double v = optimal_value(s, 2, exact_gini());
            const auto p = permuted(s, {2, 0, 1}, {1, 2, 0});
            CHECK(optimal_value(p, 2, exact_gini()) == doctest::Approx(v).epsilon(1e-11));
            OracleOptions plain;
            plain.memoize = false;
            CHECK(optimal_value(p, 2, exact_gini(), plain) == doctest::Approx(v).epsilon(1e-11));
        }
    }

    TEST_CASE("no policy beats the optimum")
    {
        Rng rng(45);
        auto spec = testkit::spec_of({2, 2}, 2);
        for (int rep = 0; rep < 10; ++rep) {
            const auto s = random_tiny_belief(spec, rng);
            for (std::int64_t b = 1; b <= 4; ++b) {
                const double best = optimal_value(s, b, exact_gini());
                for (const auto& c : {exact_policy(PolicyKind::round_robin),
                                      exact_policy(PolicyKind::uniform_expenditure),
                                      exact_policy(PolicyKind::biased_robin), exact_policy(PolicyKind::greedy),
                                      exact_policy(PolicyKind::sfl, 4)}) {
                    CHECK(policy_value(c, s, b) >= best - 1e-9);
                }
            }
        }
    }

    TEST_CASE("greedy with one purchase left achieves the optimum")
    {
        testkit::Gen g(46);
        auto spec = testkit::spec_of({2, 3}, 2);
        for (int rep = 0; rep < 10; ++rep) {
            const auto s = testkit::random_belief(spec, g);
            double best = 1e9;
            for (std::size_t a = 0; a < spec->num_actions(); ++a) {
                best = std::min(best, testkit::brute_one_step(s, spec->action_at(a)));
            }
            CHECK(policy_value(exact_policy(PolicyKind::greedy), s, 1) == doctest::Approx(best).epsilon(1e-11));
            CHECK(optimal_value(s, 1, exact_gini()) == doctest::Approx(best).epsilon(1e-11));
        }
    }

    TEST_CASE("a single allowed action gives the full-allocation lookahead loss")
    {
        testkit::Gen g(47);
        auto spec = testkit::spec_of({2, 3}, 2);
        for (int rep = 0; rep < 5; ++rep) {
            const auto s = testkit::random_belief(spec, g);
            Rng rng(1);
            const RowLossScorer scorer(s, exact_gini(), rng);
            for (std::size_t a = 0; a < spec->num_actions(); ++a) {
                OracleOptions only;
                only.allowed_actions = {a};
                for (std::int64_t b = 1; b <= 4; ++b) {
                    CHECK(optimal_value(s, b, exact_gini(), only) ==
                          doctest::Approx(scorer.expected_loss(spec->action_at(a), static_cast<int>(b), 64))
                              .epsilon(1e-11));
                }
            }
        }
        OracleOptions bad;
        bad.allowed_actions = {99};
        CHECK_THROWS_AS(optimal_value(BeliefState::uniform(spec, {1, 1}), 1, exact_gini(), bad), std::out_of_range);
    }

    TEST_CASE("round robin value at budgets zero and one")
    {
        testkit::Gen g(48);
        auto spec = testkit::spec_of({2, 2}, 2);
        const auto s = testkit::random_belief(spec, g);
        CHECK(policy_value(exact_policy(PolicyKind::round_robin), s, 1) ==
              doctest::Approx(testkit::brute_one_step(s, {0, 0})).epsilon(1e-12));
        CHECK(policy_value(exact_policy(PolicyKind::round_robin), s, 0) ==
              doctest::Approx(testkit::brute_gini(s)).epsilon(1e-12));
    }

    TEST_CASE("stopping early never hurts the optimum")
    {
        testkit::Gen g(49);
        auto spec = testkit::spec_of({2, 2}, 2);
        for (int rep = 0; rep < 5; ++rep) {
            const auto s = testkit::random_integer_belief(spec, g);
            OracleOptions stop;
            stop.allow_stop = true;
            for (std::int64_t b = 1; b <= 3; ++b) {
                const double with_stop = optimal_value(s, b, exact_gini(), stop);
                CHECK(with_stop <= optimal_value(s, b, exact_gini()) + 1e-12);
                CHECK(with_stop <= optimal_value(s, b - 1, exact_gini(), stop) + 1e-12);
                CHECK(with_stop <= testkit::brute_gini(s) + 1e-12);
            }
        }
    }

    TEST_CASE("value versus budget is reported, not assumed monotone")
    {
        Rng rng(50);
        auto spec = testkit::spec_of({2, 2}, 2);
        int rises = 0;
        for (int rep = 0; rep < 10; ++rep) {
            const auto s = random_tiny_belief(spec, rng);
            double prev = optimal_value(s, 0, exact_gini());
            for (std::int64_t b = 1; b <= 4; ++b) {
                const double v = optimal_value(s, b, exact_gini());
                rises += v > prev + 1e-12 ? 1 : 0;
                prev = v;
            }
        }
        MESSAGE("budget steps where the optimal expected GINI rose: " << rises << " of 40");
    }

    TEST_CASE("limits are enforced before any work")
    {
        auto spec = testkit::spec_of({2, 2}, 2);
        const auto s = BeliefState::uniform(spec, {1, 1});
        CHECK_THROWS_AS(optimal_value(s, 9, exact_gini()), LimitsExceeded);
        CHECK_THROWS_AS(optimal_value(s, -1, exact_gini()), std::invalid_argument);
        auto wide = testkit::spec_of({2, 2, 2, 2, 2}, 2);
        CHECK_THROWS_AS(optimal_value(BeliefState::uniform(wide, {1, 1}), 1, exact_gini()), LimitsExceeded);
        auto tall = testkit::spec_of({5}, 2);
        CHECK_THROWS_AS(optimal_value(BeliefState::uniform(tall, {1, 1}), 1, exact_gini()), LimitsExceeded);
        LossKind sampled;
        sampled.exact_threshold = 1;
        CHECK_THROWS_AS(optimal_value(s, 1, sampled), std::invalid_argument);
        OracleOptions tight;
        tight.limits.max_node_visits = 10;
        CHECK_THROWS_AS(optimal_value(s, 4, exact_gini(), tight), LimitsExceeded);
        CHECK_THROWS_AS(policy_value(exact_policy(PolicyKind::greedy), s, 9), LimitsExceeded);
        try {
            optimal_value(s, 9, exact_gini());
        } catch (const LimitsExceeded& e) {
            CHECK(e.estimated_work > 0.0);
        }
    }

    TEST_CASE("memoized work grows polynomially and overtakes the plain tree")
    {
        // 8 cells: plain is sum 8^t, memoized is C(b + 8, 8) * 8.
        auto spec = testkit::spec_of({2, 2}, 2);
        CHECK(oracle_work_estimate(*spec, 2, false) == 73.0);
        CHECK(oracle_work_estimate(*spec, 2, true) == 360.0);
        for (std::int64_t b = 4; b <= 8; ++b) {
            CHECK(oracle_work_estimate(*spec, b, true) < oracle_work_estimate(*spec, b, false));
        }
        CHECK(oracle_work_estimate(*spec, 3, false) > oracle_work_estimate(*spec, 2, false));
    }

    TEST_CASE("tiny random beliefs stay in range")
    {
        Rng rng(51);
        auto spec = testkit::spec_of({2, 3}, 3);
        for (int rep = 0; rep < 20; ++rep) {
            const auto s = random_tiny_belief(spec, rng);
            for (double a : s.grid()) {
                CHECK(a >= 1.0);
                CHECK(a <= 4.0);
                CHECK(a == std::floor(a));
            }
            for (auto c : s.class_counts()) {
                CHECK(c >= 1);
                CHECK(c <= 5);
            }
        }
    }
}
