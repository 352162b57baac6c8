#include "bnb/errors.hpp"
#include "bnb/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

enum ExitCode { ok = 0, config_error = 1, data_error = 2, limits_error = 3 };

void print_summary(const bnb::ErrorCurve& curve)
{
    std::printf("%-24s %10s %10s %10s\n", "policy", "spend", "error", "stderr");
    for (const auto& pc : curve.policies) {
        const auto& last = pc.points.back();
        std::printf("%-24s %10lld %10.4f %10.4f\n", pc.policy.c_str(), static_cast<long long>(last.spend),
                    last.mean_error, last.stderr_error);
    }
    std::printf("%-24s %10s %10.4f\n", "complete_training_data", "-", curve.baseline_error);
}

int run_main(int argc, char** argv)
{
    CLI::App app{"Budgeted Naive Bayes learning: purchase policies and experiment runner"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic pool as CSV plus schema");
    bnb::SyntheticSpec sspec;
    std::string regime = "all_uniform";
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    synth->add_option("--features", sspec.n_features, "Number of binary features")->capture_default_str();
    synth->add_option("--regime", regime, "all_uniform or one_discriminative")->capture_default_str();
    synth->add_option("--discriminative-prob", sspec.discriminative_prob)->capture_default_str();
    synth->add_option("--instances", sspec.n_instances)->capture_default_str();
    synth->add_option("--class-prob", sspec.class_prob, "P(class c0)")->capture_default_str();
    synth->add_option("--seed", synth_seed)->capture_default_str();
    synth->add_option("--out", synth_out, "CSV path; the schema goes next to it as <out>.schema.json")->required();

    // run
    auto* run = app.add_subcommand("run", "Run an experiment config and write curve CSVs");
    std::string run_config;
    std::string run_out;
    std::optional<std::uint64_t> run_seed;
    std::optional<int> run_trials;
    run->add_option("config", run_config, "Experiment config (JSON)")->required();
    run->add_option("--out", run_out, "Output directory")->required();
    run->add_option("--seed", run_seed, "Override base_seed");
    run->add_option("--trials", run_trials, "Override the trial count");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Policy vs optimal expected loss on random tiny instances");
    bnb::GapConfig gap;
    std::string gap_loss = "gini";
    oracle->add_option("--features", gap.features)->capture_default_str();
    oracle->add_option("--classes", gap.classes)->capture_default_str();
    oracle->add_option("--arity", gap.arity)->capture_default_str();
    oracle->add_option("--budget", gap.budget)->capture_default_str();
    oracle->add_option("--instances", gap.instances)->capture_default_str();
    oracle->add_option("--seed", gap.seed)->capture_default_str();
    oracle->add_option("--loss", gap_loss, "gini, entropy or zero_one")->capture_default_str();
    oracle->add_option("--sfl-depth", gap.sfl_depth, "SFL lookahead; 0 uses the budget")->capture_default_str();

    // baseline
    auto* baseline = app.add_subcommand("baseline", "Complete-training-data error only");
    std::string base_config;
    std::optional<std::uint64_t> base_seed;
    std::optional<int> base_trials;
    baseline->add_option("config", base_config, "Experiment config (JSON)")->required();
    baseline->add_option("--seed", base_seed, "Override base_seed");
    baseline->add_option("--trials", base_trials, "Override the trial count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    if (*synth) {
        try {
            sspec.regime = bnb::synthetic_regime_from_string(regime);
        } catch (const std::invalid_argument& e) {
            throw bnb::ConfigError(e.what());
        }
        bnb::Rng rng(synth_seed);
        const auto data = bnb::generate_synthetic(sspec, rng);
        bnb::write_csv(data.pool, synth_out);
        bnb::CsvSchema schema;
        schema.class_column = "class";
        schema.class_labels = data.pool.spec().class_labels();
        std::ofstream(synth_out + ".schema.json") << bnb::schema_to_json(schema).dump(2) << '\n';
        std::printf("wrote %d rows to %s", sspec.n_instances, synth_out.c_str());
        if (data.discriminative_feature) {
            std::printf(" (discriminative feature f%zu)", *data.discriminative_feature);
        }
        std::printf("\n");
    } else if (*run) {
        auto config = bnb::load_config(run_config);
        if (run_seed) {
            config.base_seed = *run_seed;
        }
        if (run_trials) {
            if (*run_trials < 1) {
                throw bnb::ConfigError("--trials must be at least 1");
            }
            config.trials = *run_trials;
        }
        const auto curve = bnb::run_experiment(config);
        bnb::emit_curves(curve, run_out);
        print_summary(curve);
    } else if (*oracle) {
        try {
            gap.loss = bnb::loss_type_from_string(gap_loss);
        } catch (const std::invalid_argument& e) {
            throw bnb::ConfigError(e.what());
        }
        const auto rows = bnb::oracle_gap_table(gap);
        std::printf("%-8s %-24s %14s %14s %12s\n", "instance", "policy", "policy_value", "optimal_value", "gap");
        for (const auto& r : rows) {
            std::printf("%-8d %-24s %14.10f %14.10f %12.3e\n", r.instance, r.policy.c_str(), r.policy_value,
                        r.optimal_value, r.policy_value - r.optimal_value);
        }
    } else if (*baseline) {
        auto config = bnb::load_config(base_config);
        if (base_seed) {
            config.base_seed = *base_seed;
        }
        if (base_trials) {
            config.trials = *base_trials;
        }
        const bnb::DataProvider provider(config);
        double total = 0.0;
        for (int t = 0; t < config.trials; ++t) {
            total += bnb::baseline_error(provider.trial(bnb::trial_seed(config.base_seed, t)));
        }
        std::printf("complete_training_data_error %s\n", bnb::format_double(total / config.trials).c_str());
    }
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run_main(argc, argv);
    } catch (const bnb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const bnb::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return data_error;
    } catch (const bnb::LimitsExceeded& e) {
        std::cerr << "limits exceeded: " << e.what() << '\n';
        return limits_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    }
}
