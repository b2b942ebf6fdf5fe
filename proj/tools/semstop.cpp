// Batch runner: SSHC / SLM with fixed or optimal steps under the EDV or TIE
// stopping criterion, over seeded runs, writing traces and summary tables.
//
//   semstop --synthetic friedman1:n=200,d=10,noise=1.0 --algorithm slm \
//           --step fixed,optimal --criterion edv,tie --threshold 0.15,0.25,0.35 --out results/

#include <CLI11.hpp>

#include <iostream>

#include "semstop/data.hpp"
#include "semstop/harness.hpp"

using namespace semstop;
using namespace semstop::harness;

int main(int argc, char** argv) {
    CLI::App app{"Semantic hill climbing with semantic stopping criteria"};

    std::string dataset_path;
    std::string synthetic;
    std::string target_column;
    std::vector<std::string> algorithms{"slm"};
    std::vector<std::string> steps{"fixed"};
    std::vector<std::string> criteria{"edv"};
    std::vector<double> thresholds{0.25};
    ExperimentConfig base;
    bool unbounded = false;
    std::size_t threads = 1;
    std::string out_dir = "semstop_out";
    std::string export_path;

    auto* source = app.add_option_group("source");
    source->add_option("--dataset", dataset_path, "CSV file (target in the last column unless --target-column)");
    source->add_option("--synthetic", synthetic, "Built-in dataset, e.g. friedman1:n=200,d=10,noise=1.0,seed=0");
    source->require_option(1);
    app.add_option("--target-column", target_column, "Target column: header name or 0-based index");
    app.add_option("--algorithm", algorithms, "sshc and/or slm (comma-separated)")->delimiter(',');
    app.add_option("--step", steps, "fixed and/or optimal (comma-separated)")->delimiter(',');
    app.add_option("--step-value", base.step_value, "Fixed step (learning/mutation step)");
    app.add_option("--criterion", criteria, "edv and/or tie (comma-separated)")->delimiter(',');
    app.add_option("--threshold", thresholds, "Stopping threshold(s) in (0,1)")->delimiter(',');
    app.add_option("--runs", base.runs, "Runs per variant");
    app.add_option("--seed", base.seed, "Master seed");
    app.add_option("--sample-size", base.sample_size, "Neighbors sampled per generation");
    app.add_option("--train-fraction", base.train_fraction, "Training share of each random split");
    app.add_option("--min-generations", base.criterion.min_generations, "Generations before criteria apply");
    app.add_option("--max-generations", base.criterion.max_generations, "Generation cap");
    app.add_flag("--unbounded", unbounded, "SSHC: omit the logistic wrappers on mutation trees");
    app.add_flag("--hidden-bias", base.hidden_bias, "SLM: add a bias weight to each hidden neuron");
    app.add_option("--threads", threads, "Worker threads (results do not depend on this)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--export-dataset", export_path, "Write the loaded dataset as CSV and exit");

    CLI11_PARSE(app, argc, argv);
    base.bounded = !unbounded;

    try {
        Dataset ds;
        if (!synthetic.empty()) {
            ds = make_friedman1(parse_synthetic_spec(synthetic));
        } else {
            TargetColumn target;
            if (!target_column.empty()) {
                if (target_column.find_first_not_of("0123456789") == std::string::npos)
                    target = static_cast<std::size_t>(std::stoul(target_column));
                else
                    target = target_column;
            }
            ds = load_csv(dataset_path, target);
        }
        if (!export_path.empty()) {
            save_csv(ds, export_path);
            return 0;
        }

        std::vector<ExperimentConfig> configs;
        std::vector<std::string> skipped;
        for (const auto& a : algorithms)
            for (const auto& s : steps)
                for (const auto& c : criteria)
                    for (double t : thresholds) {
                        ExperimentConfig cfg = base;
                        cfg.algorithm = parse_algorithm(a);
                        cfg.step = parse_step(s);
                        cfg.criterion.kind = parse_criterion(c);
                        cfg.criterion.threshold = t;
                        if (cfg.criterion.kind == CriterionKind::tie && cfg.step == StepStrategy::optimal &&
                            steps.size() * criteria.size() > 1) {
                            skipped.push_back(cfg.variant_name());
                            continue;
                        }
                        cfg.validate();
                        configs.push_back(cfg);
                    }
        for (const auto& name : skipped) std::cerr << "note: skipping " << name << " (TIE with optimal steps)\n";

        const auto result = run_experiment(configs, ds, threads);
        write_outputs(result, out_dir);
        std::cout << summary_csv(result);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
