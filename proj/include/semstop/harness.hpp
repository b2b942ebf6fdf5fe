#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semstop/data.hpp"
#include "semstop/stats.hpp"
#include "semstop/stopping.hpp"

namespace semstop::harness {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Algorithm { sshc, slm };
enum class StepStrategy { fixed, optimal };

std::string to_string(Algorithm a);
std::string to_string(StepStrategy s);
Algorithm parse_algorithm(const std::string& text);
StepStrategy parse_step(const std::string& text);

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::slm;
    StepStrategy step = StepStrategy::fixed;
    double step_value = 1.0;  // used by the fixed strategy
    CriterionConfig criterion;
    std::size_t sample_size = 100;
    std::size_t runs = 30;
    double train_fraction = 0.7;
    std::uint64_t seed = 0;
    bool bounded = true;       // SSHC: logistic-wrapped mutation trees
    bool hidden_bias = false;  // SLM: bias weight on hidden neurons
    std::size_t init_depth = 6;
    std::size_t mutation_depth = 6;

    /// Throws ConfigError on invalid settings, including TIE with optimal
    /// steps (the optimal step nearly always improves, so TIE never fires).
    void validate() const;

    /// e.g. "SLM-FS-EDV".
    std::string variant_name() const;
};

/// Split and search seeds depend only on (master seed, run index), so all
/// variants sharing a master seed see identical partitions.
std::uint64_t split_seed(std::uint64_t master_seed, std::size_t run_index);
std::uint64_t search_seed(std::uint64_t master_seed, std::size_t run_index);

struct TraceRow {
    std::size_t generation;
    double best_train_rmse;
    double best_unseen_rmse;
    std::optional<double> tie_measure;  // unset on the initialization row
    std::optional<double> edv_measure;
    std::size_t model_size;
};

struct RunReport {
    std::size_t run_index = 0;
    std::uint64_t split_seed = 0;
    std::size_t stopping_generation = 0;
    std::size_t accepted_generations = 0;
    bool hit_max_generations = false;
    double train_rmse_final = 0.0;
    double generalization_rmse_final = 0.0;
    std::size_t model_size = 0;  // tree nodes or hidden neurons
    std::size_t discarded_candidates = 0;
    double wall_time_seconds = 0.0;
    std::vector<TraceRow> trace;  // generation 0 is the initialization sample
    std::string model_text;
};

RunReport run_search(const ExperimentConfig& cfg, const Dataset& ds, std::size_t run_index);

struct VariantBatch {
    ExperimentConfig config;
    std::vector<RunReport> runs;
};

struct SignificanceRow {
    std::string variant_a;
    std::string variant_b;
    double threshold;
    std::string metric;
    stats::MannWhitneyResult result;
};

struct BatchResult {
    std::vector<VariantBatch> batches;
    std::vector<SignificanceRow> significance;
};

/// Runs every config for its configured number of runs. Pairwise tests
/// compare variants at equal threshold; the Bonferroni count is the total
/// number of tests.
BatchResult run_experiment(const std::vector<ExperimentConfig>& configs, const Dataset& ds,
                           std::size_t threads = 1);
inline BatchResult run_experiment(const ExperimentConfig& cfg, const Dataset& ds, std::size_t threads = 1) {
    return run_experiment(std::vector<ExperimentConfig>{cfg}, ds, threads);
}

/// Metric columns reported per batch, in output order.
const std::vector<std::string>& summary_metrics();
std::vector<double> metric_values(const VariantBatch& batch, const std::string& metric);

std::string trace_csv(const RunReport& report);
std::string summary_csv(const BatchResult& result);
std::string significance_csv(const BatchResult& result);
std::string runs_csv(const BatchResult& result);
std::string timing_csv(const BatchResult& result);

/// Writes summary.csv, significance.csv, runs.csv, timing.csv, and per run
/// trace_run<i>.csv plus model_run<i>.txt under <variant>/threshold_<t>/.
void write_outputs(const BatchResult& result, const std::filesystem::path& dir);

std::string format_real(double v);

}  // namespace semstop::harness
