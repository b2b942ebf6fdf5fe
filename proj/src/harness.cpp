#include "semstop/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "semstop/gsgp.hpp"
#include "semstop/model_io.hpp"
#include "semstop/rng.hpp"
#include "semstop/slm.hpp"

namespace semstop::harness {

std::string to_string(Algorithm a) { return a == Algorithm::sshc ? "sshc" : "slm"; }
std::string to_string(StepStrategy s) { return s == StepStrategy::fixed ? "fixed" : "optimal"; }

Algorithm parse_algorithm(const std::string& text) {
    if (text == "sshc") return Algorithm::sshc;
    if (text == "slm") return Algorithm::slm;
    throw ConfigError("unknown algorithm '" + text + "'");
}

StepStrategy parse_step(const std::string& text) {
    if (text == "fixed") return StepStrategy::fixed;
    if (text == "optimal") return StepStrategy::optimal;
    throw ConfigError("unknown step strategy '" + text + "'");
}

void ExperimentConfig::validate() const {
    if (criterion.kind == CriterionKind::tie && step == StepStrategy::optimal)
        throw ConfigError("the TIE criterion cannot be combined with optimal steps");
    try {
        criterion.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (sample_size < 1) throw ConfigError("sample size must be at least 1");
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
    if (step == StepStrategy::fixed && !std::isfinite(step_value)) throw ConfigError("step value must be finite");
    if (init_depth < 1 || mutation_depth < 1) throw ConfigError("tree depths must be at least 1");
}

std::string ExperimentConfig::variant_name() const {
    std::string name = algorithm == Algorithm::sshc ? "SSHC" : "SLM";
    name += step == StepStrategy::fixed ? "-FS-" : "-OS-";
    name += criterion.kind == CriterionKind::edv ? "EDV" : "TIE";
    return name;
}

std::uint64_t split_seed(std::uint64_t master_seed, std::size_t run_index) {
    return derive_seed({master_seed, 0x5EED5917ULL, run_index});
}

std::uint64_t search_seed(std::uint64_t master_seed, std::size_t run_index) {
    return derive_seed({master_seed, 0x5EA4C4ULL, run_index});
}

namespace {

// A candidate that keeps coming out non-finite or degenerate this many times
// in a row means the data itself is pathological.
constexpr std::size_t kMaxAttempts = 1000;

struct SearchData {
    const Partition& train;
    const Partition& unseen;
    EvalContext ctx;
};

template <class Model, class Draw>
Model draw_candidate(Draw&& draw, std::uint64_t seed, std::size_t& discarded) {
    Rng rng(seed);
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
        if (std::optional<Model> m = draw(rng)) return std::move(*m);
        ++discarded;
    }
    throw std::runtime_error("could not generate a finite, non-degenerate candidate");
}

/// Shared hill-climbing loop: keep only the best model, sample its semantic
/// neighborhood each generation, move to the best strictly improving
/// neighbor, then consult the stopping criterion.
template <class Model, class Init, class Mutate, class Size>
RunReport climb(const ExperimentConfig& cfg, const SearchData& data, std::uint64_t seed, Init&& init,
                Mutate&& mutate, Size&& size) {
    RunReport report;
    const auto targets = std::span<const double>(data.train.targets);
    const auto unseen_rmse = [&](const Model& m) { return rmse(m.unseen_semantics().values(), data.unseen.targets); };

    std::optional<Model> best;
    double best_rmse = 0.0;
    for (std::size_t c = 0; c < cfg.sample_size; ++c) {
        auto cand = draw_candidate<Model>(init, derive_seed({seed, 0, c}), report.discarded_candidates);
        const double e = rmse(cand.train_semantics().values(), targets);
        if (!best || e < best_rmse) {
            best = std::move(cand);
            best_rmse = e;
        }
    }
    report.trace.push_back({0, best_rmse, unseen_rmse(*best), std::nullopt, std::nullopt, size(*best)});

    for (std::size_t gen = 1;; ++gen) {
        const double best_ed = error_deviation(best->train_semantics().values(), targets);
        NeighborSample sample;
        sample.entries.reserve(cfg.sample_size);
        std::optional<Model> winner;
        double winner_rmse = best_rmse;
        for (std::size_t c = 0; c < cfg.sample_size; ++c) {
            auto cand = draw_candidate<Model>([&](Rng& rng) { return mutate(*best, rng); },
                                              derive_seed({seed, gen, c}), report.discarded_candidates);
            const auto entry = describe_neighbor(cand.train_semantics(), targets);
            sample.entries.push_back(entry);
            if (entry.train_rmse < winner_rmse) {
                winner_rmse = entry.train_rmse;
                winner = std::move(cand);
            }
        }
        const auto measures = measure_generation(sample, best_rmse, best_ed);
        if (winner) {
            best = std::move(winner);
            best_rmse = winner_rmse;
            ++report.accepted_generations;
        }
        report.trace.push_back({gen, best_rmse, unseen_rmse(*best), measures.tie_measure, measures.edv_measure,
                                size(*best)});
        if (should_stop(measures, cfg.criterion, gen)) {
            report.stopping_generation = gen;
            auto uncapped = cfg.criterion;
            uncapped.max_generations = std::numeric_limits<std::size_t>::max();
            report.hit_max_generations = !should_stop(measures, uncapped, gen);
            break;
        }
    }
    report.train_rmse_final = best_rmse;
    report.generalization_rmse_final = unseen_rmse(*best);
    report.model_size = size(*best);
    report.model_text = serialize(*best, data.train.features.cols());
    return report;
}

RunReport run_sshc(const ExperimentConfig& cfg, const SearchData& data, std::uint64_t seed) {
    const std::size_t d = data.train.features.cols();
    const gsgp::MutationConfig mcfg{cfg.mutation_depth, cfg.bounded};
    const auto targets = std::span<const double>(data.train.targets);
    auto init = [&](Rng& rng) -> std::optional<gsgp::TreeIndividual> {
        auto ind = gsgp::TreeIndividual::from_tree(gsgp::ramped_half_and_half(cfg.init_depth, d, rng), data.ctx);
        if (!ind.train_semantics().all_finite() || !ind.unseen_semantics().all_finite()) return std::nullopt;
        return ind;
    };
    auto mutate = [&](const gsgp::TreeIndividual& parent, Rng& rng) {
        return cfg.step == StepStrategy::fixed ? gsgp::bounded_mutation(parent, cfg.step_value, rng, data.ctx, mcfg)
                                               : gsgp::optimal_mutation(parent, targets, rng, data.ctx, mcfg);
    };
    auto size = [](const gsgp::TreeIndividual& ind) { return ind.node_count(); };
    return climb<gsgp::TreeIndividual>(cfg, data, seed, init, mutate, size);
}

RunReport run_slm(const ExperimentConfig& cfg, const SearchData& data, std::uint64_t seed) {
    const std::size_t d = data.train.features.cols();
    const slm::NetworkConfig ncfg{cfg.hidden_bias};
    const auto targets = std::span<const double>(data.train.targets);
    auto init = [&](Rng& rng) -> std::optional<slm::NetworkIndividual> {
        if (cfg.step == StepStrategy::fixed) return slm::random_network(d, cfg.step_value, rng, data.ctx, ncfg);
        return slm::random_network_optimal(d, targets, rng, data.ctx, ncfg);
    };
    auto mutate = [&](const slm::NetworkIndividual& parent, Rng& rng) -> std::optional<slm::NetworkIndividual> {
        if (cfg.step == StepStrategy::fixed) return slm::gsm_nn(parent, cfg.step_value, rng, data.ctx, ncfg);
        return slm::gsm_nn_optimal(parent, targets, rng, data.ctx, ncfg);
    };
    auto size = [](const slm::NetworkIndividual& net) { return net.neuron_count(); };
    return climb<slm::NetworkIndividual>(cfg, data, seed, init, mutate, size);
}

}  // namespace

RunReport run_search(const ExperimentConfig& cfg, const Dataset& ds, std::size_t run_index) {
    cfg.validate();
    validate(ds);
    const auto split = random_split(ds, cfg.train_fraction, split_seed(cfg.seed, run_index));
    if (split.train_indices.size() < 2) throw ConfigError("training partition needs at least 2 instances");
    const Partition train = select(ds, split.train_indices);
    const Partition unseen = select(ds, split.unseen_indices);
    const SearchData data{train, unseen, EvalContext{train.features, unseen.features}};

    const auto start = std::chrono::steady_clock::now();
    RunReport report = cfg.algorithm == Algorithm::sshc ? run_sshc(cfg, data, search_seed(cfg.seed, run_index))
                                                        : run_slm(cfg, data, search_seed(cfg.seed, run_index));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report.wall_time_seconds = std::round(elapsed.count() * 1000.0) / 1000.0;
    report.run_index = run_index;
    report.split_seed = split_seed(cfg.seed, run_index);
    return report;
}

const std::vector<std::string>& summary_metrics() {
    static const std::vector<std::string> metrics{"generalization_error", "iterations", "training_error",
                                                  "model_size"};
    return metrics;
}

std::vector<double> metric_values(const VariantBatch& batch, const std::string& metric) {
    std::vector<double> out;
    out.reserve(batch.runs.size());
    for (const auto& r : batch.runs) {
        if (metric == "generalization_error")
            out.push_back(r.generalization_rmse_final);
        else if (metric == "iterations")
            out.push_back(static_cast<double>(r.stopping_generation));
        else if (metric == "training_error")
            out.push_back(r.train_rmse_final);
        else if (metric == "model_size")
            out.push_back(static_cast<double>(r.model_size));
        else if (metric == "wall_time_seconds")
            out.push_back(r.wall_time_seconds);
        else
            throw std::invalid_argument("unknown metric '" + metric + "'");
    }
    return out;
}

BatchResult run_experiment(const std::vector<ExperimentConfig>& configs, const Dataset& ds, std::size_t threads) {
    for (const auto& cfg : configs) cfg.validate();
    validate(ds);
    BatchResult result;
    struct Task {
        std::size_t batch;
        std::size_t run;
    };
    std::vector<Task> tasks;
    for (std::size_t b = 0; b < configs.size(); ++b) {
        result.batches.push_back({configs[b], std::vector<RunReport>(configs[b].runs)});
        for (std::size_t r = 0; r < configs[b].runs; ++r) tasks.push_back({b, r});
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::string error_context;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            {
                std::lock_guard lock(error_mutex);
                if (first_error) return;
            }
            const auto [b, r] = tasks[i];
            try {
                result.batches[b].runs[r] = run_search(configs[b], ds, r);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                    error_context = configs[b].variant_name() + " run " + std::to_string(r) + " (split seed " +
                                    std::to_string(split_seed(configs[b].seed, r)) + ", search seed " +
                                    std::to_string(search_seed(configs[b].seed, r)) + ")";
                }
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < std::max<std::size_t>(threads, 1); ++t) pool.emplace_back(worker);
        worker();
    }
    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const std::exception& e) {
            throw std::runtime_error("batch aborted at " + error_context + ": " + e.what());
        }
    }

    std::size_t n_tests = 0;
    for (std::size_t i = 0; i < result.batches.size(); ++i)
        for (std::size_t j = i + 1; j < result.batches.size(); ++j)
            if (result.batches[i].config.criterion.threshold == result.batches[j].config.criterion.threshold)
                n_tests += summary_metrics().size();
    for (std::size_t i = 0; i < result.batches.size(); ++i)
        for (std::size_t j = i + 1; j < result.batches.size(); ++j) {
            const auto& a = result.batches[i];
            const auto& b = result.batches[j];
            if (a.config.criterion.threshold != b.config.criterion.threshold) continue;
            for (const auto& metric : summary_metrics()) {
                const auto va = metric_values(a, metric);
                const auto vb = metric_values(b, metric);
                result.significance.push_back({a.config.variant_name(), b.config.variant_name(),
                                               a.config.criterion.threshold, metric,
                                               stats::mann_whitney_u(va, vb, 0.05, n_tests)});
            }
        }
    return result;
}

std::string format_real(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

namespace {

std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

std::filesystem::path batch_dir(const ExperimentConfig& cfg) {
    return std::filesystem::path(cfg.variant_name()) / ("threshold_" + format_real(cfg.criterion.threshold));
}

}  // namespace

std::string trace_csv(const RunReport& report) {
    std::string out = "generation,best_train_rmse,best_unseen_rmse,tie_measure,edv_measure,model_size\n";
    for (const auto& row : report.trace)
        out += std::to_string(row.generation) + "," + format_real(row.best_train_rmse) + "," +
               format_real(row.best_unseen_rmse) + "," + optional_real(row.tie_measure) + "," +
               optional_real(row.edv_measure) + "," + std::to_string(row.model_size) + "\n";
    return out;
}

std::string summary_csv(const BatchResult& result) {
    std::string out = "variant,threshold,metric,median,average,sd\n";
    for (const auto& batch : result.batches)
        for (const auto& metric : summary_metrics()) {
            const auto s = stats::summarize(metric_values(batch, metric));
            out += batch.config.variant_name() + "," + format_real(batch.config.criterion.threshold) + "," + metric +
                   "," + format_real(s.median) + "," + format_real(s.average) + "," + optional_real(s.sd) + "\n";
        }
    return out;
}

std::string significance_csv(const BatchResult& result) {
    std::string out = "variant_a,variant_b,threshold,metric,u,p_raw,p_corrected,significant\n";
    for (const auto& row : result.significance)
        out += row.variant_a + "," + row.variant_b + "," + format_real(row.threshold) + "," + row.metric + "," +
               format_real(row.result.u) + "," + format_real(row.result.p_value) + "," +
               format_real(row.result.p_corrected) + "," + (row.result.significant ? "true" : "false") + "\n";
    return out;
}

std::string runs_csv(const BatchResult& result) {
    std::string out =
        "variant,threshold,run,split_seed,stopping_generation,accepted_generations,hit_max_generations,"
        "train_rmse,generalization_rmse,model_size,discarded_candidates\n";
    for (const auto& batch : result.batches)
        for (const auto& r : batch.runs)
            out += batch.config.variant_name() + "," + format_real(batch.config.criterion.threshold) + "," +
                   std::to_string(r.run_index) + "," + std::to_string(r.split_seed) + "," +
                   std::to_string(r.stopping_generation) + "," + std::to_string(r.accepted_generations) + "," +
                   (r.hit_max_generations ? "true" : "false") + "," + format_real(r.train_rmse_final) + "," +
                   format_real(r.generalization_rmse_final) + "," + std::to_string(r.model_size) + "," +
                   std::to_string(r.discarded_candidates) + "\n";
    return out;
}

std::string timing_csv(const BatchResult& result) {
    std::string out = "variant,threshold,run,wall_time_seconds\n";
    for (const auto& batch : result.batches)
        for (const auto& r : batch.runs)
            out += batch.config.variant_name() + "," + format_real(batch.config.criterion.threshold) + "," +
                   std::to_string(r.run_index) + "," + format_real(r.wall_time_seconds) + "\n";
    return out;
}

void write_outputs(const BatchResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_text(summary_csv(result), dir / "summary.csv");
    save_text(significance_csv(result), dir / "significance.csv");
    save_text(runs_csv(result), dir / "runs.csv");
    save_text(timing_csv(result), dir / "timing.csv");
    for (const auto& batch : result.batches) {
        const auto sub = dir / batch_dir(batch.config);
        std::filesystem::create_directories(sub);
        for (const auto& r : batch.runs) {
            save_text(trace_csv(r), sub / ("trace_run" + std::to_string(r.run_index) + ".csv"));
            save_text(r.model_text, sub / ("model_run" + std::to_string(r.run_index) + ".txt"));
        }
    }
}

}  // namespace semstop::harness
