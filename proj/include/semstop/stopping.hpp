#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "semstop/semantics.hpp"

namespace semstop {

enum class CriterionKind { edv, tie };

std::string to_string(CriterionKind kind);
CriterionKind parse_criterion(const std::string& text);

struct CriterionConfig {
    CriterionKind kind = CriterionKind::edv;
    double threshold = 0.25;
    std::size_t min_generations = 0;
    std::size_t max_generations = 10000;

    /// Throws std::invalid_argument unless 0 < threshold < 1.
    void validate() const;
};

struct GenerationMeasures {
    /// Fraction of the sample that strictly improves the best training RMSE.
    double tie_measure = 0.0;
    /// Fraction of improving neighbors whose error deviation is strictly
    /// lower than the best's; unset when nothing improves.
    std::optional<double> edv_measure;
    std::size_t n_improving = 0;
};

GenerationMeasures measure_generation(const NeighborSample& sample, double best_rmse,
                                      double best_error_deviation);

/// generation counts mutation samples from 1; the cap at max_generations
/// always applies.
bool should_stop(const GenerationMeasures& measures, const CriterionConfig& cfg,
                 std::size_t generation);

}  // namespace semstop
