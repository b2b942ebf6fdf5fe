#include "semstop/stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace semstop {

std::string to_string(CriterionKind kind) { return kind == CriterionKind::edv ? "edv" : "tie"; }

CriterionKind parse_criterion(const std::string& text) {
    if (text == "edv" || text == "EDV") return CriterionKind::edv;
    if (text == "tie" || text == "TIE") return CriterionKind::tie;
    throw std::invalid_argument("unknown stopping criterion '" + text + "'");
}

void CriterionConfig::validate() const {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("stopping threshold must lie in (0, 1)");
    if (max_generations < 1) throw std::invalid_argument("max_generations must be at least 1");
}

GenerationMeasures measure_generation(const NeighborSample& sample, double best_rmse,
                                      double best_error_deviation) {
    if (sample.entries.empty()) throw std::invalid_argument("measure_generation: empty sample");
    if (!std::isfinite(best_rmse) || !std::isfinite(best_error_deviation))
        throw std::invalid_argument("measure_generation: non-finite best values");
    std::size_t improving = 0;
    std::size_t reducing = 0;
    for (const auto& e : sample.entries) {
        if (e.train_rmse < best_rmse) {
            ++improving;
            if (e.error_deviation < best_error_deviation) ++reducing;
        }
    }
    GenerationMeasures m;
    m.n_improving = improving;
    m.tie_measure = static_cast<double>(improving) / static_cast<double>(sample.entries.size());
    if (improving > 0) m.edv_measure = static_cast<double>(reducing) / static_cast<double>(improving);
    return m;
}

bool should_stop(const GenerationMeasures& measures, const CriterionConfig& cfg,
                 std::size_t generation) {
    if (generation >= cfg.max_generations) return true;
    if (generation < cfg.min_generations) return false;
    switch (cfg.kind) {
        case CriterionKind::tie: return measures.tie_measure < cfg.threshold;
        case CriterionKind::edv:
            // No improving neighbor leaves the measure undefined; the climber
            // cannot advance, so that counts as a stop.
            return !measures.edv_measure || *measures.edv_measure < cfg.threshold;
    }
    return true;
}

}  // namespace semstop
