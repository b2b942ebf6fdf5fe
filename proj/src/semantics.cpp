#include "semstop/semantics.hpp"

#include <algorithm>
#include <cmath>

#include "semstop/data.hpp"

namespace semstop {

bool SemanticVector::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double error_deviation(std::span<const double> outputs, std::span<const double> targets) {
    if (outputs.size() != targets.size())
        throw std::invalid_argument("error_deviation: length mismatch");
    const std::size_t n = outputs.size();
    if (n < 2) throw std::invalid_argument("error_deviation: needs at least 2 instances");
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += std::abs(outputs[i] - targets[i]);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(outputs[i] - targets[i]) - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(n - 1));
}

SemanticVector shift(const SemanticVector& parent, std::span<const double> delta, double step) {
    if (parent.size() != delta.size()) throw std::invalid_argument("shift: length mismatch");
    std::vector<double> out(parent.size());
    const auto p = parent.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = p[i] + step * delta[i];
    return {std::move(out), parent.tag()};
}

SemanticVector perturb(const SemanticVector& parent, std::span<const double> delta, double step) {
    if (parent.size() != delta.size()) throw std::invalid_argument("perturb: length mismatch");
    for (double d : delta)
        if (!(d >= -1.0 && d <= 1.0))
            throw std::domain_error("perturb: delta entry outside [-1, 1]");
    return shift(parent, delta, step);
}

NeighborEntry describe_neighbor(const SemanticVector& train_semantics,
                                std::span<const double> train_targets) {
    return {rmse(train_semantics.values(), train_targets),
            error_deviation(train_semantics.values(), train_targets)};
}

}  // namespace semstop
