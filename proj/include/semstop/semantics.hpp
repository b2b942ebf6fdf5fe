#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace semstop {

enum class PartitionTag { train, unseen };

/// A model's outputs over one partition, one entry per instance.
class SemanticVector {
public:
    SemanticVector() = default;
    SemanticVector(std::vector<double> values, PartitionTag tag)
        : values_(std::move(values)), tag_(tag) {}

    std::span<const double> values() const { return values_; }
    PartitionTag tag() const { return tag_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    bool all_finite() const;

    bool operator==(const SemanticVector&) const = default;

private:
    std::vector<double> values_;
    PartitionTag tag_ = PartitionTag::train;
};

/// Sample (n - 1) standard deviation of |output_i - target_i|.
double error_deviation(std::span<const double> outputs, std::span<const double> targets);

/// parent + step * delta. Throws std::domain_error when a delta entry lies
/// outside [-1, 1].
SemanticVector perturb(const SemanticVector& parent, std::span<const double> delta, double step);

/// parent + step * delta without the bound check (optimal and unbounded
/// steps use directions of arbitrary magnitude).
SemanticVector shift(const SemanticVector& parent, std::span<const double> delta, double step);

struct NeighborEntry {
    double train_rmse;
    double error_deviation;
};

/// One generation's sample of the best model's semantic neighborhood,
/// summarized by what the stopping criteria read.
struct NeighborSample {
    std::vector<NeighborEntry> entries;

    std::size_t size() const { return entries.size(); }
};

NeighborEntry describe_neighbor(const SemanticVector& train_semantics,
                                std::span<const double> train_targets);

}  // namespace semstop
