#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace semstop::stats {

struct BatchSummary {
    double median;
    double average;
    std::optional<double> sd;  // sample SD; absent for a single value
    std::size_t n_runs;
};

/// Median (midpoint for even n), mean and sample standard deviation.
BatchSummary summarize(std::span<const double> values);

struct MannWhitneyResult {
    double u;    // U of the first sample
    double u_b;  // U of the second sample; u + u_b = n_a * n_b
    double p_value;
    double p_corrected;  // min(1, p * n_comparisons)
    bool significant;    // p < alpha / n_comparisons
    bool exact;
};

/// Two-sided Mann-Whitney U test. The exact permutation distribution of the
/// rank sum is used when both samples have at most kExactLimit values,
/// otherwise the normal approximation with tie and continuity corrections.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                 double alpha = 0.05, std::size_t n_comparisons = 1);

inline constexpr std::size_t kExactLimit = 8;

/// Midranks (1-based, ties averaged) of the concatenation of a and b.
void pooled_midranks(std::span<const double> a, std::span<const double> b, std::span<double> ranks);

}  // namespace semstop::stats
