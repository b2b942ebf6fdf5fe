#include "semstop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace semstop::stats {

BatchSummary summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: empty input");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    BatchSummary s{};
    s.n_runs = n;
    s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    s.average = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    if (n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.average) * (v - s.average);
        s.sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return s;
}

void pooled_midranks(std::span<const double> a, std::span<const double> b, std::span<double> ranks) {
    const std::size_t n = a.size() + b.size();
    if (ranks.size() != n) throw std::invalid_argument("pooled_midranks: output size mismatch");
    const auto value = [&](std::size_t i) { return i < a.size() ? a[i] : b[i - a.size()]; };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return value(x) < value(y); });
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && value(order[j + 1]) == value(order[i])) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
        i = j + 1;
    }
}

namespace {

/// Two-sided p from the permutation distribution of the rank sum of a,
/// counted by dynamic programming over doubled midranks.
double exact_p(std::span<const double> ranks, std::size_t n_a) {
    const std::size_t n = ranks.size();
    std::vector<std::int64_t> doubled(n);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        doubled[i] = std::llround(2.0 * ranks[i]);
        total += doubled[i];
    }
    std::int64_t observed = 0;
    for (std::size_t i = 0; i < n_a; ++i) observed += doubled[i];
    const auto max_sum = static_cast<std::size_t>(total);

    // ways[k][s]: subsets of size k with doubled rank sum s.
    std::vector<std::vector<double>> ways(n_a + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(doubled[i]);
        for (std::size_t k = std::min(n_a, i + 1); k >= 1; --k)
            for (std::size_t s = max_sum; s >= r; --s) {
                ways[k][s] += ways[k - 1][s - r];
                if (s == r) break;
            }
    }
    // Mean of the doubled rank sum is n_a * (n + 1).
    const auto mean = static_cast<std::int64_t>(n_a * (n + 1));
    const auto observed_dev = std::llabs(observed - mean);
    double extreme = 0.0;
    double all = 0.0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
        all += ways[n_a][s];
        if (std::llabs(static_cast<std::int64_t>(s) - mean) >= observed_dev) extreme += ways[n_a][s];
    }
    return std::min(1.0, extreme / all);
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b, double alpha,
                                 std::size_t n_comparisons) {
    if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: empty sample");
    if (n_comparisons == 0) throw std::invalid_argument("mann_whitney_u: zero comparisons");
    const std::size_t n_a = a.size();
    const std::size_t n_b = b.size();
    const std::size_t n = n_a + n_b;
    std::vector<double> ranks(n);
    pooled_midranks(a, b, ranks);

    const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n_a), 0.0);
    const double na = static_cast<double>(n_a);
    const double nb = static_cast<double>(n_b);
    MannWhitneyResult r{};
    r.u = rank_sum_a - na * (na + 1.0) / 2.0;
    r.u_b = na * nb - r.u;

    if (n_a <= kExactLimit && n_b <= kExactLimit) {
        r.exact = true;
        r.p_value = exact_p(ranks, n_a);
    } else {
        // Tie correction: sum over tie groups of t^3 - t.
        std::vector<double> sorted = ranks;
        std::sort(sorted.begin(), sorted.end());
        double tie_term = 0.0;
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
        const double nn = static_cast<double>(n);
        const double variance = na * nb / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
        if (variance <= 0.0) {
            r.p_value = 1.0;
        } else {
            const double dev = std::max(0.0, std::abs(r.u - na * nb / 2.0) - 0.5);
            const double z = dev / std::sqrt(variance);
            r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
        }
    }
    r.p_corrected = std::min(1.0, r.p_value * static_cast<double>(n_comparisons));
    r.significant = r.p_value < alpha / static_cast<double>(n_comparisons);
    return r;
}

}  // namespace semstop::stats
