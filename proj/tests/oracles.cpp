#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

using semstop::gsgp::Node;
using semstop::gsgp::NodePtr;
using semstop::gsgp::Op;

namespace {

NodePtr node(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    return std::make_shared<const Node>(Node{op, 0, 0.0, {std::move(a), std::move(b)}});
}

}  // namespace

NodePtr expand(const semstop::gsgp::TreeIndividual& ind) {
    NodePtr expr = ind.base();
    for (const auto& m : ind.mutations()) {
        auto lhs = m.bounded ? node(Op::logistic, m.r1) : m.r1;
        auto rhs = m.bounded ? node(Op::logistic, m.r2) : m.r2;
        auto step = std::make_shared<const Node>(Node{Op::constant, 0, m.step, {}});
        expr = node(Op::add, expr, node(Op::mul, step, node(Op::sub, lhs, rhs)));
    }
    return expr;
}

std::size_t count(const Node& n) {
    std::size_t c = 1;
    for (const auto& child : n.children)
        if (child) c += count(*child);
    return c;
}

double eval_row(const Node& n, const semstop::Matrix& x, std::size_t row) {
    switch (n.op) {
        case Op::input: return x(row, n.feature);
        case Op::constant: return n.value;
        case Op::logistic: return 1.0 / (1.0 + std::exp(-eval_row(*n.children[0], x, row)));
        case Op::add: return eval_row(*n.children[0], x, row) + eval_row(*n.children[1], x, row);
        case Op::sub: return eval_row(*n.children[0], x, row) - eval_row(*n.children[1], x, row);
        case Op::mul: {
            // Mutation terms are step * (...); keep the multiplication order of
            // the literal expression.
            const double l = eval_row(*n.children[0], x, row);
            return l * eval_row(*n.children[1], x, row);
        }
        case Op::pdiv: {
            const double num = eval_row(*n.children[0], x, row);
            const double den = eval_row(*n.children[1], x, row);
            return std::fabs(den) < 1e-9 ? 1.0 : num / den;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> eval_all(const Node& n, const semstop::Matrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = eval_row(n, x, r);
    return out;
}

std::vector<double> forward(std::span<const semstop::slm::WeightedNeuron> neurons, const semstop::Matrix& x) {
    std::vector<double> out(x.rows(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        double sum = 0.0;
        for (const auto& wn : neurons) {
            double z = wn.neuron->bias.value_or(0.0);
            for (std::size_t k = 0; k < x.cols(); ++k) z += wn.neuron->input_weights[k] * x(r, k);
            sum += wn.output_weight * std::tanh(z);
        }
        out[r] = sum;
    }
    return out;
}

namespace {

double u_pairs(std::span<const double> a, std::span<const double> b) {
    double u = 0.0;
    for (double x : a)
        for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
    return u;
}

}  // namespace

ExactMannWhitney mann_whitney_enumerate(std::span<const double> a, std::span<const double> b) {
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size();
    const std::size_t k = a.size();
    const double mean = static_cast<double>(a.size() * b.size()) / 2.0;
    const double observed = u_pairs(a, b);
    const double observed_dev = std::fabs(observed - mean);

    std::size_t total = 0;
    std::size_t extreme = 0;
    std::vector<double> first, second;
    // Bitmask enumeration over all subsets of size k (n <= 16 in the tests).
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
        first.clear();
        second.clear();
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? first : second).push_back(pooled[i]);
        ++total;
        if (std::fabs(u_pairs(first, second) - mean) >= observed_dev - 1e-9) ++extreme;
    }
    return {observed, static_cast<double>(extreme) / static_cast<double>(total)};
}

double direct_rmse(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s / static_cast<double>(a.size()));
}

GridResult grid_search(std::span<const double> parent, std::span<const double> delta,
                       std::span<const double> targets, double lo, double hi, std::size_t points) {
    GridResult best{lo, std::numeric_limits<double>::infinity()};
    std::vector<double> cand(parent.size());
    for (std::size_t g = 0; g < points; ++g) {
        const double s = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(points - 1);
        for (std::size_t i = 0; i < parent.size(); ++i) cand[i] = parent[i] + s * delta[i];
        const double e = direct_rmse(cand, targets);
        if (e < best.best_rmse) best = {s, e};
    }
    return best;
}

double max_relative_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::fabs(a[i]), std::fabs(b[i]), 1.0});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / scale);
    }
    return worst;
}

}  // namespace oracle
