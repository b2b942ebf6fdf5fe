#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "semstop/data.hpp"
#include "semstop/rng.hpp"

namespace semstop::gsgp {

enum class Op : unsigned char { input, constant, add, sub, mul, pdiv, logistic };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression node. Subtrees are shared, never copied.
struct Node {
    Op op;
    std::size_t feature = 0;  // input
    double value = 0.0;       // constant
    std::array<NodePtr, 2> children{};

    std::size_t arity() const;
};

/// |denominator| below this makes protected division return 1.
inline constexpr double kDivisionGuard = 1e-9;

NodePtr make_input(std::size_t feature);
NodePtr make_constant(double value);
NodePtr make_logistic(NodePtr child);
NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs);

std::size_t node_count(const Node& node);
/// A single leaf has depth 1.
std::size_t depth(const Node& node);

double protected_div(double num, double den);
double logistic(double x);

/// Evaluates the tree on every row of features at once.
std::vector<double> evaluate_tree(const Node& node, const Matrix& features);

/// Full method: function nodes down to depth max_depth, leaves only there.
NodePtr full_tree(std::size_t max_depth, std::size_t n_features, Rng& rng);
/// Grow method: each node below the depth limit is drawn uniformly from the
/// combined function and terminal sets.
NodePtr grow_tree(std::size_t max_depth, std::size_t n_features, Rng& rng);
/// Depth limit uniform on 2..max_depth (1 when max_depth is 1), then full
/// or grow with equal probability. Terminals are input variables only.
NodePtr ramped_half_and_half(std::size_t max_depth, std::size_t n_features, Rng& rng);

/// Prefix notation, e.g. "(+ x0 (/ x1 x2))". Constants print with 17
/// significant digits.
std::string to_prefix(const Node& node);
NodePtr parse_prefix(std::string_view text);

}  // namespace semstop::gsgp
