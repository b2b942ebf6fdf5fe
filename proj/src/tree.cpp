#include "semstop/tree.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace semstop::gsgp {

std::size_t Node::arity() const {
    switch (op) {
        case Op::input:
        case Op::constant: return 0;
        case Op::logistic: return 1;
        default: return 2;
    }
}

NodePtr make_input(std::size_t feature) {
    return std::make_shared<const Node>(Node{Op::input, feature, 0.0, {}});
}

NodePtr make_constant(double value) {
    return std::make_shared<const Node>(Node{Op::constant, 0, value, {}});
}

NodePtr make_logistic(NodePtr child) {
    if (!child) throw std::invalid_argument("make_logistic: null child");
    return std::make_shared<const Node>(Node{Op::logistic, 0, 0.0, {std::move(child), nullptr}});
}

NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs) {
    if (op != Op::add && op != Op::sub && op != Op::mul && op != Op::pdiv)
        throw std::invalid_argument("make_binary: not a binary operator");
    if (!lhs || !rhs) throw std::invalid_argument("make_binary: null child");
    return std::make_shared<const Node>(Node{op, 0, 0.0, {std::move(lhs), std::move(rhs)}});
}

std::size_t node_count(const Node& node) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < node.arity(); ++i) n += node_count(*node.children[i]);
    return n;
}

std::size_t depth(const Node& node) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < node.arity(); ++i) d = std::max(d, depth(*node.children[i]));
    return d + 1;
}

double protected_div(double num, double den) {
    return std::abs(den) < kDivisionGuard ? 1.0 : num / den;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> evaluate_tree(const Node& node, const Matrix& features) {
    const std::size_t n = features.rows();
    switch (node.op) {
        case Op::input: {
            if (node.feature >= features.cols())
                throw std::out_of_range("evaluate_tree: feature index out of range");
            const auto col = features.column(node.feature);
            return {col.begin(), col.end()};
        }
        case Op::constant: return std::vector<double>(n, node.value);
        case Op::logistic: {
            auto v = evaluate_tree(*node.children[0], features);
            for (double& x : v) x = logistic(x);
            return v;
        }
        default: break;
    }
    auto lhs = evaluate_tree(*node.children[0], features);
    const auto rhs = evaluate_tree(*node.children[1], features);
    switch (node.op) {
        case Op::add:
            for (std::size_t i = 0; i < n; ++i) lhs[i] += rhs[i];
            break;
        case Op::sub:
            for (std::size_t i = 0; i < n; ++i) lhs[i] -= rhs[i];
            break;
        case Op::mul:
            for (std::size_t i = 0; i < n; ++i) lhs[i] *= rhs[i];
            break;
        case Op::pdiv:
            for (std::size_t i = 0; i < n; ++i) lhs[i] = protected_div(lhs[i], rhs[i]);
            break;
        default: break;
    }
    return lhs;
}

namespace {

constexpr std::array kFunctions{Op::add, Op::sub, Op::mul, Op::pdiv};

Op random_function(Rng& rng) { return kFunctions[rng.below(kFunctions.size())]; }

NodePtr random_terminal(std::size_t n_features, Rng& rng) {
    return make_input(rng.below(n_features));
}

void require_features(std::size_t n_features) {
    if (n_features == 0) throw std::invalid_argument("tree generation needs at least one feature");
}

NodePtr build(std::size_t depth_left, bool full, std::size_t n_features, Rng& rng) {
    if (depth_left <= 1) return random_terminal(n_features, rng);
    if (!full) {
        const auto pick = rng.below(kFunctions.size() + n_features);
        if (pick >= kFunctions.size()) return make_input(pick - kFunctions.size());
        auto lhs = build(depth_left - 1, full, n_features, rng);
        auto rhs = build(depth_left - 1, full, n_features, rng);
        return make_binary(kFunctions[pick], std::move(lhs), std::move(rhs));
    }
    const Op op = random_function(rng);
    auto lhs = build(depth_left - 1, full, n_features, rng);
    auto rhs = build(depth_left - 1, full, n_features, rng);
    return make_binary(op, std::move(lhs), std::move(rhs));
}

}  // namespace

NodePtr full_tree(std::size_t max_depth, std::size_t n_features, Rng& rng) {
    require_features(n_features);
    if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
    return build(max_depth, true, n_features, rng);
}

NodePtr grow_tree(std::size_t max_depth, std::size_t n_features, Rng& rng) {
    require_features(n_features);
    if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
    return build(max_depth, false, n_features, rng);
}

NodePtr ramped_half_and_half(std::size_t max_depth, std::size_t n_features, Rng& rng) {
    require_features(n_features);
    if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
    const std::size_t limit = max_depth == 1 ? 1 : 2 + rng.below(max_depth - 1);
    return rng.coin() ? build(limit, true, n_features, rng) : build(limit, false, n_features, rng);
}

namespace {

const char* symbol(Op op) {
    switch (op) {
        case Op::add: return "+";
        case Op::sub: return "-";
        case Op::mul: return "*";
        case Op::pdiv: return "/";
        case Op::logistic: return "logistic";
        default: return "?";
    }
}

void write_prefix(const Node& node, std::string& out) {
    if (node.op == Op::input) {
        out += 'x';
        out += std::to_string(node.feature);
        return;
    }
    if (node.op == Op::constant) {
        char buf[32];
        const auto [ptr, ec] =
            std::to_chars(buf, buf + sizeof buf, node.value, std::chars_format::general, 17);
        out.append(buf, ptr);
        return;
    }
    out += '(';
    out += symbol(node.op);
    for (std::size_t i = 0; i < node.arity(); ++i) {
        out += ' ';
        write_prefix(*node.children[i], out);
    }
    out += ')';
}

class PrefixParser {
public:
    explicit PrefixParser(std::string_view text) : text_(text) {}

    NodePtr parse_all() {
        auto node = parse();
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters");
        return node;
    }

private:
    NodePtr parse() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        if (text_[pos_] == '(') {
            ++pos_;
            const auto op_token = token();
            NodePtr node;
            if (op_token == "logistic") {
                node = make_logistic(parse());
            } else {
                Op op;
                if (op_token == "+")
                    op = Op::add;
                else if (op_token == "-")
                    op = Op::sub;
                else if (op_token == "*")
                    op = Op::mul;
                else if (op_token == "/")
                    op = Op::pdiv;
                else
                    fail("unknown operator '" + std::string(op_token) + "'");
                auto lhs = parse();
                auto rhs = parse();
                node = make_binary(op, std::move(lhs), std::move(rhs));
            }
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
            ++pos_;
            return node;
        }
        const auto leaf = token();
        if (leaf.size() > 1 && leaf.front() == 'x') {
            std::size_t feature = 0;
            const auto [ptr, ec] = std::from_chars(leaf.data() + 1, leaf.data() + leaf.size(), feature);
            if (ec != std::errc{} || ptr != leaf.data() + leaf.size()) fail("bad input variable");
            return make_input(feature);
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(leaf.data(), leaf.data() + leaf.size(), value);
        if (ec != std::errc{} || ptr != leaf.data() + leaf.size())
            fail("bad token '" + std::string(leaf) + "'");
        return make_constant(value);
    }

    std::string_view token() {
        skip_space();
        const auto start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '(' && text_[pos_] != ')')
            ++pos_;
        if (start == pos_) fail("empty token");
        return text_.substr(start, pos_ - start);
    }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("prefix parse error at offset " + std::to_string(pos_) + ": " + what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string to_prefix(const Node& node) {
    std::string out;
    write_prefix(node, out);
    return out;
}

NodePtr parse_prefix(std::string_view text) { return PrefixParser(text).parse_all(); }

}  // namespace semstop::gsgp
