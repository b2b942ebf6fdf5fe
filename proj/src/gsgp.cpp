#include "semstop/gsgp.hpp"

#include <algorithm>
#include <cmath>

namespace semstop {

double optimal_step(std::span<const double> parent, std::span<const double> delta,
                    std::span<const double> targets) {
    if (parent.size() != delta.size() || parent.size() != targets.size())
        throw std::invalid_argument("optimal_step: length mismatch");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        num += (targets[i] - parent[i]) * delta[i];
        den += delta[i] * delta[i];
    }
    if (!(den >= 1e-18)) throw DegenerateDirection("optimal_step: direction has zero norm");
    return num / den;
}

}  // namespace semstop

namespace semstop::gsgp {

TreeIndividual::Link::~Link() {
    // Release long chains iteratively instead of recursing once per link.
    auto next = std::move(previous);
    while (next && next.use_count() == 1) {
        auto after = std::move(next->previous);
        next = std::move(after);
    }
}

TreeIndividual TreeIndividual::from_tree(NodePtr base, const EvalContext& ctx) {
    if (!base) throw std::invalid_argument("TreeIndividual: null base tree");
    TreeIndividual ind;
    ind.train_ = SemanticVector(evaluate_tree(*base, ctx.train), PartitionTag::train);
    ind.unseen_ = SemanticVector(evaluate_tree(*base, ctx.unseen), PartitionTag::unseen);
    ind.node_count_ = gsgp::node_count(*base);
    ind.base_ = std::move(base);
    return ind;
}

std::vector<Mutation> TreeIndividual::mutations() const {
    std::vector<Mutation> out;
    out.reserve(mutation_count_);
    for (const Link* link = history_.get(); link; link = link->previous.get())
        out.push_back(link->mutation);
    std::reverse(out.begin(), out.end());
    return out;
}

TreeIndividual TreeIndividual::extend(Mutation m, SemanticVector train, SemanticVector unseen) const {
    TreeIndividual child;
    child.base_ = base_;
    child.node_count_ = node_count_ + gsgp::node_count(*m.r1) + gsgp::node_count(*m.r2) +
                        mutation_overhead(m.bounded);
    child.history_ = std::make_shared<const Link>(Link{std::move(m), history_});
    child.mutation_count_ = mutation_count_ + 1;
    child.train_ = std::move(train);
    child.unseen_ = std::move(unseen);
    return child;
}

namespace {

bool finite_values(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> direction(const Node& r1, const Node& r2, bool bounded, const Matrix& features) {
    auto a = evaluate_tree(r1, features);
    const auto b = evaluate_tree(r2, features);
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = bounded ? logistic(a[i]) - logistic(b[i]) : a[i] - b[i];
    return a;
}

}  // namespace

bool MutationDraw::finite() const { return finite_values(delta_train) && finite_values(delta_unseen); }

MutationDraw draw_mutation(std::size_t n_features, Rng& rng, const EvalContext& ctx,
                           const MutationConfig& cfg) {
    MutationDraw draw;
    draw.r1 = grow_tree(cfg.tree_depth, n_features, rng);
    draw.r2 = grow_tree(cfg.tree_depth, n_features, rng);
    draw.bounded = cfg.bounded;
    draw.delta_train = direction(*draw.r1, *draw.r2, cfg.bounded, ctx.train);
    draw.delta_unseen = direction(*draw.r1, *draw.r2, cfg.bounded, ctx.unseen);
    return draw;
}

std::optional<TreeIndividual> apply_mutation(const TreeIndividual& parent, const MutationDraw& draw,
                                             double step) {
    if (!std::isfinite(step) || !draw.finite()) return std::nullopt;
    auto train = shift(parent.train_semantics(), draw.delta_train, step);
    auto unseen = shift(parent.unseen_semantics(), draw.delta_unseen, step);
    if (!train.all_finite() || !unseen.all_finite()) return std::nullopt;
    return parent.extend(Mutation{draw.r1, draw.r2, step, draw.bounded}, std::move(train),
                         std::move(unseen));
}

std::optional<TreeIndividual> bounded_mutation(const TreeIndividual& parent, double ms, Rng& rng,
                                               const EvalContext& ctx, const MutationConfig& cfg) {
    const auto draw = draw_mutation(ctx.train.cols(), rng, ctx, cfg);
    return apply_mutation(parent, draw, ms);
}

std::optional<TreeIndividual> optimal_mutation(const TreeIndividual& parent,
                                               std::span<const double> train_targets, Rng& rng,
                                               const EvalContext& ctx, const MutationConfig& cfg) {
    const auto draw = draw_mutation(ctx.train.cols(), rng, ctx, cfg);
    if (!draw.finite()) return std::nullopt;
    try {
        const double step = optimal_step(parent.train_semantics().values(), draw.delta_train, train_targets);
        return apply_mutation(parent, draw, step);
    } catch (const DegenerateDirection&) {
        return std::nullopt;
    }
}

std::size_t count_nodes(const TreeIndividual& ind) {
    std::size_t n = node_count(*ind.base());
    for (const auto& m : ind.mutations())
        n += node_count(*m.r1) + node_count(*m.r2) + mutation_overhead(m.bounded);
    return n;
}

std::vector<double> evaluate_model(const Node& base, std::span<const Mutation> mutations,
                                   const Matrix& features) {
    auto out = evaluate_tree(base, features);
    for (const auto& m : mutations) {
        const auto d = direction(*m.r1, *m.r2, m.bounded, features);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += m.step * d[i];
    }
    return out;
}

}  // namespace semstop::gsgp
