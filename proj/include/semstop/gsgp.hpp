#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "semstop/data.hpp"
#include "semstop/rng.hpp"
#include "semstop/semantics.hpp"
#include "semstop/tree.hpp"

namespace semstop {

/// Thrown by optimal_step when the direction has (numerically) zero norm.
class DegenerateDirection : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Least-squares step along delta: <targets - parent, delta> / <delta, delta>.
/// Throws DegenerateDirection when <delta, delta> < 1e-18.
double optimal_step(std::span<const double> parent, std::span<const double> delta,
                    std::span<const double> targets);

/// Feature matrices of the two partitions a model's semantics are cached on.
struct EvalContext {
    const Matrix& train;
    const Matrix& unseen;
};

}  // namespace semstop

namespace semstop::gsgp {

struct MutationConfig {
    std::size_t tree_depth = 6;  // grow-method depth limit of r1 and r2
    bool bounded = true;         // wrap r1 and r2 in logistic
};

/// One applied mutation: offspring = parent + step * (f(r1) - f(r2)) where
/// f is logistic when bounded, identity otherwise.
struct Mutation {
    NodePtr r1;
    NodePtr r2;
    double step;
    bool bounded;
};

/// Nodes added to the expanded expression by one mutation, excluding r1, r2:
/// add + mul + step constant + sub, plus two logistic wrappers when bounded.
inline constexpr std::size_t mutation_overhead(bool bounded) { return bounded ? 6 : 4; }

class TreeIndividual {
public:
    static TreeIndividual from_tree(NodePtr base, const EvalContext& ctx);

    const NodePtr& base() const { return base_; }
    /// Mutation history, oldest first.
    std::vector<Mutation> mutations() const;
    std::size_t mutation_count() const { return mutation_count_; }
    const SemanticVector& train_semantics() const { return train_; }
    const SemanticVector& unseen_semantics() const { return unseen_; }
    std::size_t node_count() const { return node_count_; }

    /// Offspring sharing this individual's history. The semantics are the
    /// caller-computed incremental values.
    TreeIndividual extend(Mutation m, SemanticVector train, SemanticVector unseen) const;

private:
    struct Link {
        Mutation mutation;
        mutable std::shared_ptr<const Link> previous;
        ~Link();
    };

    NodePtr base_;
    std::shared_ptr<const Link> history_;
    std::size_t mutation_count_ = 0;
    std::size_t node_count_ = 0;
    SemanticVector train_;
    SemanticVector unseen_;
};

/// Random direction f(r1) - f(r2) evaluated on both partitions.
struct MutationDraw {
    NodePtr r1;
    NodePtr r2;
    bool bounded;
    std::vector<double> delta_train;
    std::vector<double> delta_unseen;

    bool finite() const;
};

MutationDraw draw_mutation(std::size_t n_features, Rng& rng, const EvalContext& ctx,
                           const MutationConfig& cfg = {});

/// Applies a drawn direction with the given step. Returns nullopt when the
/// offspring semantics are not finite.
std::optional<TreeIndividual> apply_mutation(const TreeIndividual& parent, const MutationDraw& draw,
                                             double step);

/// Geometric semantic mutation with a fixed step. nullopt signals a
/// non-finite candidate the caller should regenerate.
std::optional<TreeIndividual> bounded_mutation(const TreeIndividual& parent, double ms, Rng& rng,
                                               const EvalContext& ctx, const MutationConfig& cfg = {});

/// Mutation whose step minimizes the training RMSE. nullopt signals a
/// degenerate direction or non-finite semantics.
std::optional<TreeIndividual> optimal_mutation(const TreeIndividual& parent,
                                               std::span<const double> train_targets, Rng& rng,
                                               const EvalContext& ctx, const MutationConfig& cfg = {});

/// Size of the literal expanded expression, recomputed from the history.
std::size_t count_nodes(const TreeIndividual& ind);

/// Evaluates a base tree plus mutation list on new data.
std::vector<double> evaluate_model(const Node& base, std::span<const Mutation> mutations,
                                   const Matrix& features);

}  // namespace semstop::gsgp
