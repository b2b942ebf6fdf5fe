#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "semstop/gsgp.hpp"
#include "semstop/rng.hpp"
#include "semstop/semantics.hpp"

namespace semstop::slm {

struct NetworkConfig {
    bool hidden_bias = false;  // adds a bias weight in [-1, 1] per hidden neuron
};

/// tanh hidden neuron with its activations cached on both partitions.
struct HiddenNeuron {
    std::vector<double> input_weights;
    std::optional<double> bias;
    std::vector<double> train_activations;
    std::vector<double> unseen_activations;
};

/// tanh(weights . row + bias) for every row of features.
std::vector<double> activations(std::span<const double> input_weights, std::optional<double> bias,
                                const Matrix& features);

HiddenNeuron random_neuron(std::size_t n_features, Rng& rng, const EvalContext& ctx,
                           const NetworkConfig& cfg = {});

struct WeightedNeuron {
    std::shared_ptr<const HiddenNeuron> neuron;
    double output_weight;
};

/// Single-hidden-layer network whose output neuron is a plain weighted sum.
class NetworkIndividual {
public:
    /// One-neuron network with the given output weight.
    static NetworkIndividual single(HiddenNeuron neuron, double output_weight);

    /// Hidden neurons in insertion order.
    std::vector<WeightedNeuron> neurons() const;
    std::size_t neuron_count() const { return neuron_count_; }
    const SemanticVector& train_semantics() const { return train_; }
    const SemanticVector& unseen_semantics() const { return unseen_; }

    /// Appends a neuron; only its activations are evaluated.
    NetworkIndividual join(std::shared_ptr<const HiddenNeuron> neuron, double output_weight) const;

private:
    struct Link {
        WeightedNeuron entry;
        mutable std::shared_ptr<const Link> previous;
        ~Link();
    };

    std::shared_ptr<const Link> last_;
    std::size_t neuron_count_ = 0;
    SemanticVector train_;
    SemanticVector unseen_;
};

NetworkIndividual random_network(std::size_t n_features, double ls, Rng& rng, const EvalContext& ctx,
                                 const NetworkConfig& cfg = {});

/// Initial network whose single output weight is the least-squares optimum
/// against the training targets. nullopt on a degenerate neuron.
std::optional<NetworkIndividual> random_network_optimal(std::size_t n_features,
                                                        std::span<const double> train_targets,
                                                        Rng& rng, const EvalContext& ctx,
                                                        const NetworkConfig& cfg = {});

/// Geometric semantic mutation for networks: appends a random neuron with
/// output weight ls. The parent is left untouched.
NetworkIndividual gsm_nn(const NetworkIndividual& parent, double ls, Rng& rng, const EvalContext& ctx,
                         const NetworkConfig& cfg = {});

/// As gsm_nn, with the new output weight set by optimal_step. nullopt when
/// the neuron's activations have zero norm.
std::optional<NetworkIndividual> gsm_nn_optimal(const NetworkIndividual& parent,
                                                std::span<const double> train_targets, Rng& rng,
                                                const EvalContext& ctx, const NetworkConfig& cfg = {});

/// Forward pass from stored weights, for serialized models on new data.
std::vector<double> evaluate_network(std::span<const WeightedNeuron> neurons, const Matrix& features);

}  // namespace semstop::slm
