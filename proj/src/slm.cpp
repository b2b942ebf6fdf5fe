#include "semstop/slm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semstop::slm {

std::vector<double> activations(std::span<const double> input_weights, std::optional<double> bias,
                                const Matrix& features) {
    if (input_weights.size() != features.cols())
        throw std::invalid_argument("activations: weight count does not match feature count");
    std::vector<double> z(features.rows(), bias.value_or(0.0));
    for (std::size_t c = 0; c < features.cols(); ++c) {
        const auto col = features.column(c);
        const double w = input_weights[c];
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += w * col[i];
    }
    for (double& v : z) v = std::tanh(v);
    return z;
}

HiddenNeuron random_neuron(std::size_t n_features, Rng& rng, const EvalContext& ctx,
                           const NetworkConfig& cfg) {
    if (n_features == 0) throw std::invalid_argument("random_neuron: no input features");
    HiddenNeuron neuron;
    neuron.input_weights.resize(n_features);
    for (double& w : neuron.input_weights) w = rng.uniform(-1.0, 1.0);
    if (cfg.hidden_bias) neuron.bias = rng.uniform(-1.0, 1.0);
    neuron.train_activations = activations(neuron.input_weights, neuron.bias, ctx.train);
    neuron.unseen_activations = activations(neuron.input_weights, neuron.bias, ctx.unseen);
    return neuron;
}

NetworkIndividual::Link::~Link() {
    auto next = std::move(previous);
    while (next && next.use_count() == 1) {
        auto after = std::move(next->previous);
        next = std::move(after);
    }
}

namespace {

std::vector<double> scaled(std::span<const double> a, double w) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = w * a[i];
    return out;
}

}  // namespace

NetworkIndividual NetworkIndividual::single(HiddenNeuron neuron, double output_weight) {
    NetworkIndividual net;
    net.train_ = SemanticVector(scaled(neuron.train_activations, output_weight), PartitionTag::train);
    net.unseen_ = SemanticVector(scaled(neuron.unseen_activations, output_weight), PartitionTag::unseen);
    auto shared = std::make_shared<const HiddenNeuron>(std::move(neuron));
    net.last_ = std::make_shared<const Link>(Link{{std::move(shared), output_weight}, nullptr});
    net.neuron_count_ = 1;
    return net;
}

std::vector<WeightedNeuron> NetworkIndividual::neurons() const {
    std::vector<WeightedNeuron> out;
    out.reserve(neuron_count_);
    for (const Link* link = last_.get(); link; link = link->previous.get()) out.push_back(link->entry);
    std::reverse(out.begin(), out.end());
    return out;
}

NetworkIndividual NetworkIndividual::join(std::shared_ptr<const HiddenNeuron> neuron,
                                          double output_weight) const {
    if (!neuron) throw std::invalid_argument("join: null neuron");
    NetworkIndividual child;
    child.train_ = shift(train_, neuron->train_activations, output_weight);
    child.unseen_ = shift(unseen_, neuron->unseen_activations, output_weight);
    child.last_ = std::make_shared<const Link>(Link{{std::move(neuron), output_weight}, last_});
    child.neuron_count_ = neuron_count_ + 1;
    return child;
}

NetworkIndividual random_network(std::size_t n_features, double ls, Rng& rng, const EvalContext& ctx,
                                 const NetworkConfig& cfg) {
    return NetworkIndividual::single(random_neuron(n_features, rng, ctx, cfg), ls);
}

std::optional<NetworkIndividual> random_network_optimal(std::size_t n_features,
                                                        std::span<const double> train_targets,
                                                        Rng& rng, const EvalContext& ctx,
                                                        const NetworkConfig& cfg) {
    auto neuron = random_neuron(n_features, rng, ctx, cfg);
    const std::vector<double> zero(neuron.train_activations.size(), 0.0);
    try {
        const double w = optimal_step(zero, neuron.train_activations, train_targets);
        return NetworkIndividual::single(std::move(neuron), w);
    } catch (const DegenerateDirection&) {
        return std::nullopt;
    }
}

NetworkIndividual gsm_nn(const NetworkIndividual& parent, double ls, Rng& rng, const EvalContext& ctx,
                         const NetworkConfig& cfg) {
    auto neuron = std::make_shared<const HiddenNeuron>(random_neuron(ctx.train.cols(), rng, ctx, cfg));
    return parent.join(std::move(neuron), ls);
}

std::optional<NetworkIndividual> gsm_nn_optimal(const NetworkIndividual& parent,
                                                std::span<const double> train_targets, Rng& rng,
                                                const EvalContext& ctx, const NetworkConfig& cfg) {
    auto neuron = std::make_shared<const HiddenNeuron>(random_neuron(ctx.train.cols(), rng, ctx, cfg));
    try {
        const double w =
            optimal_step(parent.train_semantics().values(), neuron->train_activations, train_targets);
        return parent.join(std::move(neuron), w);
    } catch (const DegenerateDirection&) {
        return std::nullopt;
    }
}

std::vector<double> evaluate_network(std::span<const WeightedNeuron> neurons, const Matrix& features) {
    std::vector<double> out(features.rows(), 0.0);
    for (const auto& [neuron, weight] : neurons) {
        const auto a = activations(neuron->input_weights, neuron->bias, features);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += weight * a[i];
    }
    return out;
}

}  // namespace semstop::slm
