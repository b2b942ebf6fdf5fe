#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "semstop/slm.hpp"

using namespace semstop;
using namespace semstop::slm;

namespace {

struct Fixture {
    Dataset ds = make_friedman1({150, 10, 1.0, 4});
    DataSplit split = random_split(ds, 0.7, 8);
    Partition train = select(ds, split.train_indices);
    Partition unseen = select(ds, split.unseen_indices);
    EvalContext ctx{train.features, unseen.features};
};

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("random_network examples") {
    Fixture f;
    Rng rng(1);
    const auto zero = random_network(10, 0.0, rng, f.ctx);
    CHECK(std::all_of(zero.train_semantics().values().begin(), zero.train_semantics().values().end(),
                      [](double v) { return v == 0.0; }));
    CHECK(zero.neuron_count() == 1);

    for (int i = 0; i < 50; ++i) {
        const double ls = rng.uniform(-5, 5);
        const auto net = random_network(10, ls, rng, f.ctx);
        for (double v : net.train_semantics().values()) CHECK(std::abs(v) <= std::abs(ls));
        for (double w : net.neurons().front().neuron->input_weights) CHECK((w >= -1.0 && w <= 1.0));
        CHECK_FALSE(net.neurons().front().neuron->bias.has_value());
    }

    Rng a(77), b(77);
    const auto n1 = random_network(10, 1.0, a, f.ctx);
    const auto n2 = random_network(10, 1.0, b, f.ctx);
    CHECK(n1.neurons().front().neuron->input_weights == n2.neurons().front().neuron->input_weights);
    CHECK(n1.train_semantics() == n2.train_semantics());
}

TEST_CASE("hidden bias option draws a bias in [-1, 1]") {
    Fixture f;
    Rng rng(2);
    const auto net = random_network(10, 1.0, rng, f.ctx, NetworkConfig{true});
    const auto& neuron = *net.neurons().front().neuron;
    REQUIRE(neuron.bias.has_value());
    CHECK(std::abs(*neuron.bias) <= 1.0);
    CHECK(oracle::max_relative_diff(net.train_semantics().values(), oracle::forward(net.neurons(), f.train.features)) <=
          1e-12);
}

TEST_CASE("gsm_nn with zero step adds a neuron without moving the semantics") {
    Fixture f;
    Rng rng(3);
    const auto parent = random_network(10, 1.0, rng, f.ctx);
    const auto child = gsm_nn(parent, 0.0, rng, f.ctx);
    CHECK(child.neuron_count() == 2);
    CHECK(child.train_semantics() == parent.train_semantics());
    CHECK(parent.neuron_count() == 1);
}

TEST_CASE("neuron with zero input weights contributes nothing") {
    Fixture f;
    Rng rng(4);
    const auto parent = random_network(10, 1.0, rng, f.ctx);
    HiddenNeuron zero;
    zero.input_weights.assign(10, 0.0);
    zero.train_activations = activations(zero.input_weights, std::nullopt, f.train.features);
    zero.unseen_activations = activations(zero.input_weights, std::nullopt, f.unseen.features);
    const auto child = parent.join(std::make_shared<const HiddenNeuron>(zero), 1.0);
    CHECK(child.train_semantics() == parent.train_semantics());
    CHECK(child.unseen_semantics() == parent.unseen_semantics());
}

TEST_CASE("gsm_nn change is bounded and matches a full forward pass") {
    Fixture f;
    Rng rng(5);
    auto net = random_network(10, 1.0, rng, f.ctx);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto child = gsm_nn(net, 1.0, rng, f.ctx);
        for (std::size_t k = 0; k < net.train_semantics().size(); ++k)
            worst = std::max(worst, std::abs(child.train_semantics()[k] - net.train_semantics()[k]));
        net = child;
    }
    CHECK(worst <= 1.0);
    CHECK(net.neuron_count() == 1001);
    const auto neurons = net.neurons();
    CHECK(oracle::max_relative_diff(net.train_semantics().values(), oracle::forward(neurons, f.train.features)) <= 1e-9);
    CHECK(oracle::max_relative_diff(net.unseen_semantics().values(), oracle::forward(neurons, f.unseen.features)) <=
          1e-9);
    CHECK(evaluate_network(neurons, f.train.features) == to_vec(net.train_semantics().values()));
}

TEST_CASE("gsm_nn_optimal examples") {
    Fixture f;
    Rng rng(6);
    const auto parent = random_network(10, 1.0, rng, f.ctx);

    // Residual exactly along the next neuron's activations.
    Rng probe(99), draw(99);
    const auto next = random_neuron(10, probe, f.ctx);
    std::vector<double> targets = to_vec(parent.train_semantics().values());
    for (std::size_t i = 0; i < targets.size(); ++i) targets[i] += 2.5 * next.train_activations[i];
    const auto exact = gsm_nn_optimal(parent, targets, draw, f.ctx);
    REQUIRE(exact);
    CHECK(exact->neurons().back().output_weight == doctest::Approx(2.5));
    CHECK(rmse(exact->train_semantics().values(), targets) <= 1e-12);

    // Residual orthogonal to the activations.
    Rng probe2(123), draw2(123);
    const auto a = random_neuron(10, probe2, f.ctx).train_activations;
    std::vector<double> e(a.size());
    Rng noise(7);
    for (auto& v : e) v = noise.normal();
    double ea = 0, aa = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ea += e[i] * a[i];
        aa += a[i] * a[i];
    }
    std::vector<double> t2 = to_vec(parent.train_semantics().values());
    for (std::size_t i = 0; i < a.size(); ++i) t2[i] += e[i] - ea / aa * a[i];
    const auto ortho = gsm_nn_optimal(parent, t2, draw2, f.ctx);
    REQUIRE(ortho);
    CHECK(std::abs(ortho->neurons().back().output_weight) <= 1e-12);
    CHECK(rmse(ortho->train_semantics().values(), t2) ==
          doctest::Approx(rmse(parent.train_semantics().values(), t2)).epsilon(1e-12));
}

TEST_CASE("gsm_nn_optimal never increases training error") {
    Fixture f;
    Rng rng(8);
    const auto start = random_network(10, 1.0, rng, f.ctx);
    int worse = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto child = gsm_nn_optimal(start, f.train.targets, rng, f.ctx);
        REQUIRE(child);
        if (rmse(child->train_semantics().values(), f.train.targets) >
            rmse(start.train_semantics().values(), f.train.targets) + 1e-12)
            ++worse;
    }
    CHECK(worse == 0);
}

TEST_CASE("optimal initial network fits its single output weight") {
    Fixture f;
    Rng rng(9);
    const auto net = random_network_optimal(10, f.train.targets, rng, f.ctx);
    REQUIRE(net);
    const auto& a = net->neurons().front().neuron->train_activations;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += f.train.targets[i] * a[i];
        den += a[i] * a[i];
    }
    CHECK(net->neurons().front().output_weight == doctest::Approx(num / den).epsilon(1e-12));
}
