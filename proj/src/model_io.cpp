#include "semstop/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace semstop {

namespace {

std::string number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, ptr};
}

double parse_real(std::string_view token) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ModelFormatError("bad number '" + std::string(token) + "'");
    return v;
}

std::size_t parse_count(std::string_view token) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ModelFormatError("bad integer '" + std::string(token) + "'");
    return v;
}

std::vector<std::string_view> words(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        const auto start = i;
        while (i < line.size() && line[i] != ' ') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string tree_text(const gsgp::NodePtr& base, const std::vector<gsgp::Mutation>& mutations,
                      std::size_t n_features) {
    std::string out = "semstop-model sshc\nfeatures " + std::to_string(n_features) + "\n";
    out += "base " + gsgp::to_prefix(*base) + "\n";
    for (const auto& m : mutations)
        out += "mutation " + number(m.step) + (m.bounded ? " 1 | " : " 0 | ") + gsgp::to_prefix(*m.r1) +
               " | " + gsgp::to_prefix(*m.r2) + "\n";
    return out + "end\n";
}

std::string network_text(const std::vector<slm::WeightedNeuron>& neurons, std::size_t n_features) {
    std::string out = "semstop-model slm\nfeatures " + std::to_string(n_features) + "\n";
    for (const auto& [neuron, weight] : neurons) {
        out += "neuron " + number(weight) + " " + (neuron->bias ? number(*neuron->bias) : "none");
        for (double w : neuron->input_weights) out += " " + number(w);
        out += "\n";
    }
    return out + "end\n";
}

void check_features(const gsgp::Node& node, std::size_t n_features) {
    if (node.op == gsgp::Op::input && node.feature >= n_features)
        throw ModelFormatError("tree references feature x" + std::to_string(node.feature) +
                               " beyond declared feature count");
    for (std::size_t i = 0; i < node.arity(); ++i) check_features(*node.children[i], n_features);
}

}  // namespace

std::string serialize(const gsgp::TreeIndividual& ind, std::size_t n_features) {
    return tree_text(ind.base(), ind.mutations(), n_features);
}

std::string serialize(const slm::NetworkIndividual& net, std::size_t n_features) {
    return network_text(net.neurons(), n_features);
}

std::string serialize(const Model& model) {
    if (const auto* t = std::get_if<TreeModel>(&model)) return tree_text(t->base, t->mutations, t->n_features);
    const auto& n = std::get<NetworkModel>(model);
    return network_text(n.neurons, n.n_features);
}

Model parse_model(std::string_view text) {
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(pos, end - pos));
        if (!line.empty()) lines.push_back(line);
        pos = end + 1;
    }
    if (lines.size() < 3 || lines.back() != "end") throw ModelFormatError("truncated model file");
    const auto header = words(lines[0]);
    const auto features = words(lines[1]);
    if (header.size() != 2 || header[0] != "semstop-model") throw ModelFormatError("missing model header");
    if (features.size() != 2 || features[0] != "features") throw ModelFormatError("missing feature count");
    const std::size_t n_features = parse_count(features[1]);

    try {
        if (header[1] == "sshc") {
            TreeModel model;
            model.n_features = n_features;
            if (lines[2].substr(0, 5) != "base ") throw ModelFormatError("missing base tree");
            model.base = gsgp::parse_prefix(lines[2].substr(5));
            check_features(*model.base, n_features);
            for (std::size_t i = 3; i + 1 < lines.size(); ++i) {
                auto line = lines[i];
                if (line.substr(0, 9) != "mutation ") throw ModelFormatError("expected mutation line");
                line.remove_prefix(9);
                const auto bar1 = line.find('|');
                const auto bar2 = line.find('|', bar1 + 1);
                if (bar1 == std::string_view::npos || bar2 == std::string_view::npos)
                    throw ModelFormatError("malformed mutation line");
                const auto head = words(line.substr(0, bar1));
                if (head.size() != 2 || (head[1] != "0" && head[1] != "1"))
                    throw ModelFormatError("malformed mutation step");
                gsgp::Mutation m{gsgp::parse_prefix(trim(line.substr(bar1 + 1, bar2 - bar1 - 1))),
                                 gsgp::parse_prefix(trim(line.substr(bar2 + 1))), parse_real(head[0]),
                                 head[1] == "1"};
                check_features(*m.r1, n_features);
                check_features(*m.r2, n_features);
                model.mutations.push_back(std::move(m));
            }
            return model;
        }
        if (header[1] == "slm") {
            NetworkModel model;
            model.n_features = n_features;
            for (std::size_t i = 2; i + 1 < lines.size(); ++i) {
                const auto w = words(lines[i]);
                if (w.size() != 3 + n_features || w[0] != "neuron")
                    throw ModelFormatError("malformed neuron line");
                slm::HiddenNeuron neuron;
                if (w[2] != "none") neuron.bias = parse_real(w[2]);
                for (std::size_t k = 0; k < n_features; ++k) neuron.input_weights.push_back(parse_real(w[3 + k]));
                model.neurons.push_back({std::make_shared<const slm::HiddenNeuron>(std::move(neuron)),
                                         parse_real(w[1])});
            }
            if (model.neurons.empty()) throw ModelFormatError("network has no neurons");
            return model;
        }
    } catch (const std::invalid_argument& e) {
        throw ModelFormatError(e.what());
    }
    throw ModelFormatError("unknown model kind '" + std::string(header[1]) + "'");
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelFormatError("cannot open model file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

void save_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

std::vector<double> predict(const Model& model, const Matrix& features) {
    if (const auto* t = std::get_if<TreeModel>(&model)) {
        if (features.cols() != t->n_features) throw DataError("feature count does not match the model");
        return gsgp::evaluate_model(*t->base, t->mutations, features);
    }
    const auto& n = std::get<NetworkModel>(model);
    if (features.cols() != n.n_features) throw DataError("feature count does not match the model");
    return slm::evaluate_network(n.neurons, features);
}

}  // namespace semstop
