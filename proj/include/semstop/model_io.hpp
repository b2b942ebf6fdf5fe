#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semstop/data.hpp"
#include "semstop/gsgp.hpp"
#include "semstop/slm.hpp"

namespace semstop {

struct TreeModel {
    std::size_t n_features = 0;
    gsgp::NodePtr base;
    std::vector<gsgp::Mutation> mutations;
};

struct NetworkModel {
    std::size_t n_features = 0;
    std::vector<slm::WeightedNeuron> neurons;
};

using Model = std::variant<TreeModel, NetworkModel>;

class ModelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Line-oriented text. Trees:
//   semstop-model sshc
//   features <d>
//   base <prefix tree>
//   mutation <step> <bounded 0|1> | <r1 prefix> | <r2 prefix>
//   end
// Networks:
//   semstop-model slm
//   features <d>
//   neuron <output weight> <bias|none> <w_1> ... <w_d>
//   end
// All reals carry 17 significant digits.
std::string serialize(const gsgp::TreeIndividual& ind, std::size_t n_features);
std::string serialize(const slm::NetworkIndividual& net, std::size_t n_features);
std::string serialize(const Model& model);

Model parse_model(std::string_view text);
Model load_model(const std::filesystem::path& path);
void save_text(const std::string& text, const std::filesystem::path& path);

/// Re-evaluates a stored model on every row of features.
std::vector<double> predict(const Model& model, const Matrix& features);

}  // namespace semstop
