// Re-evaluates a serialized model on a CSV with the training layout and
// prints one prediction per line, followed by the RMSE on stderr.

#include <CLI11.hpp>

#include <iostream>

#include "semstop/data.hpp"
#include "semstop/harness.hpp"
#include "semstop/model_io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Apply a saved semstop model to a dataset"};
    std::string model_path;
    std::string dataset_path;
    app.add_option("--model", model_path, "model_run<i>.txt file")->required();
    app.add_option("--dataset", dataset_path, "CSV file with features and target (last column)")->required();
    CLI11_PARSE(app, argc, argv);

    try {
        const auto model = semstop::load_model(model_path);
        const auto ds = semstop::load_csv(dataset_path);
        const auto outputs = semstop::predict(model, ds.features);
        for (double v : outputs) std::cout << semstop::harness::format_real(v) << "\n";
        std::cerr << "rmse " << semstop::harness::format_real(semstop::rmse(outputs, ds.targets)) << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
