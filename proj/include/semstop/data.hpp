#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace semstop {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense real matrix stored column-major: each column is one feature over
/// all instances, which is the access pattern of vectorized evaluation.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::span<const double> column(std::size_t c) const {
        return {data_.data() + c * rows_, rows_};
    }
    std::span<double> column(std::size_t c) { return {data_.data() + c * rows_, rows_}; }

    /// Copy of the given rows, in the given order.
    Matrix select_rows(std::span<const std::size_t> rows) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Dataset {
    Matrix features;
    std::vector<double> targets;
    std::vector<std::string> feature_names;  // empty when the CSV had no header

    std::size_t n_instances() const { return targets.size(); }
    std::size_t n_features() const { return features.cols(); }
};

/// Throws DataError unless the Dataset invariants hold (shape, finiteness).
void validate(const Dataset& ds);

/// Target column selector: a 0-based index or a header name. Unset means
/// the last column.
using TargetColumn = std::variant<std::monostate, std::size_t, std::string>;

/// Reads a numeric CSV. A first line containing any non-numeric cell is taken
/// as a header. Errors name the 1-based file line and 1-based column.
Dataset load_csv(const std::filesystem::path& path, const TargetColumn& target = {});
Dataset parse_csv(std::string_view text, const TargetColumn& target = {});

/// Writes features followed by the target as the last column, 17 significant
/// digits, so that load_csv reproduces the values bit-exactly.
void save_csv(const Dataset& ds, const std::filesystem::path& path);
std::string format_csv(const Dataset& ds);

struct DataSplit {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> unseen_indices;
};

/// Train size is floor(train_fraction * n + 0.5). Both index lists are
/// returned in increasing order.
DataSplit random_split(std::size_t n_instances, double train_fraction, std::uint64_t seed);
inline DataSplit random_split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    return random_split(ds.n_instances(), train_fraction, seed);
}

/// Rows of a dataset restricted to one side of a split.
struct Partition {
    Matrix features;
    std::vector<double> targets;

    std::size_t size() const { return targets.size(); }
};

Partition select(const Dataset& ds, std::span<const std::size_t> indices);

double rmse(std::span<const double> outputs, std::span<const double> targets);

struct Friedman1Spec {
    std::size_t n_instances = 200;
    std::size_t n_features = 10;
    double noise = 1.0;
    std::uint64_t seed = 0;
};

/// y = 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5 + noise * N(0, 1),
/// with every feature uniform on [0, 1]. Features beyond the fifth are
/// irrelevant to the target.
Dataset make_friedman1(const Friedman1Spec& spec);

/// Parses "friedman1:n=200,d=10,noise=1.0[,seed=7]".
Friedman1Spec parse_synthetic_spec(std::string_view text);

}  // namespace semstop
