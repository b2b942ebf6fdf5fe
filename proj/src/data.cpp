#include "semstop/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "semstop/rng.hpp"

namespace semstop {

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
    Matrix out(rows.size(), cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        const auto src = column(c);
        auto dst = out.column(c);
        for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
    }
    return out;
}

void validate(const Dataset& ds) {
    if (ds.n_instances() < 2) throw DataError("dataset needs at least 2 instances");
    if (ds.n_features() < 1) throw DataError("dataset needs at least 1 feature");
    if (ds.features.rows() != ds.targets.size())
        throw DataError("feature rows and target length differ");
    for (double t : ds.targets)
        if (!std::isfinite(t)) throw DataError("non-finite target value");
    for (std::size_t c = 0; c < ds.n_features(); ++c)
        for (double v : ds.features.column(c))
            if (!std::isfinite(v)) throw DataError("non-finite feature value");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::optional<double> parse_number(std::string_view cell) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    if (cell.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
    return value;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

std::string cell_position(std::size_t line, std::size_t col) {
    return "row " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Dataset parse_csv(std::string_view text, const TargetColumn& target) {
    struct Line {
        std::size_t number;
        std::string_view content;
    };
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++number;
        const auto content = trim(text.substr(pos, end - pos));
        if (!content.empty()) lines.push_back({number, content});
        pos = end + 1;
    }
    if (lines.empty()) throw DataError("CSV is empty");

    std::vector<std::string> header;
    {
        const auto first = split_cells(lines.front().content);
        const bool numeric = std::all_of(first.begin(), first.end(),
                                         [](auto c) { return parse_number(c).has_value(); });
        if (!numeric) {
            for (auto c : first) header.emplace_back(trim(c));
            lines.erase(lines.begin());
        }
    }
    if (lines.size() < 2)
        throw DataError("CSV needs at least 2 data rows, found " + std::to_string(lines.size()));

    const std::size_t n_cols = header.empty() ? split_cells(lines.front().content).size()
                                              : header.size();
    if (n_cols < 2) throw DataError("CSV needs a target column and at least one feature");

    std::size_t target_col = n_cols - 1;
    if (const auto* idx = std::get_if<std::size_t>(&target)) {
        if (*idx >= n_cols)
            throw DataError("target column " + std::to_string(*idx) + " out of range");
        target_col = *idx;
    } else if (const auto* name = std::get_if<std::string>(&target)) {
        const auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) throw DataError("target column '" + *name + "' not in header");
        target_col = static_cast<std::size_t>(it - header.begin());
    }

    Dataset ds;
    ds.features = Matrix(lines.size(), n_cols - 1);
    ds.targets.resize(lines.size());
    for (std::size_t r = 0; r < lines.size(); ++r) {
        const auto cells = split_cells(lines[r].content);
        if (cells.size() != n_cols)
            throw DataError("row " + std::to_string(lines[r].number) + " has " +
                            std::to_string(cells.size()) + " columns, expected " +
                            std::to_string(n_cols));
        std::size_t f = 0;
        for (std::size_t c = 0; c < n_cols; ++c) {
            const auto value = parse_number(cells[c]);
            if (!value)
                throw DataError("non-numeric cell '" + std::string(trim(cells[c])) + "' at " +
                                cell_position(lines[r].number, c + 1));
            if (!std::isfinite(*value))
                throw DataError("non-finite cell at " + cell_position(lines[r].number, c + 1));
            if (c == target_col)
                ds.targets[r] = *value;
            else
                ds.features(r, f++) = *value;
        }
    }
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != target_col) ds.feature_names.push_back(header[c]);
    validate(ds);
    return ds;
}

Dataset load_csv(const std::filesystem::path& path, const TargetColumn& target) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open CSV file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str(), target);
}

namespace {

void append_number(std::string& out, double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out.append(buf, ptr);
}

}  // namespace

std::string format_csv(const Dataset& ds) {
    std::string out;
    if (!ds.feature_names.empty()) {
        for (const auto& name : ds.feature_names) out += name + ",";
        out += "target\n";
    }
    for (std::size_t r = 0; r < ds.n_instances(); ++r) {
        for (std::size_t c = 0; c < ds.n_features(); ++c) {
            append_number(out, ds.features(r, c));
            out += ',';
        }
        append_number(out, ds.targets[r]);
        out += '\n';
    }
    return out;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write CSV file '" + path.string() + "'");
    out << format_csv(ds);
}

DataSplit random_split(std::size_t n_instances, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw DataError("train fraction must lie in (0, 1)");
    const auto n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(n_instances) + 0.5));
    if (n_train < 1 || n_train >= n_instances)
        throw DataError("train fraction " + std::to_string(train_fraction) + " leaves an empty side for " +
                        std::to_string(n_instances) + " instances");

    std::vector<std::size_t> order(n_instances);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n_instances - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

    DataSplit split;
    split.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.unseen_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.unseen_indices.begin(), split.unseen_indices.end());
    return split;
}

Partition select(const Dataset& ds, std::span<const std::size_t> indices) {
    Partition p;
    p.features = ds.features.select_rows(indices);
    p.targets.reserve(indices.size());
    for (auto i : indices) p.targets.push_back(ds.targets.at(i));
    return p;
}

double rmse(std::span<const double> outputs, std::span<const double> targets) {
    if (outputs.size() != targets.size())
        throw std::invalid_argument("rmse: length mismatch");
    if (outputs.empty()) throw std::invalid_argument("rmse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const double d = outputs[i] - targets[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(outputs.size()));
}

Dataset make_friedman1(const Friedman1Spec& spec) {
    if (spec.n_features < 5) throw DataError("friedman1 needs at least 5 features");
    if (spec.n_instances < 2) throw DataError("friedman1 needs at least 2 instances");
    Rng rng(spec.seed);
    Dataset ds;
    ds.features = Matrix(spec.n_instances, spec.n_features);
    ds.targets.resize(spec.n_instances);
    for (std::size_t r = 0; r < spec.n_instances; ++r) {
        for (std::size_t c = 0; c < spec.n_features; ++c) ds.features(r, c) = rng.uniform01();
        const auto x = [&](std::size_t k) { return ds.features(r, k - 1); };
        ds.targets[r] = 10.0 * std::sin(std::numbers::pi * x(1) * x(2)) +
                        20.0 * (x(3) - 0.5) * (x(3) - 0.5) + 10.0 * x(4) + 5.0 * x(5) +
                        spec.noise * rng.normal();
    }
    return ds;
}

Friedman1Spec parse_synthetic_spec(std::string_view text) {
    constexpr std::string_view prefix = "friedman1";
    if (text.substr(0, prefix.size()) != prefix)
        throw DataError("unknown synthetic dataset '" + std::string(text) + "'");
    Friedman1Spec spec;
    text.remove_prefix(prefix.size());
    if (text.empty()) return spec;
    if (text.front() != ':') throw DataError("expected ':' after synthetic dataset name");
    text.remove_prefix(1);
    for (auto item : split_cells(text)) {
        item = trim(item);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw DataError("malformed synthetic parameter '" + std::string(item) + "'");
        const auto key = item.substr(0, eq);
        const auto value = parse_number(item.substr(eq + 1));
        if (!value) throw DataError("non-numeric value for '" + std::string(key) + "'");
        if (key == "n")
            spec.n_instances = static_cast<std::size_t>(*value);
        else if (key == "d")
            spec.n_features = static_cast<std::size_t>(*value);
        else if (key == "noise")
            spec.noise = *value;
        else if (key == "seed")
            spec.seed = static_cast<std::uint64_t>(*value);
        else
            throw DataError("unknown synthetic parameter '" + std::string(key) + "'");
    }
    return spec;
}

}  // namespace semstop
