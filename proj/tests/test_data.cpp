#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>

#include "semstop/data.hpp"
#include "semstop/rng.hpp"

using namespace semstop;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("semstop_test_" + name);
}

}  // namespace

TEST_CASE("parse_csv takes the last column as target") {
    const auto ds = parse_csv("1,2,3\n4,5,6\n7,8,9\n");
    CHECK(ds.n_instances() == 3);
    CHECK(ds.n_features() == 2);
    CHECK(ds.targets == std::vector<double>{3, 6, 9});
    CHECK(ds.features(1, 0) == 4);
    CHECK(ds.features(2, 1) == 8);
    CHECK(ds.feature_names.empty());
}

TEST_CASE("parse_csv detects a header and selects the target by name or index") {
    const std::string text = "a,b,y\n1,2e1,3\n-4,+5,6.5\n";
    const auto by_default = parse_csv(text);
    CHECK(by_default.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(by_default.features(0, 1) == 20.0);

    const auto by_name = parse_csv(text, std::string("a"));
    CHECK(by_name.targets == std::vector<double>{1, -4});
    CHECK(by_name.feature_names == std::vector<std::string>{"b", "y"});

    const auto by_index = parse_csv(text, std::size_t{1});
    CHECK(by_index.targets == std::vector<double>{20, 5});
}

TEST_CASE("parse_csv reports the position of a non-numeric cell") {
    const std::string text = "1,2,3\n1,2,3\n1,2,3\n1,2,3\n1,abc,3\n";
    try {
        parse_csv(text);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("row 5, column 2") != std::string::npos);
    }
}

TEST_CASE("parse_csv rejects short, ragged, and non-finite input") {
    CHECK_THROWS_AS(parse_csv("1,2\n"), DataError);
    CHECK_THROWS_AS(parse_csv("x,y\n1,2\n"), DataError);
    CHECK_THROWS_AS(parse_csv("1,2\n3\n"), DataError);
    CHECK_THROWS_AS(parse_csv("1,2\nnan,3\n"), DataError);
    CHECK_THROWS_AS(parse_csv("1,2\ninf,3\n"), DataError);
    CHECK_THROWS_AS(parse_csv("a,b\n1,2\n3,4\n", std::string("zz")), DataError);
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), DataError);
}

TEST_CASE("friedman1 file reloads elementwise") {
    const auto ds = make_friedman1({200, 10, 1.0, 11});
    CHECK(ds.n_instances() == 200);
    CHECK(ds.n_features() == 10);
    // The noise-free part of the target follows the generating formula.
    const auto noiseless = make_friedman1({200, 10, 0.0, 11});
    const double x1 = noiseless.features(3, 0), x2 = noiseless.features(3, 1), x3 = noiseless.features(3, 2),
                 x4 = noiseless.features(3, 3), x5 = noiseless.features(3, 4);
    CHECK(noiseless.targets[3] == doctest::Approx(10 * std::sin(M_PI * x1 * x2) + 20 * (x3 - 0.5) * (x3 - 0.5) +
                                                  10 * x4 + 5 * x5));

    const auto path = temp_file("friedman1.csv");
    save_csv(ds, path);
    const auto back = load_csv(path);
    CHECK(back.features == ds.features);
    CHECK(back.targets == ds.targets);
    std::filesystem::remove(path);
}

TEST_CASE("save and load round-trip arbitrary doubles bit-exactly") {
    Rng rng(5);
    Dataset ds;
    ds.features = Matrix(50, 3);
    ds.targets.resize(50);
    for (std::size_t r = 0; r < 50; ++r) {
        for (std::size_t c = 0; c < 3; ++c) ds.features(r, c) = rng.normal() * std::pow(10.0, rng.uniform(-300, 300));
        ds.targets[r] = rng.normal() / 3.0;
    }
    ds.feature_names = {"f0", "f1", "f2"};
    const auto back = parse_csv(format_csv(ds));
    CHECK(back.features == ds.features);
    CHECK(back.targets == ds.targets);
    CHECK(back.feature_names == ds.feature_names);
}

TEST_CASE("random_split sizes, disjointness, and determinism") {
    const auto s = random_split(10, 0.7, 42);
    CHECK(s.train_indices.size() == 7);
    CHECK(s.unseen_indices.size() == 3);
    std::set<std::size_t> all(s.train_indices.begin(), s.train_indices.end());
    all.insert(s.unseen_indices.begin(), s.unseen_indices.end());
    CHECK(all.size() == 10);

    const auto again = random_split(10, 0.7, 42);
    CHECK(again.train_indices == s.train_indices);
    CHECK(again.unseen_indices == s.unseen_indices);

    const auto large = random_split(131, 0.7, 1);
    CHECK(large.train_indices.size() == 92);
    CHECK(large.unseen_indices.size() == 39);
}

TEST_CASE("random_split covers every index exactly once") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t n = 2 + seed * 7;
        const auto s = random_split(n, 0.7, seed);
        std::vector<std::size_t> all = s.train_indices;
        all.insert(all.end(), s.unseen_indices.begin(), s.unseen_indices.end());
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> expected(n);
        std::iota(expected.begin(), expected.end(), std::size_t{0});
        CHECK(all == expected);
        CHECK(s.train_indices.size() == static_cast<std::size_t>(std::floor(0.7 * static_cast<double>(n) + 0.5)));
    }
}

TEST_CASE("random_split rejects degenerate fractions") {
    CHECK_THROWS_AS(random_split(10, 0.01, 1), DataError);
    CHECK_THROWS_AS(random_split(10, 0.99, 1), DataError);
    CHECK_THROWS_AS(random_split(10, 0.0, 1), DataError);
    CHECK_THROWS_AS(random_split(10, 1.0, 1), DataError);
}

TEST_CASE("rmse examples and properties") {
    const std::vector<double> t{3, 4};
    CHECK(rmse(t, t) == 0.0);
    // Hand computation: sqrt((9 + 16) / 2).
    CHECK(rmse(std::vector<double>{0, 0}, t) == doctest::Approx(3.5355339059327378).epsilon(1e-15));
    const std::vector<double> shifted{3 - 2.5, 4 - 2.5};
    CHECK(rmse(shifted, t) == doctest::Approx(2.5));
    CHECK_THROWS_AS(rmse(std::vector<double>{1}, t), std::invalid_argument);

    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(30), b(30);
        for (auto& v : a) v = rng.normal();
        for (auto& v : b) v = rng.normal();
        CHECK(rmse(a, b) == doctest::Approx(rmse(b, a)).epsilon(1e-15));
        std::vector<std::size_t> perm(30);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = 29; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
        std::vector<double> pa(30), pb(30);
        for (std::size_t i = 0; i < 30; ++i) {
            pa[i] = a[perm[i]];
            pb[i] = b[perm[i]];
        }
        CHECK(rmse(pa, pb) == doctest::Approx(rmse(a, b)).epsilon(1e-14));
    }
}

TEST_CASE("synthetic spec parsing") {
    const auto s = parse_synthetic_spec("friedman1:n=150,d=7,noise=0.5,seed=3");
    CHECK(s.n_instances == 150);
    CHECK(s.n_features == 7);
    CHECK(s.noise == 0.5);
    CHECK(s.seed == 3);
    CHECK(parse_synthetic_spec("friedman1").n_instances == 200);
    CHECK_THROWS_AS(parse_synthetic_spec("friedman2:n=3"), DataError);
    CHECK_THROWS_AS(parse_synthetic_spec("friedman1:q=3"), DataError);
    CHECK_THROWS_AS(make_friedman1({100, 4, 1.0, 0}), DataError);
}
