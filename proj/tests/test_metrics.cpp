#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "somlc/metrics.hpp"
#include "somlc/rng.hpp"

using namespace somlc;

namespace {

CategoryStats make_stats(std::string name, std::vector<Vector> bmus, double d_max) {
    CategoryStats st;
    st.name = std::move(name);
    st.bmu_vectors = std::move(bmus);
    st.d_max = d_max;
    return st;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("category_stats collects BMU vectors and d_max") {
    // 1x3 grid with pinned weights so BMU assignment is obvious
    SomMap map;
    map.config.rows = 1;
    map.config.cols = 3;
    map.config.dim = 1;
    map.weights = {{0.0}, {1.0}, {2.0}};

    SECTION("exemplar sitting exactly on its BMU gives d_max 0") {
        auto stats = category_stats(map, {{"x", "A", {1.0}}});
        REQUIRE(stats.at("A").bmu_vectors == std::vector<Vector>{{1.0}});
        CHECK(stats.at("A").d_max == 0.0);
    }
    SECTION("d_max is the maximum over exemplars") {
        auto stats = category_stats(map, {{"x", "A", {0.3}}, {"y", "A", {1.7}}});
        CHECK(stats.at("A").d_max == Catch::Approx(0.3));
        CHECK(stats.at("A").bmu_vectors.size() == 2);
    }
    SECTION("two categories sharing one BMU both record its vector") {
        auto stats = category_stats(map, {{"x", "A", {0.9}}, {"y", "B", {1.1}}});
        CHECK(stats.at("A").bmu_vectors == std::vector<Vector>{{1.0}});
        CHECK(stats.at("B").bmu_vectors == std::vector<Vector>{{1.0}});
    }
    SECTION("duplicate BMU vectors are stored once per category") {
        auto stats = category_stats(map, {{"x", "A", {0.9}}, {"y", "A", {1.1}}});
        CHECK(stats.at("A").bmu_vectors == std::vector<Vector>{{1.0}});
    }
    SECTION("probes are rejected") {
        CHECK_THROWS_AS(category_stats(map, {{"p", "", {1.0}}}), ConfigError);
    }
}

TEST_CASE("dist_to_category") {
    CHECK(dist_to_category({3.0}, make_stats("C", {{0.0}, {10.0}}, 1.0)) == Catch::Approx(3.0));
    CHECK(dist_to_category({4.0, 5.0}, make_stats("C", {{1.0, 1.0}}, 1.0)) == Catch::Approx(5.0));
    CHECK(dist_to_category({10.0}, make_stats("C", {{10.0}}, 1.0)) == 0.0);
    CHECK_THROWS_AS(dist_to_category({1.0}, make_stats("C", {}, 0.0)), EvalError);
    CHECK_THROWS_AS(dist_to_category({1.0, 2.0}, make_stats("C", {{1.0}}, 1.0)), ConfigError);
}

TEST_CASE("relative_distance with its degenerate rule") {
    auto st = make_stats("C", {{0.0}}, 4.0);
    CHECK(relative_distance({2.0}, st) == Catch::Approx(0.5));
    CHECK(relative_distance({0.0}, st) == 0.0);

    auto precise = make_stats("C", {{1.0}}, 0.0);
    CHECK(relative_distance({1.0}, precise) == 0.0);
    CHECK(relative_distance({1.1}, precise) == kInf);
}

TEST_CASE("generalization_degree evaluates e^{-rd}") {
    auto st = make_stats("C", {{0.0}}, 1.0);
    CHECK(generalization_degree({0.0}, st) == 1.0);
    CHECK(generalization_degree({1.0}, st) == Catch::Approx(0.36787944117144233).epsilon(1e-12));
    CHECK(generalization_degree({0.5}, st) == Catch::Approx(0.6065306597126334).epsilon(1e-12));

    auto precise = make_stats("C", {{1.0}}, 0.0);
    CHECK(generalization_degree({2.0}, precise) == 0.0);
}

TEST_CASE("bmu_set_distance") {
    auto a = make_stats("A", {{0.0}}, 1.0);
    auto b = make_stats("B", {{3.0}}, 1.0);
    CHECK(bmu_set_distance(a, a) == 0.0);
    CHECK(bmu_set_distance(a, b) == Catch::Approx(3.0));
    auto a2 = make_stats("A", {{0.0}, {5.0}}, 1.0);
    CHECK(bmu_set_distance(a2, b) == Catch::Approx(3.0));  // max of 3 and 2
    CHECK_THROWS_AS(bmu_set_distance(make_stats("E", {}, 0.0), b), EvalError);
}

TEST_CASE("bmu_set_distance equals a brute-force max-min over vector pairs") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        auto draw_set = [&](std::size_t n) {
            std::vector<Vector> vs;
            for (std::size_t i = 0; i < n; ++i) {
                vs.push_back({rng.next_double(), rng.next_double()});
            }
            return vs;
        };
        auto src = make_stats("S", draw_set(1 + rng.next_below(5)), 1.0);
        auto dst = make_stats("D", draw_set(1 + rng.next_below(5)), 1.0);

        double expected = 0.0;
        for (const Vector& v : src.bmu_vectors) {
            double best = kInf;
            for (const Vector& w : dst.bmu_vectors) {
                best = std::min(best, euclidean_distance(v, w));
            }
            expected = std::max(expected, best);
        }
        CHECK(bmu_set_distance(src, dst) == Catch::Approx(expected).margin(1e-15));
    }
}

TEST_CASE("plausibility") {
    auto a = make_stats("A", {{0.0}}, 1.0);
    CHECK(plausibility(a, a) == 1.0);

    auto b = make_stats("B", {{2.0}}, 4.0);
    CHECK(plausibility(a, b) == Catch::Approx(0.6065306597126334).epsilon(1e-12));

    auto precise = make_stats("P", {{5.0}}, 0.0);
    CHECK(plausibility(a, precise) == 0.0);  // degenerate rule
    CHECK(plausibility(precise, precise) == 1.0);
}

TEST_CASE("relative_distance is monotone in numerator and denominator") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const double d1 = rng.next_double() * 5.0;
        const double d2 = d1 + rng.next_double();
        const double m1 = 0.1 + rng.next_double();
        const double m2 = m1 + rng.next_double();
        CHECK(relative_distance_from(d1, m1) <= relative_distance_from(d2, m1));
        CHECK(relative_distance_from(d1, m2) <= relative_distance_from(d1, m1));
    }
}

TEST_CASE("every training exemplar has rd <= 1 and gd >= 1/e") {
    SplitMix64 rng(21);
    std::vector<Stimulus> data;
    for (int i = 0; i < 12; ++i) {
        data.push_back({"s" + std::to_string(i), i % 2 ? "A" : "B",
                        {rng.next_double(), rng.next_double()}});
    }
    SomConfig c;
    c.rows = 4;
    c.cols = 4;
    c.dim = 2;
    c.epochs = 5;
    c.seed = 3;
    SomMap map = init_map(c, data_range_of(data));
    train(map, data);
    auto stats = category_stats(map, data);
    for (const Stimulus& s : data) {
        const double rd = relative_distance(s.vector, stats.at(s.category));
        REQUIRE(rd <= 1.0 + 1e-12);
        REQUIRE(generalization_degree(s.vector, stats.at(s.category)) >=
                0.36787944117144233 - 1e-12);
    }
}
