#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "comfortopt/materials.hpp"
#include "comfortopt/optimizer.hpp"

using namespace comfortopt;
using Catch::Approx;

TEST_CASE("1-d quadratic interior minimum") {
    const ParamSpec spec{"x", 0.001, 1.0, 0.5, 0.0};
    const OptimizeResult r = optimize([](const std::vector<double>& x) { return (x[0] - 0.3) * (x[0] - 0.3); }, {spec});
    CHECK(r.stop == StopReason::Converged);
    CHECK(std::abs(r.best[0] - 0.3) < 1e-3);
}

TEST_CASE("monotone objective pins the lower bound exactly") {
    const ParamSpec spec{"x", 0.001, 1.0, 0.5, 0.0};
    const OptimizeResult r = optimize([](const std::vector<double>& x) { return x[0]; }, {spec});
    CHECK(r.best[0] == 0.001);
}

TEST_CASE("2-d test function matches a brute-force grid oracle") {
    auto f = [](const std::vector<double>& v) {
        const double x = v[0], y = v[1];
        return (x - 0.2) * (x - 0.2) + 2.0 * (y - 0.7) * (y - 0.7) + 0.3 * x * y;
    };
    const std::vector<ParamSpec> specs = {{"x", 0.001, 1.0, 0.5, 0.0}, {"y", 0.001, 1.0, 0.5, 0.0}};
    OptimizerConfig cfg;
    cfg.max_evaluations = 2000;
    const OptimizeResult r = optimize(f, specs, cfg);

    // Brute force at 1e-3 resolution over the box, independent of the
    // optimizer path.
    double best_x = 0.0, best_y = 0.0, best_f = 1e300;
    for (int i = 0;; ++i) {
        const double x = 0.001 + i * 1e-3;
        if (x > 1.0) break;
        for (int j = 0;; ++j) {
            const double y = 0.001 + j * 1e-3;
            if (y > 1.0) break;
            const double fy = f({x, y});
            if (fy < best_f) {
                best_f = fy;
                best_x = x;
                best_y = y;
            }
        }
    }
    CHECK(std::abs(r.best[0] - best_x) <= 1e-3 + 1e-9);
    CHECK(std::abs(r.best[1] - best_y) <= 1e-3 + 1e-9);
}

TEST_CASE("trace invariants hold on seeded random quadratics") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> curvature(0.2, 5.0);
    std::uniform_real_distribution<double> center(-0.3, 1.3);
    std::uniform_real_distribution<double> start(0.001, 1.0);

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dims = 1 + trial % 3;
        std::vector<double> a(dims), c(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            a[d] = curvature(rng);
            c[d] = center(rng);
        }
        std::vector<ParamSpec> specs;
        for (std::size_t d = 0; d < dims; ++d)
            specs.push_back({"p" + std::to_string(d), 0.001, 1.0, start(rng), 0.0});

        auto f = [&](const std::vector<double>& x) {
            double s = 0.0;
            for (std::size_t d = 0; d < x.size(); ++d) s += a[d] * (x[d] - c[d]) * (x[d] - c[d]);
            return s;
        };
        OptimizerConfig cfg;
        cfg.max_evaluations = 1000;
        const OptimizeResult r = optimize(f, specs, cfg);

        double best_so_far = 1e300;
        for (const TraceRecord& rec : r.trace.records) {
            for (std::size_t d = 0; d < dims; ++d) {
                CHECK(rec.params[d] >= 0.001);
                CHECK(rec.params[d] <= 1.0);
            }
            if (rec.accepted) {
                CHECK(rec.cost < best_so_far);
                best_so_far = rec.cost;
            }
            CHECK(rec.cost >= r.best_cost);
        }

        // Separable strictly convex quadratic: the box minimizer is the
        // clamped center, and the result lands within min_step per axis.
        for (std::size_t d = 0; d < dims; ++d) {
            const double truth = std::clamp(c[d], 0.001, 1.0);
            CHECK(std::abs(r.best[d] - truth) <= cfg.min_step + 1e-12);
        }
    }
}

TEST_CASE("optimization is deterministic") {
    auto f = [](const std::vector<double>& x) { return std::sin(7.0 * x[0]) + x[0] * x[0]; };
    const ParamSpec spec{"x", 0.001, 1.0, 0.7, 0.0};
    const OptimizeResult a = optimize(f, {spec});
    const OptimizeResult b = optimize(f, {spec});
    REQUIRE(a.trace.records.size() == b.trace.records.size());
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
        CHECK(a.trace.records[i].params == b.trace.records[i].params);
        CHECK(a.trace.records[i].cost == b.trace.records[i].cost);
        CHECK(a.trace.records[i].move == b.trace.records[i].move);
        CHECK(a.trace.records[i].accepted == b.trace.records[i].accepted);
    }
}

TEST_CASE("memoization never re-invokes the cost on a visited vector") {
    int calls = 0;
    auto f = [&calls](const std::vector<double>& x) {
        ++calls;
        return (x[0] - 0.4) * (x[0] - 0.4);
    };
    const ParamSpec spec{"x", 0.001, 1.0, 0.9, 0.0};
    const OptimizeResult r = optimize(f, {spec});
    CHECK(calls == static_cast<int>(r.trace.records.size()));
    CHECK(calls == r.evaluations);
}

TEST_CASE("budget exhaustion is flagged and returns the best seen") {
    OptimizerConfig cfg;
    cfg.max_evaluations = 3;
    const ParamSpec spec{"x", 0.001, 1.0, 0.9, 0.0};
    const OptimizeResult r = optimize([](const std::vector<double>& x) { return x[0] * x[0]; }, {spec}, cfg);
    CHECK(r.stop == StopReason::BudgetExhausted);
    CHECK(r.evaluations == 3);
    double best = 1e300;
    for (const TraceRecord& rec : r.trace.records) best = std::min(best, rec.cost);
    CHECK(r.best_cost == best);
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(optimize([](const std::vector<double>&) { return 0.0; }, {}), Error);

    const ParamSpec spec{"x", 0.001, 1.0, 0.5, 0.0};
    CHECK_THROWS_AS(optimize([](const std::vector<double>&) { return std::nan(""); }, {spec}), Error);

    ParamSpec bad = spec;
    bad.initial = 2.0;
    CHECK_THROWS_AS(optimize([](const std::vector<double>&) { return 0.0; }, {bad}), Error);

    OptimizerConfig cfg;
    cfg.step_reduction = 1.5;
    CHECK_THROWS_AS(optimize([](const std::vector<double>&) { return 0.0; }, {spec}, cfg), Error);
}

TEST_CASE("trace serializes with parameter names") {
    const ParamSpec spec{"concrete_block", 0.001, 1.0, 0.5, 0.0};
    const OptimizeResult r =
        optimize([](const std::vector<double>& x) { return (x[0] - 0.3) * (x[0] - 0.3); }, {spec});
    std::ostringstream csv;
    r.trace.write_csv(csv, {"concrete_block"});
    CHECK(csv.str().rfind("eval,concrete_block,cost,move,accepted\n", 0) == 0);
    CHECK(csv.str().find("initial") != std::string::npos);
    CHECK(csv.str().find("exploratory") != std::string::npos);
}

TEST_CASE("map_params writes only the active layers") {
    const WallAssembly wall = baseline_reunion_wall();

    const WallAssembly same = map_params(wall, 2, {0.2032});
    CHECK(same.layers[2].thickness_m == 0.2032);

    const WallAssembly wood = map_params(wall, 0, {0.100});
    CHECK(wood.layers[0].thickness_m == 0.100);
    CHECK(wood.layers[1].thickness_m == wall.layers[1].thickness_m);

    const WallAssembly wool = map_params(wall, 1, {0.100});
    CHECK(wool.layers[1].thickness_m == 0.100);

    const WallAssembly both = map_params(wall, {0, 2}, {0.05, 0.3});
    CHECK(both.layers[0].thickness_m == 0.05);
    CHECK(both.layers[2].thickness_m == 0.3);

    CHECK_THROWS_AS(map_params(wall, 2, {1.5}), Error);
    CHECK_THROWS_AS(map_params(wall, {0, 1}, {0.1}), Error);
}
