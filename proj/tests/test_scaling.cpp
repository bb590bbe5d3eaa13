#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "scaling.hpp"

using namespace cchn;

TEST_CASE("large deviation rate and tail bound") {
    CHECK(chernoff_rate(1.0) == doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-15));
    CHECK(chernoff_rate(0.0) == 0.0);
    CHECK(chernoff_rate(0.5) > 0.0);

    TailBound tb = chernoff_bound(10.0, 1.0);
    CHECK(tb.bound ==
          doctest::Approx(std::exp(-10.0 * (2.0 * std::log(2.0) - 1.0))).epsilon(1e-14));
    CHECK(std::fabs(tb.bound - 0.02099) < 1e-4);
    CHECK(chernoff_bound(5.0, 1e-12).bound > 0.999999);
    // Tail shrinks in both the mean and the overshoot.
    CHECK(chernoff_bound(20.0, 1.0).bound < tb.bound);
    CHECK(chernoff_bound(10.0, 2.0).bound < tb.bound);
    CHECK_THROWS_AS(chernoff_bound(10.0, 0.0), std::domain_error);
}

TEST_CASE("sampled tails stay under the analytic bound") {
    TailEstimate te = monte_carlo_tail(200, 0.1, 1.0, 20000, 7);
    CHECK(te.mu == doctest::Approx(20.0).epsilon(1e-14));
    double sigma = std::sqrt(te.analytic / te.trials);
    CHECK(te.empirical <= te.analytic + 3.0 * sigma);
    CHECK(monte_carlo_tail(100, 0.5, 100.0, 10000, 3).empirical == 0.0);
    CHECK_THROWS_AS(monte_carlo_tail(200, 0.1, 1.0, 100, 7), std::domain_error);
}

TEST_CASE("destination load bound") {
    ScalingParams eq{1e4, 0.8, 0.8, 1.0, 1, 1, 1};
    CHECK(dest_load_bound(eq) == 0.0);
    ScalingParams p48{1e4, 0.8, 0.4, 1.0, 1, 1, 1};
    double expect = 2.0 * std::min(1e4, 2e4 * (1.0 - std::pow(10.0, -1.6))) /
                    std::pow(10.0, 1.6);
    CHECK(dest_load_bound(p48) == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(validate(ScalingParams{1e4, 0.4, 0.8, 1.0, 1, 1, 1}),
                    std::domain_error);
}

TEST_CASE("subsquare flow bound and regime continuity") {
    ScalingParams pc{1e6, 0.8, 0.4, 2.0, 1, 1, 1};
    SubsquareBound sb = subsquare_flow_bound(pc);
    CHECK(sb.regime == ScalingRegime::SparseBs);
    double n = pc.n;
    double mixed_cx =
        std::min(2.0 * std::pow(n, 1.5 - 0.8) - 2.0 * std::pow(n, 1.0 + 0.4 - 1.2),
                 2.0 * std::pow(n, 0.6));
    CHECK(sb.c_x == doctest::Approx(mixed_cx).epsilon(1e-9));
    CHECK(sb.c_y == 1.0);
    CHECK(sb.bound == doctest::Approx(sb.c_x + sb.dest_load * sb.c_y).epsilon(1e-12));
    ThroughputClass tc = throughput_class(pc);
    CHECK(std::fabs(tc.backhaul - 2.0 * std::pow(n, 0.4 - 1.0)) < 1e-18);
}

TEST_CASE("throughput classes across regimes") {
    ScalingParams pe{1e6, 0.5, 0.5, 1.0, 1, 1, 1};
    ThroughputClass te2 = throughput_class(pe);
    CHECK(te2.regime == ScalingRegime::AllBs);
    CHECK(te2.exponent == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(!te2.w_dependent);

    ThroughputClass big = throughput_class(ScalingParams{1e6, 0.8, 0.6, 1e4, 1, 1, 1});
    CHECK(big.binding == "access");
    CHECK(big.exponent == doctest::Approx(-0.2).epsilon(1e-15));

    ThroughputClass small = throughput_class(ScalingParams{1e6, 0.8, 0.2, 1.0, 1, 1, 1});
    CHECK(small.binding == "backhaul");
    CHECK(small.w_dependent);
    CHECK(small.exponent == doctest::Approx(-0.8).epsilon(1e-15));
}

TEST_CASE("row-first grid routing") {
    auto path = grid_route({0, 0}, {3, 2}, 4, 4);
    REQUIRE(path.size() == 6);
    CHECK((path[0] == GridCoord{0, 0}));
    CHECK((path[1] == GridCoord{0, 1}));
    CHECK((path[2] == GridCoord{0, 2}));
    CHECK((path[3] == GridCoord{1, 2}));
    CHECK((path[5] == GridCoord{3, 2}));
    CHECK(grid_route({2, 3}, {2, 3}, 4, 4).size() == 1);
    CHECK_THROWS_AS(grid_route({4, 0}, {0, 0}, 4, 4), std::domain_error);
}

TEST_CASE("load replays respect the bounds") {
    ScalingParams p48{1e4, 0.8, 0.4, 1.0, 1, 1, 1};
    DestLoadReplay dr = dest_load_replay(p48, 40, 5);
    CHECK(dr.ok_fraction >= 0.99);
    CHECK(dr.max_load > 0.0);
    LoadReplay lr = grid_load_replay(p48, 5, 9);
    CHECK(lr.grid == 39);
    CHECK(lr.bs_count == 39);
    CHECK(lr.ok_fraction >= 0.99);
    CHECK(lr.max_load > 0.0);
    CHECK(lr.max_load <= lr.bound);
}

TEST_CASE("scaling evaluation and csv") {
    ScalingParams p48{1e4, 0.8, 0.4, 1.0, 1, 1, 1};
    ScalingPoint pt = evaluate_scaling(p48, 3, 11);
    CHECK(pt.has_mc);
    std::string csv = scaling_csv({pt});
    CHECK(csv.find("sparse-bs") != std::string::npos);
    CHECK(csv.find('\n') != std::string::npos);

    // Identical parameters and seed reproduce the csv byte for byte.
    ScalingPoint again = evaluate_scaling(p48, 3, 11);
    CHECK(scaling_csv({again}) == csv);
}
