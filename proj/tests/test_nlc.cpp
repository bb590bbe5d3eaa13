#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "lp.hpp"
#include "nlc.hpp"

using namespace cchn;
using cchn_tests::micro_scenario;
using cchn_tests::oracle_independent;
using cchn_tests::random_scenario;

namespace {

// Closed form for the micro scenario at theta = 1: the relay pair must carry
// D over the in and out links, the CR link forwards D plus the surplus.
double micro_optimum(double volume, double T, double c_pcr, double c_cr) {
    return (1.0 - 2.0 * volume / (T * c_pcr)) * c_cr - volume / T;
}

// Exhaustive schedule search on the micro instance: MIS airtime shares in
// steps of 1/60 of the horizon, best feasible CR surplus.
double discretized_micro_oracle(const NlcInstance& inst) {
    const int steps = 60;
    double T = inst.control.T;
    double D = inst.session_at(0).volume_bits;
    int e_in = -1, e_out = -1, e_cr = -1;
    for (int e = 0; e < static_cast<int>(inst.links.size()); ++e) {
        const Link& lk = inst.links[static_cast<size_t>(e)];
        if (lk.kind == LinkKind::PuRelatedIn) e_in = e;
        if (lk.kind == LinkKind::PuRelatedOut) e_out = e;
        if (lk.kind == LinkKind::Cr && lk.rx == inst.sc.base_station()) e_cr = e;
    }
    REQUIRE(e_in >= 0);
    REQUIRE(e_out >= 0);
    REQUIRE(e_cr >= 0);
    double c_pcr = inst.links[static_cast<size_t>(e_in)].capacity_bps;
    double c_cr = inst.links[static_cast<size_t>(e_cr)].capacity_bps;
    int Q = static_cast<int>(inst.mis.size());
    REQUIRE(Q == 4);
    std::vector<int> in_q(Q), out_q(Q), cr_q(Q);
    for (int q = 0; q < Q; ++q) {
        in_q[q] = inst.mis.set_contains(q, inst.graph.link_vertex.at(e_in));
        out_q[q] = inst.mis.set_contains(q, inst.graph.link_vertex.at(e_out));
        cr_q[q] = inst.mis.set_contains(q, inst.graph.link_vertex.at(e_cr));
    }
    double best = 0.0;
    std::vector<int> k(Q);
    for (k[0] = 0; k[0] <= steps; ++k[0])
        for (k[1] = 0; k[0] + k[1] <= steps; ++k[1])
            for (k[2] = 0; k[0] + k[1] + k[2] <= steps; ++k[2])
                for (k[3] = 0; k[0] + k[1] + k[2] + k[3] <= steps; ++k[3]) {
                    double u_in = 0.0, u_out = 0.0, u_cr = 0.0;
                    for (int q = 0; q < Q; ++q) {
                        double share = static_cast<double>(k[q]) / steps;
                        if (in_q[q]) u_in += share;
                        if (out_q[q]) u_out += share;
                        if (cr_q[q]) u_cr += share;
                    }
                    if (u_in * c_pcr * T < D - 1e-6) continue;
                    if (u_out * c_pcr * T < D - 1e-6) continue;
                    if (u_cr * c_cr * T < D - 1e-6) continue;
                    best = std::max(best, u_cr * c_cr - D / T);
                }
    return best;
}

}  // namespace

TEST_CASE("micro instance structure and optimum") {
    Scenario sc = micro_scenario();
    auto inst = build_nlc_instance(sc, MisMode::Exact, 0, 1);
    CHECK(inst.control.from_bs_conflict);
    CHECK(inst.control.T == doctest::Approx(10.0));
    REQUIRE(inst.t.size() == 3);
    CHECK(inst.t[1] == 10.0);
    CHECK(inst.t[2] == 10.0);
    CHECK(inst.mis.size() == 4);
    CHECK(inst.num_sessions() == 1);

    auto res = solve_nlc(inst);
    CHECK(res.theta_space == 2);
    CHECK(res.lp_solved == 2);
    CHECK(res.best.theta == std::vector<uint8_t>{1});
    CHECK(res.best.objective_bps ==
          doctest::Approx(micro_optimum(5e6, 10.0, 3e6, 3e6)).epsilon(1e-9));
    REQUIRE(res.best.completion_s[0].has_value());
    CHECK(*res.best.completion_s[0] == doctest::Approx(10.0));
    CHECK(verify_nlc_solution(inst, res.best.theta, res.best, 1e-6).ok);

    SUBCASE("branch and bound matches") {
        NlcOptions bo;
        bo.branch_and_bound = true;
        auto bres = solve_nlc(inst, bo);
        CHECK(bres.best.objective_bps == doctest::Approx(res.best.objective_bps));
        CHECK(bres.best.theta == res.best.theta);
    }
    SUBCASE("objective matches the discretized schedule oracle") {
        double oracle = discretized_micro_oracle(inst);
        CHECK(std::fabs(res.best.objective_bps - oracle) <=
              0.02 * std::max(1.0, oracle));
    }
    SUBCASE("objective is non-increasing in volume") {
        double prev = kInf;
        for (double d : {2e6, 4e6, 6e6}) {
            Scenario s = micro_scenario();
            s.sessions[0].volume_bits = d;
            auto i = build_nlc_instance(s, MisMode::Exact, 0, 1);
            auto r = solve_nlc(i);
            CHECK(r.best.objective_bps ==
                  doctest::Approx(micro_optimum(d, 10.0, 3e6, 3e6)).epsilon(1e-9));
            CHECK(r.best.objective_bps <= prev + 1e-6);
            prev = r.best.objective_bps;
        }
    }
}

TEST_CASE("overload flips the selection off") {
    // alpha = 2, D = 6e6: relaying cannot fit the half window.
    Scenario sc = micro_scenario();
    sc.alpha = 2.0;
    sc.sessions[0].volume_bits = 6e6;
    auto inst = build_nlc_instance(sc, MisMode::Exact, 0, 1);
    auto res = solve_nlc(inst);
    CHECK(res.best.theta == std::vector<uint8_t>{0});
    CHECK(res.best.objective_bps == 0.0);
    CHECK(!res.best.completion_s[0].has_value());

    // Same volume at alpha = 1 still cooperates.
    Scenario s1 = micro_scenario();
    s1.sessions[0].volume_bits = 6e6;
    auto r1 = solve_nlc(build_nlc_instance(s1, MisMode::Exact, 0, 1));
    CHECK(r1.best.theta == std::vector<uint8_t>{1});
    CHECK(r1.best.objective_bps == doctest::Approx(1.2e6).epsilon(1e-9));
}

TEST_CASE("protection holds exactly at theta zero") {
    Scenario sc = micro_scenario();
    auto inst = build_nlc_instance(sc, MisMode::Exact, 0, 1);
    auto md = build_nlc_lp(inst, {0});
    REQUIRE(!md.trivially_infeasible);
    auto sol = solve_lp(md.lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    auto dec = decode_nlc_solution(inst, md, {0}, sol);
    CHECK(dec.objective_bps == 0.0);
    int sv = inst.graph.session_vertex.at(1);
    for (int m = 0; m < md.M; ++m)
        for (int q = 0; q < md.Q; ++q)
            if (!inst.mis.in_session_partition(static_cast<size_t>(q), sv))
                CHECK(dec.lam[static_cast<size_t>(m * md.Q + q)] == 0.0);
    CHECK(verify_nlc_solution(inst, {0}, dec, 1e-6).ok);
}

TEST_CASE("protection holds exactly on random fixed selections") {
    std::mt19937_64 rng(407);
    int checked = 0;
    while (checked < 8) {
        Scenario sc = random_scenario(rng, 12, 2);
        auto inst = build_nlc_instance(sc, MisMode::Exact, 0, 1);
        int P = inst.num_sessions();
        for (int bits = 0; bits < (1 << P); ++bits) {
            std::vector<uint8_t> theta(P);
            for (int p = 0; p < P; ++p) theta[p] = (bits >> (P - 1 - p)) & 1;
            auto md = build_nlc_lp(inst, theta);
            if (md.trivially_infeasible) continue;
            auto sol = solve_lp(md.lp);
            if (sol.status != LpStatus::Optimal) continue;
            auto dec = decode_nlc_solution(inst, md, theta, sol);
            for (int p = 0; p < P; ++p) {
                if (theta[p]) continue;
                int sv = inst.graph.session_vertex.at(inst.session_at(p).id);
                for (int m = 0; m < md.M; ++m)
                    for (int q = 0; q < md.Q; ++q)
                        if (!inst.mis.in_session_partition(static_cast<size_t>(q), sv))
                            CHECK(dec.lam[static_cast<size_t>(m * md.Q + q)] == 0.0);
            }
            CHECK(verify_nlc_solution(inst, theta, dec, 1e-6).ok);
            ++checked;
        }
    }
}

TEST_CASE("all independent sets and MIS family give the same optimum") {
    std::mt19937_64 rng(808);
    for (int i = 0; i < 20; ++i) {
        Scenario sc = random_scenario(rng, 12, 2);
        auto inst = build_nlc_instance(sc, MisMode::Exact, 0, 1);
        auto mis_res = solve_nlc(inst);

        NlcInstance full = inst;
        full.mis.sets.clear();
        int n = static_cast<int>(inst.graph.size());
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            if (!oracle_independent(inst.graph, mask)) continue;
            std::vector<int> set;
            for (int v = 0; v < n; ++v)
                if (mask >> v & 1) set.push_back(v);
            full.mis.sets.push_back(std::move(set));
        }
        auto full_res = solve_nlc(full);
        CHECK(std::fabs(mis_res.best.objective_bps - full_res.best.objective_bps) <=
              1e-7 * (1.0 + std::fabs(full_res.best.objective_bps)));
    }
}

TEST_CASE("branch and bound equals exhaustive enumeration") {
    std::mt19937_64 rng(909);
    for (int i = 0; i < 10; ++i) {
        Scenario sc = random_scenario(rng, 12, 2);
        auto inst = build_nlc_instance(sc, MisMode::Exact, 0, 1);
        auto ex = solve_nlc(inst);
        NlcOptions bo;
        bo.branch_and_bound = true;
        auto bb = solve_nlc(inst, bo);
        CHECK(std::fabs(ex.best.objective_bps - bb.best.objective_bps) <=
              1e-7 * (1.0 + std::fabs(ex.best.objective_bps)));
    }
}

TEST_CASE("unreachable selected session is trivially infeasible") {
    Scenario sc;
    sc.nodes.push_back({0, NodeKind::BaseStation, {0, 0}, false, -1});
    sc.nodes.push_back({1, NodeKind::CrRouter, {200, 0}, true, -1});
    sc.nodes.push_back({2, NodeKind::PuSource, {5000, 5000}, false, 1});
    sc.nodes.push_back({3, NodeKind::PuDest, {5000, 5200}, false, 1});
    PrimarySession s;
    s.id = 1;
    s.path = {2, 3};
    s.length_s = 10.0;
    s.volume_bits = 5e6;
    sc.sessions.push_back(s);

    auto inst = build_nlc_instance(sc, MisMode::Exact, 0, 1);
    CHECK(!inst.control.from_bs_conflict);
    CHECK(inst.control.fallback_all_sessions);
    CHECK(inst.control.T == doctest::Approx(10.0));
    CHECK(build_nlc_lp(inst, {1}).trivially_infeasible);
    auto res = solve_nlc(inst);
    CHECK(res.lp_solved == 2);  // the infeasible model is counted, not solved
    CHECK(res.best.theta == std::vector<uint8_t>{0});
    // The far session blocks nothing: the CR link runs the whole horizon.
    CHECK(res.best.objective_bps == doctest::Approx(3e6).epsilon(1e-9));
}

TEST_CASE("no sessions falls back to a unit horizon") {
    Scenario sc;
    sc.nodes.push_back({0, NodeKind::BaseStation, {0, 0}, false, -1});
    sc.nodes.push_back({1, NodeKind::CrRouter, {200, 0}, true, -1});
    auto inst = build_nlc_instance(sc, MisMode::Exact, 0, 1);
    CHECK(inst.control.fallback_unit);
    CHECK(inst.control.T == 1.0);
    auto res = solve_nlc(inst);
    CHECK(res.best.objective_bps == doctest::Approx(3e6).epsilon(1e-9));
    CHECK(res.theta_space == 1);
}

TEST_CASE("selection guard") {
    std::mt19937_64 rng(66);
    Scenario sc = random_scenario(rng, 14, 2);
    if (sc.sessions.size() < 2) sc = random_scenario(rng, 14, 2);
    auto inst = build_nlc_instance(sc, MisMode::Exact, 0, 1);
    if (inst.num_sessions() >= 2) {
        NlcOptions opt;
        opt.theta_guard = 1;
        CHECK_THROWS_AS(solve_nlc(inst, opt), GuardError);
    }
}

TEST_CASE("completion times cover the volume at the reported breakpoint") {
    Scenario sc = micro_scenario();
    auto inst = build_nlc_instance(sc, MisMode::Exact, 0, 1);
    auto res = solve_nlc(inst);
    auto comp = completion_times(inst, res.best);
    REQUIRE(comp.size() == 1);
    REQUIRE(comp[0].has_value());
    CHECK(*comp[0] == *res.best.completion_s[0]);
}
