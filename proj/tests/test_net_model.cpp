#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "net_model.hpp"

using namespace cchn;
using cchn_tests::micro_scenario;

TEST_CASE("range identities") {
    double rt = range_from_threshold(2.0, 1e-6, 4.63, 3.0);
    double ri = range_from_threshold(2.0, 1.34e-7, 4.63, 3.0);
    CHECK(std::fabs(rt - 210.0) < 0.5);
    CHECK(std::fabs(ri - 410.0) < 1.0);
    // range_from_threshold inverts received_power.
    CHECK(received_power(2.0, 4.63, rt, 3.0) == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(received_power(2.0, 4.63, ri, 3.0) == doctest::Approx(1.34e-7).epsilon(1e-12));
    CHECK(received_power(2.0, 4.63, 100.0, 3.0) > received_power(2.0, 4.63, 200.0, 3.0));
    CHECK_THROWS_AS(received_power(2.0, 4.63, 0.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(range_from_threshold(2.0, 0.0, 4.63, 3.0), std::domain_error);

    RadioParams r;
    CHECK(transmission_range(r, EntityClass::Cr, EntityClass::Cr) ==
          doctest::Approx(rt).epsilon(1e-12));
    CHECK(interference_range(r, EntityClass::Pu, EntityClass::Cr) ==
          doctest::Approx(ri).epsilon(1e-12));
}

TEST_CASE("range predicates are boundary inclusive") {
    Scenario sc;
    double rt = transmission_range(sc.radio, EntityClass::Cr, EntityClass::Cr);
    double ri = interference_range(sc.radio, EntityClass::Cr, EntityClass::Cr);
    sc.nodes.push_back({0, NodeKind::BaseStation, {0, 0}, false, -1});
    sc.nodes.push_back({1, NodeKind::CrRouter, {rt, 0}, true, -1});
    sc.nodes.push_back({2, NodeKind::CrRouter, {rt + 0.01, 0}, false, -1});
    sc.nodes.push_back({3, NodeKind::CrRouter, {ri, 0}, false, -1});
    sc.nodes.push_back({4, NodeKind::CrRouter, {ri + 0.01, 0}, false, -1});
    CHECK(in_transmission_range(sc, sc.node(0), sc.node(1)));
    CHECK(!in_transmission_range(sc, sc.node(0), sc.node(2)));
    CHECK(interferes(sc, sc.node(0), sc.node(3)));
    CHECK(!interferes(sc, sc.node(0), sc.node(4)));
}

TEST_CASE("scenario accessors and validation") {
    Scenario sc = micro_scenario();
    validate(sc);
    CHECK(sc.base_station() == 0);
    CHECK(sc.edge_routers() == std::vector<int>{1});
    CHECK(sc.facilities() == std::vector<int>{0, 1});
    CHECK_THROWS_AS(sc.node(99), ValidationError);

    SUBCASE("alpha below one") {
        sc.alpha = 0.5;
        CHECK_THROWS_AS(validate(sc), ValidationError);
    }
    SUBCASE("rho outside the unit interval") {
        sc.rho = 1.5;
        CHECK_THROWS_AS(validate(sc), ValidationError);
    }
    SUBCASE("non-positive frame") {
        sc.llc_frame_s = 0.0;
        CHECK_THROWS_AS(validate(sc), ValidationError);
    }
    SUBCASE("duplicate node id") {
        sc.nodes.push_back({1, NodeKind::CrRouter, {50, 50}, false, -1});
        CHECK_THROWS_AS(validate(sc), ValidationError);
    }
    SUBCASE("second base station") {
        sc.nodes.push_back({9, NodeKind::BaseStation, {50, 50}, false, -1});
        CHECK_THROWS_AS(validate(sc), ValidationError);
    }
    SUBCASE("edge flag on a PU node") {
        sc.nodes[2].edge_router = true;
        CHECK_THROWS_AS(validate(sc), ValidationError);
    }
    SUBCASE("unknown path node") {
        sc.sessions[0].path = {2, 7};
        CHECK_THROWS_AS(validate(sc), ValidationError);
    }
    SUBCASE("non-positive volume") {
        sc.sessions[0].volume_bits = 0.0;
        CHECK_THROWS_AS(validate(sc), ValidationError);
    }
    SUBCASE("non-positive rate") {
        sc.rates.cr_bps = 0.0;
        CHECK_THROWS_AS(validate(sc), ValidationError);
    }
}

TEST_CASE("link derivation on the micro scenario") {
    Scenario sc = micro_scenario();
    auto links = derive_links(sc);
    // CR pairs both ways (d = 200 <= 210): 2. PU-related: Ps->r and b->Pd
    // only (Ps-b and r-Pd sit at 250 > 210). Primary: 1.
    REQUIRE(links.size() == 5);
    int n_cr = 0, n_in = 0, n_out = 0, n_prim = 0;
    for (const auto& l : links) {
        switch (l.kind) {
            case LinkKind::Cr: ++n_cr; break;
            case LinkKind::PuRelatedIn: ++n_in; break;
            case LinkKind::PuRelatedOut: ++n_out; break;
            case LinkKind::Primary: ++n_prim; break;
        }
    }
    CHECK(n_cr == 2);
    CHECK(n_in == 1);
    CHECK(n_out == 1);
    CHECK(n_prim == 1);
    for (const auto& l : links) {
        double expect = l.kind == LinkKind::Cr       ? sc.rates.cr_bps
                        : l.kind == LinkKind::Primary ? sc.rates.primary_bps
                                                      : sc.rates.pcr_bps;
        CHECK(l.capacity_bps == expect);
    }

    SUBCASE("derivation is deterministic") {
        auto again = derive_links(sc);
        REQUIRE(again.size() == links.size());
        for (size_t i = 0; i < links.size(); ++i) {
            CHECK(again[i].tx == links[i].tx);
            CHECK(again[i].rx == links[i].rx);
            CHECK(again[i].kind == links[i].kind);
        }
    }
    SUBCASE("capacity override wins") {
        sc.capacity_overrides[{1, 0}] = 5e6;
        auto over = derive_links(sc);
        bool seen = false;
        for (const auto& l : over)
            if (l.tx == 1 && l.rx == 0) {
                CHECK(l.capacity_bps == 5e6);
                seen = true;
            }
        CHECK(seen);
    }
    SUBCASE("text round trip") {
        auto text = links_text(links);
        auto parsed = parse_links_text(text);
        REQUIRE(parsed.size() == links.size());
        for (size_t i = 0; i < links.size(); ++i) {
            CHECK(parsed[i].tx == links[i].tx);
            CHECK(parsed[i].rx == links[i].rx);
            CHECK(parsed[i].kind == links[i].kind);
            CHECK(parsed[i].session_id == links[i].session_id);
            CHECK(parsed[i].capacity_bps == links[i].capacity_bps);
        }
        CHECK_THROWS_AS(parse_links_text("tx rx nonsense"), ValidationError);
    }
}
