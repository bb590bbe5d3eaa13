#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "conflict_graph.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "scenario_json.hpp"

using namespace cchn;
using cchn_tests::micro_scenario;
using cchn_tests::random_scenario;

namespace {

// Re-derive the expected adjacency straight from the published rules.
void replay_rules(const Scenario& sc, const std::vector<Link>& links,
                  const ConflictGraph& g) {
    auto session_of = [&](int id) -> const PrimarySession& {
        for (const auto& s : sc.sessions)
            if (s.id == id) return s;
        REQUIRE(false);
        return sc.sessions.front();
    };
    for (size_t u = 0; u < g.size(); ++u)
        for (size_t v = 0; v < g.size(); ++v) {
            if (u == v) continue;
            const Vertex& vu = g.vertices[u];
            const Vertex& vv = g.vertices[v];
            bool expect;
            if (vu.kind == VertexKind::SessionV && vv.kind == VertexKind::SessionV) {
                expect = false;
            } else if (vu.kind == VertexKind::SessionV ||
                       vv.kind == VertexKind::SessionV) {
                const Vertex& sess = vu.kind == VertexKind::SessionV ? vu : vv;
                const Vertex& other = vu.kind == VertexKind::SessionV ? vv : vu;
                if (other.kind == VertexKind::PuRelatedV &&
                    other.session_id == sess.session_id)
                    expect = false;
                else
                    expect = session_conflicts(sc, links[other.link],
                                               session_of(sess.session_id));
            } else {
                expect = link_conflicts(sc, links[vu.link], links[vv.link]);
            }
            CHECK(g.adjacent(static_cast<int>(u), static_cast<int>(v)) == expect);
            CHECK(g.adjacent(static_cast<int>(u), static_cast<int>(v)) ==
                  g.adjacent(static_cast<int>(v), static_cast<int>(u)));
        }
}

}  // namespace

TEST_CASE("link conflict primitives") {
    Scenario sc = micro_scenario();
    auto links = derive_links(sc);
    // Shared endpoint always conflicts.
    CHECK(link_conflicts(sc, links[0], links[1]));
    // A link never conflicts with itself counted as two distinct links.
    Link far_a{0, 1, LinkKind::Cr, -1, 3e6};
    Scenario wide = sc;
    wide.nodes.push_back({8, NodeKind::CrRouter, {5000, 5000}, false, -1});
    wide.nodes.push_back({9, NodeKind::CrRouter, {5200, 5000}, false, -1});
    Link far_b{8, 9, LinkKind::Cr, -1, 3e6};
    CHECK(!link_conflicts(wide, far_a, far_b));
}

TEST_CASE("toy scenario fidelity") {
    Scenario sc = make_toy_scenario();
    auto links = derive_links(sc);
    int n_cr = 0, n_pu = 0;
    for (const auto& l : links) {
        if (l.kind == LinkKind::Cr) ++n_cr;
        if (l.kind == LinkKind::PuRelatedIn || l.kind == LinkKind::PuRelatedOut) ++n_pu;
    }
    CHECK(n_cr == 6);
    CHECK(n_pu == 2);
    auto g = build_conflict_graph(sc, links);
    CHECK(g.size() == 9);
    replay_rules(sc, links, g);
}

TEST_CASE("grid scenario rule replay") {
    Scenario sc = make_grid_scenario();
    auto links = derive_links(sc);
    auto g = build_conflict_graph(sc, links);
    CHECK(g.session_vertex.size() == 5);
    replay_rules(sc, links, g);
}

TEST_CASE("random scenario rule replay") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 25; ++i) {
        Scenario sc = random_scenario(rng, 14);
        auto links = derive_links(sc);
        auto g = build_conflict_graph(sc, links);
        replay_rules(sc, links, g);
    }
}

TEST_CASE("vertex bookkeeping") {
    Scenario sc = micro_scenario();
    auto links = derive_links(sc);
    auto g = build_conflict_graph(sc, links);
    CHECK(g.size() == 5);
    // Non-primary links come first in link order, the session vertex last.
    int non_primary = 0;
    for (size_t i = 0; i < links.size(); ++i)
        if (links[i].kind != LinkKind::Primary) {
            CHECK(g.link_vertex.at(static_cast<int>(i)) == non_primary);
            ++non_primary;
        }
    CHECK(g.session_vertex.at(1) == non_primary);
    CHECK(g.labels.size() == g.size());
}

TEST_CASE("edge list text round trip") {
    Scenario sc = make_toy_scenario();
    auto links = derive_links(sc);
    auto g = build_conflict_graph(sc, links);
    auto text = edge_list_text(g);
    auto g2 = parse_edge_list_text(text);
    REQUIRE(g2.size() == g.size());
    CHECK(g2.edge_count() == g.edge_count());
    for (size_t u = 0; u < g.size(); ++u)
        for (size_t v = 0; v < g.size(); ++v)
            if (u != v)
                CHECK(g2.adjacent(static_cast<int>(u), static_cast<int>(v)) ==
                      g.adjacent(static_cast<int>(u), static_cast<int>(v)));
    CHECK(edge_list_text(g2) == text);
    CHECK_THROWS_AS(parse_edge_list_text("vertex garbage here"), ValidationError);
}
