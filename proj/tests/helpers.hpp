#ifndef CCHN_TESTS_HELPERS_HPP
#define CCHN_TESTS_HELPERS_HPP

#include <cmath>
#include <random>
#include <vector>

#include "conflict_graph.hpp"
#include "net_model.hpp"

namespace cchn_tests {

using namespace cchn;

// b(0,0) BS, r(200,0) edge CR, Ps(200,150), Pd(0,150), one session.
// Links: CR both ways, Ps->r in, b->Pd out, one primary. T = 10 s.
inline Scenario micro_scenario() {
    Scenario sc;
    sc.nodes.push_back({0, NodeKind::BaseStation, {0, 0}, false, -1});
    sc.nodes.push_back({1, NodeKind::CrRouter, {200, 0}, true, -1});
    sc.nodes.push_back({2, NodeKind::PuSource, {200, 150}, false, 1});
    sc.nodes.push_back({3, NodeKind::PuDest, {0, 150}, false, 1});
    PrimarySession s;
    s.id = 1;
    s.path = {2, 3};
    s.length_s = 10.0;
    s.volume_bits = 5e6;
    sc.sessions.push_back(s);
    return sc;
}

// Random geometric scenario with at most max_vertices conflict vertices.
// One BS, 2..4 routers (the first an edge router), 1..max_sessions sessions.
inline Scenario random_scenario(std::mt19937_64& rng, int max_vertices,
                                int max_sessions = 2) {
    std::uniform_real_distribution<double> pos(-350.0, 350.0);
    for (;;) {
        Scenario sc;
        sc.nodes.push_back({0, NodeKind::BaseStation, {0, 0}, false, -1});
        int routers = 2 + static_cast<int>(rng() % 3);
        for (int i = 1; i <= routers; ++i)
            sc.nodes.push_back({i, NodeKind::CrRouter, {pos(rng), pos(rng)}, i == 1, -1});
        int sessions = 1 + static_cast<int>(rng() % max_sessions);
        std::uniform_real_distribution<double> hop(50.0, 200.0);
        std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
        for (int s = 1; s <= sessions; ++s) {
            // Destination within the primary pair's transmission range.
            Vec2 a{pos(rng), pos(rng)};
            double r = hop(rng), th = angle(rng);
            Vec2 b{a.x + r * std::cos(th), a.y + r * std::sin(th)};
            sc.nodes.push_back({100 + s, NodeKind::PuSource, a, false, s});
            sc.nodes.push_back({110 + s, NodeKind::PuDest, b, false, s});
            PrimarySession ps;
            ps.id = s;
            ps.path = {100 + s, 110 + s};
            ps.length_s = 10.0 * (1 + static_cast<int>(rng() % 3));
            ps.volume_bits = 1e6 * (1 + static_cast<int>(rng() % 6));
            sc.sessions.push_back(ps);
        }
        validate(sc);
        auto links = derive_links(sc);
        int non_primary = 0;
        for (const auto& l : links)
            if (l.kind != LinkKind::Primary) ++non_primary;
        int vertices = non_primary + static_cast<int>(sc.sessions.size());
        if (non_primary >= 1 && vertices <= max_vertices) return sc;
    }
}

// Independence oracle straight from the adjacency matrix.
inline bool oracle_independent(const ConflictGraph& g, unsigned mask) {
    int n = static_cast<int>(g.size());
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if ((mask >> u & 1) && (mask >> v & 1) && g.adjacent(u, v)) return false;
    return true;
}

// Every maximal independent set of g by subset brute force (n <= 20).
inline std::vector<std::vector<int>> oracle_all_mis(const ConflictGraph& g) {
    int n = static_cast<int>(g.size());
    std::vector<std::vector<int>> out;
    for (unsigned m = 1; m < (1u << n); ++m) {
        if (!oracle_independent(g, m)) continue;
        bool maximal = true;
        for (int v = 0; v < n && maximal; ++v)
            if (!(m >> v & 1) && oracle_independent(g, m | (1u << v))) maximal = false;
        if (!maximal) continue;
        std::vector<int> set;
        for (int v = 0; v < n; ++v)
            if (m >> v & 1) set.push_back(v);
        out.push_back(std::move(set));
    }
    return out;
}

}  // namespace cchn_tests

#endif
