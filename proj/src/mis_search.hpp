#ifndef CCHN_MIS_SEARCH_HPP
#define CCHN_MIS_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conflict_graph.hpp"

namespace cchn {

// Ordered collection of independent sets (each stored ascending by vertex).
// Search routines only ever store maximal independent sets; the LP layer
// accepts any independent sets, which the Appendix-equivalence tests rely on.
struct MisCollection {
    std::vector<std::vector<int>> sets;

    size_t size() const { return sets.size(); }
    bool set_contains(size_t q, int vertex) const;
    // True iff set q contains the session vertex (the I_{l_p} side of the
    // per-session partition).
    bool in_session_partition(size_t q, int session_vertex) const {
        return set_contains(q, session_vertex);
    }
};

bool is_independent(const ConflictGraph& g, const std::vector<int>& set);
bool is_maximal_independent(const ConflictGraph& g, const std::vector<int>& set);

// Exhaustive enumeration (Bron-Kerbosch with pivoting on the complement).
// Throws GuardError when the graph exceeds `guard` vertices.
MisCollection enumerate_all_mis(const ConflictGraph& g, size_t guard = 40);

// Polynomial SIO heuristic: vertices get a scheduling index (hop distance in
// the conflict graph to the nearest vertex on a shortest source->destination
// path of the link-level routing graph), then `budget` seeded greedy restarts
// grow MISs in ascending index order with randomized tie-breaking.
// `mask`, when present, restricts the graph to the vertices set to true.
MisCollection sio_mis(const Scenario& sc, const std::vector<Link>& links,
                      const ConflictGraph& g, const std::vector<int>& source_nodes,
                      const std::vector<int>& dest_nodes, int budget, uint64_t seed,
                      const std::vector<uint8_t>* mask = nullptr);

struct AugmentedStats {
    uint64_t subset_iterations = 0;
};

// Session-aware augmentation: for every proper subset p of the sessions,
// remove the sessions outside p plus every vertex conflicting with them, run
// the SIO search with the sources/destinations extended by p's endpoints, and
// add the removed session vertices back to each returned set. The union with
// the plain SIO result is returned deduplicated.
// Throws GuardError when the session count exceeds `session_guard`.
MisCollection augmented_sio(const Scenario& sc, const std::vector<Link>& links,
                            const ConflictGraph& g, int budget, uint64_t seed,
                            int session_guard = 12, AugmentedStats* stats = nullptr);

std::string mis_text(const ConflictGraph& g, const MisCollection& c);
MisCollection parse_mis_text(const ConflictGraph& g, const std::string& text);

}  // namespace cchn

#endif
