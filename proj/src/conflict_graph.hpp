#ifndef CCHN_CONFLICT_GRAPH_HPP
#define CCHN_CONFLICT_GRAPH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "net_model.hpp"

namespace cchn {

enum class VertexKind { CrLinkV, PuRelatedV, SessionV };

struct Vertex {
    VertexKind kind = VertexKind::CrLinkV;
    int link = -1;        // index into the link vector, -1 for SessionV
    int session_id = -1;  // PuRelatedV and SessionV
};

// Undirected conflict graph over CR links, PU-related links and sessions.
// Adjacency is stored as bitset rows; vertices are dense 0..n-1.
struct ConflictGraph {
    std::vector<Vertex> vertices;
    std::vector<std::string> labels;
    std::vector<std::vector<uint64_t>> adj;
    std::map<int, int> session_vertex;  // session id -> vertex
    std::map<int, int> link_vertex;     // link index -> vertex

    size_t size() const { return vertices.size(); }
    bool adjacent(int u, int v) const {
        return (adj[u][static_cast<size_t>(v) >> 6] >> (v & 63)) & 1u;
    }
    size_t edge_count() const;
};

// Conflict rules between two directed communication links: a shared endpoint
// radio, or the receiver of either lying within the interference range of the
// other's transmitter (boundary inclusive).
bool link_conflicts(const Scenario& sc, const Link& a, const Link& b);

// A link conflicts with a session iff it conflicts with any primary link on
// the session's path.
bool session_conflicts(const Scenario& sc, const Link& link, const PrimarySession& s);

// Vertices: every non-primary link in order, then one vertex per session.
// A session's own PU-related links are not adjacent to its own session
// vertex; sessions are pairwise non-adjacent.
ConflictGraph build_conflict_graph(const Scenario& sc, const std::vector<Link>& links);

std::string edge_list_text(const ConflictGraph& g);
ConflictGraph parse_edge_list_text(const std::string& text);

}  // namespace cchn

#endif
