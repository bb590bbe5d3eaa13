#include "conflict_graph.hpp"

#include <sstream>

namespace cchn {

size_t ConflictGraph::edge_count() const {
    size_t twice = 0;
    for (const auto& row : adj)
        for (uint64_t w : row) twice += static_cast<size_t>(__builtin_popcountll(w));
    return twice / 2;
}

bool link_conflicts(const Scenario& sc, const Link& a, const Link& b) {
    if (a.tx == b.tx || a.rx == b.rx || a.tx == b.rx || a.rx == b.tx) return true;
    if (interferes(sc, sc.node(a.tx), sc.node(b.rx))) return true;
    if (interferes(sc, sc.node(b.tx), sc.node(a.rx))) return true;
    return false;
}

bool session_conflicts(const Scenario& sc, const Link& link, const PrimarySession& s) {
    for (size_t h = 0; h + 1 < s.path.size(); ++h) {
        Link prim{s.path[h], s.path[h + 1], LinkKind::Primary, s.id, 0.0};
        if (link_conflicts(sc, link, prim)) return true;
    }
    return false;
}

namespace {

void set_edge(ConflictGraph& g, int u, int v) {
    g.adj[u][static_cast<size_t>(v) >> 6] |= uint64_t{1} << (v & 63);
    g.adj[v][static_cast<size_t>(u) >> 6] |= uint64_t{1} << (u & 63);
}

}  // namespace

ConflictGraph build_conflict_graph(const Scenario& sc, const std::vector<Link>& links) {
    ConflictGraph g;
    for (size_t i = 0; i < links.size(); ++i) {
        const Link& l = links[i];
        if (l.kind == LinkKind::Primary) continue;
        Vertex v;
        v.kind = l.kind == LinkKind::Cr ? VertexKind::CrLinkV : VertexKind::PuRelatedV;
        v.link = static_cast<int>(i);
        v.session_id = l.session_id;
        g.link_vertex[v.link] = static_cast<int>(g.vertices.size());
        g.labels.push_back(link_label(l));
        g.vertices.push_back(v);
    }
    for (const PrimarySession& s : sc.sessions) {
        Vertex v;
        v.kind = VertexKind::SessionV;
        v.session_id = s.id;
        g.session_vertex[s.id] = static_cast<int>(g.vertices.size());
        g.labels.push_back("sess:s" + std::to_string(s.id));
        g.vertices.push_back(v);
    }

    size_t words = (g.size() + 63) / 64;
    g.adj.assign(g.size(), std::vector<uint64_t>(words, 0));

    for (size_t u = 0; u < g.size(); ++u) {
        const Vertex& vu = g.vertices[u];
        for (size_t v = u + 1; v < g.size(); ++v) {
            const Vertex& vv = g.vertices[v];
            bool edge = false;
            if (vu.kind != VertexKind::SessionV && vv.kind != VertexKind::SessionV) {
                edge = link_conflicts(sc, links[vu.link], links[vv.link]);
            } else if (vu.kind == VertexKind::SessionV && vv.kind == VertexKind::SessionV) {
                edge = false;  // primary sessions do not interfere with each other
            } else {
                const Vertex& lv = vu.kind == VertexKind::SessionV ? vv : vu;
                const Vertex& sv = vu.kind == VertexKind::SessionV ? vu : vv;
                const Link& link = links[lv.link];
                if (link.kind != LinkKind::Cr && link.session_id == sv.session_id) {
                    edge = false;  // a session's own PU-related links stay schedulable
                } else {
                    for (const PrimarySession& s : sc.sessions)
                        if (s.id == sv.session_id) {
                            edge = session_conflicts(sc, link, s);
                            break;
                        }
                }
            }
            if (edge) set_edge(g, static_cast<int>(u), static_cast<int>(v));
        }
    }
    return g;
}

std::string edge_list_text(const ConflictGraph& g) {
    std::ostringstream os;
    os << "# cchn conflict-graph v1\n";
    for (size_t i = 0; i < g.size(); ++i) {
        const Vertex& v = g.vertices[i];
        os << "v " << i << ' ' << g.labels[i] << ' ' << v.link << ' ' << v.session_id
           << '\n';
    }
    for (size_t u = 0; u < g.size(); ++u)
        for (size_t v = u + 1; v < g.size(); ++v)
            if (g.adjacent(static_cast<int>(u), static_cast<int>(v)))
                os << u << ' ' << v << '\n';
    return os.str();
}

ConflictGraph parse_edge_list_text(const std::string& text) {
    ConflictGraph g;
    std::istringstream is(text);
    std::string line;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (line[0] == 'v') {
            char tag;
            int id, link, session;
            std::string label;
            if (!(ls >> tag >> id >> label >> link >> session))
                throw ValidationError("bad vertex line: " + line);
            if (id != static_cast<int>(g.vertices.size()))
                throw ValidationError("vertex ids must be dense and ordered");
            Vertex v;
            v.link = link;
            v.session_id = session;
            if (label.rfind("sess:", 0) == 0) {
                v.kind = VertexKind::SessionV;
                g.session_vertex[session] = id;
            } else {
                v.kind = label.rfind("cr:", 0) == 0 ? VertexKind::CrLinkV
                                                    : VertexKind::PuRelatedV;
                g.link_vertex[link] = id;
            }
            g.labels.push_back(label);
            g.vertices.push_back(v);
        } else {
            int u, v;
            std::istringstream es(line);
            if (!(es >> u >> v)) throw ValidationError("bad edge line: " + line);
            edges.emplace_back(u, v);
        }
    }
    size_t words = (g.size() + 63) / 64;
    g.adj.assign(g.size(), std::vector<uint64_t>(words, 0));
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= static_cast<int>(g.size()) || v >= static_cast<int>(g.size()))
            throw ValidationError("edge references unknown vertex");
        set_edge(g, u, v);
    }
    return g;
}

}  // namespace cchn
