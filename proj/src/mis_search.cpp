#include "mis_search.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace cchn {

bool MisCollection::set_contains(size_t q, int vertex) const {
    const std::vector<int>& s = sets[q];
    return std::binary_search(s.begin(), s.end(), vertex);
}

bool is_independent(const ConflictGraph& g, const std::vector<int>& set) {
    for (size_t i = 0; i < set.size(); ++i)
        for (size_t j = i + 1; j < set.size(); ++j)
            if (g.adjacent(set[i], set[j])) return false;
    return true;
}

bool is_maximal_independent(const ConflictGraph& g, const std::vector<int>& set) {
    if (!is_independent(g, set)) return false;
    std::vector<uint8_t> in(g.size(), 0);
    for (int v : set) in[v] = 1;
    for (size_t v = 0; v < g.size(); ++v) {
        if (in[v]) continue;
        bool blocked = false;
        for (int u : set)
            if (g.adjacent(static_cast<int>(v), u)) {
                blocked = true;
                break;
            }
        if (!blocked) return false;
    }
    return true;
}

namespace {

using Bits = std::vector<uint64_t>;

size_t words_for(size_t n) { return (n + 63) / 64; }

bool bit(const Bits& b, int i) { return (b[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u; }
void set_bit(Bits& b, int i) { b[static_cast<size_t>(i) >> 6] |= uint64_t{1} << (i & 63); }
void clear_bit(Bits& b, int i) { b[static_cast<size_t>(i) >> 6] &= ~(uint64_t{1} << (i & 63)); }

bool any(const Bits& b) {
    for (uint64_t w : b)
        if (w) return true;
    return false;
}

int popcount(const Bits& b) {
    int c = 0;
    for (uint64_t w : b) c += __builtin_popcountll(w);
    return c;
}

struct Bk {
    const std::vector<Bits>& nadj;  // complement adjacency
    size_t n;
    MisCollection out;
    std::vector<int> r;

    void run(Bits p, Bits x) {
        if (!any(p) && !any(x)) {
            std::vector<int> s = r;
            std::sort(s.begin(), s.end());
            out.sets.push_back(std::move(s));
            return;
        }
        int pivot = -1, best = -1;
        for (size_t v = 0; v < n; ++v)
            if (bit(p, static_cast<int>(v)) || bit(x, static_cast<int>(v))) {
                Bits t(p.size());
                for (size_t w = 0; w < p.size(); ++w) t[w] = p[w] & nadj[v][w];
                int c = popcount(t);
                if (c > best) {
                    best = c;
                    pivot = static_cast<int>(v);
                }
            }
        Bits cand(p.size());
        for (size_t w = 0; w < p.size(); ++w)
            cand[w] = p[w] & ~nadj[static_cast<size_t>(pivot)][w];
        for (size_t v = 0; v < n; ++v) {
            if (!bit(cand, static_cast<int>(v))) continue;
            Bits np(p.size()), nx(p.size());
            for (size_t w = 0; w < p.size(); ++w) {
                np[w] = p[w] & nadj[v][w];
                nx[w] = x[w] & nadj[v][w];
            }
            r.push_back(static_cast<int>(v));
            run(std::move(np), std::move(nx));
            r.pop_back();
            clear_bit(p, static_cast<int>(v));
            set_bit(x, static_cast<int>(v));
        }
    }
};

}  // namespace

MisCollection enumerate_all_mis(const ConflictGraph& g, size_t guard) {
    if (g.size() > guard)
        throw GuardError("enumerate_all_mis: " + std::to_string(g.size()) +
                         " vertices exceed guard " + std::to_string(guard));
    size_t n = g.size();
    if (n == 0) return {};
    size_t words = words_for(n);
    std::vector<Bits> nadj(n, Bits(words, 0));
    for (size_t v = 0; v < n; ++v) {
        for (size_t u = 0; u < n; ++u)
            if (u != v && !g.adjacent(static_cast<int>(v), static_cast<int>(u)))
                set_bit(nadj[v], static_cast<int>(u));
    }
    Bk bk{nadj, n, {}, {}};
    Bits p(words, 0), x(words, 0);
    for (size_t v = 0; v < n; ++v) set_bit(p, static_cast<int>(v));
    bk.run(std::move(p), std::move(x));
    return std::move(bk.out);
}

namespace {

constexpr int kUnreachable = 1 << 28;

// Hop distances in the directed node-level routing graph formed by the
// allowed non-primary links.
std::map<int, int> bfs_hops(const std::map<int, std::vector<int>>& adj, int start) {
    std::map<int, int> dist;
    dist[start] = 0;
    std::queue<int> q;
    q.push(start);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        auto it = adj.find(u);
        if (it == adj.end()) continue;
        for (int v : it->second)
            if (!dist.count(v)) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
    }
    return dist;
}

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

MisCollection sio_mis(const Scenario& sc, const std::vector<Link>& links,
                      const ConflictGraph& g, const std::vector<int>& source_nodes,
                      const std::vector<int>& dest_nodes, int budget, uint64_t seed,
                      const std::vector<uint8_t>* mask) {
    (void)sc;
    if (budget <= 0) throw ValidationError("sio_mis: budget must be positive");
    size_t n = g.size();
    std::vector<uint8_t> allowed(n, 1);
    if (mask) allowed = *mask;

    // Forward/backward adjacency of the routing graph.
    std::map<int, std::vector<int>> fwd, rev;
    for (size_t v = 0; v < n; ++v) {
        if (!allowed[v] || g.vertices[v].kind == VertexKind::SessionV) continue;
        const Link& l = links[g.vertices[v].link];
        fwd[l.tx].push_back(l.rx);
        rev[l.rx].push_back(l.tx);
    }

    std::map<int, std::map<int, int>> from_src, to_dst;
    for (int s : source_nodes) from_src[s] = bfs_hops(fwd, s);
    for (int d : dest_nodes) to_dst[d] = bfs_hops(rev, d);

    std::vector<uint8_t> marked(n, 0);
    bool have_marked = false;
    for (size_t v = 0; v < n; ++v) {
        if (!allowed[v] || g.vertices[v].kind == VertexKind::SessionV) continue;
        const Link& l = links[g.vertices[v].link];
        for (int s : source_nodes) {
            const auto& ds = from_src[s];
            auto dtx = ds.find(l.tx);
            if (dtx == ds.end()) continue;
            for (int d : dest_nodes) {
                auto sd = ds.find(d);
                if (sd == ds.end()) continue;
                const auto& dt = to_dst[d];
                auto drx = dt.find(l.rx);
                if (drx == dt.end()) continue;
                if (dtx->second + 1 + drx->second == sd->second) {
                    marked[v] = 1;
                    have_marked = true;
                    break;
                }
            }
            if (marked[v]) break;
        }
    }

    // Scheduling index: BFS over the conflict graph from the marked set.
    std::vector<int> index(n, have_marked ? kUnreachable : 0);
    if (have_marked) {
        std::queue<int> q;
        for (size_t v = 0; v < n; ++v)
            if (allowed[v] && marked[v]) {
                index[v] = 0;
                q.push(static_cast<int>(v));
            }
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (size_t v = 0; v < n; ++v)
                if (allowed[v] && index[v] == kUnreachable &&
                    g.adjacent(u, static_cast<int>(v))) {
                    index[v] = index[u] + 1;
                    q.push(static_cast<int>(v));
                }
        }
        for (size_t v = 0; v < n; ++v)
            if (index[v] == kUnreachable) index[v] = static_cast<int>(n);
    }

    std::vector<int> pool;
    for (size_t v = 0; v < n; ++v)
        if (allowed[v]) pool.push_back(static_cast<int>(v));

    MisCollection out;
    std::set<std::vector<int>> seen;
    for (int restart = 0; restart < budget; ++restart) {
        std::vector<int> key(n, 0);
        if (restart > 0) {
            std::mt19937_64 rng(mix_seed(seed, static_cast<uint64_t>(restart)));
            std::vector<int> perm = pool;
            for (size_t i = perm.size(); i > 1; --i)
                std::swap(perm[i - 1], perm[rng() % i]);
            for (size_t i = 0; i < perm.size(); ++i) key[perm[i]] = static_cast<int>(i);
        } else {
            for (int v : pool) key[v] = v;
        }
        std::vector<int> order = pool;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            if (index[a] != index[b]) return index[a] < index[b];
            return key[a] < key[b];
        });
        std::vector<int> chosen;
        for (int v : order) {
            bool ok = true;
            for (int u : chosen)
                if (g.adjacent(u, v)) {
                    ok = false;
                    break;
                }
            if (ok) chosen.push_back(v);
        }
        std::sort(chosen.begin(), chosen.end());
        if (seen.insert(chosen).second) out.sets.push_back(std::move(chosen));
    }
    return out;
}

MisCollection augmented_sio(const Scenario& sc, const std::vector<Link>& links,
                            const ConflictGraph& g, int budget, uint64_t seed,
                            int session_guard, AugmentedStats* stats) {
    size_t lp = sc.sessions.size();
    if (static_cast<int>(lp) > session_guard)
        throw GuardError("augmented_sio: " + std::to_string(lp) +
                         " sessions exceed guard " + std::to_string(session_guard));

    std::vector<int> sess_ids;
    for (const PrimarySession& s : sc.sessions) sess_ids.push_back(s.id);
    std::sort(sess_ids.begin(), sess_ids.end());

    std::vector<int> edge_nodes = sc.edge_routers();
    int bs = sc.base_station();

    MisCollection out;
    std::set<std::vector<int>> seen;
    auto add_all = [&](const MisCollection& c, const std::vector<int>& extra) {
        for (const std::vector<int>& s : c.sets) {
            std::vector<int> full = s;
            full.insert(full.end(), extra.begin(), extra.end());
            std::sort(full.begin(), full.end());
            if (seen.insert(full).second) out.sets.push_back(std::move(full));
        }
    };

    add_all(sio_mis(sc, links, g, edge_nodes, {bs}, budget, seed), {});

    uint64_t iterations = 0;
    for (size_t j = 0; j < lp; ++j) {
        for (uint64_t bits = 0; bits < (uint64_t{1} << lp); ++bits) {
            if (static_cast<size_t>(__builtin_popcountll(bits)) != j) continue;
            ++iterations;
            std::vector<uint8_t> allowed(g.size(), 1);
            std::vector<int> removed_vertices;
            for (size_t k = 0; k < lp; ++k) {
                if (bits & (uint64_t{1} << k)) continue;
                int sv = g.session_vertex.at(sess_ids[k]);
                removed_vertices.push_back(sv);
                allowed[sv] = 0;
                for (size_t v = 0; v < g.size(); ++v)
                    if (g.adjacent(sv, static_cast<int>(v))) allowed[v] = 0;
            }
            std::vector<int> sources = edge_nodes, dests = {bs};
            for (size_t k = 0; k < lp; ++k)
                if (bits & (uint64_t{1} << k)) {
                    for (const PrimarySession& s : sc.sessions)
                        if (s.id == sess_ids[k]) {
                            sources.push_back(s.path.front());
                            dests.push_back(s.path.back());
                        }
                }
            MisCollection sub = sio_mis(sc, links, g, sources, dests, budget,
                                        mix_seed(seed, bits), &allowed);
            add_all(sub, removed_vertices);
        }
    }
    if (stats) stats->subset_iterations = iterations;
    return out;
}

std::string mis_text(const ConflictGraph& g, const MisCollection& c) {
    std::ostringstream os;
    for (const std::vector<int>& s : c.sets) {
        std::vector<std::string> labels;
        for (int v : s) labels.push_back(g.labels[v]);
        std::sort(labels.begin(), labels.end());
        for (size_t i = 0; i < labels.size(); ++i) os << (i ? " " : "") << labels[i];
        os << '\n';
    }
    return os.str();
}

MisCollection parse_mis_text(const ConflictGraph& g, const std::string& text) {
    std::map<std::string, int> by_label;
    for (size_t v = 0; v < g.size(); ++v) by_label[g.labels[v]] = static_cast<int>(v);
    MisCollection out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string label;
        std::vector<int> set;
        while (ls >> label) {
            auto it = by_label.find(label);
            if (it == by_label.end())
                throw ValidationError("unknown vertex label '" + label + "'");
            set.push_back(it->second);
        }
        std::sort(set.begin(), set.end());
        out.sets.push_back(std::move(set));
    }
    return out;
}

}  // namespace cchn
