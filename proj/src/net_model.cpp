#include "net_model.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace cchn {

double received_power(double p_t, double gamma, double d, double n) {
    if (d <= 0.0) throw std::domain_error("received_power: distance must be positive");
    if (p_t <= 0.0 || gamma <= 0.0 || n <= 0.0)
        throw std::domain_error("received_power: parameters must be positive");
    return p_t * gamma * std::pow(d, -n);
}

double range_from_threshold(double p_t, double threshold, double gamma, double n) {
    if (p_t <= 0.0 || threshold <= 0.0 || gamma <= 0.0 || n <= 0.0)
        throw std::domain_error("range_from_threshold: parameters must be positive");
    return std::pow(gamma * p_t / threshold, 1.0 / n);
}

double transmission_range(const RadioParams& r, EntityClass tx, EntityClass rx) {
    return range_from_threshold(r.p_t[static_cast<int>(tx)], r.p_r[static_cast<int>(rx)],
                                r.gamma, r.pathloss_n);
}

double interference_range(const RadioParams& r, EntityClass tx, EntityClass rx) {
    return range_from_threshold(r.p_t[static_cast<int>(tx)], r.p_i[static_cast<int>(rx)],
                                r.gamma, r.pathloss_n);
}

const Node& Scenario::node(int id) const {
    for (const Node& n : nodes)
        if (n.id == id) return n;
    throw ValidationError("unknown node id " + std::to_string(id));
}

int Scenario::base_station() const {
    for (const Node& n : nodes)
        if (n.kind == NodeKind::BaseStation) return n.id;
    throw ValidationError("scenario has no base station");
}

std::vector<int> Scenario::edge_routers() const {
    std::vector<int> out;
    for (const Node& n : nodes)
        if (n.kind == NodeKind::CrRouter && n.edge_router) out.push_back(n.id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> Scenario::facilities() const {
    std::vector<int> out;
    for (const Node& n : nodes)
        if (is_facility(n.kind)) out.push_back(n.id);
    std::sort(out.begin(), out.end());
    return out;
}

void validate(const Scenario& sc) {
    std::set<int> ids;
    int bs = 0;
    for (const Node& n : sc.nodes) {
        if (!ids.insert(n.id).second)
            throw ValidationError("duplicate node id " + std::to_string(n.id));
        if (n.kind == NodeKind::BaseStation) ++bs;
        if (n.edge_router && n.kind != NodeKind::CrRouter)
            throw ValidationError("edge_router flag only applies to CR routers");
    }
    if (bs != 1) throw ValidationError("scenario must contain exactly one base station");
    if (sc.alpha < 1.0) throw ValidationError("alpha must be >= 1");
    if (sc.rho < 0.0 || sc.rho > 1.0) throw ValidationError("rho must lie in [0, 1]");
    if (sc.llc_frame_s <= 0.0) throw ValidationError("llc_frame_s must be positive");
    if (sc.rates.cr_bps <= 0.0 || sc.rates.pcr_bps <= 0.0 || sc.rates.primary_bps <= 0.0)
        throw ValidationError("link rates must be positive");

    std::set<int> session_ids;
    for (const PrimarySession& s : sc.sessions) {
        if (!session_ids.insert(s.id).second)
            throw ValidationError("duplicate session id " + std::to_string(s.id));
        if (s.path.size() < 2)
            throw ValidationError("session path needs source and destination");
        if (s.length_s <= 0.0) throw ValidationError("session length must be positive");
        if (s.volume_bits <= 0.0) throw ValidationError("session volume must be positive");
        for (size_t i = 0; i < s.path.size(); ++i) {
            const Node& n = sc.node(s.path[i]);
            NodeKind want = i == 0                 ? NodeKind::PuSource
                            : i + 1 == s.path.size() ? NodeKind::PuDest
                                                     : NodeKind::PuRelay;
            if (n.kind != want)
                throw ValidationError("session " + std::to_string(s.id) +
                                      " path node " + std::to_string(n.id) +
                                      " has wrong kind");
            if (n.session_id != s.id)
                throw ValidationError("session " + std::to_string(s.id) +
                                      " path node " + std::to_string(n.id) +
                                      " tagged with session " + std::to_string(n.session_id));
        }
        for (size_t i = 0; i + 1 < s.path.size(); ++i) {
            const Node& a = sc.node(s.path[i]);
            const Node& b = sc.node(s.path[i + 1]);
            if (!in_transmission_range(sc, a, b))
                throw ValidationError("session " + std::to_string(s.id) +
                                      " hop exceeds transmission range");
        }
    }
    for (const auto& [key, cap] : sc.capacity_overrides) {
        sc.node(key.first);
        sc.node(key.second);
        if (cap <= 0.0) throw ValidationError("capacity override must be positive");
    }
}

bool in_transmission_range(const Scenario& sc, const Node& tx, const Node& rx) {
    double d = distance(tx.pos, rx.pos);
    return d <= transmission_range(sc.radio, entity_class(tx.kind), entity_class(rx.kind));
}

bool interferes(const Scenario& sc, const Node& tx, const Node& rx) {
    double d = distance(tx.pos, rx.pos);
    return d <= interference_range(sc.radio, entity_class(tx.kind), entity_class(rx.kind));
}

namespace {

double capacity_for(const Scenario& sc, int tx, int rx, LinkKind kind) {
    auto it = sc.capacity_overrides.find({tx, rx});
    if (it != sc.capacity_overrides.end()) return it->second;
    switch (kind) {
        case LinkKind::Cr: return sc.rates.cr_bps;
        case LinkKind::Primary: return sc.rates.primary_bps;
        default: return sc.rates.pcr_bps;
    }
}

}  // namespace

std::vector<Link> derive_links(const Scenario& sc) {
    std::vector<Link> out;
    std::vector<int> fac = sc.facilities();
    for (int i : fac)
        for (int j : fac) {
            if (i == j) continue;
            const Node& a = sc.node(i);
            const Node& b = sc.node(j);
            if (in_transmission_range(sc, a, b))
                out.push_back({i, j, LinkKind::Cr, -1, capacity_for(sc, i, j, LinkKind::Cr)});
        }
    for (const PrimarySession& s : sc.sessions) {
        const Node& src = sc.node(s.path.front());
        for (int j : fac)
            if (in_transmission_range(sc, src, sc.node(j)))
                out.push_back({src.id, j, LinkKind::PuRelatedIn, s.id,
                               capacity_for(sc, src.id, j, LinkKind::PuRelatedIn)});
    }
    for (const PrimarySession& s : sc.sessions) {
        const Node& dst = sc.node(s.path.back());
        for (int i : fac)
            if (in_transmission_range(sc, sc.node(i), dst))
                out.push_back({i, dst.id, LinkKind::PuRelatedOut, s.id,
                               capacity_for(sc, i, dst.id, LinkKind::PuRelatedOut)});
    }
    for (const PrimarySession& s : sc.sessions)
        for (size_t h = 0; h + 1 < s.path.size(); ++h)
            out.push_back({s.path[h], s.path[h + 1], LinkKind::Primary, s.id,
                           capacity_for(sc, s.path[h], s.path[h + 1], LinkKind::Primary)});
    return out;
}

namespace {

const char* kind_name(LinkKind k) {
    switch (k) {
        case LinkKind::Cr: return "cr";
        case LinkKind::PuRelatedIn: return "pin";
        case LinkKind::PuRelatedOut: return "pout";
        default: return "prim";
    }
}

LinkKind kind_from_name(const std::string& s) {
    if (s == "cr") return LinkKind::Cr;
    if (s == "pin") return LinkKind::PuRelatedIn;
    if (s == "pout") return LinkKind::PuRelatedOut;
    if (s == "prim") return LinkKind::Primary;
    throw ValidationError("unknown link kind '" + s + "'");
}

}  // namespace

std::string link_label(const Link& l) {
    std::string s = kind_name(l.kind);
    if (l.session_id >= 0) s += ":s" + std::to_string(l.session_id);
    s += ":" + std::to_string(l.tx) + ">" + std::to_string(l.rx);
    return s;
}

std::string links_text(const std::vector<Link>& links) {
    std::ostringstream os;
    os << "# cchn links v1\n";
    char buf[64];
    for (const Link& l : links) {
        std::snprintf(buf, sizeof buf, "%.10g", l.capacity_bps);
        os << kind_name(l.kind) << ' ' << l.tx << ' ' << l.rx << ' ' << l.session_id
           << ' ' << buf << '\n';
    }
    return os.str();
}

std::vector<Link> parse_links_text(const std::string& text) {
    std::vector<Link> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        Link l;
        if (!(ls >> kind >> l.tx >> l.rx >> l.session_id >> l.capacity_bps))
            throw ValidationError("bad links line: " + line);
        l.kind = kind_from_name(kind);
        out.push_back(l);
    }
    return out;
}

}  // namespace cchn
