#ifndef CCHN_NET_MODEL_HPP
#define CCHN_NET_MODEL_HPP

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace cchn {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

enum class NodeKind { BaseStation, CrRouter, PuSource, PuRelay, PuDest };

// Radio parameter index: entity classes mu/nu.
enum class EntityClass : int { Cr = 0, Bs = 1, Pu = 2 };

inline bool is_facility(NodeKind k) {
    return k == NodeKind::BaseStation || k == NodeKind::CrRouter;
}

inline EntityClass entity_class(NodeKind k) {
    switch (k) {
        case NodeKind::CrRouter: return EntityClass::Cr;
        case NodeKind::BaseStation: return EntityClass::Bs;
        default: return EntityClass::Pu;
    }
}

// Transmit power, reception threshold and interference threshold per entity
// class, plus the propagation constants of the path-loss model
// p_recv = p_t * gamma * d^-n.
struct RadioParams {
    double gamma = 4.63;
    double pathloss_n = 3.0;
    double p_t[3] = {2.0, 2.0, 2.0};
    double p_r[3] = {1e-6, 1e-6, 1e-6};
    double p_i[3] = {1.34e-7, 1.34e-7, 1.34e-7};
};

double received_power(double p_t, double gamma, double d, double n);

// Largest d with received_power(d) >= threshold: (gamma * p_t / threshold)^(1/n).
double range_from_threshold(double p_t, double threshold, double gamma, double n);

double transmission_range(const RadioParams& r, EntityClass tx, EntityClass rx);
double interference_range(const RadioParams& r, EntityClass tx, EntityClass rx);

struct Node {
    int id = -1;
    NodeKind kind = NodeKind::CrRouter;
    Vec2 pos;
    bool edge_router = false;  // CR routers only
    int session_id = -1;       // PU nodes only
};

struct PrimarySession {
    int id = -1;
    std::vector<int> path;  // node ids: source, relays..., destination
    double length_s = 0.0;
    double volume_bits = 0.0;
};

struct Rates {
    double cr_bps = 3e6;
    double pcr_bps = 3e6;
    double primary_bps = 3e6;
};

struct Scenario {
    int schema_version = 1;
    RadioParams radio;
    Rates rates;
    double alpha = 1.0;
    double rho = 1.0;
    double llc_frame_s = 0.01;
    std::vector<Node> nodes;
    std::vector<PrimarySession> sessions;
    std::map<std::pair<int, int>, double> capacity_overrides;

    const Node& node(int id) const;
    int base_station() const;                 // node id
    std::vector<int> edge_routers() const;    // node ids, ascending
    std::vector<int> facilities() const;      // node ids, ascending
};

// Throws ValidationError on any violated invariant.
void validate(const Scenario& sc);

enum class LinkKind { Cr, PuRelatedIn, PuRelatedOut, Primary };

struct Link {
    int tx = -1;
    int rx = -1;
    LinkKind kind = LinkKind::Cr;
    int session_id = -1;  // PuRelated*/Primary only
    double capacity_bps = 0.0;
};

// Boundary-inclusive range predicates (d == range counts).
bool in_transmission_range(const Scenario& sc, const Node& tx, const Node& rx);
bool interferes(const Scenario& sc, const Node& tx, const Node& rx);

// All communication links of the scenario in deterministic order:
// CR links (tx id, rx id ascending), PU-related in-links (session, facility),
// PU-related out-links (session, facility), primary links (session, hop).
std::vector<Link> derive_links(const Scenario& sc);

std::string link_label(const Link& l);
std::string links_text(const std::vector<Link>& links);
std::vector<Link> parse_links_text(const std::string& text);

}  // namespace cchn

#endif
