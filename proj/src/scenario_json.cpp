#include "scenario_json.hpp"

#include <cmath>
#include <utility>

#include "errors.hpp"
#include "json.hpp"

namespace cchn {

using nlohmann::json;

namespace {

const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::BaseStation: return "bs";
        case NodeKind::CrRouter: return "cr";
        case NodeKind::PuSource: return "pu_source";
        case NodeKind::PuRelay: return "pu_relay";
        case NodeKind::PuDest: return "pu_dest";
    }
    return "?";
}

NodeKind kind_from_name(const std::string& s) {
    if (s == "bs") return NodeKind::BaseStation;
    if (s == "cr") return NodeKind::CrRouter;
    if (s == "pu_source") return NodeKind::PuSource;
    if (s == "pu_relay") return NodeKind::PuRelay;
    if (s == "pu_dest") return NodeKind::PuDest;
    throw ValidationError("unknown node kind \"" + s + "\"");
}

json class_triplet(const double v[3]) {
    return json{{"cr", v[0]}, {"bs", v[1]}, {"pu", v[2]}};
}

void read_class_triplet(const json& j, const char* key, double out[3]) {
    if (!j.contains(key)) return;
    const json& t = j.at(key);
    out[0] = t.value("cr", out[0]);
    out[1] = t.value("bs", out[1]);
    out[2] = t.value("pu", out[2]);
}

}  // namespace

std::string scenario_to_json(const Scenario& sc) {
    json j;
    j["schema_version"] = sc.schema_version;
    j["radio"] = json{{"gamma", sc.radio.gamma},
                      {"pathloss_n", sc.radio.pathloss_n},
                      {"tx_power_w", class_triplet(sc.radio.p_t)},
                      {"rx_threshold_w", class_triplet(sc.radio.p_r)},
                      {"interference_threshold_w", class_triplet(sc.radio.p_i)}};
    j["rates_bps"] = json{{"cr", sc.rates.cr_bps},
                          {"pcr", sc.rates.pcr_bps},
                          {"primary", sc.rates.primary_bps}};
    j["alpha"] = sc.alpha;
    j["rho"] = sc.rho;
    j["llc_frame_s"] = sc.llc_frame_s;

    j["nodes"] = json::array();
    for (const Node& n : sc.nodes) {
        json jn{{"id", n.id},
                {"kind", kind_name(n.kind)},
                {"pos_m", json::array({n.pos.x, n.pos.y})}};
        if (n.edge_router) jn["edge_router"] = true;
        if (n.session_id >= 0) jn["session"] = n.session_id;
        j["nodes"].push_back(std::move(jn));
    }

    j["sessions"] = json::array();
    for (const PrimarySession& s : sc.sessions)
        j["sessions"].push_back(json{{"id", s.id},
                                     {"path", s.path},
                                     {"length_s", s.length_s},
                                     {"volume_bits", s.volume_bits}});

    if (!sc.capacity_overrides.empty()) {
        json arr = json::array();
        for (const auto& [pair, rate] : sc.capacity_overrides)
            arr.push_back(json{{"tx", pair.first}, {"rx", pair.second}, {"rate_bps", rate}});
        j["capacity_overrides"] = std::move(arr);
    }
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario JSON: ") + e.what());
    }

    Scenario sc;
    try {
        sc.schema_version = j.value("schema_version", 1);
        if (sc.schema_version != 1)
            throw ValidationError("unsupported schema_version " +
                                  std::to_string(sc.schema_version));
        if (j.contains("radio")) {
            const json& r = j.at("radio");
            sc.radio.gamma = r.value("gamma", sc.radio.gamma);
            sc.radio.pathloss_n = r.value("pathloss_n", sc.radio.pathloss_n);
            read_class_triplet(r, "tx_power_w", sc.radio.p_t);
            read_class_triplet(r, "rx_threshold_w", sc.radio.p_r);
            read_class_triplet(r, "interference_threshold_w", sc.radio.p_i);
        }
        if (j.contains("rates_bps")) {
            const json& r = j.at("rates_bps");
            sc.rates.cr_bps = r.value("cr", sc.rates.cr_bps);
            sc.rates.pcr_bps = r.value("pcr", sc.rates.pcr_bps);
            sc.rates.primary_bps = r.value("primary", sc.rates.primary_bps);
        }
        sc.alpha = j.value("alpha", sc.alpha);
        sc.rho = j.value("rho", sc.rho);
        sc.llc_frame_s = j.value("llc_frame_s", sc.llc_frame_s);

        for (const json& jn : j.value("nodes", json::array())) {
            Node n;
            n.id = jn.at("id").get<int>();
            n.kind = kind_from_name(jn.at("kind").get<std::string>());
            const json& p = jn.at("pos_m");
            n.pos = {p.at(0).get<double>(), p.at(1).get<double>()};
            n.edge_router = jn.value("edge_router", false);
            n.session_id = jn.value("session", -1);
            sc.nodes.push_back(n);
        }
        for (const json& js : j.value("sessions", json::array())) {
            PrimarySession s;
            s.id = js.at("id").get<int>();
            s.path = js.at("path").get<std::vector<int>>();
            s.length_s = js.at("length_s").get<double>();
            s.volume_bits = js.at("volume_bits").get<double>();
            sc.sessions.push_back(std::move(s));
        }
        for (const json& jo : j.value("capacity_overrides", json::array()))
            sc.capacity_overrides[{jo.at("tx").get<int>(), jo.at("rx").get<int>()}] =
                jo.at("rate_bps").get<double>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario JSON: ") + e.what());
    }

    validate(sc);
    return sc;
}

Scenario make_grid_scenario(double spacing_m, double alpha, double rho,
                            const Rates& rates, const GridSessionSpec& spec) {
    if (!(spacing_m > 0.0))
        throw ValidationError("grid spacing must be positive");
    if (spec.count < 0 || spec.count > 5)
        throw ValidationError("grid session count must lie in [0, 5]");
    if (spec.two_hop_s4 && spec.count < 4)
        throw ValidationError("two-hop session 4 needs at least 4 sessions");
    if (static_cast<int>(spec.lengths_s.size()) < spec.count)
        throw ValidationError("grid session lengths list is too short");

    Scenario sc;
    sc.rates = rates;
    sc.alpha = alpha;
    sc.rho = rho;

    // Facilities 0..24 row-major from the top-left corner; the center is the
    // base station and the opposite corners are the edge routers.
    double s = spacing_m;
    for (int row = 0; row < 5; ++row)
        for (int col = 0; col < 5; ++col) {
            Node n;
            n.id = row * 5 + col;
            n.pos = {(col - 2) * s, (2 - row) * s};
            n.kind = n.id == 12 ? NodeKind::BaseStation : NodeKind::CrRouter;
            n.edge_router = n.id == 0 || n.id == 24;
            sc.nodes.push_back(n);
        }

    // Canonical primary pairs: one spacing source-to-destination, endpoints
    // half a grid diagonal from the nearest facilities. PU node ids are
    // 100+k (source), 110+k (destination), 120+k (relay), session ids k.
    struct Pair {
        Vec2 src, dst;
    };
    const Pair pairs[5] = {
        {{-0.5 * s, -0.5 * s}, {-0.5 * s, 0.5 * s}},
        {{-1.5 * s, 1.5 * s}, {-1.5 * s, 0.5 * s}},
        {{1.5 * s, 1.5 * s}, {1.5 * s, 0.5 * s}},
        {{1.5 * s, -1.5 * s}, {1.5 * s, -0.5 * s}},
        {{-1.5 * s, -1.5 * s}, {-1.5 * s, -0.5 * s}},
    };
    for (int k = 1; k <= spec.count; ++k) {
        const Pair& pr = pairs[k - 1];
        sc.nodes.push_back({100 + k, NodeKind::PuSource, pr.src, false, k});
        sc.nodes.push_back({110 + k, NodeKind::PuDest, pr.dst, false, k});
        PrimarySession ps;
        ps.id = k;
        ps.path = {100 + k, 110 + k};
        if (k == 4 && spec.two_hop_s4) {
            Vec2 mid{(pr.src.x + pr.dst.x) / 2.0, (pr.src.y + pr.dst.y) / 2.0};
            sc.nodes.push_back({120 + k, NodeKind::PuRelay, mid, false, k});
            ps.path = {100 + k, 120 + k, 110 + k};
        }
        ps.length_s = spec.lengths_s[k - 1];
        ps.volume_bits = spec.volume_bits;
        sc.sessions.push_back(std::move(ps));
    }

    validate(sc);
    return sc;
}

Scenario make_toy_scenario() {
    Scenario sc;
    // Unit-range radio: R_T = (gamma p_t / p_r)^(1/n) = 1, R_I = 2.
    sc.radio.gamma = 1.0;
    sc.radio.pathloss_n = 3.0;
    for (int c = 0; c < 3; ++c) {
        sc.radio.p_t[c] = 1.0;
        sc.radio.p_r[c] = 1.0;
        sc.radio.p_i[c] = 0.125;
    }
    sc.nodes.push_back({1, NodeKind::CrRouter, {0, 0}, true, -1});
    sc.nodes.push_back({2, NodeKind::CrRouter, {1, 0}, false, -1});
    sc.nodes.push_back({3, NodeKind::CrRouter, {2, 0}, false, -1});
    sc.nodes.push_back({4, NodeKind::BaseStation, {3, 0}, false, -1});
    sc.nodes.push_back({5, NodeKind::PuSource, {0, 1}, false, 1});
    sc.nodes.push_back({6, NodeKind::PuDest, {1, 1}, false, 1});
    PrimarySession s;
    s.id = 1;
    s.path = {5, 6};
    s.length_s = 30.0;
    s.volume_bits = 2e7;
    sc.sessions.push_back(std::move(s));
    validate(sc);
    return sc;
}

}  // namespace cchn
