#include "llc.hpp"

#include <algorithm>
#include <cmath>

#include "conflict_graph.hpp"
#include "nlc.hpp"

namespace cchn {

namespace {

double pair_rate(const Scenario& sc, int tx, int rx, double fallback) {
    auto it = sc.capacity_overrides.find({tx, rx});
    return it != sc.capacity_overrides.end() ? it->second : fallback;
}

}  // namespace

double llc_completion_time(const PrimarySession& s, double frame_s) {
    if (frame_s <= 0.0) throw ValidationError("frame length must be positive");
    return std::ceil(s.length_s / frame_s) * frame_s;
}

LlcReport llc_evaluate(const Scenario& sc, const LlcConfig& cfg) {
    validate(sc);
    LlcReport rep;
    rep.frame_s = cfg.frame_s > 0.0 ? cfg.frame_s : sc.llc_frame_s;
    if (rep.frame_s <= 0.0) throw ValidationError("frame length must be positive");

    auto links = derive_links(sc);
    auto graph = build_conflict_graph(sc, links);
    rep.T = select_control_interval(sc, links, graph).T;

    int bs = sc.base_station();
    auto facilities = sc.facilities();
    double total_bits = 0.0;

    for (const auto& s : sc.sessions) {
        LlcSessionPlan plan;
        plan.session_id = s.id;
        plan.frames_total = static_cast<int>(std::ceil(s.length_s / rep.frame_s));
        plan.completion_s = plan.frames_total * rep.frame_s;
        plan.frame_payload_bits = s.volume_bits / plan.frames_total;
        int hops = static_cast<int>(s.path.size()) - 1;
        plan.subframe_s = rep.frame_s / hops;

        // Frames whose start lies inside both the session and the horizon.
        double window = std::min(s.length_s, rep.T);
        plan.frames_counted = std::min(
            plan.frames_total,
            static_cast<int>(std::ceil(window / rep.frame_s - 1e-12)));

        double frame_bits = 0.0;  // secondary bits earned per frame
        for (int h = 0; h < hops; ++h) {
            const Node& u = sc.node(s.path[static_cast<size_t>(h)]);
            const Node& v = sc.node(s.path[static_cast<size_t>(h) + 1]);
            LlcHopPlan hp;
            hp.hop = h;
            double d_f = plan.frame_payload_bits;
            hp.direct_s = d_f / pair_rate(sc, u.id, v.id, sc.rates.primary_bps);
            // Best decode-and-forward relay: reachable from the hop
            // transmitter and reaching the hop receiver, fastest delivery,
            // ties to the smallest node id.
            for (int fid : facilities) {
                const Node& f = sc.node(fid);
                if (!in_transmission_range(sc, u, f) ||
                    !in_transmission_range(sc, f, v))
                    continue;
                double r_in = pair_rate(sc, u.id, fid, sc.rates.pcr_bps);
                double r_out = pair_rate(sc, fid, v.id, sc.rates.pcr_bps);
                double t = d_f / r_in + d_f / r_out;
                if (hp.relay < 0 || t < hp.delivery_s) {
                    hp.relay = fid;
                    hp.delivery_s = t;
                }
            }
            if (hp.relay >= 0 && hp.delivery_s < plan.subframe_s &&
                hp.delivery_s < hp.direct_s) {
                hp.cooperate = true;
                hp.leftover_s = plan.subframe_s - hp.delivery_s;
                const Node& relay = sc.node(hp.relay);
                if (hp.relay != bs &&
                    in_transmission_range(sc, relay, sc.node(bs)))
                    hp.secondary_rate_bps =
                        pair_rate(sc, hp.relay, bs, sc.rates.cr_bps);
                frame_bits += hp.leftover_s * hp.secondary_rate_bps;
            }
            plan.hops.push_back(hp);
        }
        plan.secondary_bits = frame_bits * plan.frames_counted;
        total_bits += plan.secondary_bits;
        rep.sessions.push_back(std::move(plan));
    }
    rep.active_bps = total_bits / rep.T;
    return rep;
}

}  // namespace cchn
