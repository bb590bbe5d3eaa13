#include "nlc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace cchn {

namespace {

std::string strf(const char* fmt, ...) {
    char buf[96];
    va_list ap;
    va_start(ap, fmt);
    vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

// Index sets shared by the LP builder and the solution verifier.
struct Prep {
    std::vector<int> np;    // e -> link index (non-primary links, vertex order)
    int E = 0, L = 0, P = 0, M = 0, Q = 0;
    double S = 1.0;         // rate scale, bps per LP unit
    std::vector<double> chat;                 // per e: capacity / S
    std::vector<std::vector<int>> q_with_e;   // per e: MIS ids containing e
    std::vector<std::vector<int>> q_not_part; // per p: MIS ids without the session
    std::vector<int> svert;                   // per p: session vertex
    std::vector<std::vector<int>> in_e;       // per p: PU-related in-link e ids
    std::vector<std::vector<int>> out_e;      // per p: PU-related out-link e ids
    std::map<int, std::vector<int>> cr_out;   // facility -> outgoing CR e ids
    std::map<int, std::vector<int>> cr_in;    // facility -> incoming CR e ids
    std::vector<int> cr_links;                // e ids of CR links
    std::vector<int> facilities;
    int bs = -1;
};

Prep make_prep(const NlcInstance& inst) {
    Prep pp;
    pp.bs = inst.sc.base_station();
    pp.facilities = inst.sc.facilities();
    pp.L = static_cast<int>(inst.flows.size());
    pp.P = inst.num_sessions();
    pp.M = inst.num_intervals();
    pp.Q = static_cast<int>(inst.mis.size());
    for (size_t i = 0; i < inst.links.size(); ++i)
        if (inst.links[i].kind != LinkKind::Primary)
            pp.np.push_back(static_cast<int>(i));
    pp.E = static_cast<int>(pp.np.size());
    for (int e = 0; e < pp.E; ++e)
        if (inst.graph.link_vertex.at(pp.np[e]) != e)
            throw ValidationError("conflict graph vertex order mismatch");

    pp.S = 0.0;
    for (int e = 0; e < pp.E; ++e)
        pp.S = std::max(pp.S, inst.links[pp.np[e]].capacity_bps);
    if (pp.S <= 0.0) pp.S = 1.0;

    pp.chat.resize(pp.E);
    pp.q_with_e.resize(pp.E);
    for (int e = 0; e < pp.E; ++e) {
        const Link& l = inst.links[pp.np[e]];
        pp.chat[e] = l.capacity_bps / pp.S;
        for (int q = 0; q < pp.Q; ++q)
            if (inst.mis.set_contains(q, e)) pp.q_with_e[e].push_back(q);
        if (l.kind == LinkKind::Cr) {
            pp.cr_links.push_back(e);
            pp.cr_out[l.tx].push_back(e);
            pp.cr_in[l.rx].push_back(e);
        }
    }

    pp.q_not_part.resize(pp.P);
    pp.svert.resize(pp.P);
    pp.in_e.resize(pp.P);
    pp.out_e.resize(pp.P);
    for (int p = 0; p < pp.P; ++p) {
        const PrimarySession& s = inst.session_at(p);
        pp.svert[p] = inst.graph.session_vertex.at(s.id);
        for (int q = 0; q < pp.Q; ++q)
            if (!inst.mis.set_contains(q, pp.svert[p])) pp.q_not_part[p].push_back(q);
        for (int e = 0; e < pp.E; ++e) {
            const Link& l = inst.links[pp.np[e]];
            if (l.session_id != s.id) continue;
            if (l.kind == LinkKind::PuRelatedIn) pp.in_e[p].push_back(e);
            if (l.kind == LinkKind::PuRelatedOut) pp.out_e[p].push_back(e);
        }
    }
    return pp;
}

// Cooperation-incurred share of interval m for session p: the (6) right side
// without the theta factor, in seconds.
double coop_cap_s(const NlcInstance& inst, int p, int m) {
    double tp = inst.session_at(p).length_s;
    if (tp < inst.t[m]) return 0.0;
    return std::min(tp - inst.t[m], inst.delta(m));
}

// Shared builder. Exactly one of `theta` (fixed selection) and `fixed`
// (branch-and-bound relaxation, entries -1/0/1 with theta as [0,1] variables)
// is non-null.
//
// Optimum-preserving presolve, replayed in full by verify_nlc_solution:
//  - (11)/(14) and the PU-related zero-forcings pin variables instead of rows;
//  - primary flows of unselected sessions are pinned (they never help the
//    objective: dropping them keeps every remaining constraint satisfied);
//  - flows on links no MIS covers are pinned, since their schedule rows cap
//    them at zero anyway; a selected session whose in-links or out-links are
//    all uncovered marks the model trivially infeasible under fixed theta;
//  - lambda is pinned where (5) or (6) has a structurally zero right side,
//    and bounded by delta_m/T elsewhere;
//  - a (6) row equal to its (5) row is dropped, only under fixed theta;
//  - a (35) row is dropped when its flow side is entirely pinned or when the
//    following interval is empty, which makes the next row imply it.
NlcLpModel build_model(const NlcInstance& inst, const std::vector<uint8_t>* theta,
                       const std::vector<int>* fixed) {
    Prep pp = make_prep(inst);
    NlcLpModel md;
    md.E = pp.E;
    md.L = pp.L;
    md.P = pp.P;
    md.M = pp.M;
    md.Q = pp.Q;
    md.rate_scale = pp.S;
    LinearProgram& lp = md.lp;
    const double T = inst.control.T;
    const bool relax = fixed != nullptr;

    // -1 unknown (relaxation only), else 0/1.
    auto known = [&](int p) -> int {
        return theta ? static_cast<int>((*theta)[p]) : (*fixed)[p];
    };

    md.vy0 = 0;
    for (int l = 0; l < pp.L; ++l) {
        int v = lp.add_var(strf("Y%d", inst.flows[l]));
        lp.set_obj(v, 1.0);
    }

    auto uncovered = [&](int e) { return pp.q_with_e[e].empty(); };

    md.vf0 = lp.num_vars();
    for (int l = 0; l < pp.L; ++l)
        for (int e = 0; e < pp.E; ++e) {
            const Link& lk = inst.links[pp.np[e]];
            bool pin = lk.kind != LinkKind::Cr || lk.tx == pp.bs ||
                       lk.rx == inst.flows[l] || uncovered(e);
            lp.add_var(strf("f%d:%d>%d", inst.flows[l], lk.tx, lk.rx), 0.0,
                       pin ? 0.0 : kInf);
        }

    md.vfp0 = lp.num_vars();
    for (int p = 0; p < pp.P; ++p) {
        int sid = inst.session_at(p).id;
        for (int e = 0; e < pp.E; ++e) {
            const Link& lk = inst.links[pp.np[e]];
            bool pin = (lk.kind != LinkKind::Cr && lk.session_id != sid) ||
                       known(p) == 0 || uncovered(e);
            lp.add_var(strf("fp%d:%d>%d", sid, lk.tx, lk.rx), 0.0,
                       pin ? 0.0 : kInf);
        }
    }

    // A selected session whose volume cannot enter or leave the secondary
    // network makes the whole model infeasible; settle that without an LP.
    if (!relax)
        for (int p = 0; p < pp.P; ++p) {
            if (known(p) == 0 || inst.session_at(p).volume_bits <= 0.0) continue;
            bool can_in = false, can_out = false;
            for (int e : pp.in_e[p]) can_in = can_in || !uncovered(e);
            for (int e : pp.out_e[p]) can_out = can_out || !uncovered(e);
            if (!can_in || !can_out) md.trivially_infeasible = true;
        }

    // lambda pins: empty intervals and structurally zero (6) right sides.
    std::vector<uint8_t> lam_pin(static_cast<size_t>(pp.M) * pp.Q, 0);
    for (int m = 0; m < pp.M; ++m)
        if (inst.delta(m) <= 0.0)
            for (int q = 0; q < pp.Q; ++q) lam_pin[m * pp.Q + q] = 1;
    for (int p = 0; p < pp.P; ++p)
        for (int m = 0; m < pp.M; ++m)
            if (known(p) == 0 || coop_cap_s(inst, p, m) <= 0.0)
                for (int q : pp.q_not_part[p]) lam_pin[m * pp.Q + q] = 1;

    md.vlam0 = lp.num_vars();
    for (int m = 0; m < pp.M; ++m)
        for (int q = 0; q < pp.Q; ++q) {
            double ub = lam_pin[m * pp.Q + q] ? 0.0 : inst.delta(m) / T;
            lp.add_var(strf("l%d:%d", m, q), 0.0, ub);
        }

    if (relax) {
        md.vtheta0 = lp.num_vars();
        for (int p = 0; p < pp.P; ++p) {
            int v = (*fixed)[p];
            lp.add_var(strf("th%d", inst.session_at(p).id), v < 0 ? 0.0 : v,
                       v < 0 ? 1.0 : v);
        }
    }

    // (10) flow out of each edge router equals its throughput.
    for (int l = 0; l < pp.L; ++l) {
        int r = lp.add_row(Rel::Eq, 0.0);
        auto it = pp.cr_out.find(inst.flows[l]);
        if (it != pp.cr_out.end())
            for (int e : it->second) lp.add_term(r, md.f_var(l, e), 1.0);
        lp.add_term(r, md.y_var(l), -1.0);
    }

    // (12) secondary flow conservation at every other CR router.
    for (int l = 0; l < pp.L; ++l)
        for (int i : pp.facilities) {
            if (i == pp.bs || i == inst.flows[l]) continue;
            int r = lp.add_row(Rel::Eq, 0.0);
            auto ot = pp.cr_out.find(i);
            if (ot != pp.cr_out.end())
                for (int e : ot->second)
                    if (inst.links[pp.np[e]].rx != inst.flows[l])
                        lp.add_term(r, md.f_var(l, e), 1.0);
            auto in = pp.cr_in.find(i);
            if (in != pp.cr_in.end())
                for (int e : in->second)
                    if (inst.links[pp.np[e]].tx != pp.bs)
                        lp.add_term(r, md.f_var(l, e), -1.0);
        }

    // (16) selected sessions hand their volume to the secondary network.
    for (int p = 0; p < pp.P; ++p) {
        if (known(p) == 0) continue;
        double dhat = inst.session_at(p).volume_bits / (T * pp.S);
        int r = lp.add_row(Rel::Ge, relax ? 0.0 : dhat);
        for (int e : pp.in_e[p]) lp.add_term(r, md.fp_var(p, e), 1.0);
        if (relax) lp.add_term(r, md.theta_var(p), -dhat);
    }

    // (17) primary flow conservation at every facility.
    for (int p = 0; p < pp.P; ++p) {
        if (known(p) == 0) continue;
        for (int i : pp.facilities) {
            int r = lp.add_row(Rel::Eq, 0.0);
            auto ot = pp.cr_out.find(i);
            if (ot != pp.cr_out.end())
                for (int e : ot->second) lp.add_term(r, md.fp_var(p, e), 1.0);
            for (int e : pp.out_e[p])
                if (inst.links[pp.np[e]].tx == i) lp.add_term(r, md.fp_var(p, e), 1.0);
            auto in = pp.cr_in.find(i);
            if (in != pp.cr_in.end())
                for (int e : in->second) lp.add_term(r, md.fp_var(p, e), -1.0);
            for (int e : pp.in_e[p])
                if (inst.links[pp.np[e]].rx == i) lp.add_term(r, md.fp_var(p, e), -1.0);
        }
    }

    // (5) per interval, scheduled shares fit the interval.
    for (int m = 0; m < pp.M; ++m) {
        if (inst.delta(m) <= 0.0) continue;
        int r = lp.add_row(Rel::Le, inst.delta(m) / T);
        for (int q = 0; q < pp.Q; ++q) lp.add_term(r, md.lam_var(m, q), 1.0);
    }

    // (6) MISs without the session run only in its cooperation-incurred share.
    for (int p = 0; p < pp.P; ++p) {
        if (known(p) == 0 || pp.q_not_part[p].empty()) continue;
        for (int m = 0; m < pp.M; ++m) {
            double cap = coop_cap_s(inst, p, m);
            if (inst.delta(m) <= 0.0 || cap <= 0.0) continue;
            if (!relax && cap >= inst.delta(m)) continue;  // equals the (5) row
            int r = lp.add_row(Rel::Le, relax ? 0.0 : cap / T);
            for (int q : pp.q_not_part[p]) lp.add_term(r, md.lam_var(m, q), 1.0);
            if (relax) lp.add_term(r, md.theta_var(p), -cap / T);
        }
    }

    // (35) cumulative primary flow fits the schedule of the first p intervals.
    for (int p = 0; p < pp.P; ++p) {
        bool any = false;
        for (int k = 0; k <= p; ++k) any = any || known(k) != 0;
        if (!any) continue;
        if (p + 1 < pp.P && inst.delta(p + 1) <= 0.0) continue;
        for (int e : pp.cr_links) {
            int r = lp.add_row(Rel::Le, 0.0);
            for (int k = 0; k <= p; ++k)
                if (known(k) != 0) lp.add_term(r, md.fp_var(k, e), 1.0);
            for (int m = 0; m <= p; ++m)
                for (int q : pp.q_with_e[e])
                    lp.add_term(r, md.lam_var(m, q), -pp.chat[e]);
        }
    }

    // (36) total flow on each CR link fits the whole schedule.
    for (int e : pp.cr_links) {
        const Link& lk = inst.links[pp.np[e]];
        int r = lp.add_row(Rel::Le, 0.0);
        for (int p = 0; p < pp.P; ++p)
            if (known(p) != 0) lp.add_term(r, md.fp_var(p, e), 1.0);
        for (int l = 0; l < pp.L; ++l)
            if (lk.tx != pp.bs && lk.rx != inst.flows[l])
                lp.add_term(r, md.f_var(l, e), 1.0);
        for (int m = 0; m < pp.M; ++m)
            for (int q : pp.q_with_e[e])
                lp.add_term(r, md.lam_var(m, q), -pp.chat[e]);
    }

    // (9)/(37) PU-related links of session p fit its first p intervals.
    for (int p = 0; p < pp.P; ++p) {
        if (known(p) == 0) continue;
        for (const auto& side : {pp.in_e[p], pp.out_e[p]})
            for (int e : side) {
                if (uncovered(e)) continue;  // flow pinned, row trivial
                int r = lp.add_row(Rel::Le, 0.0);
                lp.add_term(r, md.fp_var(p, e), 1.0);
                for (int m = 0; m <= p; ++m)
                    for (int q : pp.q_with_e[e])
                        lp.add_term(r, md.lam_var(m, q), -pp.chat[e]);
            }
    }

    return md;
}

}  // namespace

int NlcInstance::num_links() const {
    int e = 0;
    for (const auto& l : links)
        if (l.kind != LinkKind::Primary) ++e;
    return e;
}

ControlInterval select_control_interval(const Scenario& sc,
                                        const std::vector<Link>& links,
                                        const ConflictGraph& g) {
    ControlInterval ci;
    int bs = sc.base_station();
    std::vector<int> bs_vertices;
    for (const auto& [li, v] : g.link_vertex) {
        const Link& l = links[static_cast<size_t>(li)];
        if (l.tx == bs || l.rx == bs) bs_vertices.push_back(v);
    }
    for (const auto& [sid, sv] : g.session_vertex)
        for (int v : bs_vertices)
            if (g.adjacent(sv, v)) {
                ci.bs_conflicting.push_back(sid);
                break;
            }
    double best = kInf;
    if (!ci.bs_conflicting.empty()) {
        for (const auto& s : sc.sessions)
            if (std::find(ci.bs_conflicting.begin(), ci.bs_conflicting.end(), s.id) !=
                ci.bs_conflicting.end())
                best = std::min(best, s.length_s);
        ci.T = best;
        ci.from_bs_conflict = true;
    } else if (!sc.sessions.empty()) {
        for (const auto& s : sc.sessions) best = std::min(best, s.length_s);
        ci.T = best;
        ci.fallback_all_sessions = true;
    } else {
        ci.T = 1.0;
        ci.fallback_unit = true;
    }
    return ci;
}

NlcInstance build_nlc_instance(const Scenario& sc, MisMode mode, int budget,
                               uint64_t seed) {
    validate(sc);
    NlcInstance inst;
    inst.sc = sc;
    inst.links = derive_links(inst.sc);
    inst.graph = build_conflict_graph(inst.sc, inst.links);
    inst.flows = inst.sc.edge_routers();
    switch (mode) {
        case MisMode::Exact:
            inst.mis = enumerate_all_mis(inst.graph);
            break;
        case MisMode::Sio:
            inst.mis = sio_mis(inst.sc, inst.links, inst.graph, inst.flows,
                               {inst.sc.base_station()}, budget, seed);
            break;
        case MisMode::Augmented:
            inst.mis = augmented_sio(inst.sc, inst.links, inst.graph, budget, seed,
                                     12, &inst.mis_stats);
            break;
    }
    inst.control = select_control_interval(inst.sc, inst.links, inst.graph);

    inst.order.resize(inst.sc.sessions.size());
    std::iota(inst.order.begin(), inst.order.end(), 0);
    std::sort(inst.order.begin(), inst.order.end(), [&](int a, int b) {
        const auto& sa = inst.sc.sessions[static_cast<size_t>(a)];
        const auto& sb = inst.sc.sessions[static_cast<size_t>(b)];
        if (sa.length_s != sb.length_s) return sa.length_s < sb.length_s;
        return sa.id < sb.id;
    });

    inst.t.push_back(0.0);
    for (int p = 0; p < inst.num_sessions(); ++p)
        inst.t.push_back(std::min(inst.session_at(p).length_s / inst.sc.alpha,
                                  inst.control.T));
    inst.t.push_back(inst.control.T);
    return inst;
}

NlcLpModel build_nlc_lp(const NlcInstance& inst, const std::vector<uint8_t>& theta) {
    return build_model(inst, &theta, nullptr);
}

NlcLpModel build_nlc_lp_relaxed(const NlcInstance& inst, const std::vector<int>& fixed) {
    return build_model(inst, nullptr, &fixed);
}

NlcThetaSolution decode_nlc_solution(const NlcInstance& inst, const NlcLpModel& md,
                                     const std::vector<uint8_t>& theta,
                                     const LpSolution& sol) {
    NlcThetaSolution out;
    out.theta = theta;
    out.objective_bps = sol.objective * md.rate_scale;
    out.iterations = sol.iterations;
    out.rows = md.lp.num_rows();
    out.cols = md.lp.num_vars();
    out.upsilon_bps.resize(md.L);
    for (int l = 0; l < md.L; ++l)
        out.upsilon_bps[l] = sol.x[static_cast<size_t>(md.y_var(l))] * md.rate_scale;
    out.f_bps.resize(static_cast<size_t>(md.L) * md.E);
    for (size_t i = 0; i < out.f_bps.size(); ++i)
        out.f_bps[i] = sol.x[md.vf0 + i] * md.rate_scale;
    out.fp_bps.resize(static_cast<size_t>(md.P) * md.E);
    for (size_t i = 0; i < out.fp_bps.size(); ++i)
        out.fp_bps[i] = sol.x[md.vfp0 + i] * md.rate_scale;
    out.lam.resize(static_cast<size_t>(md.M) * md.Q);
    for (size_t i = 0; i < out.lam.size(); ++i) out.lam[i] = sol.x[md.vlam0 + i];
    out.completion_s = completion_times(inst, out);
    return out;
}

std::vector<std::optional<double>> completion_times(const NlcInstance& inst,
                                                    const NlcThetaSolution& s) {
    Prep pp = make_prep(inst);
    const double T = inst.control.T;
    std::vector<std::optional<double>> out(pp.P);
    for (int p = 0; p < pp.P; ++p) {
        if (!s.theta[p]) continue;
        double d = inst.session_at(p).volume_bits;
        for (int j = 1; j <= pp.P + 1; ++j) {
            double delivered = 0.0;
            for (int e : pp.in_e[p]) {
                double sched = 0.0;  // bps the schedule offers link e by t_j
                for (int m = 0; m < j; ++m)
                    for (int q : pp.q_with_e[e])
                        sched += s.lam[m * pp.Q + q] * pp.chat[e] * pp.S;
                delivered += T * std::min(s.fp_bps[p * pp.E + e], sched);
            }
            if (delivered + 1e-9 * (1.0 + d) >= d) {
                out[p] = inst.t[j];
                break;
            }
        }
    }
    return out;
}

NlcCheck verify_nlc_solution(const NlcInstance& inst, const std::vector<uint8_t>& theta,
                             const NlcThetaSolution& s, double tol) {
    Prep pp = make_prep(inst);
    const double T = inst.control.T;
    NlcCheck chk;
    auto hit = [&](double viol, const std::string& what) {
        if (viol > chk.max_violation) {
            chk.max_violation = viol;
            chk.detail = what;
        }
    };
    auto fhat = [&](int l, int e) { return s.f_bps[l * pp.E + e] / pp.S; };
    auto fphat = [&](int p, int e) { return s.fp_bps[p * pp.E + e] / pp.S; };
    auto lam = [&](int m, int q) { return s.lam[m * pp.Q + q]; };
    // Cumulative scheduled capacity of link e over intervals 1..j, scaled.
    auto sched = [&](int e, int j) {
        double v = 0.0;
        for (int m = 0; m < j; ++m)
            for (int q : pp.q_with_e[e]) v += lam(m, q) * pp.chat[e];
        return v;
    };

    // Bounds and zero-forcings.
    for (int l = 0; l < pp.L; ++l) {
        hit(-s.upsilon_bps[l] / pp.S, strf("Y>=0 l=%d", l));
        for (int e = 0; e < pp.E; ++e) {
            hit(-fhat(l, e), strf("f>=0 l=%d e=%d", l, e));
            const Link& lk = inst.links[pp.np[e]];
            if (lk.kind != LinkKind::Cr || lk.tx == pp.bs || lk.rx == inst.flows[l])
                hit(std::fabs(fhat(l, e)), strf("f zero-forced l=%d e=%d", l, e));
        }
    }
    for (int p = 0; p < pp.P; ++p) {
        int sid = inst.session_at(p).id;
        for (int e = 0; e < pp.E; ++e) {
            hit(-fphat(p, e), strf("fp>=0 p=%d e=%d", p, e));
            const Link& lk = inst.links[pp.np[e]];
            if (lk.kind != LinkKind::Cr && lk.session_id != sid)
                hit(std::fabs(fphat(p, e)), strf("fp cross-session p=%d e=%d", p, e));
            if (!theta[p]) hit(std::fabs(fphat(p, e)), strf("fp unselected p=%d e=%d", p, e));
        }
    }
    for (int m = 0; m < pp.M; ++m)
        for (int q = 0; q < pp.Q; ++q) {
            hit(-lam(m, q), strf("lam>=0 m=%d q=%d", m, q));
            hit(lam(m, q) - 1.0, strf("lam<=1 m=%d q=%d", m, q));
        }

    // (10)-(14) secondary flow structure.
    for (int l = 0; l < pp.L; ++l) {
        int src = inst.flows[l];
        double out = 0.0, into_src = 0.0, into_bs = 0.0, out_bs = 0.0;
        for (int e : pp.cr_links) {
            const Link& lk = inst.links[pp.np[e]];
            if (lk.tx == src) out += fhat(l, e);
            if (lk.rx == src) into_src += fhat(l, e);
            if (lk.rx == pp.bs) into_bs += fhat(l, e);
            if (lk.tx == pp.bs) out_bs += fhat(l, e);
        }
        hit(std::fabs(out - s.upsilon_bps[l] / pp.S), strf("(10) l=%d", l));
        hit(std::fabs(into_src), strf("(11) l=%d", l));
        hit(std::fabs(into_bs - s.upsilon_bps[l] / pp.S), strf("(13) l=%d", l));
        hit(std::fabs(out_bs), strf("(14) l=%d", l));
        for (int i : pp.facilities) {
            if (i == pp.bs || i == src) continue;
            double bal = 0.0;
            for (int e : pp.cr_links) {
                const Link& lk = inst.links[pp.np[e]];
                if (lk.tx == i) bal += fhat(l, e);
                if (lk.rx == i) bal -= fhat(l, e);
            }
            hit(std::fabs(bal), strf("(12) l=%d i=%d", l, i));
        }
    }

    // (16)/(17) primary flow structure.
    for (int p = 0; p < pp.P; ++p) {
        double dhat = inst.session_at(p).volume_bits / (T * pp.S);
        double in = 0.0;
        for (int e : pp.in_e[p]) in += fphat(p, e);
        hit(theta[p] * dhat - in, strf("(16) p=%d", p));
        for (int i : pp.facilities) {
            double bal = 0.0;
            for (int e : pp.cr_links) {
                const Link& lk = inst.links[pp.np[e]];
                if (lk.tx == i) bal += fphat(p, e);
                if (lk.rx == i) bal -= fphat(p, e);
            }
            for (int e : pp.out_e[p])
                if (inst.links[pp.np[e]].tx == i) bal += fphat(p, e);
            for (int e : pp.in_e[p])
                if (inst.links[pp.np[e]].rx == i) bal -= fphat(p, e);
            hit(std::fabs(bal), strf("(17) p=%d i=%d", p, i));
        }
    }

    // (5)/(6) scheduling shares.
    for (int m = 0; m < pp.M; ++m) {
        double sum = 0.0;
        for (int q = 0; q < pp.Q; ++q) sum += lam(m, q);
        hit(sum - inst.delta(m) / T, strf("(5) m=%d", m));
    }
    for (int p = 0; p < pp.P; ++p)
        for (int m = 0; m < pp.M; ++m) {
            double rhs = theta[p] ? coop_cap_s(inst, p, m) / T : 0.0;
            double sum = 0.0;
            for (int q : pp.q_not_part[p]) sum += lam(m, q);
            hit(sum - rhs, strf("(6) p=%d m=%d", p, m));
        }

    // (35)/(36) on CR links, (9)/(37)-(39) on PU-related links.
    for (int e : pp.cr_links) {
        double cum = 0.0;
        for (int p = 0; p < pp.P; ++p) {
            cum += fphat(p, e);
            hit(cum - sched(e, p + 1), strf("(35) e=%d p=%d", e, p));
        }
        double total = cum;
        for (int l = 0; l < pp.L; ++l) total += fhat(l, e);
        hit(total - sched(e, pp.M), strf("(36) e=%d", e));
    }
    for (int p = 0; p < pp.P; ++p)
        for (const auto& side : {pp.in_e[p], pp.out_e[p]})
            for (int e : side) {
                hit(fphat(p, e) - sched(e, p + 1), strf("(9)/(37) p=%d e=%d", p, e));
                hit(fphat(p, e) - sched(e, pp.M), strf("(38)/(39) p=%d e=%d", p, e));
            }

    // Objective consistency.
    double tot = 0.0;
    for (int l = 0; l < pp.L; ++l) tot += s.upsilon_bps[l];
    hit(std::fabs(tot - s.objective_bps) / pp.S / (1.0 + std::fabs(s.objective_bps / pp.S)),
        "objective");

    chk.ok = chk.max_violation <= tol;
    return chk;
}

namespace {

double tie_eps(double best, double rel) { return rel * (1.0 + std::fabs(best)); }

NlcResult solve_exhaustive(const NlcInstance& inst, const NlcOptions& opt) {
    int P = inst.num_sessions();
    NlcResult res;
    res.theta_space = 1ull << P;
    bool have = false;
    double bestobj = 0.0;
    for (uint64_t k = 0; k < res.theta_space; ++k) {
        std::vector<uint8_t> theta(static_cast<size_t>(P));
        for (int p = 0; p < P; ++p) theta[p] = (k >> (P - 1 - p)) & 1u;
        NlcLpModel md = build_nlc_lp(inst, theta);
        if (md.trivially_infeasible) {
            ++res.lp_solved;
            continue;
        }
        LpSolution sol = solve_lp(md.lp, opt.lp);
        ++res.lp_solved;
        res.lp_iterations += sol.iterations;
        if (sol.status == LpStatus::Infeasible) continue;
        if (sol.status == LpStatus::Unbounded)
            throw SolverError("session selection LP unbounded");
        double obj = sol.objective * md.rate_scale;
        if (!have || obj > bestobj + tie_eps(bestobj, opt.tie_rel_tol)) {
            NlcThetaSolution dec = decode_nlc_solution(inst, md, theta, sol);
            if (opt.verify) {
                NlcCheck chk = verify_nlc_solution(inst, theta, dec, opt.verify_tol);
                if (!chk.ok)
                    throw SolverError("solution replay failed: " + chk.detail +
                                      strf(" viol=%.3e", chk.max_violation));
            }
            res.best = std::move(dec);
            bestobj = obj;
            have = true;
        }
    }
    if (!have) throw SolverError("no feasible session selection");
    return res;
}

struct BnbNode {
    double bound = kInf;
    uint64_t seq = 0;
    std::vector<int> fixed;
};

struct BnbOrder {
    bool operator()(const BnbNode& a, const BnbNode& b) const {
        if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
        return a.seq > b.seq;                              // then FIFO
    }
};

NlcResult solve_bnb(const NlcInstance& inst, const NlcOptions& opt) {
    int P = inst.num_sessions();
    NlcResult res;
    res.theta_space = 1ull << P;
    bool have = false;
    double bestobj = 0.0;
    uint64_t seq = 0;
    std::priority_queue<BnbNode, std::vector<BnbNode>, BnbOrder> open;
    open.push({kInf, seq++, std::vector<int>(static_cast<size_t>(P), -1)});
    while (!open.empty()) {
        BnbNode node = open.top();
        open.pop();
        if (have && node.bound <= bestobj + tie_eps(bestobj, opt.tie_rel_tol)) continue;
        NlcLpModel md = build_nlc_lp_relaxed(inst, node.fixed);
        LpSolution sol = solve_lp(md.lp, opt.lp);
        ++res.lp_solved;
        res.lp_iterations += sol.iterations;
        if (sol.status == LpStatus::Infeasible) continue;
        if (sol.status == LpStatus::Unbounded)
            throw SolverError("session selection relaxation unbounded");
        double bound = sol.objective * md.rate_scale;
        if (have && bound <= bestobj + tie_eps(bestobj, opt.tie_rel_tol)) continue;

        int frac = -1;
        double best_gap = 1.0;
        for (int p = 0; p < P; ++p) {
            if (node.fixed[p] >= 0) continue;
            double v = sol.x[static_cast<size_t>(md.theta_var(p))];
            double gap = std::fabs(v - std::round(v));
            if (gap > 1e-9 && std::fabs(v - 0.5) < best_gap) {
                best_gap = std::fabs(v - 0.5);
                frac = p;
            }
        }
        if (frac < 0) {
            // Integral: evaluate through the canonical fixed-theta path.
            std::vector<uint8_t> theta(static_cast<size_t>(P));
            for (int p = 0; p < P; ++p)
                theta[p] = node.fixed[p] >= 0
                               ? static_cast<uint8_t>(node.fixed[p])
                               : static_cast<uint8_t>(
                                     std::lround(sol.x[static_cast<size_t>(md.theta_var(p))]));
            NlcLpModel fmd = build_nlc_lp(inst, theta);
            if (fmd.trivially_infeasible) {
                ++res.lp_solved;
                continue;
            }
            LpSolution fsol = solve_lp(fmd.lp, opt.lp);
            ++res.lp_solved;
            res.lp_iterations += fsol.iterations;
            if (fsol.status != LpStatus::Optimal) continue;
            double obj = fsol.objective * fmd.rate_scale;
            if (!have || obj > bestobj + tie_eps(bestobj, opt.tie_rel_tol)) {
                NlcThetaSolution dec = decode_nlc_solution(inst, fmd, theta, fsol);
                if (opt.verify) {
                    NlcCheck chk = verify_nlc_solution(inst, theta, dec, opt.verify_tol);
                    if (!chk.ok)
                        throw SolverError("solution replay failed: " + chk.detail);
                }
                res.best = std::move(dec);
                bestobj = obj;
                have = true;
            }
            continue;
        }
        for (int v = 0; v <= 1; ++v) {
            BnbNode child;
            child.bound = bound;
            child.seq = seq++;
            child.fixed = node.fixed;
            child.fixed[static_cast<size_t>(frac)] = v;
            open.push(std::move(child));
        }
    }
    if (!have) throw SolverError("no feasible session selection");
    return res;
}

}  // namespace

NlcResult solve_nlc(const NlcInstance& inst, const NlcOptions& opt) {
    if (inst.num_sessions() > opt.theta_guard)
        throw GuardError(strf("session count %d exceeds selection guard %d",
                              inst.num_sessions(), opt.theta_guard));
    return opt.branch_and_bound ? solve_bnb(inst, opt) : solve_exhaustive(inst, opt);
}

}  // namespace cchn
