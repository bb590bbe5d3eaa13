#ifndef CCHN_LLC_HPP
#define CCHN_LLC_HPP

#include <vector>

#include "net_model.hpp"

namespace cchn {

// Frame-based link-level cooperation baseline: each primary session splits
// its volume evenly over 10 ms frames; per hop, the best decode-and-forward
// relay earns the frame's leftover time exclusively for its own data.
struct LlcConfig {
    double frame_s = 0.0;  // <= 0: use the scenario's llc_frame_s
};

struct LlcHopPlan {
    int hop = 0;        // index into the session path
    int relay = -1;     // facility node id, -1 when no eligible relay
    double delivery_s = 0.0;   // two-hop DF time for the frame payload
    double direct_s = 0.0;     // direct hop time for the frame payload
    bool cooperate = false;
    double leftover_s = 0.0;           // subframe length - delivery, if cooperating
    double secondary_rate_bps = 0.0;   // relay -> BS link rate, 0 if unreachable
};

struct LlcSessionPlan {
    int session_id = -1;
    int frames_total = 0;      // N = ceil(T_lp / frame)
    int frames_counted = 0;    // frames starting before min(T_lp, T)
    double frame_payload_bits = 0.0;  // d_f = D / N
    double subframe_s = 0.0;          // frame / hop count
    std::vector<LlcHopPlan> hops;
    double completion_s = 0.0;        // N * frame, invariant in D
    double secondary_bits = 0.0;      // leftover bits summed over counted frames
};

struct LlcReport {
    double T = 1.0;           // control interval, same horizon as the NLC side
    double frame_s = 0.0;
    double active_bps = 0.0;  // total leftover bits / T while PUs are active
    std::vector<LlcSessionPlan> sessions;
};

LlcReport llc_evaluate(const Scenario& sc, const LlcConfig& cfg = {});

double llc_completion_time(const PrimarySession& s, double frame_s);

}  // namespace cchn

#endif
