#ifndef CCHN_H
#define CCHN_H

/* C interface to the cooperative spectrum planning toolkit. All functions
 * return a status code; output strings are heap-allocated, owned by the
 * caller, and released with cchn_string_free. On a non-OK status the
 * thread-local message from cchn_last_error describes the failure. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cchn_status {
    CCHN_OK = 0,
    CCHN_E_INVALID = 1,  /* bad argument, failed validation */
    CCHN_E_PARSE = 2,    /* malformed JSON or dump text */
    CCHN_E_GUARD = 3,    /* instance too large for the requested mode */
    CCHN_E_SOLVER = 4,   /* solver could not certify a result */
    CCHN_E_INTERNAL = 5  /* unexpected failure */
} cchn_status;

const char* cchn_version(void);

/* Message for the most recent failure on this thread; empty if none. */
const char* cchn_last_error(void);

void cchn_string_free(char* s);

typedef struct cchn_scenario cchn_scenario;

/* Scenario construction. options_json for the grid generator (all fields
 * optional): {"spacing_m":200,"alpha":1,"rho":1,"sessions":5,"two_hop_s4":false,
 * "lengths_s":[30,30,30,60,60],"volume_bits":2e7,"rate_cr_bps":3e6,
 * "rate_pcr_bps":3e6,"rate_primary_bps":3e6,"llc_frame_s":0.01}. */
cchn_status cchn_scenario_parse(const char* json_text, cchn_scenario** out);
cchn_status cchn_scenario_grid(const char* options_json, cchn_scenario** out);
cchn_status cchn_scenario_toy(cchn_scenario** out);
cchn_status cchn_scenario_to_json(const cchn_scenario* sc, char** out_json);
void cchn_scenario_free(cchn_scenario* sc);

/* Link table and conflict graph dumps (plain text round-trip formats). */
cchn_status cchn_links_text(const cchn_scenario* sc, char** out_text);
cchn_status cchn_graph_text(const cchn_scenario* sc, char** out_text);
cchn_status cchn_graph_stats(const cchn_scenario* sc, int* out_vertices,
                             long long* out_edges);

/* Maximal independent sets. mode is "exact", "sio" or "augmented". */
cchn_status cchn_mis_text(const cchn_scenario* sc, const char* mode, int budget,
                          uint64_t seed, char** out_text, int* out_count);

/* Joint selection / routing / scheduling optimum. options_json (all optional):
 * {"mis_mode":"augmented","budget":500,"seed":1,"branch_and_bound":false,
 *  "theta_guard":12,"tolerance":1e-6,"include_flows":false}.
 * The report carries objective, per-session selection and completion times,
 * schedule metadata, and the idle / expected throughput blend. */
cchn_status cchn_solve_nlc(const cchn_scenario* sc, const char* options_json,
                           char** out_report_json);

/* Frame-based baseline. options_json adds {"frame_s":0.01} to the keys above
 * (mis options only steer the shared idle solve). */
cchn_status cchn_solve_llc(const cchn_scenario* sc, const char* options_json,
                           char** out_report_json);

/* Parameter sweep. spec_json: {"scenario":{...},"sweep_var":"volume_bits",
 * "values":[...],"mode":"both","mis_mode":"augmented","budget":500,"seed":1,
 * "jobs":1,"branch_and_bound":false,"theta_guard":12}. Returns the CSV and a
 * metadata JSON (version, seed, wall-clock). */
cchn_status cchn_run_experiment(const char* spec_json, char** out_csv,
                                char** out_meta_json);

/* Asymptotic bounds. params_json: one point {"n":1e4,"b":0.8,"d":0.4,"W":1,
 * "c1":1,"c2":1,"c3":1} or {"points":[...],"trials":0,"seed":1}; trials > 0
 * adds the Monte Carlo replays. Returns the CSV table. */
cchn_status cchn_scaling_eval(const char* params_json, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif
