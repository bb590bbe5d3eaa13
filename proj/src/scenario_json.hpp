#ifndef CCHN_SCENARIO_JSON_HPP
#define CCHN_SCENARIO_JSON_HPP

#include <string>

#include "net_model.hpp"

namespace cchn {

// Serializes a scenario to the versioned JSON schema (units live in the field
// names: pos_m, length_s, volume_bits, rates_bps, tx_power_w).
std::string scenario_to_json(const Scenario& sc);

// Parses and validates a scenario. Throws ParseError on malformed JSON or
// wrong field types, ValidationError on schema or invariant violations.
Scenario scenario_from_json(const std::string& text);

// Session layout knobs for the canonical 5x5 grid scenario.
struct GridSessionSpec {
    int count = 5;            // canonical sessions, in order, 0..5
    bool two_hop_s4 = false;  // route session 4 through its midpoint relay
    std::vector<double> lengths_s = {30.0, 30.0, 30.0, 60.0, 60.0};
    double volume_bits = 2e7;
};

// 24 CR routers + central base station on a 5x5 grid with the given spacing;
// the opposite-corner routers are the edge routers. Sessions sit between grid
// cells: source and destination one spacing apart, each half a diagonal from
// the nearest facilities. Throws ValidationError on bad spec values.
Scenario make_grid_scenario(double spacing_m = 200.0, double alpha = 1.0,
                            double rho = 1.0, const Rates& rates = Rates{},
                            const GridSessionSpec& sessions = GridSessionSpec{});

// Four facilities in a line one transmission range apart (the last one the
// base station, the first the edge router) plus one primary pair parked a
// unit above the line. Unit-range radio: R_T = 1, R_I = 2.
Scenario make_toy_scenario();

}  // namespace cchn

#endif
