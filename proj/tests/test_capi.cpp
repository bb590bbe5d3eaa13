#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <string>

#include "cchn.h"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

// Takes ownership of a C string result.
std::string take(char* s) {
    REQUIRE(s != nullptr);
    std::string out(s);
    cchn_string_free(s);
    return out;
}

struct ScenarioHandle {
    cchn_scenario* sc = nullptr;
    ~ScenarioHandle() { cchn_scenario_free(sc); }
};

}  // namespace

TEST_CASE("version and error channel") {
    const char* v = cchn_version();
    REQUIRE(v != nullptr);
    CHECK(std::strlen(v) > 0);

    cchn_scenario* sc = nullptr;
    CHECK(cchn_scenario_parse("{ definitely not json", &sc) == CCHN_E_PARSE);
    CHECK(sc == nullptr);
    CHECK(std::strlen(cchn_last_error()) > 0);
}

TEST_CASE("null arguments are rejected") {
    CHECK(cchn_scenario_parse(nullptr, nullptr) == CCHN_E_INVALID);
    CHECK(cchn_scenario_toy(nullptr) == CCHN_E_INVALID);
    CHECK(cchn_links_text(nullptr, nullptr) == CCHN_E_INVALID);
    CHECK(cchn_solve_nlc(nullptr, nullptr, nullptr) == CCHN_E_INVALID);
    CHECK(cchn_scaling_eval(nullptr, nullptr) == CCHN_E_INVALID);
}

TEST_CASE("toy scenario dumps") {
    ScenarioHandle h;
    REQUIRE(cchn_scenario_toy(&h.sc) == CCHN_OK);

    char* text = nullptr;
    REQUIRE(cchn_scenario_to_json(h.sc, &text) == CCHN_OK);
    json j = json::parse(take(text));
    CHECK(j["schema_version"] == 1);

    REQUIRE(cchn_links_text(h.sc, &text) == CCHN_OK);
    CHECK(take(text).find("cr ") != std::string::npos);
    REQUIRE(cchn_graph_text(h.sc, &text) == CCHN_OK);
    CHECK(!take(text).empty());

    int vertices = 0;
    long long edges = 0;
    REQUIRE(cchn_graph_stats(h.sc, &vertices, &edges) == CCHN_OK);
    CHECK(vertices == 9);
    CHECK(edges > 0);

    int count = 0;
    REQUIRE(cchn_mis_text(h.sc, "exact", 0, 1, &text, &count) == CCHN_OK);
    CHECK(count > 0);
    CHECK(!take(text).empty());
    CHECK(cchn_mis_text(h.sc, "fancy", 0, 1, &text, &count) == CCHN_E_INVALID);
}

TEST_CASE("grid solve round trip") {
    ScenarioHandle h;
    REQUIRE(cchn_scenario_grid("{}", &h.sc) == CCHN_OK);

    char* rep = nullptr;
    REQUIRE(cchn_solve_nlc(h.sc, "{\"budget\":100,\"seed\":1}", &rep) == CCHN_OK);
    json j = json::parse(take(rep));
    CHECK(j["objective_bps"].get<double>() > 0.0);
    REQUIRE(j["sessions"].size() == 5);
    for (const auto& s : j["sessions"]) CHECK(s.contains("selected"));
    CHECK(j["q_mis"].get<int>() > 0);

    REQUIRE(cchn_solve_llc(h.sc, "{\"budget\":100}", &rep) == CCHN_OK);
    json l = json::parse(take(rep));
    CHECK(l["sessions"].size() == 5);
    CHECK(l["active_bps"].get<double>() >= 0.0);

    // Exact enumeration refuses the 45-vertex grid graph.
    CHECK(cchn_solve_nlc(h.sc, "{\"mis_mode\":\"exact\"}", &rep) == CCHN_E_GUARD);
    CHECK(std::strlen(cchn_last_error()) > 0);
}

TEST_CASE("grid generator options") {
    ScenarioHandle h;
    REQUIRE(cchn_scenario_grid(
                "{\"sessions\":3,\"volume_bits\":1e7,\"rate_cr_bps\":4e6}", &h.sc) ==
            CCHN_OK);
    char* text = nullptr;
    REQUIRE(cchn_scenario_to_json(h.sc, &text) == CCHN_OK);
    json j = json::parse(take(text));
    CHECK(j["sessions"].size() == 3);

    cchn_scenario* bad = nullptr;
    CHECK(cchn_scenario_grid("{\"sessions\":9}", &bad) == CCHN_E_INVALID);
    CHECK(cchn_scenario_grid("{oops", &bad) == CCHN_E_PARSE);
}

TEST_CASE("experiment csv is reproducible through the c api") {
    ScenarioHandle h;
    REQUIRE(cchn_scenario_grid("{\"sessions\":2}", &h.sc) == CCHN_OK);
    char* sc_json = nullptr;
    REQUIRE(cchn_scenario_to_json(h.sc, &sc_json) == CCHN_OK);
    json spec;
    spec["scenario"] = json::parse(take(sc_json));
    spec["sweep_var"] = "volume_bits";
    spec["values"] = {1e7, 2e7};
    spec["mode"] = "both";
    spec["mis_mode"] = "augmented";
    spec["budget"] = 60;
    spec["seed"] = 3;
    std::string spec_text = spec.dump();

    char* csv = nullptr;
    char* meta = nullptr;
    REQUIRE(cchn_run_experiment(spec_text.c_str(), &csv, &meta) == CCHN_OK);
    std::string csv1 = take(csv);
    std::string meta1 = take(meta);
    CHECK(csv1.find("sweep_value") != std::string::npos);
    CHECK(json::parse(meta1)["version"] == cchn_version());

    REQUIRE(cchn_run_experiment(spec_text.c_str(), &csv, &meta) == CCHN_OK);
    CHECK(take(csv) == csv1);
    cchn_string_free(meta);
}

TEST_CASE("scaling evaluation csv") {
    char* csv = nullptr;
    REQUIRE(cchn_scaling_eval("{\"n\":1e4,\"b\":0.8,\"d\":0.4,\"W\":1}", &csv) ==
            CCHN_OK);
    std::string text = take(csv);
    CHECK(text.find("regime") != std::string::npos);
    CHECK(text.find("sparse-bs") != std::string::npos);

    CHECK(cchn_scaling_eval("{\"n\":1e4,\"b\":0.2,\"d\":0.4,\"W\":1}", &csv) ==
          CCHN_E_INVALID);
}
