#include "doctest.h"
#include "perc/json_io.hpp"

using namespace perc;

TEST_CASE("RunSpec round trip") {
    RunSpec spec{"simulate theta", Json{{"p", 0.7}, {"seed", 7}, {"lattice", "square"}}, "out.jsonl"};
    RunSpec back = run_spec_from_json(Json::parse(to_json(spec).dump()));
    CHECK(back.command == spec.command);
    CHECK(back.params == spec.params);
    CHECK(back.output == spec.output);
    CHECK(back.params.dump() == R"({"p":0.7,"seed":7,"lattice":"square"})");
}

TEST_CASE("exact values serialize as strings") {
    CHECK(rational_json(mpq_class(-3, 6)).dump() == R"({"num":"-1","den":"2"})");
    ExpSum f = ExpSum::constant(1) - ExpSum::exponential(1, mpq_class(3, 2));
    Json j = to_json(f);
    CHECK(j["text"] == "1 - exp(-3/2*t)");
    CHECK(j["terms"][1]["rate"] == "3/2");
    CHECK(j["terms"][1]["coefficient"] == "-1");
    Json s = to_json(maclaurin(f, 2, 0));
    CHECK(s["coefficients"][2]["value"] == "-9/8");
    ShapeSum p3;
    p3.add(2, 8, 18);
    CHECK(to_json(p3).dump().find("18*p^2*(1-p)^8") != std::string::npos);
}

TEST_CASE("edge lists by id or endpoint pair") {
    auto p = build_square_patch(2);
    VertexId o = p->origin(), r = *p->find_vertex({1, 0});
    EdgeId e = *p->find_edge(o, r);
    CHECK(edges_from_json(*p, Json::array({e})) == std::vector<EdgeId>{e});
    CHECK(edges_from_json(*p, Json::parse("[[" + std::to_string(o) + "," + std::to_string(r) + "]]")) ==
          std::vector<EdgeId>{e});
    CHECK_THROWS_AS(edges_from_json(*p, Json::parse("[[0, 24]]")), InvalidArgument);
    CHECK_THROWS_AS(edges_from_json(*p, Json::parse("{}")), InvalidArgument);
}

TEST_CASE("P-interface JSON can be read back") {
    auto p = build_square_patch(5);
    Config c = constant_config(p, Mode::bond, false);
    PInterface pi = extract_p_interface(c, cluster_of(c, p->origin()));
    Json j = to_json(*p, pi);
    CHECK(edges_from_json(*p, j["i_v"]) == pi.i_v);
    CHECK(edges_from_json(*p, j["i_o"]).empty());
}
