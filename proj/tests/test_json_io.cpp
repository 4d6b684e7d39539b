#include "ctphan/json_io.hpp"

#include "doctest.h"

using namespace ctphan;
using nlohmann::json;

namespace {

json loop4_json(int q) {
  return json::parse(R"({"v":1,"q":)" + std::to_string(q) +
                     R"(,"vertices":[0,1,2,3],
      "edges":[{"i":0,"j":1,"type":"A2"},{"i":1,"j":2,"type":"A2"},
               {"i":2,"j":3,"type":"A2"},{"i":0,"j":3,"type":"A2"}]})");
}

}  // namespace

TEST_CASE("diagram JSON round trip") {
  Diagram d = diagram_from_json(loop4_json(4), true);
  CHECK(d.q() == 4);
  CHECK(d.vertices().size() == 4);
  CHECK(d.edges().size() == 4);
  Diagram d2 = diagram_from_json(diagram_to_json(d), true);
  CHECK(d == d2);
}

TEST_CASE("diagram JSON rejects malformed input") {
  CHECK_THROWS_AS(diagram_from_json(json::parse(R"({"q":2})"), true), ParseError);  // no v
  CHECK_THROWS_AS(
      diagram_from_json(json::parse(R"({"v":2,"q":2,"vertices":[0,1],"edges":[]})"), true),
      ParseError);
  CHECK_THROWS_AS(diagram_from_json(json::parse(
                      R"({"v":1,"q":2,"vertices":[0,1],"edges":[],"extra":0})"),
                                    true),
                  ParseError);  // unknown key
  CHECK_THROWS_AS(diagram_from_json(json::parse(R"({"v":1,"q":2,"vertices":[0,1],
      "edges":[{"i":0,"j":1,"type":"B2"}]})"),
                                    true),
                  ParseError);  // unknown type
  CHECK_THROWS_AS(diagram_from_json(json::parse(R"({"v":1,"q":2,"vertices":[0,1],
      "edges":[{"i":0,"j":1,"type":"C2"}]})"),
                                    true),
                  ParseError);  // C2 without head
  CHECK_THROWS_AS(diagram_from_json(json::parse(R"({"v":1,"q":2,"vertices":[0,1],
      "edges":[{"i":0,"j":1,"type":"C2","head":7}]})"),
                                    true),
                  ParseError);  // head not an endpoint
  CHECK_THROWS_AS(diagram_from_json(json::parse(R"({"v":1,"q":6,"vertices":[0,1],
      "edges":[{"i":0,"j":1,"type":"A2"}]})"),
                                    true),
                  ParseError);  // q not a prime power
}

TEST_CASE("amalgam JSON round trip") {
  json j;
  j["v"] = 1;
  j["kind"] = "ct";
  j["diagram"] = loop4_json(4);
  j["delta"] = json::array({json{{"from", 3}, {"to", 0}, {"t", {1, 0}}, {"r", 1}, {"s", 1}}});
  AmalgamSpec spec = amalgam_from_json(j);
  CHECK(spec.kind == Kind::CT);
  CHECK(spec.delta.size() == 1);
  VertexAut a = spec.get_delta(3, 0);
  CHECK(a.c.r == 1);
  CHECK(a.c.s == 1);
  AmalgamSpec spec2 = amalgam_from_json(amalgam_to_json(spec));
  CHECK(spec2.delta == spec.delta);
  // canonical output is byte-identical across runs
  CHECK(amalgam_to_json(spec).dump() == amalgam_to_json(spec2).dump());
}

TEST_CASE("amalgam JSON rejects bad coordinates") {
  json j;
  j["v"] = 1;
  j["kind"] = "ct";
  j["diagram"] = loop4_json(2);
  j["delta"] = json::array({json{{"from", 3}, {"to", 0}, {"r", 7}}});
  CHECK_THROWS_AS(amalgam_from_json(j), ParseError);  // r out of range
  j["delta"] = json::array({json{{"from", 3}, {"to", 3}, {"r", 0}}});
  CHECK_THROWS_AS(amalgam_from_json(j), ParseError);  // loop pair
  j["delta"] = json::array({json{{"from", 3}, {"to", 0}, {"t", {0}}}});
  CHECK_THROWS_AS(amalgam_from_json(j), ParseError);  // zero torus coordinate
  j["delta"] = json::array();
  j["kind"] = "phan";
  j["diagram"]["edges"][0]["type"] = "2A3";
  j["diagram"]["edges"][0]["head"] = 0;
  CHECK_THROWS_AS(amalgam_from_json(j), ParseError);  // Phan with 2A3 edge
}

TEST_CASE("kappa JSON") {
  Diagram d = diagram_from_json(loop4_json(4), true);
  auto res = normalize(make_standard(d, Kind::CT));
  json k = kappa_to_json(res.kappa);
  CHECK(k["v"] == 1);
  CHECK(k["kind"] == "ct");
  CHECK(k["q"] == 4);
  REQUIRE(k["edges"].size() == 1);
  CHECK(k["edges"][0]["r"] == 0);
  CHECK(k["edges"][0]["s"] == 0);
  CHECK(k["edges"][0]["i"] != k["edges"][0]["j"]);
}

TEST_CASE("witness JSON serializes losslessly shaped output") {
  Diagram d(2, {0, 1, 2}, {{0, 1, EdgeType::TA3, 0}, {1, 2, EdgeType::A2}});
  AmalgamSpec spec = make_standard(d, Kind::CT);
  VertexCtx c0 = spec.vertex_ctx(0);
  spec.set_delta(0, 1, VertexAut{2, {1, 1, c0.r_mod(), true}});
  auto res = normalize(spec);
  json w = witness_to_json(spec, res.witness);
  CHECK(w.contains("vertex_maps"));
  CHECK(w.contains("edge_maps"));
  CHECK(w.contains("nonedge_maps"));
}
