#include "ctphan/json_io.hpp"

#include <fstream>
#include <set>

namespace ctphan {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ParseError(where + ": unknown key \"" + it.key() + "\"");
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ParseError(where + ": missing key \"" + key + "\"");
  if (!j.at(key).is_number_integer()) throw ParseError(where + ": \"" + key + "\" must be an integer");
  return j.at(key).get<int>();
}

void check_version(const json& j, const std::string& where) {
  if (get_int(j, "v", where) != 1) throw ParseError(where + ": unsupported schema version");
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

Diagram diagram_from_json(const json& j, bool require_version) {
  reject_unknown_keys(j, {"v", "q", "vertices", "edges"}, "diagram");
  if (require_version)
    check_version(j, "diagram");
  else if (j.contains("v"))
    check_version(j, "diagram");
  int q = get_int(j, "q", "diagram");
  if (!j.contains("vertices") || !j.at("vertices").is_array())
    throw ParseError("diagram: \"vertices\" must be an array of integers");
  std::vector<int> vertices;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_number_integer()) throw ParseError("diagram: vertex indices must be integers");
    vertices.push_back(v.get<int>());
  }
  if (!j.contains("edges") || !j.at("edges").is_array())
    throw ParseError("diagram: \"edges\" must be an array");
  std::vector<DiagEdge> edges;
  for (const auto& je : j.at("edges")) {
    reject_unknown_keys(je, {"i", "j", "type", "head"}, "edge");
    DiagEdge e;
    e.i = get_int(je, "i", "edge");
    e.j = get_int(je, "j", "edge");
    if (!je.contains("type") || !je.at("type").is_string())
      throw ParseError("edge: missing \"type\"");
    try {
      e.type = edge_type_from_name(je.at("type").get<std::string>());
    } catch (const DiagramError& err) {
      throw ParseError(err.what());
    }
    if (je.contains("head")) {
      e.head = get_int(je, "head", "edge");
      if (e.head != e.i && e.head != e.j)
        throw ParseError("edge: \"head\" must be one of the endpoints");
    } else if (e.type != EdgeType::A2) {
      throw ParseError("edge: C2/2A3 edges require \"head\"");
    }
    edges.push_back(e);
  }
  try {
    Diagram d(q, std::move(vertices), std::move(edges));
    d.validate_structure();
    return d;
  } catch (const DiagramError& err) {
    throw ParseError(std::string("diagram: ") + err.what());
  }
}

json diagram_to_json(const Diagram& d) {
  json j;
  j["v"] = 1;
  j["q"] = d.q();
  j["vertices"] = d.vertices();
  json edges = json::array();
  for (const auto& e : d.edges()) {
    json je;
    je["i"] = std::min(e.i, e.j);
    je["j"] = std::max(e.i, e.j);
    je["type"] = edge_type_name(e.type);
    if (e.type != EdgeType::A2) je["head"] = e.head;
    edges.push_back(je);
  }
  j["edges"] = edges;
  return j;
}

AmalgamSpec amalgam_from_json(const json& j) {
  reject_unknown_keys(j, {"v", "kind", "diagram", "delta"}, "amalgam");
  check_version(j, "amalgam");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ParseError("amalgam: missing \"kind\"");
  Kind kind;
  try {
    kind = kind_from_name(j.at("kind").get<std::string>());
  } catch (const FieldError& e) {
    throw ParseError(e.what());
  }
  if (!j.contains("diagram")) throw ParseError("amalgam: missing \"diagram\"");
  Diagram d = diagram_from_json(j.at("diagram"), false);
  AmalgamSpec spec(kind, d);
  auto deg = [&]() -> std::map<int, int> {
    try {
      return spec.degrees();
    } catch (const DiagramError& e) {
      throw ParseError(std::string("amalgam: ") + e.what());
    }
  }();
  if (j.contains("delta")) {
    if (!j.at("delta").is_array()) throw ParseError("amalgam: \"delta\" must be an array");
    for (const auto& je : j.at("delta")) {
      reject_unknown_keys(je, {"from", "to", "t", "r", "s"}, "delta entry");
      int from = get_int(je, "from", "delta entry");
      int to = get_int(je, "to", "delta entry");
      if (!deg.count(from) || !deg.count(to) || from == to)
        throw ParseError("delta entry: invalid vertex pair");
      VertexCtx ctx = make_vertex_ctx(kind, d.q(), deg.at(from));
      VertexAut a = ctx.identity();
      if (je.contains("t")) {
        if (!je.at("t").is_array()) throw ParseError("delta entry: \"t\" must be a coordinate array");
        std::vector<int> coords;
        for (const auto& c : je.at("t")) {
          if (!c.is_number_integer()) throw ParseError("delta entry: coordinates must be integers");
          coords.push_back(c.get<int>());
        }
        try {
          a.t = ctx.field->from_coords(coords);
        } catch (const FieldError& e) {
          throw ParseError(std::string("delta entry: ") + e.what());
        }
      }
      if (je.contains("r")) a.c.r = get_int(je, "r", "delta entry");
      if (je.contains("s")) a.c.s = get_int(je, "s", "delta entry");
      spec.delta[{from, to}] = a;
    }
  }
  try {
    spec.validate();
  } catch (const std::runtime_error& e) {
    throw ParseError(std::string("amalgam: ") + e.what());
  }
  return spec;
}

json amalgam_to_json(const AmalgamSpec& spec) {
  json j;
  j["v"] = 1;
  j["kind"] = kind_name(spec.kind);
  j["diagram"] = diagram_to_json(spec.diagram);
  json delta = json::array();
  for (const auto& [key, a] : spec.delta) {
    json je;
    je["from"] = key.first;
    je["to"] = key.second;
    je["t"] = spec.vertex_ctx(key.first).field->coords(a.t);
    je["r"] = a.c.r;
    je["s"] = a.c.s;
    delta.push_back(je);
  }
  j["delta"] = delta;
  return j;
}

json kappa_to_json(const KappaClass& k) {
  json j;
  j["v"] = 1;
  j["kind"] = kind_name(k.kind);
  j["q"] = k.q;
  char buf[32];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)k.diagram_hash);
  j["diagram_hash"] = buf;
  json edges = json::array();
  for (const auto& e : k.entries) {
    json je;
    je["i"] = e.i;
    je["j"] = e.j;
    je["r"] = e.c.r;
    je["s"] = e.c.s;
    edges.push_back(je);
  }
  j["edges"] = edges;
  return j;
}

json witness_to_json(const AmalgamSpec& spec, const AmalgamWitness& w) {
  json j;
  json phis = json::array();
  for (const auto& [v, a] : w.phi_v) {
    json je;
    je["vertex"] = v;
    je["t"] = spec.vertex_ctx(v).field->coords(a.t);
    je["r"] = a.c.r;
    je["s"] = a.c.s;
    phis.push_back(je);
  }
  j["vertex_maps"] = phis;
  json edges = json::array();
  auto deg = spec.degrees();
  for (const auto& [key, a] : w.phi_edge) {
    const DiagEdge* e = spec.diagram.edge_between(key.first, key.second);
    int d = e->type == EdgeType::TA3 ? deg.at(e->head == e->i ? e->j : e->i) : deg.at(e->i);
    EdgeCtx ec = make_edge_ctx(spec.kind, e->type == EdgeType::A2   ? PairType::A2
                                          : e->type == EdgeType::C2 ? PairType::C2
                                                                    : PairType::TA3,
                               spec.diagram.q(), d);
    json je;
    je["i"] = key.first;
    je["j"] = key.second;
    json tor = json::array();
    for (int k = 0; k < ec.dim; ++k) tor.push_back(ec.afield->coords(a.t.d[k]));
    je["torus"] = tor;
    je["r"] = a.c.r;
    je["s"] = a.c.s;
    edges.push_back(je);
  }
  j["edge_maps"] = edges;
  json prods = json::array();
  for (const auto& [key, pp] : w.phi_prod) {
    json je;
    je["i"] = key.first;
    je["j"] = key.second;
    je["t_i"] = spec.vertex_ctx(key.first).field->coords(pp.first.t);
    je["r_i"] = pp.first.c.r;
    je["s_i"] = pp.first.c.s;
    je["t_j"] = spec.vertex_ctx(key.second).field->coords(pp.second.t);
    je["r_j"] = pp.second.c.r;
    je["s_j"] = pp.second.c.s;
    prods.push_back(je);
  }
  j["nonedge_maps"] = prods;
  return j;
}

}  // namespace ctphan
