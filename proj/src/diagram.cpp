#include "ctphan/diagram.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace ctphan {

namespace {

// q = p^k for prime p; returns {p, k} or throws.
std::pair<int, int> prime_power(int q) {
  if (q < 2) throw DiagramError("q must be a prime power >= 2");
  int p = 0;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) return {q, 1};
  int k = 0, m = q;
  while (m % p == 0) {
    m /= p;
    ++k;
  }
  if (m != 1) throw DiagramError("q = " + std::to_string(q) + " is not a prime power");
  return {p, k};
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string edge_type_name(EdgeType t) {
  switch (t) {
    case EdgeType::A2: return "A2";
    case EdgeType::C2: return "C2";
    case EdgeType::TA3: return "2A3";
  }
  return "?";
}

EdgeType edge_type_from_name(const std::string& s) {
  if (s == "A2") return EdgeType::A2;
  if (s == "C2") return EdgeType::C2;
  if (s == "2A3" || s == "TA3") return EdgeType::TA3;
  throw DiagramError("unknown edge type: " + s);
}

Diagram::Diagram(int q, std::vector<int> vertices, std::vector<DiagEdge> edges)
    : q_(q), vertices_(std::move(vertices)), edges_(std::move(edges)) {
  auto [p, k] = prime_power(q);
  p_ = p;
  base_exp_ = k;
  std::sort(vertices_.begin(), vertices_.end());
  std::sort(edges_.begin(), edges_.end(), [](const DiagEdge& a, const DiagEdge& b) {
    return std::pair(std::min(a.i, a.j), std::max(a.i, a.j)) <
           std::pair(std::min(b.i, b.j), std::max(b.i, b.j));
  });
}

bool Diagram::has_edge(int a, int b) const { return edge_between(a, b) != nullptr; }

const DiagEdge* Diagram::edge_between(int a, int b) const {
  for (const auto& e : edges_)
    if (e.same_ends(a, b)) return &e;
  return nullptr;
}

std::vector<int> Diagram::neighbors(int v) const {
  std::vector<int> out;
  for (const auto& e : edges_)
    if (e.touches(v)) out.push_back(e.other(v));
  std::sort(out.begin(), out.end());
  return out;
}

void Diagram::validate_structure() const {
  if (vertices_.size() < 2) throw DiagramError("diagram needs at least two vertices");
  std::set<int> vs(vertices_.begin(), vertices_.end());
  if (vs.size() != vertices_.size()) throw DiagramError("duplicate vertex index");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    if (e.i == e.j) throw DiagramError("loop edge at vertex " + std::to_string(e.i));
    if (!vs.count(e.i) || !vs.count(e.j)) throw DiagramError("edge references unknown vertex");
    if (!seen.insert({std::min(e.i, e.j), std::max(e.i, e.j)}).second)
      throw DiagramError("parallel edge between " + std::to_string(e.i) + " and " +
                         std::to_string(e.j));
    if (e.type != EdgeType::A2) {
      if (e.head != e.i && e.head != e.j)
        throw DiagramError("C2/2A3 edge needs a head endpoint");
    } else if (e.head != -1 && e.head != e.i && e.head != e.j) {
      throw DiagramError("A2 edge head must be absent or an endpoint");
    }
  }
  // connectivity + no isolated vertex
  std::set<int> reach{vertices_[0]};
  std::deque<int> todo{vertices_[0]};
  while (!todo.empty()) {
    int v = todo.front();
    todo.pop_front();
    for (int w : neighbors(v))
      if (reach.insert(w).second) todo.push_back(w);
  }
  if (reach.size() != vertices_.size()) throw DiagramError("diagram is disconnected");
  for (int v : vertices_)
    if (neighbors(v).empty()) throw DiagramError("isolated vertex " + std::to_string(v));
}

std::optional<std::string> Diagram::three_spherical_violation() const {
  validate_structure();
  // triangles
  for (size_t a = 0; a < edges_.size(); ++a)
    for (int v : vertices_) {
      const auto& e = edges_[a];
      if (e.touches(v)) continue;
      if (has_edge(v, e.i) && has_edge(v, e.j))
        return "triangle on vertices {" + std::to_string(e.i) + "," + std::to_string(e.j) + "," +
               std::to_string(v) + "}";
    }
  // at most one label-4 edge (C2 or 2A3) per vertex
  for (int v : vertices_) {
    int label4 = 0;
    for (const auto& e : edges_)
      if (e.touches(v) && e.type != EdgeType::A2) ++label4;
    if (label4 > 1)
      return "vertex " + std::to_string(v) + " lies on " + std::to_string(label4) +
             " label-4 edges";
  }
  return std::nullopt;
}

std::map<int, int> Diagram::field_degrees() const {
  validate_structure();
  // BFS propagation of log2 degree levels.
  std::map<int, int> level;
  level[vertices_[0]] = 0;
  std::deque<int> todo{vertices_[0]};
  while (!todo.empty()) {
    int v = todo.front();
    todo.pop_front();
    for (const auto& e : edges_) {
      if (!e.touches(v)) continue;
      int w = e.other(v);
      int lw = level[v];
      if (e.type == EdgeType::TA3) lw += (e.head == w) ? 1 : -1;
      auto it = level.find(w);
      if (it == level.end()) {
        level[w] = lw;
        todo.push_back(w);
      } else if (it->second != lw) {
        throw DiagramError("conflicting field-degree propagation at vertex " +
                           std::to_string(w));
      }
    }
  }
  int minlev = level.begin()->second;
  for (auto& [v, l] : level) minlev = std::min(minlev, l);
  std::map<int, int> deg;
  for (auto& [v, l] : level) deg[v] = 1 << (l - minlev);
  return deg;
}

std::string Diagram::canonical_string() const {
  std::string s = "q=" + std::to_string(q_) + ";V=";
  for (int v : vertices_) s += std::to_string(v) + ",";
  s += ";E=";
  for (const auto& e : edges_) {
    int a = std::min(e.i, e.j), b = std::max(e.i, e.j);
    s += std::to_string(a) + "-" + std::to_string(b) + ":" + edge_type_name(e.type);
    if (e.type != EdgeType::A2) s += ">" + std::to_string(e.head);
    s += ",";
  }
  return s;
}

uint64_t Diagram::hash() const { return fnv1a(canonical_string()); }

bool TreeData::tree_contains(int a, int b) const {
  for (const auto& e : tree_edges)
    if (e.same_ends(a, b)) return true;
  return false;
}

const TreeData::OffTree* TreeData::off_tree_between(int a, int b) const {
  for (const auto& o : off_tree)
    if ((o.i == a && o.j == b) || (o.i == b && o.j == a)) return &o;
  return nullptr;
}

namespace {

// Is {a,b} on a cycle of the edge set, i.e. not a bridge: a and b stay
// connected after deleting the edge.
bool on_cycle(const std::vector<DiagEdge>& edges, int a, int b) {
  std::set<int> reach{a};
  std::deque<int> todo{a};
  while (!todo.empty()) {
    int v = todo.front();
    todo.pop_front();
    for (const auto& e : edges) {
      if (!e.touches(v) || e.same_ends(a, b)) continue;
      int w = e.other(v);
      if (reach.insert(w).second) todo.push_back(w);
    }
  }
  return reach.count(b) > 0;
}

// Shortest path from src to dst avoiding the edge {src,dst}, restricted to
// vertices of degree >= mindeg.
std::vector<int> restricted_path(const std::vector<DiagEdge>& edges, int src, int dst,
                                 const std::map<int, int>& deg, int mindeg) {
  std::map<int, int> prev;
  prev[src] = src;
  std::deque<int> todo{src};
  while (!todo.empty()) {
    int v = todo.front();
    todo.pop_front();
    if (v == dst) break;
    for (const auto& e : edges) {
      if (!e.touches(v) || e.same_ends(src, dst)) continue;
      int w = e.other(v);
      if (deg.at(w) < mindeg || prev.count(w)) continue;
      prev[w] = v;
      todo.push_back(w);
    }
  }
  if (!prev.count(dst)) return {};
  std::vector<int> path{dst};
  while (path.back() != src) path.push_back(prev[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

TreeData minimal_spanning_tree(const Diagram& d) {
  d.validate_structure();
  auto deg = d.field_degrees();
  std::vector<DiagEdge> current = d.edges();
  TreeData out;
  int expected_r = d.homotopy_rank();
  for (int s = 0; s < expected_r; ++s) {
    // candidate A2 edges on a cycle, minimal degree first, then lex
    const DiagEdge* best = nullptr;
    for (const auto& e : current) {
      if (e.type != EdgeType::A2 || !on_cycle(current, e.i, e.j)) continue;
      int ed = deg.at(e.i);
      if (!best) {
        best = &e;
        continue;
      }
      int bd = deg.at(best->i);
      auto ek = std::tuple(ed, std::min(e.i, e.j), std::max(e.i, e.j));
      auto bk = std::tuple(bd, std::min(best->i, best->j), std::max(best->i, best->j));
      if (ek < bk) best = &e;
    }
    // 3-sphericity guarantees every cycle carries an A2 edge
    if (!best) throw DiagramError("cycle without removable A2 edge (diagram not 3-spherical?)");
    TreeData::OffTree ot;
    ot.i = std::min(best->i, best->j);
    ot.j = std::max(best->i, best->j);
    ot.degree = deg.at(ot.i);
    auto path = restricted_path(current, ot.i, ot.j, deg, ot.degree);
    if (path.empty())
      throw DiagramError("no witness loop with degrees >= e_s (internal invariant)");
    path.push_back(ot.i);  // close the loop
    ot.loop = std::move(path);
    current.erase(std::remove_if(current.begin(), current.end(),
                                 [&](const DiagEdge& e) { return e.same_ends(ot.i, ot.j); }),
                  current.end());
    out.off_tree.push_back(std::move(ot));
  }
  out.tree_edges = std::move(current);
  return out;
}

}  // namespace ctphan
