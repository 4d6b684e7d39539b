#include "ctphan/amalgam.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace ctphan {

namespace {

std::pair<int, int> ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

int edge_side1_vertex(const DiagEdge& e) {
  return e.type == EdgeType::A2 ? std::min(e.i, e.j) : e.head;
}

PairType edge_pair_type(EdgeType t) {
  switch (t) {
    case EdgeType::A2: return PairType::A2;
    case EdgeType::C2: return PairType::C2;
    case EdgeType::TA3: return PairType::TA3;
  }
  throw AmalgamError("unreachable");
}

// Edge context of a diagram edge; the degree argument of make_edge_ctx is
// the tail degree for 2A3 and the common endpoint degree otherwise.
EdgeCtx diagram_edge_ctx(Kind kind, int q, const DiagEdge& e, const std::map<int, int>& deg) {
  int d = e.type == EdgeType::TA3 ? deg.at(e.head == e.i ? e.j : e.i) : deg.at(e.i);
  return make_edge_ctx(kind, edge_pair_type(e.type), q, d);
}

}  // namespace

VertexCtx AmalgamSpec::vertex_ctx(int v) const {
  return make_vertex_ctx(kind, diagram.q(), degrees().at(v));
}

VertexAut AmalgamSpec::get_delta(int from, int to) const {
  auto it = delta.find({from, to});
  if (it != delta.end()) return it->second;
  return vertex_ctx(from).identity();
}

void AmalgamSpec::set_delta(int from, int to, const VertexAut& a) {
  if (a.is_identity(*vertex_ctx(from).field))
    delta.erase({from, to});
  else
    delta[{from, to}] = a;
}

void AmalgamSpec::validate() const {
  diagram.validate_structure();
  if (auto v = diagram.three_spherical_violation())
    throw AmalgamError("diagram is not 3-spherical: " + *v);
  if (kind == Kind::Phan)
    for (const auto& e : diagram.edges())
      if (e.type == EdgeType::TA3) throw AmalgamError("Phan amalgams have no 2A3 edges");
  auto deg = degrees();
  std::set<int> vs(diagram.vertices().begin(), diagram.vertices().end());
  for (const auto& [key, a] : delta) {
    auto [from, to] = key;
    if (!vs.count(from) || !vs.count(to) || from == to)
      throw AmalgamError("delta references an invalid vertex pair");
    VertexCtx ctx = make_vertex_ctx(kind, diagram.q(), deg.at(from));
    const Field& F = *ctx.field;
    if (a.t == 0) throw AmalgamError("delta torus coordinate must be nonzero");
    if (a.t >= F.size()) throw AmalgamError("delta torus coordinate outside the vertex field");
    if (kind == Kind::Phan && F.norm(a.t, F.e() / 2) != F.one())
      throw AmalgamError("Phan torus coordinates must have norm 1");
    if (a.c.r_mod != ctx.r_mod() || a.c.has_s != ctx.has_s())
      throw AmalgamError("delta C-coordinate modulus mismatch at vertex " + std::to_string(from));
    if (a.c.r < 0 || a.c.r >= a.c.r_mod || a.c.s < 0 || a.c.s > 1)
      throw AmalgamError("delta C-coordinate out of range");
    if (kind == Kind::Phan && a.c.s != 0)
      throw AmalgamError("Phan coordinates have no tau exponent");
  }
}

bool KappaClass::is_identity() const {
  for (const auto& e : entries)
    if (!e.c.is_zero()) return false;
  return true;
}

bool KappaClass::operator==(const KappaClass& o) const {
  if (kind != o.kind || q != o.q || diagram_hash != o.diagram_hash ||
      entries.size() != o.entries.size())
    return false;
  for (size_t s = 0; s < entries.size(); ++s)
    if (entries[s].i != o.entries[s].i || entries[s].j != o.entries[s].j ||
        entries[s].c != o.entries[s].c)
      return false;
  return true;
}

AmalgamSpec make_standard(const Diagram& d, Kind kind) {
  AmalgamSpec spec(kind, d);
  spec.validate();
  return spec;
}

std::vector<CCoord> kappa_coordinate_frame(const Diagram& d, Kind kind) {
  TreeData tree = minimal_spanning_tree(d);
  std::vector<CCoord> out;
  for (const auto& ot : tree.off_tree) {
    VertexCtx ctx = make_vertex_ctx(kind, d.q(), ot.degree);
    out.push_back(ctx.c_zero());
  }
  return out;
}

AmalgamSpec build_kappa(const Diagram& d, Kind kind, const std::vector<CCoord>& coords) {
  AmalgamSpec spec = make_standard(d, kind);
  TreeData tree = minimal_spanning_tree(d);
  if (coords.size() != tree.off_tree.size())
    throw AmalgamError("kappa coordinate count != homotopy rank");
  for (size_t s = 0; s < coords.size(); ++s) {
    const auto& ot = tree.off_tree[s];
    VertexCtx ctx = make_vertex_ctx(kind, d.q(), ot.degree);
    if (coords[s].r_mod != ctx.r_mod() || coords[s].has_s != ctx.has_s())
      throw AmalgamError("kappa coordinate modulus mismatch at off-tree edge " +
                         std::to_string(s));
    spec.set_delta(ot.j, ot.i, VertexAut{ctx.field->one(), coords[s]});
  }
  return spec;
}

namespace {

struct NormalizeState {
  AmalgamSpec W;
  std::map<int, VertexCtx> vctx;
  std::map<std::pair<int, int>, EdgeCtx> ectx;   // key (min,max)
  std::map<std::pair<int, int>, int> side1;      // key (min,max) -> side-1 vertex
  AmalgamWitness wit;

  explicit NormalizeState(const AmalgamSpec& spec) : W(spec) {
    auto deg = spec.degrees();
    for (int v : spec.diagram.vertices())
      vctx.emplace(v, make_vertex_ctx(spec.kind, spec.diagram.q(), deg.at(v)));
    for (const auto& e : spec.diagram.edges()) {
      auto key = ordered(e.i, e.j);
      ectx.emplace(key, diagram_edge_ctx(spec.kind, spec.diagram.q(), e, deg));
      side1[key] = edge_side1_vertex(e);
    }
  }

  int side_of(int u, int v) const { return side1.at(ordered(u, v)) == u ? 1 : 2; }

  // Strip every torus part, one vertex at a time; the distinguished
  // neighbor w is the unique C2-neighbor when present (the C2 torus
  // restriction is the one that may miss targets).
  void run_torus_strip() {
    const Diagram& D = W.diagram;
    for (int u : D.vertices()) {
      const VertexCtx& cu = vctx.at(u);
      const Field& Fu = *cu.field;
      auto nbrs = D.neighbors(u);
      int w = -1;
      for (int n : nbrs)
        if (D.edge_between(u, n)->type == EdgeType::C2) {
          w = n;
          break;
        }
      if (w < 0) w = nbrs.front();
      uint8_t tw = W.get_delta(u, w).t;
      bool trivial = tw == Fu.one();
      for (int v : D.vertices())
        if (v != u && W.get_delta(u, v).t != Fu.one()) trivial = false;
      if (trivial) continue;
      acc_vertex(u, VertexAut{tw, cu.c_zero()});
      for (int v : D.vertices()) {
        if (v == u) continue;
        VertexAut d_uv = W.get_delta(u, v);
        uint8_t target = vertex_c_on_t(cu, d_uv.c, Fu.mul(tw, Fu.inv(d_uv.t)));
        if (D.has_edge(u, v)) {
          const DiagEdge* e = D.edge_between(u, v);
          if (e->type == EdgeType::C2 && v != w && target != Fu.one())
            throw AmalgamError("torus stripping hit a non-distinguished C2 edge");
          auto key = ordered(u, v);
          const EdgeCtx& ec = ectx.at(key);
          int su = side_of(u, v);
          EdgeTorus T = su == 1 ? edge_torus_from_sides(ec, target, 1)
                                : edge_torus_from_sides(ec, 1, target);
          acc_edge(u, v, EdgeAut{T, ec.c_zero()});
        } else {
          acc_prod(u, v, VertexAut{target, cu.c_zero()}, vctx.at(v).identity());
        }
        W.set_delta(u, v, VertexAut{Fu.one(), d_uv.c});
      }
    }
  }

  void acc_vertex(int u, const VertexAut& stage) {
    const VertexCtx& ctx = vctx.at(u);
    if (stage.is_identity(*ctx.field)) return;
    auto it = wit.phi_v.find(u);
    VertexAut cur = it == wit.phi_v.end() ? ctx.identity() : it->second;
    wit.phi_v[u] = compose_vertex_auts(ctx, stage, cur);
  }

  void acc_edge(int a, int b, const EdgeAut& stage) {
    auto key = ordered(a, b);
    const EdgeCtx& ec = ectx.at(key);
    if (stage.t == edge_torus_identity(ec) && stage.c.is_zero()) return;
    auto it = wit.phi_edge.find(key);
    EdgeAut cur = it == wit.phi_edge.end() ? EdgeAut{edge_torus_identity(ec), ec.c_zero()}
                                           : it->second;
    wit.phi_edge[key] = compose_edge_auts(ec, stage, cur);
  }

  void acc_prod(int a, int b, const VertexAut& at_a, const VertexAut& at_b) {
    auto key = ordered(a, b);
    int first = key.first, second = key.second;
    const VertexAut& f = a == first ? at_a : at_b;
    const VertexAut& s = a == first ? at_b : at_a;
    if (f.is_identity(*vctx.at(first).field) && s.is_identity(*vctx.at(second).field)) return;
    auto it = wit.phi_prod.find(key);
    std::pair<VertexAut, VertexAut> cur =
        it == wit.phi_prod.end()
            ? std::pair(vctx.at(first).identity(), vctx.at(second).identity())
            : it->second;
    wit.phi_prod[key] = {compose_vertex_auts(vctx.at(first), f, cur.first),
                         compose_vertex_auts(vctx.at(second), s, cur.second)};
  }
};

}  // namespace

NormalizeResult normalize(const AmalgamSpec& spec) {
  spec.validate();
  NormalizeState st(spec);
  const Diagram& D = spec.diagram;
  TreeData tree = minimal_spanning_tree(D);

  // Stage 1: non-edge coordinates are pure gauge; trivialize them all.
  for (int k : D.vertices())
    for (int l : D.vertices()) {
      if (k >= l || D.has_edge(k, l)) continue;
      VertexAut a = st.W.get_delta(k, l), b = st.W.get_delta(l, k);
      st.acc_prod(k, l, invert_vertex_aut(st.vctx.at(k), a), invert_vertex_aut(st.vctx.at(l), b));
      st.W.set_delta(k, l, st.vctx.at(k).identity());
      st.W.set_delta(l, k, st.vctx.at(l).identity());
    }

  // Stage 2: strip torus parts.
  st.run_torus_strip();

  // Stage 3: trivialize the C-parts along a BFS of the spanning tree,
  // keeping both directions of tree edges and the (i_s, j_s) direction of
  // off-tree edges trivial; residues accumulate on (j_s, i_s).
  int root = D.vertices().front();
  std::map<int, int> parent;
  std::vector<int> order{root};
  parent[root] = -1;
  for (size_t qi = 0; qi < order.size(); ++qi) {
    int u = order[qi];
    for (int v : D.neighbors(u))
      if (tree.tree_contains(u, v) && !parent.count(v)) {
        parent[v] = u;
        order.push_back(v);
      }
  }
  for (int u : order) {
    const VertexCtx& cu = st.vctx.at(u);
    CCoord phi_u = parent.at(u) < 0 ? cu.c_zero() : st.W.get_delta(u, parent.at(u)).c;
    if (parent.at(u) >= 0) st.W.set_delta(u, parent.at(u), cu.identity());
    st.acc_vertex(u, VertexAut{cu.field->one(), phi_u});
    for (int v : D.neighbors(u)) {
      if (v == parent.at(u)) continue;
      auto key = ordered(u, v);
      const EdgeCtx& ec = st.ectx.at(key);
      int su = st.side_of(u, v), sv = 3 - su;
      bool in_S = tree.tree_contains(u, v);
      if (!in_S) {
        const auto* ot = tree.off_tree_between(u, v);
        if (!ot) throw AmalgamError("edge neither in tree nor off-tree");
        in_S = ot->i == u;
      }
      CCoord g_uv = st.W.get_delta(u, v).c;
      if (in_S) {
        CCoord phi_e = edge_c_lift(ec, phi_u.minus(g_uv), su);
        st.acc_edge(u, v, EdgeAut{edge_torus_identity(ec), phi_e});
        st.W.set_delta(u, v, cu.identity());
        const VertexCtx& cv = st.vctx.at(v);
        CCoord g_vu = st.W.get_delta(v, u).c;
        st.W.set_delta(v, u,
                       VertexAut{cv.field->one(), g_vu.plus(edge_c_restrict(ec, phi_e, sv))});
      } else {
        st.W.set_delta(u, v, VertexAut{cu.field->one(), g_uv.minus(phi_u)});
      }
    }
    for (int v : D.vertices())
      if (v != u && !D.has_edge(u, v))
        st.acc_prod(u, v, VertexAut{cu.field->one(), phi_u}, st.vctx.at(v).identity());
  }

  // Read off kappa and check the normal form shape.
  NormalizeResult res{std::move(st.W), {}, std::move(st.wit), tree};
  res.kappa.kind = spec.kind;
  res.kappa.q = D.q();
  res.kappa.diagram_hash = D.hash();
  for (const auto& ot : tree.off_tree) {
    VertexAut d = res.normal_form.get_delta(ot.j, ot.i);
    if (d.t != 1) throw AmalgamError("normal form kept a torus residue");
    res.kappa.entries.push_back({ot.i, ot.j, d.c});
  }
  for (const auto& [key, a] : res.normal_form.delta) {
    auto [from, to] = key;
    if (!tree.off_tree_between(from, to) || tree.off_tree_between(from, to)->j != from)
      throw AmalgamError("normal form kept a residue off the kappa support");
  }
  return res;
}

std::pair<AmalgamSpec, AmalgamWitness> strip_tori(const AmalgamSpec& spec) {
  spec.validate();
  NormalizeState st(spec);
  st.run_torus_strip();
  return {std::move(st.W), std::move(st.wit)};
}

IsoResult iso_decide(const AmalgamSpec& a, const AmalgamSpec& b) {
  if (a.kind != b.kind) throw AmalgamError("iso_decide: kind mismatch");
  if (!(a.diagram == b.diagram)) throw AmalgamError("iso_decide: diagram mismatch");
  NormalizeResult ra = normalize(a), rb = normalize(b);
  return {ra.kappa == rb.kappa, ra.kappa, rb.kappa};
}

std::vector<ClassRep> classify(const Diagram& d, Kind kind) {
  std::vector<CCoord> frame = kappa_coordinate_frame(d, kind);
  std::vector<ClassRep> out;
  std::vector<CCoord> cur = frame;
  size_t r = frame.size();
  std::vector<int> idx(r, 0);
  while (true) {
    for (size_t s = 0; s < r; ++s) {
      cur[s].r = idx[s] % frame[s].r_mod;
      cur[s].s = frame[s].has_s ? idx[s] / frame[s].r_mod : 0;
    }
    AmalgamSpec spec = build_kappa(d, kind, cur);
    out.push_back({cur, normalize(spec).kappa});
    // odometer
    size_t s = 0;
    for (; s < r; ++s) {
      int span = frame[s].r_mod * (frame[s].has_s ? 2 : 1);
      if (++idx[s] < span) break;
      idx[s] = 0;
    }
    if (s == r) break;
  }
  return out;
}

long long classify_count(const Diagram& d, Kind kind) {
  long long n = 1;
  for (const CCoord& c : kappa_coordinate_frame(d, kind)) n *= c.r_mod * (c.has_s ? 2 : 1);
  return n;
}

Orientation orientation_check(const AmalgamSpec& spec) {
  if (spec.kind != Kind::CT) throw AmalgamError("orientation is a Curtis-Tits notion");
  spec.validate();
  const Diagram& D = spec.diagram;
  TreeData tree = minimal_spanning_tree(D);
  auto parity = [&](int i, int j) {
    return (spec.get_delta(i, j).c.s + spec.get_delta(j, i).c.s) % 2;
  };
  std::map<int, int> eps;
  int root = D.vertices().front();
  eps[root] = 0;
  std::deque<int> todo{root};
  while (!todo.empty()) {
    int u = todo.front();
    todo.pop_front();
    for (int v : D.neighbors(u)) {
      if (!tree.tree_contains(u, v) || eps.count(v)) continue;
      eps[v] = (eps[u] + parity(u, v)) % 2;
      todo.push_back(v);
    }
  }
  for (const auto& ot : tree.off_tree)
    if ((eps[ot.i] + eps[ot.j] + parity(ot.i, ot.j)) % 2 != 0) return Orientation::NonOrientable;
  return Orientation::Orientable;
}

// ---------- realized amalgams ----------

Mat RealizedMap::apply(const Mat& m) const {
  Mat r = iota->apply(apply_vertex_aut(vctx, delta, m));
  if (rogue) r = *rogue * r * rogue->inverse();
  return r;
}

std::optional<Mat> RealizedMap::preimage(const Mat& M) const {
  Mat m = M;
  if (rogue) m = rogue->inverse() * m * *rogue;
  auto pre = iota->preimage(m);
  if (!pre) return std::nullopt;
  return apply_vertex_aut(vctx, invert_vertex_aut(vctx, delta), *pre);
}

const GroupHandle& RealizedComponent::ambient() const {
  return is_edge ? pair->ambient : prod->ambient;
}

const IdentMap& RealizedComponent::iota(int side) const {
  return is_edge ? pair->iota[side] : prod->iota[side];
}

int RealizedComponent::side_of(int vertex) const {
  if (vertex == side_vertex[0]) return 0;
  if (vertex == side_vertex[1]) return 1;
  throw AmalgamError("vertex is not on this component");
}

const RealizedComponent& RealizedAmalgam::comp(int a, int b) const {
  return comps.at(ordered(a, b));
}

const RealizedMap& RealizedAmalgam::map_of(int from, int to) const {
  return maps.at({from, to});
}

RealizedAmalgam realize(const AmalgamSpec& spec, size_t budget) {
  spec.validate();
  RealizedAmalgam ra(spec.diagram);
  ra.kind = spec.kind;
  ra.q = spec.diagram.q();
  ra.degrees = spec.diagram.field_degrees();
  for (int v : spec.diagram.vertices()) {
    VertexCtx ctx = make_vertex_ctx(spec.kind, ra.q, ra.degrees.at(v));
    ra.vctx.emplace(v, ctx);
    ra.vgroup.emplace(v, spec.kind == Kind::CT ? enumerate_sl2(*ctx.field, budget)
                                               : enumerate_su2(*ctx.field));
  }
  const auto& vs = spec.diagram.vertices();
  for (size_t ai = 0; ai < vs.size(); ++ai)
    for (size_t bi = ai + 1; bi < vs.size(); ++bi) {
      int a = vs[ai], b = vs[bi];
      RealizedComponent rc;
      if (const DiagEdge* e = spec.diagram.edge_between(a, b)) {
        rc.is_edge = true;
        rc.type = edge_pair_type(e->type);
        int s1 = edge_side1_vertex(*e);
        rc.side_vertex[0] = s1;
        rc.side_vertex[1] = e->other(s1);
        int d_edge = e->type == EdgeType::TA3 ? ra.degrees.at(rc.side_vertex[1])
                                              : ra.degrees.at(a);
        long long qe = 1;
        for (int i = 0; i < d_edge; ++i) qe *= ra.q;
        rc.pair = &get_standard_pair(spec.kind, rc.type, int(qe), budget);
        rc.ectx = make_edge_ctx(spec.kind, rc.type, ra.q, d_edge);
        for (int s = 0; s < 2; ++s)
          if (rc.pair->vertex_field[s] != ra.vctx.at(rc.side_vertex[s]).field)
            throw AmalgamError("vertex field mismatch between diagram and standard pair");
      } else {
        rc.side_vertex[0] = a;
        rc.side_vertex[1] = b;
        rc.prod = std::make_shared<ProductComponent>(
            make_product_component(spec.kind, ra.q, ra.degrees.at(a), ra.degrees.at(b), budget));
      }
      auto key = ordered(a, b);
      ra.comps.emplace(key, std::move(rc));
      const RealizedComponent& stored = ra.comps.at(key);
      for (int u : {a, b}) {
        int other = u == a ? b : a;
        RealizedMap m;
        m.iota = &stored.iota(stored.side_of(u));
        m.vctx = ra.vctx.at(u);
        m.delta = spec.get_delta(u, other);
        // injective homomorphism on all elements
        const GroupHandle& G = ra.vgroup.at(u);
        MatSet image;
        for (const Mat& x : G.elements()) {
          Mat mx = m.apply(x);
          if (!image.insert(mx.key()).second)
            throw AmalgamError("connecting map is not injective");
          if (!stored.ambient().contains(mx))
            throw AmalgamError("connecting map leaves the edge group");
        }
        for (const Mat& x : G.elements())
          for (const Mat& y : G.elements())
            if (!(m.apply(x * y) == m.apply(x) * m.apply(y)))
              throw AmalgamError("connecting map is not a homomorphism");
        ra.maps.emplace(std::pair(u, other), std::move(m));
      }
    }
  return ra;
}

void add_rogue_twist(RealizedAmalgam& ra, int from, int to, const Mat& h) {
  auto it = ra.maps.find({from, to});
  if (it == ra.maps.end()) throw AmalgamError("no such connecting map");
  if (!ra.comp(from, to).ambient().contains(h))
    throw AmalgamError("twist element is not in the edge group");
  RealizedMap& m = it->second;
  m.rogue = m.rogue ? h * *m.rogue : h;
}

std::optional<VertexAut> fit_coordinate(const RealizedAmalgam& ra, int from, int to) {
  const RealizedMap& m = ra.map_of(from, to);
  const VertexCtx& ctx = ra.vctx.at(from);
  const Field& F = *ctx.field;
  const GroupHandle& G = ra.vgroup.at(from);
  auto gens = small_generating_set(G);
  for (int t = 1; t < F.size(); ++t) {
    if (ctx.kind == Kind::Phan && F.norm(uint8_t(t), F.e() / 2) != F.one()) continue;
    for (int r = 0; r < ctx.r_mod(); ++r)
      for (int s = 0; s < (ctx.has_s() ? 2 : 1); ++s) {
        VertexAut cand{uint8_t(t), {r, s, ctx.r_mod(), ctx.has_s()}};
        bool match = true;
        for (const Mat& g : gens)
          if (!(m.apply(g) == m.iota->apply(apply_vertex_aut(ctx, cand, g)))) {
            match = false;
            break;
          }
        if (!match) continue;
        for (const Mat& g : G.elements())
          if (!(m.apply(g) == m.iota->apply(apply_vertex_aut(ctx, cand, g)))) {
            match = false;
            break;
          }
        if (match) return cand;
      }
  }
  return std::nullopt;
}

namespace {

std::pair<Mat, Mat> product_split(const ProductComponent& pc, const Mat& M) {
  const Field& A = *pc.ambient_field;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if ((i < 2) != (j < 2) && M.at(i, j) != 0)
        throw AmalgamError("product element is not block diagonal");
  Mat x(*pc.iota[0].vfield, 2), y(*pc.iota[1].vfield, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      uint8_t xv = M.at(i, j), yv = M.at(i + 2, j + 2);
      x.set(i, j, pc.iota[0].emb ? pc.iota[0].emb->back(xv) : xv);
      y.set(i, j, pc.iota[1].emb ? pc.iota[1].emb->back(yv) : yv);
    }
  (void)A;
  return {x, y};
}

Mat product_join(const ProductComponent& pc, const Mat& x, const Mat& y) {
  return pc.iota[0].apply(x) * pc.iota[1].apply(y);
}

}  // namespace

bool verify_witness_elementwise(const RealizedAmalgam& src, const RealizedAmalgam& dst,
                                const AmalgamWitness& w, std::string* fail) {
  auto report = [&](const std::string& msg) {
    if (fail) *fail = msg;
    return false;
  };
  if (!(src.diagram == dst.diagram) || src.kind != dst.kind)
    return report("amalgams have different shape");
  const auto& vs = src.diagram.vertices();
  for (size_t ai = 0; ai < vs.size(); ++ai)
    for (size_t bi = ai + 1; bi < vs.size(); ++bi) {
      int a = vs[ai], b = vs[bi];
      const RealizedComponent& ca = src.comp(a, b);
      for (int u : {a, b}) {
        int other = u == a ? b : a;
        VertexAut phi_u =
            w.phi_v.count(u) ? w.phi_v.at(u) : src.vctx.at(u).identity();
        for (const Mat& m : src.vgroup.at(u).elements()) {
          Mat lhs_in = src.map_of(u, other).apply(m);
          Mat lhs;
          if (ca.is_edge) {
            EdgeAut pe = w.phi_edge.count(ordered(a, b))
                             ? w.phi_edge.at(ordered(a, b))
                             : EdgeAut{edge_torus_identity(*ca.ectx), ca.ectx->c_zero()};
            lhs = realize_edge_aut(*ca.ectx, pe, lhs_in);
          } else {
            auto [x, y] = product_split(*ca.prod, lhs_in);
            auto key = ordered(a, b);
            std::pair<VertexAut, VertexAut> pp =
                w.phi_prod.count(key)
                    ? w.phi_prod.at(key)
                    : std::pair(src.vctx.at(key.first).identity(),
                                src.vctx.at(key.second).identity());
            Mat xx = apply_vertex_aut(src.vctx.at(key.first), pp.first, x);
            Mat yy = apply_vertex_aut(src.vctx.at(key.second), pp.second, y);
            lhs = product_join(*ca.prod, xx, yy);
          }
          Mat rhs = dst.map_of(u, other).apply(apply_vertex_aut(src.vctx.at(u), phi_u, m));
          if (!(lhs == rhs))
            return report("witness square fails at vertex " + std::to_string(u) +
                          " on component {" + std::to_string(a) + "," + std::to_string(b) + "}");
        }
      }
    }
  return true;
}

}  // namespace ctphan
