// Acceptance suite: one pass/fail line per criterion, exact integer
// expectations pinned in code.  Exit code = number of failing criteria.
//
// Criterion 4 contains a sub-check that is provably unattainable as
// stated: Phan C2(3) torus uniqueness fails in the direction where D_1^2
// acts through an element of D_2^1 (see the README note).  The suite
// asserts the documented true behavior and reports the criterion honestly
// as failing its literal statement.

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "ctphan/json_io.hpp"
#include "ctphan/rootdetect.hpp"

using namespace ctphan;

namespace {

int failures = 0;
std::vector<std::string> notes;

void line(bool ok, int idx, const std::string& name, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", idx, name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// ---- criterion 1: group construction ----------------------------------

const std::vector<std::tuple<Kind, PairType, int>>& pair_budget_list() {
  static const std::vector<std::tuple<Kind, PairType, int>> list = {
      {Kind::CT, PairType::A2, 2},   {Kind::CT, PairType::A2, 3},  {Kind::CT, PairType::A2, 4},
      {Kind::CT, PairType::C2, 2},   {Kind::CT, PairType::C2, 3},  {Kind::CT, PairType::TA3, 2},
      {Kind::Phan, PairType::A2, 2}, {Kind::Phan, PairType::A2, 3},
      {Kind::Phan, PairType::C2, 2}, {Kind::Phan, PairType::C2, 3},
  };
  return list;
}

bool criterion1() {
  Timer t;
  bool ok = true;
  std::string detail;
  for (auto [kind, type, q] : pair_budget_list()) {
    const StandardPair& pr = get_standard_pair(kind, type, q);
    long long expect = expected_pair_order(kind, type, q);
    bool match = (long long)pr.ambient.order() == expect;
    ok = ok && match;
    detail += kind_name(kind) + "/" + pair_type_name(type) + "(" + std::to_string(q) +
              ")=" + std::to_string(pr.ambient.order()) + (match ? " " : "(MISMATCH) ");
  }
  double secs = t.s();
  ok = ok && secs <= 60.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "[%.1fs of 60s]", secs);
  line(ok, 1, "group construction: closure/ambient orders equal classical orders",
       detail + buf);
  return ok;
}

// ---- criterion 2: Sylow verdict tables ---------------------------------

bool criterion2() {
  bool ok = true;
  std::string detail;
  for (auto [kind, type, q] : pair_budget_list()) {
    if (kind != Kind::CT) continue;  // classify_sylows precondition: CT pairs
    const StandardPair& pr = get_standard_pair(kind, type, q);
    for (int side : {1, 2}) {
      SylowVerdict v = classify_sylows(pr, side);
      bool two_parab = v.count(SylowTag::ParabolicPlus) == 1 &&
                       v.count(SylowTag::ParabolicMinus) == 1;
      ok = ok && two_parab;
      if (!two_parab)
        detail += pair_type_name(type) + "(" + std::to_string(q) + ") side " +
                  std::to_string(side) + ": parabolic count != 2; ";
      // the remaining q^e - 1 entries generate the ambient group, except
      // the C2(2) exceptional entry on each side
      int expect_full = int(v.entries.size()) - 3;
      int expect_exc = 1;
      if (!(type == PairType::C2 && q == 2)) {
        expect_full = int(v.entries.size()) - 2;
        expect_exc = 0;
      }
      if (v.count(SylowTag::Full) != expect_full ||
          v.count(SylowTag::Exceptional) != expect_exc) {
        ok = false;
        detail += pair_type_name(type) + "(" + std::to_string(q) + ") side " +
                  std::to_string(side) + ": full/exceptional counts off; ";
      }
      for (const auto& e : v.entries)
        if (e.tag == SylowTag::Full && (long long)e.closure_order !=
                                            expected_pair_order(kind, type, q)) {
          ok = false;
          detail += "full closure order mismatch; ";
        }
      if (type == PairType::C2 && q == 2 && side == 1) {
        bool exc = v.count(SylowTag::Exceptional) == 1;
        size_t exc_order = 0;
        for (const auto& e : v.entries)
          if (e.tag == SylowTag::Exceptional) exc_order = e.closure_order;
        ok = ok && exc && exc_order == 72;
        detail += "C2(2) side 1 exceptional order " + std::to_string(exc_order) + "; ";
      }
      if (type == PairType::TA3 && q == 2) {
        bool all_full = true;
        for (const auto& e : v.entries)
          if (e.tag != SylowTag::ParabolicPlus && e.tag != SylowTag::ParabolicMinus)
            all_full = all_full && e.tag == SylowTag::Full && e.closure_order == 25920;
        ok = ok && all_full;
        if (side == 2) detail += "2A3(2) non-parabolic closures all 25920; ";
      }
    }
  }
  if (detail.empty()) detail = "2 parabolic tags per side for every CT pair";
  line(ok, 2, "Sylow verdict tables (exact integer match)", detail);
  return ok;
}

// ---- criterion 3: coefficient structure -------------------------------

bool criterion3() {
  bool ok = true;
  std::string detail;
  // |A_i| = |T_i| * |C_i| at q in {2,3,4}
  const std::tuple<Kind, int, long long> sizes[] = {
      {Kind::CT, 2, 2},  {Kind::CT, 3, 4},  {Kind::CT, 4, 12},
      {Kind::Phan, 2, 6}, {Kind::Phan, 3, 8}, {Kind::Phan, 4, 20},
  };
  for (auto [kind, q, expect] : sizes) {
    auto r = brute_force_A(make_vertex_ctx(kind, q, 1));
    bool match = (long long)r.normalizing_count == expect && r.coordinates_match;
    ok = ok && match;
    detail += std::string(kind_name(kind)) + "(" + std::to_string(q) +
              "):" + std::to_string(r.normalizing_count) + (match ? " " : "(MISMATCH) ");
  }
  // functional equality of the restriction closed forms at q in {2,3}
  size_t checked = 0;
  bool feq = true;
  for (auto [kind, type] :
       {std::pair{Kind::CT, PairType::A2}, {Kind::CT, PairType::C2}, {Kind::CT, PairType::TA3},
        {Kind::Phan, PairType::A2}, {Kind::Phan, PairType::C2}})
    for (int q : {2, 3}) {
      EdgeCtx e = make_edge_ctx(kind, type, q, 1);
      const StandardPair& pr = get_standard_pair_shallow(kind, type, q);
      VertexCtx vc1 = make_vertex_ctx(kind, q, type == PairType::TA3 ? 2 : 1);
      VertexCtx vc2 = make_vertex_ctx(kind, q, 1);
      const Field& A = *e.afield;
      const Field& VT = type == PairType::TA3 ? *e.tail_field : A;
      for (int t1 = 1; t1 < A.size(); ++t1) {
        if (kind == Kind::Phan && A.norm(uint8_t(t1), A.e() / 2) != A.one()) continue;
        if (kind == Kind::CT && type == PairType::C2) {
          bool sq = false;
          for (int y = 1; y < A.size(); ++y)
            if (A.mul(uint8_t(y), uint8_t(y)) == t1) sq = true;
          if (!sq) continue;
        }
        for (int t2 = 1; t2 < VT.size(); ++t2) {
          if (kind == Kind::Phan && VT.norm(uint8_t(t2), VT.e() / 2) != VT.one()) continue;
          EdgeTorus T = edge_torus_from_sides(e, uint8_t(t1), uint8_t(t2));
          for (int r = 0; r < e.r_mod(); ++r)
            for (int s = 0; s < (e.has_s() ? 2 : 1); ++s) {
              EdgeAut phi{T, {r, s, e.r_mod(), e.has_s()}};
              auto [r1, r2] = edge_torus_restrict(e, T);
              VertexAut v1{r1, edge_c_restrict(e, phi.c, 1)};
              VertexAut v2{r2, edge_c_restrict(e, phi.c, 2)};
              for (int sd = 0; sd < 2; ++sd)
                for (const Mat& m : pr.vertex_group[sd].generators()) {
                  ++checked;
                  Mat lhs = realize_edge_aut(e, phi, pr.iota[sd].apply(m));
                  Mat rhs =
                      pr.iota[sd].apply(apply_vertex_aut(sd == 0 ? vc1 : vc2, sd == 0 ? v1 : v2, m));
                  feq = feq && lhs == rhs;
                }
            }
        }
      }
    }
  ok = ok && feq;
  detail += "restriction functional equality on " + std::to_string(checked) + " generator checks; ";
  // C2 torus-restriction index
  for (int q : {2, 3}) {
    EdgeCtx e = make_edge_ctx(Kind::CT, PairType::C2, q, 1);
    const Field& A = *e.afield;
    std::set<std::pair<uint8_t, uint8_t>> image;
    for (int x = 1; x < A.size(); ++x) {
      bool sq = false;
      for (int y = 1; y < A.size(); ++y)
        if (A.mul(uint8_t(y), uint8_t(y)) == x) sq = true;
      if (!sq) continue;
      for (int y = 1; y < A.size(); ++y)
        image.insert(edge_torus_restrict(
            e, EdgeTorus{{A.mul(uint8_t(x), uint8_t(y)), uint8_t(y), A.one(), uint8_t(x)}}));
    }
    size_t full = size_t(q - 1) * (q - 1);
    size_t index = full / image.size();
    bool match = index == (q % 2 == 0 ? 1u : 2u);
    ok = ok && match;
    detail += "C2(" + std::to_string(q) + ") torus index " + std::to_string(index) +
              (match ? "; " : "(MISMATCH); ");
  }
  line(ok, 3, "coefficient structure (|A_i| sizes, restrictions, C2 index)", detail);
  return ok;
}

// ---- criterion 4: Phan tori -------------------------------------------

bool criterion4() {
  bool ok = true;
  std::string detail;
  for (auto [type, q] : {std::pair{PairType::A2, 2}, {PairType::A2, 3}, {PairType::C2, 2},
                         {PairType::C2, 3}}) {
    const StandardPair& pr = get_standard_pair(Kind::Phan, type, q);
    bool unique = torus_uniqueness(pr);
    auto counts = torus_uniqueness_counts(pr);
    detail += "uniqueness " + pair_type_name(type) + "(" + std::to_string(q) + "): " +
              (unique ? "unique" : "counts " + std::to_string(counts[0]) + "," +
                                       std::to_string(counts[1])) +
              "; ";
    if (type == PairType::C2 && q == 3) {
      // Provably fails as stated: D_1^2 acts on the side-2 image as
      // conjugation by an element of D_2^1 inside the quaternion subgroup
      // of SU2(3), which normalizes all three order-4 tori.  Assert the
      // documented true behavior so regressions are caught.
      if (unique || counts[0] != 1 || counts[1] != 3) {
        detail += "UNEXPECTED change in the documented C2(3) behavior; ";
        ok = false;
      } else {
        notes.push_back(
            "criterion 4: the literal sub-check 'torus_uniqueness passes at C2(3)' is "
            "mathematically unattainable; the suite verified the documented counts (1,3) "
            "instead; see the README note on torus uniqueness.");
        ok = false;  // the criterion as stated does not hold
      }
    } else {
      ok = ok && unique;
    }
  }
  // property (D) detection, on plain paths and paths through a C2 edge
  for (int q : {2, 3}) {
    Diagram d(q, {0, 1, 2}, {{0, 1, EdgeType::A2}, {1, 2, EdgeType::A2}});
    auto pd = property_D(realize(make_standard(d, Kind::Phan)));
    bool good = pd.ok;
    for (auto& [v, torus] : pd.tori) good = good && int(torus.order()) == q + 1;
    ok = ok && good;
    detail += "property-D path q=" + std::to_string(q) + (good ? " ok; " : " FAILED; ");
  }
  for (int q : {2, 3}) {
    Diagram d(q, {0, 1, 2}, {{0, 1, EdgeType::C2, 0}, {1, 2, EdgeType::A2}});
    auto pd = property_D(realize(make_standard(d, Kind::Phan)));
    bool good = pd.ok;
    for (auto& [v, torus] : pd.tori) good = good && int(torus.order()) == q + 1;
    ok = ok && good;
    detail += "property-D C2-path q=" + std::to_string(q) + (good ? " ok; " : " FAILED; ");
  }
  {
    // torus-twisted mock rejected
    Diagram d(3, {0, 1, 2}, {{0, 1, EdgeType::A2}, {1, 2, EdgeType::A2}});
    RealizedAmalgam ra = realize(make_standard(d, Kind::Phan));
    GroupHandle D = abstract_phan_torus(ra.vctx.at(1));
    Mat mover = Mat::identity(*ra.vctx.at(1).field, 2);
    for (const Mat& g : ra.vgroup.at(1).elements()) {
      bool moves = false;
      Mat gi = g.inverse();
      for (const Mat& t : D.elements())
        if (!D.contains(g * t * gi)) moves = true;
      if (moves) {
        mover = g;
        break;
      }
    }
    add_rogue_twist(ra, 1, 2, ra.map_of(1, 2).apply(mover));
    bool rejected = !property_D(ra).ok;
    ok = ok && rejected;
    detail += std::string("torus-twisted mock ") + (rejected ? "rejected" : "NOT rejected");
  }
  line(ok, 4, "Phan tori (normalizer uniqueness; property-D detection)", detail);
  return ok;
}

// ---- criterion 5: classification --------------------------------------

std::vector<std::pair<std::string, Diagram>> classification_diagrams(int q) {
  std::vector<std::pair<std::string, Diagram>> out;
  out.push_back({"A3 path", Diagram(q, {0, 1, 2},
                                    {{0, 1, EdgeType::A2}, {1, 2, EdgeType::A2}})});
  out.push_back({"C2 path", Diagram(q, {0, 1, 2},
                                    {{0, 1, EdgeType::C2, 0}, {1, 2, EdgeType::A2}})});
  out.push_back({"2A3 path", Diagram(q, {0, 1, 2},
                                     {{0, 1, EdgeType::TA3, 0}, {1, 2, EdgeType::A2}})});
  out.push_back({"4-loop", Diagram(q, {0, 1, 2, 3},
                                   {{0, 1, EdgeType::A2}, {1, 2, EdgeType::A2},
                                    {2, 3, EdgeType::A2}, {0, 3, EdgeType::A2}})});
  out.push_back({"theta", Diagram(q, {0, 1, 2, 3, 4},
                                  {{0, 1, EdgeType::A2}, {1, 4, EdgeType::A2},
                                   {0, 2, EdgeType::A2}, {2, 4, EdgeType::A2},
                                   {0, 3, EdgeType::A2}, {3, 4, EdgeType::A2}})});
  out.push_back({"loop+C2", Diagram(q, {0, 1, 2, 3},
                                    {{0, 1, EdgeType::C2, 0}, {1, 2, EdgeType::A2},
                                     {2, 3, EdgeType::A2}, {0, 3, EdgeType::A2}})});
  return out;
}

bool criterion5() {
  bool ok = true;
  std::string detail;
  size_t diagrams = 0, classes = 0;
  for (int q : {2, 3, 4})
    for (auto& [name, d] : classification_diagrams(q))
      for (Kind kind : {Kind::CT, Kind::Phan}) {
        if (kind == Kind::Phan && name == "2A3 path") continue;
        ++diagrams;
        long long expect = classify_count(d, kind);
        auto reps = classify(d, kind);
        bool count_ok = (long long)reps.size() == expect;
        // round trip: normalize(build_kappa(x)) recovers x exactly
        bool round = true;
        for (const auto& rep : reps) {
          auto res = normalize(build_kappa(d, kind, rep.coords));
          if (res.kappa.entries.size() != rep.coords.size()) round = false;
          for (size_t s = 0; round && s < rep.coords.size(); ++s)
            round = res.kappa.entries[s].c == rep.coords[s];
        }
        // pairwise distinct under iso_decide
        bool distinct = true;
        for (size_t a = 0; a < reps.size() && distinct; ++a)
          for (size_t b = a + 1; b < reps.size() && distinct; ++b) {
            auto r = iso_decide(build_kappa(d, kind, reps[a].coords),
                                build_kappa(d, kind, reps[b].coords));
            distinct = !r.isomorphic;
          }
        classes += reps.size();
        if (!(count_ok && round && distinct)) {
          ok = false;
          detail += name + "/" + kind_name(kind) + "/q=" + std::to_string(q) + " FAILED; ";
        }
      }
  // named exact counts
  auto check_named = [&](const Diagram& d, Kind kind, long long expect, const char* label) {
    long long got = (long long)classify(d, kind).size();
    if (got != expect) {
      ok = false;
      detail += std::string(label) + " count " + std::to_string(got) + " != " +
                std::to_string(expect) + "; ";
    }
  };
  check_named(classification_diagrams(4)[3].second, Kind::CT, 4, "CT 4-loop q=4");
  check_named(classification_diagrams(2)[3].second, Kind::Phan, 2, "Phan 4-loop q=2");
  check_named(classification_diagrams(2)[0].second, Kind::CT, 1, "tree");
  if (ok)
    detail = std::to_string(diagrams) + " diagram/kind/q combinations, " +
             std::to_string(classes) +
             " classes; counts, round trips and pairwise distinctness all exact";
  line(ok, 5, "classification (counts, normalize-build_kappa round trip, distinctness)",
       detail);
  return ok;
}

// ---- criterion 6: isomorphism witnesses --------------------------------

bool criterion6() {
  bool ok = true;
  std::string detail;
  std::mt19937 rng(20260810);
  auto all_diagrams = classification_diagrams(2);
  std::vector<std::pair<std::string, Diagram>> trees(all_diagrams.begin(),
                                                     all_diagrams.begin() + 3);
  int verified = 0;
  for (auto& [name, d] : trees) {
    for (Kind kind : {Kind::CT, Kind::Phan}) {
      if (kind == Kind::Phan && name == "2A3 path") continue;
      AmalgamSpec base = make_standard(d, kind);
      RealizedAmalgam dst = realize(normalize(base).normal_form);
      for (int trial = 0; trial < 20; ++trial) {
        AmalgamSpec spec = base;
        auto deg = spec.degrees();
        for (int u : d.vertices())
          for (int v : d.vertices()) {
            if (u == v) continue;
            VertexCtx ctx = make_vertex_ctx(kind, 2, deg.at(u));
            const Field& F = *ctx.field;
            std::vector<uint8_t> ts;
            for (int t = 1; t < F.size(); ++t)
              if (kind == Kind::CT || F.norm(uint8_t(t), F.e() / 2) == F.one())
                ts.push_back(uint8_t(t));
            VertexAut a{ts[rng() % ts.size()], ctx.c_zero()};
            a.c.r = int(rng() % unsigned(ctx.r_mod()));
            a.c.s = ctx.has_s() ? int(rng() % 2) : 0;
            spec.set_delta(u, v, a);
          }
        auto res = normalize(spec);
        bool identity = res.kappa.is_identity();
        RealizedAmalgam src = realize(spec);
        std::string why;
        bool witness_ok =
            verify_witness_elementwise(src, realize(res.normal_form), res.witness, &why);
        if (!(identity && witness_ok)) {
          ok = false;
          detail += name + "/" + kind_name(kind) + " trial " + std::to_string(trial) +
                    (identity ? "" : " kappa!=id") + (witness_ok ? "" : " witness: " + why) +
                    "; ";
        } else {
          ++verified;
        }
      }
    }
  }
  if (ok)
    detail = std::to_string(verified) +
             " randomized perturbations: identity kappa and elementwise-verified witnesses";
  line(ok, 6, "isomorphism witnesses on trees at q=2 (20 random trials each)", detail);
  return ok;
}

// ---- criterion 7: hexagon uniqueness -----------------------------------

bool criterion7() {
  bool ok = true;
  size_t instances = 0;
  std::string detail;
  for (auto [kind, type] : {std::pair{Kind::CT, PairType::A2}, {Kind::CT, PairType::C2},
                            {Kind::CT, PairType::TA3}, {Kind::Phan, PairType::A2},
                            {Kind::Phan, PairType::C2}})
    for (int q : {2, 3}) {
      EdgeCtx e = make_edge_ctx(kind, type, q, 1);
      auto coords = [&](int rm) {
        std::vector<CCoord> out;
        for (int r = 0; r < rm; ++r)
          for (int s = 0; s < (e.has_s() ? 2 : 1); ++s) out.push_back({r, s, rm, e.has_s()});
        return out;
      };
      auto ci = coords(e.side_r_mod(1));
      auto cj = coords(e.side_r_mod(2));
      auto ce = coords(e.r_mod());
      for (const CCoord& g_ij : ci)
        for (const CCoord& gp_ij : ci)
          for (const CCoord& phi_i : ci)
            for (const CCoord& g_ji : cj)
              for (int mode = 0; mode < 2; ++mode)
                for (const CCoord& known : cj) {
                  HexagonInput in{g_ij, gp_ij, phi_i, g_ji, {}, {}};
                  if (mode == 0)
                    in.gamma_plus_ji = known;
                  else
                    in.phi_j = known;
                  HexagonResult res = hexagon_solve(e, in);
                  size_t solutions = 0;
                  bool agrees = true;
                  for (const CCoord& cand : cj)
                    for (const CCoord& pe : ce) {
                      CCoord gp_ji = mode == 0 ? known : cand;
                      CCoord phj = mode == 0 ? cand : known;
                      if (edge_c_restrict(e, pe, 1) == gp_ij.plus(phi_i).minus(g_ij) &&
                          edge_c_restrict(e, pe, 2) == gp_ji.plus(phj).minus(g_ji)) {
                        ++solutions;
                        agrees = agrees && cand == res.remaining && pe == res.phi_edge;
                      }
                    }
                  ++instances;
                  if (solutions != 1 || !agrees) {
                    ok = false;
                    detail += kind_name(kind) + "/" + pair_type_name(type) + "(" +
                              std::to_string(q) + "): " + std::to_string(solutions) +
                              " solutions; ";
                  }
                }
    }
  if (ok)
    detail = std::to_string(instances) + " hexagon instances, exactly one solution each";
  line(ok, 7, "hexagon completion uniqueness (exhaustive over C-coordinates)", detail);
  return ok;
}

}  // namespace

int main() {
  std::printf("acceptance suite: Curtis-Tits / Phan amalgam library\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  for (const auto& n : notes) std::printf("note: %s\n", n.c_str());
  if (failures == 1 && !notes.empty())
    std::printf("1 criterion failed (criterion 4: documented unattainable sub-check)\n");
  else
    std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
