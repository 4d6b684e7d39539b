#include "ctphan/rootdetect.hpp"

#include <algorithm>
#include <future>

namespace ctphan {

std::string sylow_tag_name(SylowTag t) {
  switch (t) {
    case SylowTag::ParabolicPlus: return "parabolic+";
    case SylowTag::ParabolicMinus: return "parabolic-";
    case SylowTag::Full: return "full";
    case SylowTag::Exceptional: return "exceptional";
  }
  return "?";
}

int SylowVerdict::count(SylowTag t) const {
  int n = 0;
  for (const auto& e : entries)
    if (e.tag == t) ++n;
  return n;
}

namespace {

std::array<uint8_t, 4> basis_vec(const Field& F, int k) {
  std::array<uint8_t, 4> v{0, 0, 0, 0};
  v[k] = F.one();
  return v;
}

struct ParabolicRef {
  GroupHandle stab;
  std::string witness;
};

// The two parabolic subgroups of the ambient containing the *other* side,
// in sign order (+, -), together with witness descriptions.
std::vector<ParabolicRef> parabolic_pair(const StandardPair& pr, int side) {
  const Field& F = *pr.ambient_field;
  const GroupHandle& G = pr.ambient;
  std::vector<ParabolicRef> out;
  if (pr.type == PairType::A2) {
    if (side == 1) {
      out.push_back({line_stabilizer(G, basis_vec(F, 0)), "line <e1>"});
      out.push_back({subspace_stabilizer(G, basis_vec(F, 1), basis_vec(F, 2)),
                     "subspace <e2,e3>"});
    } else {
      out.push_back({subspace_stabilizer(G, basis_vec(F, 0), basis_vec(F, 1)),
                     "subspace <e1,e2>"});
      out.push_back({line_stabilizer(G, basis_vec(F, 2)), "line <e3>"});
    }
  } else {  // C2 / 2A3
    if (side == 1) {
      out.push_back({line_stabilizer(G, basis_vec(F, 0)), "line <e1>"});
      out.push_back({line_stabilizer(G, basis_vec(F, 2)), "line <e3>"});
    } else {
      // the two isotropic planes the first side stabilizes
      out.push_back({subspace_stabilizer(G, basis_vec(F, 0), basis_vec(F, 1)),
                     "subspace <e1,e2>"});
      out.push_back({subspace_stabilizer(G, basis_vec(F, 2), basis_vec(F, 3)),
                     "subspace <e3,e4>"});
    }
  }
  return out;
}

}  // namespace

ParabolicPairResult parabolic_subgroups(const StandardPair& pr, int side) {
  if (pr.kind != Kind::CT || pr.type == PairType::A1A1)
    throw FieldError("parabolic subgroups apply to rank-2 Curtis-Tits pairs");
  auto ps = parabolic_pair(pr, side);
  return {ps[0].stab, ps[1].stab, ps[0].witness, ps[1].witness};
}

SylowVerdict classify_sylows(const StandardPair& pr, int side, int threads) {
  if (pr.kind != Kind::CT) throw FieldError("classify_sylows applies to Curtis-Tits pairs");
  if (pr.type == PairType::A1A1)
    throw FieldError("classify_sylows needs a rank-2 pair with parabolics");
  if (!pr.ambient.enumerated()) throw FieldError("pair ambient is not enumerated");
  int j = side - 1, i = 1 - j;
  auto family = sylow_p_family(pr.side_image[j], pr.root_group[j][0]);
  auto parabolics = parabolic_pair(pr, side);
  std::vector<Mat> other_gens;
  for (const Mat& g : pr.side_image[i].generators()) other_gens.push_back(g);

  auto judge = [&](const GroupHandle& X) {
    std::vector<Mat> gens = other_gens;
    for (const Mat& x : X.elements()) gens.push_back(x);
    GroupHandle closure = GroupHandle::closure(gens, pr.ambient.order() + 1);
    SylowVerdict::Entry e{X, SylowTag::Full, closure.order(), ""};
    if (closure.order() == pr.ambient.order()) {
      e.tag = SylowTag::Full;
      e.witness = "generates the ambient group";
    } else if (parabolics[0].stab.contains_set(closure)) {
      e.tag = SylowTag::ParabolicPlus;
      e.witness = "stabilizes " + parabolics[0].witness;
    } else if (parabolics[1].stab.contains_set(closure)) {
      e.tag = SylowTag::ParabolicMinus;
      e.witness = "stabilizes " + parabolics[1].witness;
    } else {
      e.tag = SylowTag::Exceptional;
      e.witness = "proper non-parabolic closure of order " + std::to_string(closure.order());
    }
    return e;
  };

  SylowVerdict verdict{side, {}};
  if (threads > 1) {
    std::vector<std::future<SylowVerdict::Entry>> futures;
    for (auto& X : family)
      futures.push_back(std::async(std::launch::async, judge, std::cref(X)));
    for (auto& f : futures) verdict.entries.push_back(f.get());
  } else {
    for (auto& X : family) verdict.entries.push_back(judge(X));
  }
  return verdict;
}

FundamentalPairResult fundamental_pair(const StandardPair& pr, int side) {
  SylowVerdict v = classify_sylows(pr, side);
  if (v.count(SylowTag::ParabolicPlus) != 1 || v.count(SylowTag::ParabolicMinus) != 1)
    throw FieldError("expected exactly one parabolic Sylow per sign");
  FundamentalPairResult out;
  for (auto& e : v.entries) {
    if (e.tag == SylowTag::ParabolicPlus) out.plus = e.sylow;
    if (e.tag == SylowTag::ParabolicMinus) out.minus = e.sylow;
  }
  return out;
}

namespace {

std::vector<MatKey> sorted_keys(const GroupHandle& h) {
  std::vector<MatKey> k;
  for (const Mat& m : h.elements()) k.push_back(m.key());
  std::sort(k.begin(), k.end());
  return k;
}

// Distinguished pair of Sylow subgroups of the image of `from` inside the
// component, detected by minimal closure order with the other image.
std::optional<std::pair<GroupHandle, GroupHandle>> distinguished_pair(
    const RealizedAmalgam& ra, int from, int to, std::string* why) {
  const RealizedComponent& rc = ra.comp(from, to);
  const RealizedMap& mf = ra.map_of(from, to);
  const RealizedMap& mt = ra.map_of(to, from);
  // image handles
  std::vector<Mat> img;
  for (const Mat& m : ra.vgroup.at(from).elements()) img.push_back(mf.apply(m));
  GroupHandle image = GroupHandle::from_elements(std::move(img));
  // a Sylow of the image: image of the abstract upper unitriangular group
  const Field& Fv = *ra.vctx.at(from).field;
  std::vector<Mat> seed;
  for (int b = 0; b < Fv.size(); ++b) seed.push_back(mf.apply(sl2_upper(Fv, uint8_t(b))));
  auto family = sylow_p_family(image, GroupHandle::from_elements(std::move(seed)));
  // generators of the other image
  std::vector<Mat> other_gens;
  for (const Mat& g : small_generating_set(ra.vgroup.at(to))) other_gens.push_back(mt.apply(g));
  size_t best = SIZE_MAX;
  std::vector<size_t> orders;
  for (const auto& X : family) {
    std::vector<Mat> gens = other_gens;
    for (const Mat& x : X.elements()) gens.push_back(x);
    size_t n = GroupHandle::closure(gens, rc.ambient().order() + 1).order();
    orders.push_back(n);
    best = std::min(best, n);
  }
  std::vector<const GroupHandle*> mins;
  for (size_t k = 0; k < family.size(); ++k)
    if (orders[k] == best) mins.push_back(&family[k]);
  if (mins.size() != 2) {
    if (why)
      *why = "side " + std::to_string(from) + " of edge {" + std::to_string(from) + "," +
             std::to_string(to) + "} has " + std::to_string(mins.size()) +
             " minimal-closure Sylows (expected 2)";
    return std::nullopt;
  }
  return std::pair(*mins[0], *mins[1]);
}

// Pull an edge-group subgroup back to the vertex group.
std::optional<GroupHandle> pull_back(const RealizedMap& m, const GroupHandle& H) {
  std::vector<Mat> out;
  for (const Mat& x : H.elements()) {
    auto pre = m.preimage(x);
    if (!pre) return std::nullopt;
    out.push_back(*pre);
  }
  return GroupHandle::from_elements(std::move(out));
}

}  // namespace

WeakSystemResult weak_system(const RealizedAmalgam& ra) {
  if (ra.kind != Kind::CT) throw AmalgamError("weak systems are a Curtis-Tits notion");
  WeakSystemResult res;
  // per vertex, the pairs induced by each incident edge
  std::map<int, std::vector<std::tuple<int, GroupHandle, GroupHandle>>> induced;
  for (const auto& e : ra.diagram.edges())
    for (int u : {e.i, e.j}) {
      int v = e.other(u);
      std::string why;
      auto pair = distinguished_pair(ra, u, v, &why);
      if (!pair) {
        res.witness = why;
        return res;
      }
      auto p1 = pull_back(ra.map_of(u, v), pair->first);
      auto p2 = pull_back(ra.map_of(u, v), pair->second);
      if (!p1 || !p2) {
        res.witness = "distinguished pair does not pull back through the connecting map at vertex " +
                      std::to_string(u);
        return res;
      }
      induced[u].push_back({v, std::move(*p1), std::move(*p2)});
    }
  for (auto& [u, pairs] : induced) {
    auto key_pair = [](const GroupHandle& a, const GroupHandle& b) {
      auto ka = sorted_keys(a), kb = sorted_keys(b);
      return ka < kb ? std::pair(ka, kb) : std::pair(kb, ka);
    };
    auto ref = key_pair(std::get<1>(pairs[0]), std::get<2>(pairs[0]));
    for (size_t k = 1; k < pairs.size(); ++k) {
      if (key_pair(std::get<1>(pairs[k]), std::get<2>(pairs[k])) != ref) {
        res.witness = "vertex " + std::to_string(u) + ": edges {" + std::to_string(u) + "," +
                      std::to_string(std::get<0>(pairs[0])) + "} and {" + std::to_string(u) +
                      "," + std::to_string(std::get<0>(pairs[k])) +
                      "} induce different root-group pairs";
        return res;
      }
    }
    res.system.emplace(u, std::pair(std::get<1>(pairs[0]), std::get<2>(pairs[0])));
  }
  res.ok = true;
  return res;
}

PropertyDResult property_D(const RealizedAmalgam& ra) {
  if (ra.kind != Kind::Phan) throw AmalgamError("property (D) is a Phan notion");
  PropertyDResult res;
  std::map<int, std::vector<std::pair<int, GroupHandle>>> induced;
  for (const auto& e : ra.diagram.edges())
    for (int u : {e.i, e.j}) {
      int v = e.other(u);
      const RealizedMap& mu = ra.map_of(u, v);
      const RealizedMap& mv = ra.map_of(v, u);
      // D_u^v = N_{G_{u,v}}(image_v) cap image_u, brute force
      std::vector<Mat> img_u, img_v;
      for (const Mat& m : ra.vgroup.at(u).elements()) img_u.push_back(mu.apply(m));
      for (const Mat& m : ra.vgroup.at(v).elements()) img_v.push_back(mv.apply(m));
      GroupHandle Hv = GroupHandle::from_elements(std::move(img_v));
      std::vector<Mat> torus;
      for (const Mat& x : img_u) {
        Mat xi = x.inverse();
        bool norm = true;
        for (const Mat& h : Hv.elements())
          if (!Hv.contains(x * h * xi)) {
            norm = false;
            break;
          }
        if (norm) torus.push_back(x);
      }
      auto back = pull_back(mu, GroupHandle::from_elements(std::move(torus)));
      if (!back) {
        res.witness = "edge torus does not pull back at vertex " + std::to_string(u);
        return res;
      }
      induced[u].push_back({v, std::move(*back)});
    }
  for (auto& [u, tori] : induced) {
    for (size_t k = 1; k < tori.size(); ++k)
      if (!tori[0].second.same_elements(tori[k].second)) {
        res.witness = "vertex " + std::to_string(u) + ": edges {" + std::to_string(u) + "," +
                      std::to_string(tori[0].first) + "} and {" + std::to_string(u) + "," +
                      std::to_string(tori[k].first) + "} induce different tori";
        return res;
      }
    if (int(tori[0].second.order()) != ra.q + 1) {
      res.witness = "vertex " + std::to_string(u) + ": induced torus has order " +
                    std::to_string(tori[0].second.order()) + " != q+1";
      return res;
    }
    res.tori.emplace(u, tori[0].second);
  }
  res.ok = true;
  return res;
}

std::array<int, 2> torus_uniqueness_counts(const StandardPair& pr) {
  if (pr.kind != Kind::Phan || pr.type == PairType::A1A1)
    throw FieldError("torus uniqueness applies to Phan rank-2 pairs");
  std::array<int, 2> counts{0, 0};
  for (int j = 0; j < 2; ++j) {
    int i = 1 - j;
    const GroupHandle& Dji = pr.phan_torus_explicit[j];  // D_j^i inside side image j
    const GroupHandle& Dij = pr.phan_torus_explicit[i];
    // all conjugates of D_j^i under the side image
    std::map<std::vector<MatKey>, GroupHandle> conjugates;
    for (const Mat& g : pr.side_image[j].elements()) {
      Mat gi = g.inverse();
      std::vector<Mat> elems;
      std::vector<MatKey> sig;
      for (const Mat& d : Dji.elements()) {
        Mat c = g * d * gi;
        elems.push_back(c);
        sig.push_back(c.key());
      }
      std::sort(sig.begin(), sig.end());
      conjugates.emplace(std::move(sig), GroupHandle::from_elements(std::move(elems)));
    }
    bool found_standard = false;
    for (auto& [sig, T] : conjugates) {
      bool norm = true;
      for (const Mat& d : Dij.elements()) {
        Mat di = d.inverse();
        for (const Mat& t : T.elements())
          if (!T.contains(d * t * di)) {
            norm = false;
            break;
          }
        if (!norm) break;
      }
      if (norm) {
        ++counts[j];
        if (T.same_elements(Dji)) found_standard = true;
      }
    }
    if (!found_standard) counts[j] = -counts[j];  // standard torus itself not normalized
  }
  return counts;
}

bool torus_uniqueness(const StandardPair& pr) {
  auto counts = torus_uniqueness_counts(pr);
  return counts[0] == 1 && counts[1] == 1;
}

PrecheckResult noncollapse_precheck(const RealizedAmalgam& ra) {
  if (ra.kind == Kind::CT) {
    WeakSystemResult r = weak_system(ra);
    return {r.ok, r.witness};
  }
  PropertyDResult r = property_D(ra);
  return {r.ok, r.witness};
}

}  // namespace ctphan
