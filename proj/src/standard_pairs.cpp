#include "ctphan/standard_pairs.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace ctphan {

std::string kind_name(Kind k) { return k == Kind::CT ? "ct" : "phan"; }

Kind kind_from_name(const std::string& s) {
  if (s == "ct" || s == "CT") return Kind::CT;
  if (s == "phan" || s == "Phan") return Kind::Phan;
  throw FieldError("unknown amalgam kind: " + s);
}

std::string pair_type_name(PairType t) {
  switch (t) {
    case PairType::A1A1: return "A1A1";
    case PairType::A2: return "A2";
    case PairType::C2: return "C2";
    case PairType::TA3: return "2A3";
  }
  return "?";
}

PairType pair_type_from_name(const std::string& s) {
  if (s == "A1A1" || s == "A1xA1") return PairType::A1A1;
  if (s == "A2") return PairType::A2;
  if (s == "C2") return PairType::C2;
  if (s == "2A3" || s == "TA3") return PairType::TA3;
  throw FieldError("unknown pair type: " + s);
}

Mat sl2_upper(const Field& F, uint8_t b) {
  Mat m = Mat::identity(F, 2);
  m.set(0, 1, b);
  return m;
}

Mat sl2_lower(const Field& F, uint8_t c) {
  Mat m = Mat::identity(F, 2);
  m.set(1, 0, c);
  return m;
}

GroupHandle enumerate_sl2(const Field& F, size_t budget) {
  std::vector<Mat> gens;
  for (int i = 0; i < F.e(); ++i) {
    std::vector<int> coords(F.e(), 0);
    coords[i] = 1;
    uint8_t b = F.from_coords(coords);
    gens.push_back(sl2_upper(F, b));
    gens.push_back(sl2_lower(F, b));
  }
  return GroupHandle::closure(gens, budget);
}

GroupHandle enumerate_su2(const Field& fq2) {
  if (fq2.e() % 2 != 0) throw FieldError("SU2 needs a quadratic extension field");
  int ep = fq2.e() / 2;
  std::vector<Mat> elems;
  for (int a = 0; a < fq2.size(); ++a)
    for (int b = 0; b < fq2.size(); ++b) {
      if (fq2.add(fq2.norm(uint8_t(a), ep), fq2.norm(uint8_t(b), ep)) != fq2.one()) continue;
      Mat m(fq2, 2);
      m.set(0, 0, uint8_t(a));
      m.set(0, 1, uint8_t(b));
      m.set(1, 0, fq2.neg(fq2.frob(uint8_t(b), ep)));
      m.set(1, 1, fq2.frob(uint8_t(a), ep));
      elems.push_back(m);
    }
  GroupHandle g = GroupHandle::from_elements(std::move(elems));
  return GroupHandle::from_elements(g.elements(), small_generating_set(g));
}

std::vector<Mat> small_generating_set(const GroupHandle& G) {
  std::vector<Mat> gens;
  size_t covered = 1;
  GroupHandle cur;
  for (const Mat& m : G.elements()) {
    if (covered == G.order()) break;
    if (gens.empty()) {
      if (m == Mat::identity(m.field(), m.n())) continue;
      gens.push_back(m);
      cur = GroupHandle::closure(gens);
      covered = cur.order();
      continue;
    }
    if (cur.contains(m)) continue;
    gens.push_back(m);
    cur = GroupHandle::closure(gens);
    covered = cur.order();
  }
  if (covered != G.order()) throw FieldError("small_generating_set: could not generate");
  return gens;
}

namespace {

uint8_t sigma(const Field& A, uint8_t x) { return A.frob(x, A.e() / 2); }

}  // namespace

Mat IdentMap::apply(const Mat& m) const {
  const Field& A = *afield;
  auto E = [&](uint8_t x) { return emb ? emb->fwd(x) : x; };
  uint8_t a = E(m.at(0, 0)), b = E(m.at(0, 1)), c = E(m.at(1, 0)), d = E(m.at(1, 1));
  Mat M = Mat::identity(A, dim);
  auto put_block = [&](int r0, int c0, uint8_t w, uint8_t x, uint8_t y, uint8_t z) {
    M.set(r0, c0, w);
    M.set(r0, c0 + 1, x);
    M.set(r0 + 1, c0, y);
    M.set(r0 + 1, c0 + 1, z);
  };
  switch (type) {
    case PairType::A1A1:
      if (side == 1)
        put_block(0, 0, a, b, c, d);
      else
        put_block(2, 2, a, b, c, d);
      break;
    case PairType::A2:
      if (side == 1)
        put_block(0, 0, a, b, c, d);
      else
        put_block(1, 1, a, b, c, d);
      break;
    case PairType::C2:
      if (kind == Kind::CT) {
        if (side == 1) {
          put_block(0, 0, a, b, c, d);
          put_block(2, 2, d, A.neg(c), A.neg(b), a);
        } else {
          M.set(1, 1, a);
          M.set(1, 3, b);
          M.set(3, 1, c);
          M.set(3, 3, d);
        }
      } else {
        if (side == 1) {
          put_block(0, 0, a, b, c, d);
          put_block(2, 2, sigma(A, a), sigma(A, b), sigma(A, c), sigma(A, d));
        } else {
          M.set(1, 1, a);
          M.set(1, 3, b);
          M.set(3, 1, c);
          M.set(3, 3, d);
        }
      }
      break;
    case PairType::TA3:
      if (side == 1) {
        put_block(0, 0, a, b, c, d);
        put_block(2, 2, sigma(A, d), A.neg(sigma(A, c)), A.neg(sigma(A, b)), sigma(A, a));
      } else {
        M.set(1, 1, a);
        M.set(1, 3, A.mul(b, eta));
        M.set(3, 1, A.mul(c, A.inv(eta)));
        M.set(3, 3, d);
      }
      break;
  }
  return M;
}

std::optional<Mat> IdentMap::preimage(const Mat& M) const {
  const Field& A = *afield;
  // Read the candidate 2x2 from the defining entries, then verify.
  uint8_t aa, ab, ac, ad;
  bool offdiag_block = (type == PairType::C2 || type == PairType::TA3) && side == 2;
  if (offdiag_block) {
    aa = M.at(1, 1);
    ab = M.at(1, 3);
    ac = M.at(3, 1);
    ad = M.at(3, 3);
    if (type == PairType::TA3) {
      ab = A.mul(ab, A.inv(eta));
      ac = A.mul(ac, eta);
    }
  } else {
    int r0 = 0;
    if (type == PairType::A1A1 && side == 2) r0 = 2;
    if (type == PairType::A2 && side == 2) r0 = 1;
    aa = M.at(r0, r0);
    ab = M.at(r0, r0 + 1);
    ac = M.at(r0 + 1, r0);
    ad = M.at(r0 + 1, r0 + 1);
  }
  const Field& V = *vfield;
  Mat m(V, 2);
  if (emb) {
    if (!emb->in_image(aa) || !emb->in_image(ab) || !emb->in_image(ac) || !emb->in_image(ad))
      return std::nullopt;
    m.set(0, 0, emb->back(aa));
    m.set(0, 1, emb->back(ab));
    m.set(1, 0, emb->back(ac));
    m.set(1, 1, emb->back(ad));
  } else {
    m.set(0, 0, aa);
    m.set(0, 1, ab);
    m.set(1, 0, ac);
    m.set(1, 1, ad);
  }
  if (apply(m) != M) return std::nullopt;
  return m;
}

long long expected_pair_order(Kind kind, PairType type, int q) {
  switch (type) {
    case PairType::A1A1: {
      long long s = classical_order("SL2", q);
      return s * s;
    }
    case PairType::A2:
      return kind == Kind::CT ? classical_order("SL3", q) : classical_order("SU3", q);
    case PairType::C2:
      return classical_order("Sp4", q);
    case PairType::TA3:
      if (kind == Kind::Phan) throw FieldError("no Phan standard pair of type 2A3");
      return classical_order("SU4", q);
  }
  throw FieldError("unreachable");
}

namespace {

std::pair<int, int> q_decompose(int q) {
  int p = 0;
  for (int d = 2; d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  int k = 0, m = q;
  while (m % p == 0) {
    m /= p;
    ++k;
  }
  if (m != 1) throw FieldError("q is not a prime power");
  return {p, k};
}

Mat gram_symplectic(const Field& A) {
  // rows: e1 -> e3, e2 -> e4 pairing with signs
  Mat M(A, 4);
  M.set(0, 2, A.one());
  M.set(1, 3, A.one());
  M.set(2, 0, A.neg(A.one()));
  M.set(3, 1, A.neg(A.one()));
  return M;
}

Mat gram_hyperbolic_hermitian(const Field& A) {
  Mat M(A, 4);
  M.set(0, 2, A.one());
  M.set(1, 3, A.one());
  M.set(2, 0, A.one());
  M.set(3, 1, A.one());
  return M;
}

GroupHandle image_of(const IdentMap& io, const GroupHandle& vgroup) {
  std::vector<Mat> elems, gens;
  for (const Mat& m : vgroup.elements()) elems.push_back(io.apply(m));
  for (const Mat& m : vgroup.generators()) gens.push_back(io.apply(m));
  return GroupHandle::from_elements(std::move(elems), std::move(gens));
}

std::unique_ptr<StandardPair> build_pair(Kind kind, PairType type, int q, size_t budget,
                                         bool shallow) {
  long long predicted = expected_pair_order(kind, type, q);
  if (!shallow && predicted > (long long)budget)
    throw BudgetError("standard pair " + kind_name(kind) + "/" + pair_type_name(type) + "(" +
                          std::to_string(q) + ") order " + std::to_string(predicted) +
                          " exceeds budget",
                      0);
  auto [p, ep] = q_decompose(q);

  auto sp = std::make_unique<StandardPair>();
  sp->kind = kind;
  sp->type = type;
  sp->q = q;
  sp->base_exp = ep;

  if (type == PairType::A1A1) {
    ProductComponent pc = make_product_component(kind, q, 1, 1, budget);
    sp->ambient_field = pc.ambient_field;
    sp->dim = 4;
    sp->iota[0] = pc.iota[0];
    sp->iota[1] = pc.iota[1];
    sp->ambient = pc.ambient;
    for (int s = 0; s < 2; ++s) {
      const Field& V = *sp->iota[s].vfield;
      sp->vertex_field[s] = &V;
      sp->vertex_group[s] = kind == Kind::CT ? enumerate_sl2(V, budget) : enumerate_su2(V);
      sp->side_image[s] = image_of(sp->iota[s], sp->vertex_group[s]);
      if (kind == Kind::CT)
        for (int eps = 0; eps < 2; ++eps) {
          std::vector<Mat> xs;
          for (int b = 0; b < V.size(); ++b)
            xs.push_back(sp->iota[s].apply(eps == 0 ? sl2_upper(V, uint8_t(b))
                                                    : sl2_lower(V, uint8_t(b))));
          sp->root_group[s][eps] = GroupHandle::from_elements(std::move(xs));
        }
    }
    return sp;
  }

  const Field* A = nullptr;
  int dim = 0;
  if (kind == Kind::CT) {
    switch (type) {
      case PairType::A2:
        A = &Field::get(p, ep);
        dim = 3;
        break;
      case PairType::C2:
        A = &Field::get(p, ep);
        dim = 4;
        break;
      case PairType::TA3:
        A = &Field::get(p, 2 * ep);
        dim = 4;
        break;
      default: break;
    }
  } else {
    A = &Field::get(p, 2 * ep);
    dim = type == PairType::A2 ? 3 : 4;
  }
  sp->ambient_field = A;
  sp->dim = dim;

  for (int s = 0; s < 2; ++s) {
    IdentMap& io = sp->iota[s];
    io.kind = kind;
    io.type = type;
    io.side = s + 1;
    io.afield = A;
    io.dim = dim;
    if (kind == Kind::CT) {
      if (type == PairType::TA3) {
        sp->sc = special_constants(*A);
        io.eta = sp->sc.eta;
        io.vfield = s == 0 ? A : &Field::get(p, ep);
        if (s == 1) io.emb = &Embedding::get(*io.vfield, *A);
      } else {
        io.vfield = A;
      }
    } else {
      io.vfield = A;  // Phan vertex groups live over F_{q^2}
    }
    sp->vertex_field[s] = io.vfield;
    sp->vertex_group[s] =
        kind == Kind::CT ? enumerate_sl2(*io.vfield, budget) : enumerate_su2(*io.vfield);
    sp->side_image[s] = image_of(io, sp->vertex_group[s]);
  }
  if (!shallow) {
    if (kind == Kind::CT) {
      // The side images generate the ambient group (Curtis-Tits pairs).
      std::vector<Mat> agens;
      for (int s = 0; s < 2; ++s)
        for (const Mat& g : sp->side_image[s].generators()) agens.push_back(g);
      sp->ambient = GroupHandle::closure(agens, budget);
    } else {
      // Phan ambients are cut out by their forms; the side images need not
      // generate them at small q (at q = 2 they generate proper subgroups
      // of index 4 resp. 10).
      std::vector<GroupHandle::FormTag> forms;
      if (type == PairType::A2) {
        forms.push_back({GroupHandle::FormTag::Hermitian, Mat::identity(*A, 3)});
      } else {
        forms.push_back({GroupHandle::FormTag::Symplectic, gram_symplectic(*A)});
        forms.push_back({GroupHandle::FormTag::Hermitian, Mat::identity(*A, 4)});
      }
      std::vector<Mat> elems = special_isometry_group(*A, dim, forms, budget);
      GroupHandle g = GroupHandle::from_elements(std::move(elems));
      sp->ambient = GroupHandle::from_elements(g.elements(), small_generating_set(g));
      for (int s = 0; s < 2; ++s)
        if (!sp->ambient.contains_set(sp->side_image[s]))
          throw FieldError("Phan side image not contained in the form-isometry group");
    }
    if ((long long)sp->ambient.order() != predicted)
      throw FieldError("standard pair ambient order " + std::to_string(sp->ambient.order()) +
                       " != classical order " + std::to_string(predicted));
  }

  if (kind == Kind::CT) {
    if (type == PairType::C2)
      sp->forms.push_back({GroupHandle::FormTag::Symplectic, gram_symplectic(*A)});
    if (type == PairType::TA3)
      sp->forms.push_back({GroupHandle::FormTag::Hermitian, gram_hyperbolic_hermitian(*A)});
    for (int s = 0; s < 2; ++s) {
      const Field& V = *sp->vertex_field[s];
      for (int eps = 0; eps < 2; ++eps) {
        std::vector<Mat> xs;
        for (int b = 0; b < V.size(); ++b)
          xs.push_back(sp->iota[s].apply(eps == 0 ? sl2_upper(V, uint8_t(b))
                                                  : sl2_lower(V, uint8_t(b))));
        sp->root_group[s][eps] = GroupHandle::from_elements(std::move(xs));
      }
    }
  } else {
    if (type == PairType::A2) {
      Mat I3 = Mat::identity(*A, 3);
      sp->forms.push_back({GroupHandle::FormTag::Hermitian, I3});
    } else {
      sp->forms.push_back({GroupHandle::FormTag::Symplectic, gram_symplectic(*A)});
      sp->forms.push_back({GroupHandle::FormTag::Hermitian, Mat::identity(*A, 4)});
    }
    // Explicit edge tori: images of the diagonal torus of SU2.
    int epp = A->e() / 2;
    for (int s = 0; s < 2; ++s) {
      std::vector<Mat> ds;
      for (int a = 0; a < A->size(); ++a) {
        if (a == 0 || A->norm(uint8_t(a), epp) != A->one()) continue;
        Mat d(*A, 2);
        d.set(0, 0, uint8_t(a));
        d.set(1, 1, A->frob(uint8_t(a), epp));
        ds.push_back(sp->iota[s].apply(d));
      }
      sp->phan_torus_explicit[s] = GroupHandle::from_elements(std::move(ds));
    }
    // Cross-check against the normalizer definition.
    auto [d12, d21] = phan_tori_brute_force(*sp);
    if (!d12.same_elements(sp->phan_torus_explicit[0]) ||
        !d21.same_elements(sp->phan_torus_explicit[1]))
      throw FieldError("Phan edge tori: explicit and brute-force computations disagree");
  }
  if (!shallow) sp->ambient.formtags = sp->forms;
  return sp;
}

}  // namespace

long long StandardPair::expected_order() const { return expected_pair_order(kind, type, q); }

const StandardPair& get_standard_pair(Kind kind, PairType type, int q, size_t budget) {
  long long predicted = expected_pair_order(kind, type, q);
  if (predicted > (long long)budget)
    throw BudgetError("standard pair order " + std::to_string(predicted) + " exceeds budget", 0);
  static std::mutex mu;
  static std::map<std::tuple<Kind, PairType, int>, std::unique_ptr<StandardPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{kind, type, q}];
  if (!slot) slot = build_pair(kind, type, q, budget, false);
  return *slot;
}

const StandardPair& get_standard_pair_shallow(Kind kind, PairType type, int q) {
  static std::mutex mu;
  static std::map<std::tuple<Kind, PairType, int>, std::unique_ptr<StandardPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{kind, type, q}];
  if (!slot) slot = build_pair(kind, type, q, GroupHandle::kDefaultBudget, true);
  return *slot;
}

std::pair<GroupHandle, GroupHandle> phan_tori_brute_force(const StandardPair& pair) {
  auto torus = [&](int i, int j) {
    std::vector<Mat> out;
    for (const Mat& x : pair.side_image[i].elements()) {
      Mat xi = x.inverse();
      bool norm = true;
      for (const Mat& h : pair.side_image[j].elements())
        if (!pair.side_image[j].contains(x * h * xi)) {
          norm = false;
          break;
        }
      if (norm) out.push_back(x);
    }
    return GroupHandle::from_elements(std::move(out));
  };
  return {torus(0, 1), torus(1, 0)};
}

ProductComponent make_product_component(Kind kind, int q, int deg1, int deg2, size_t budget) {
  auto [p, ep] = q_decompose(q);
  ProductComponent pc;
  int d1 = kind == Kind::CT ? deg1 : 2, d2 = kind == Kind::CT ? deg2 : 2;
  if (kind == Kind::Phan && (deg1 != 1 || deg2 != 1))
    throw FieldError("Phan vertices all have degree 1");
  int dmax = std::max(d1, d2);
  const Field& A = Field::get(p, ep * dmax);
  pc.ambient_field = &A;
  GroupHandle v1, v2;
  const Field& F1 = Field::get(p, ep * d1);
  const Field& F2 = Field::get(p, ep * d2);
  v1 = kind == Kind::CT ? enumerate_sl2(F1, budget) : enumerate_su2(F1);
  v2 = kind == Kind::CT ? enumerate_sl2(F2, budget) : enumerate_su2(F2);
  if (v1.order() * v2.order() > budget)
    throw BudgetError("product component exceeds budget", 0);
  for (int s = 0; s < 2; ++s) {
    IdentMap& io = pc.iota[s];
    io.kind = kind;
    io.type = PairType::A1A1;
    io.side = s + 1;
    io.afield = &A;
    io.dim = 4;
    io.vfield = s == 0 ? &F1 : &F2;
    if (io.vfield != &A) io.emb = &Embedding::get(*io.vfield, A);
  }
  std::vector<Mat> elems;
  elems.reserve(v1.order() * v2.order());
  for (const Mat& g : v1.elements())
    for (const Mat& h : v2.elements()) {
      Mat M = pc.iota[0].apply(g);
      Mat N = pc.iota[1].apply(h);
      elems.push_back(M * N);
    }
  std::vector<Mat> gens;
  for (const Mat& g : v1.generators()) gens.push_back(pc.iota[0].apply(g));
  for (const Mat& h : v2.generators()) gens.push_back(pc.iota[1].apply(h));
  pc.ambient = GroupHandle::from_elements(std::move(elems), std::move(gens));
  return pc;
}

}  // namespace ctphan
