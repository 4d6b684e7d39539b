#include "ctphan/standard_pairs.hpp"

#include "doctest.h"

using namespace ctphan;

TEST_CASE("CT ambient orders match the classical formulas") {
  CHECK(get_standard_pair(Kind::CT, PairType::A2, 2).ambient.order() == 168);
  CHECK(get_standard_pair(Kind::CT, PairType::A2, 3).ambient.order() == 5616);
  CHECK(get_standard_pair(Kind::CT, PairType::C2, 2).ambient.order() == 720);
  CHECK(get_standard_pair(Kind::CT, PairType::TA3, 2).ambient.order() == 25920);
  auto& p = get_standard_pair(Kind::CT, PairType::A1A1, 3);
  CHECK(p.ambient.order() == 24 * 24);
}

TEST_CASE("TA3(2) side orders: SL2(4) and SU2(2)") {
  auto& p = get_standard_pair(Kind::CT, PairType::TA3, 2);
  CHECK(p.side_image[0].order() == 60);
  CHECK(p.side_image[1].order() == 6);
  CHECK(p.vertex_field[0]->size() == 4);  // F_{q^2} at q = 2
  CHECK(p.vertex_field[1]->size() == 2);
}

TEST_CASE("Phan ambient orders") {
  CHECK(get_standard_pair(Kind::Phan, PairType::A2, 2).ambient.order() == 216);
  CHECK(get_standard_pair(Kind::Phan, PairType::C2, 2).ambient.order() == 720);
  CHECK(get_standard_pair(Kind::Phan, PairType::C2, 3).ambient.order() == 51840);
  CHECK_THROWS_AS(get_standard_pair(Kind::Phan, PairType::TA3, 2), FieldError);
}

TEST_CASE("identification maps are injective homomorphisms (exhaustive)") {
  // all vertex groups with q^e <= 9
  const std::tuple<Kind, PairType, int> cases[] = {
      {Kind::CT, PairType::A2, 2},  {Kind::CT, PairType::A2, 3},
      {Kind::CT, PairType::C2, 2},  {Kind::CT, PairType::C2, 3},
      {Kind::CT, PairType::TA3, 2}, {Kind::Phan, PairType::A2, 2},
      {Kind::Phan, PairType::A2, 3}, {Kind::Phan, PairType::C2, 2},
  };
  for (auto [kind, type, q] : cases) {
    CAPTURE(kind_name(kind));
    CAPTURE(pair_type_name(type));
    CAPTURE(q);
    const auto& pr = get_standard_pair(kind, type, q);
    for (int s = 0; s < 2; ++s) {
      const auto& V = pr.vertex_group[s];
      // homomorphism on all pairs
      for (const Mat& a : V.elements())
        for (const Mat& b : V.elements())
          REQUIRE(pr.iota[s].apply(a * b) == pr.iota[s].apply(a) * pr.iota[s].apply(b));
      // injective: image size equals group order
      CHECK(pr.side_image[s].order() == V.order());
      // round trip through preimage
      for (const Mat& a : V.elements()) {
        auto back = pr.iota[s].preimage(pr.iota[s].apply(a));
        REQUIRE(back.has_value());
        CHECK(*back == a);
      }
    }
  }
}

TEST_CASE("ambient equals the closure of the two side images") {
  const auto& pr = get_standard_pair(Kind::CT, PairType::C2, 2);
  std::vector<Mat> gens;
  for (const Mat& m : pr.side_image[0].elements()) gens.push_back(m);
  for (const Mat& m : pr.side_image[1].elements()) gens.push_back(m);
  CHECK(GroupHandle::closure(gens).order() == pr.ambient.order());
}

TEST_CASE("Phan side images generate proper subgroups at q = 2") {
  // The Phan ambients are cut out by their forms; at q = 2 the two SU2
  // blocks generate subgroups of index 4 (A2) and 10 (C2).
  const auto& a2 = get_standard_pair(Kind::Phan, PairType::A2, 2);
  std::vector<Mat> gens;
  for (const Mat& m : a2.side_image[0].elements()) gens.push_back(m);
  for (const Mat& m : a2.side_image[1].elements()) gens.push_back(m);
  CHECK(GroupHandle::closure(gens).order() == 54);

  const auto& c2 = get_standard_pair(Kind::Phan, PairType::C2, 2);
  gens.clear();
  for (const Mat& m : c2.side_image[0].elements()) gens.push_back(m);
  for (const Mat& m : c2.side_image[1].elements()) gens.push_back(m);
  CHECK(GroupHandle::closure(gens).order() == 72);
}

TEST_CASE("A1A1 sides commute") {
  const auto& pr = get_standard_pair(Kind::CT, PairType::A1A1, 2);
  for (const Mat& a : pr.side_image[0].elements())
    for (const Mat& b : pr.side_image[1].elements()) CHECK(a * b == b * a);
}

TEST_CASE("non-A1A1 sides do not commute") {
  const auto& pr = get_standard_pair(Kind::CT, PairType::A2, 2);
  bool all = true;
  for (const Mat& a : pr.side_image[0].elements())
    for (const Mat& b : pr.side_image[1].elements())
      if (!(a * b == b * a)) all = false;
  CHECK_FALSE(all);
}

TEST_CASE("form preservation") {
  SUBCASE("CT C2: symplectic") {
    const auto& pr = get_standard_pair(Kind::CT, PairType::C2, 2);
    REQUIRE(pr.forms.size() == 1);
    CHECK(pr.ambient.all_preserve_forms());
  }
  SUBCASE("CT 2A3: hermitian") {
    const auto& pr = get_standard_pair(Kind::CT, PairType::TA3, 2);
    REQUIRE(pr.forms.size() == 1);
    CHECK(pr.ambient.all_preserve_forms());
  }
  SUBCASE("Phan C2: both forms on every closure element") {
    const auto& pr = get_standard_pair(Kind::Phan, PairType::C2, 2);
    REQUIRE(pr.forms.size() == 2);
    CHECK(pr.ambient.all_preserve_forms());
  }
  SUBCASE("Phan C2 at q=3 spot check on generators") {
    const auto& pr = get_standard_pair(Kind::Phan, PairType::C2, 3);
    for (const Mat& g : pr.ambient.generators())
      for (const auto& tag : pr.forms) CHECK(preserves_form(g, tag));
  }
}

TEST_CASE("fundamental root groups: explicit lists") {
  SUBCASE("A2: unitriangular blocks of order q") {
    for (int q : {2, 3, 4}) {
      const auto& pr = get_standard_pair(Kind::CT, PairType::A2, q);
      for (int s = 0; s < 2; ++s)
        for (int eps = 0; eps < 2; ++eps) CHECK(int(pr.root_group[s][eps].order()) == q);
      // X_1^+ is the upper unitriangular block
      const Field& F = *pr.ambient_field;
      Mat u = Mat::identity(F, 3);
      u.set(0, 1, F.one());
      CHECK(pr.root_group[0][0].contains(u));
    }
  }
  SUBCASE("2A3(2): side-1 root groups have order q^2") {
    const auto& pr = get_standard_pair(Kind::CT, PairType::TA3, 2);
    CHECK(pr.root_group[0][0].order() == 4);
    CHECK(pr.root_group[1][0].order() == 2);
  }
  SUBCASE("commutation [X_1^+, X_2^-] = 1") {
    for (auto [t, q] : {std::pair{PairType::A2, 3}, {PairType::C2, 2}, {PairType::TA3, 2}}) {
      const auto& pr = get_standard_pair(Kind::CT, t, q);
      for (const Mat& a : pr.root_group[0][0].elements())
        for (const Mat& b : pr.root_group[1][1].elements()) CHECK(a * b == b * a);
      // ... but [X_1^+, X_2^+] != 1
      bool commutes = true;
      for (const Mat& a : pr.root_group[0][0].elements())
        for (const Mat& b : pr.root_group[1][0].elements())
          if (!(a * b == b * a)) commutes = false;
      CHECK_FALSE(commutes);
    }
  }
  SUBCASE("<X_1^+, X_2^+> is a p-group") {
    for (auto [t, q] : {std::pair{PairType::A2, 2}, {PairType::C2, 2}, {PairType::TA3, 2}}) {
      const auto& pr = get_standard_pair(Kind::CT, t, q);
      std::vector<Mat> gens;
      for (const Mat& m : pr.root_group[0][0].elements()) gens.push_back(m);
      for (const Mat& m : pr.root_group[1][0].elements()) gens.push_back(m);
      size_t n = GroupHandle::closure(gens).order();
      while (n % 2 == 0) n /= 2;
      CHECK(n == 1);
    }
  }
}

TEST_CASE("Phan tori") {
  SUBCASE("A2(2): |D_i^j| = 3") {
    const auto& pr = get_standard_pair(Kind::Phan, PairType::A2, 2);
    CHECK(pr.phan_torus_explicit[0].order() == 3);
    CHECK(pr.phan_torus_explicit[1].order() == 3);
  }
  SUBCASE("brute force agrees with explicit form") {
    for (auto [t, q] : {std::pair{PairType::A2, 2}, {PairType::A2, 3}, {PairType::C2, 2}}) {
      const auto& pr = get_standard_pair(Kind::Phan, t, q);
      auto [d12, d21] = phan_tori_brute_force(pr);
      CHECK(d12.same_elements(pr.phan_torus_explicit[0]));
      CHECK(d21.same_elements(pr.phan_torus_explicit[1]));
      CHECK(int(d12.order()) == q + 1);
    }
  }
  SUBCASE("C2: D_2^1 = diag(1, a, 1, a^sigma)") {
    for (int q : {2, 3}) {
      const auto& pr = get_standard_pair(Kind::Phan, PairType::C2, q);
      const Field& A = *pr.ambient_field;
      int ep = A.e() / 2;
      for (const Mat& m : pr.phan_torus_explicit[1].elements()) {
        CHECK(m.at(0, 0) == A.one());
        CHECK(m.at(2, 2) == A.one());
        CHECK(m.at(3, 3) == A.frob(m.at(1, 1), ep));
        CHECK(A.norm(m.at(1, 1), ep) == A.one());
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(m.at(i, j) == 0);
      }
    }
  }
  SUBCASE("<D_1^2, D_2^1> is the full diagonal torus of order (q+1)^2") {
    for (auto [t, q] : {std::pair{PairType::A2, 2}, {PairType::C2, 2}, {PairType::A2, 3}}) {
      const auto& pr = get_standard_pair(Kind::Phan, t, q);
      std::vector<Mat> gens;
      for (const Mat& m : pr.phan_torus_explicit[0].elements()) gens.push_back(m);
      for (const Mat& m : pr.phan_torus_explicit[1].elements()) gens.push_back(m);
      auto T = GroupHandle::closure(gens);
      CHECK(int(T.order()) == (q + 1) * (q + 1));
      // equals the diagonal subgroup of the ambient
      std::vector<Mat> diag;
      for (const Mat& m : pr.ambient.elements()) {
        bool isdiag = true;
        for (int i = 0; i < pr.dim && isdiag; ++i)
          for (int j = 0; j < pr.dim; ++j)
            if (i != j && m.at(i, j) != 0) {
              isdiag = false;
              break;
            }
        if (isdiag) diag.push_back(m);
      }
      CHECK(T.same_elements(GroupHandle::from_elements(std::move(diag))));
    }
  }
}

TEST_CASE("budget gating") {
  CHECK_THROWS_AS(get_standard_pair(Kind::CT, PairType::TA3, 3, 1'000'000), BudgetError);
  CHECK_THROWS_AS(get_standard_pair(Kind::CT, PairType::A2, 4, 1000), BudgetError);
}
