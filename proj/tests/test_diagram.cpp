#include "ctphan/diagram.hpp"

#include "doctest.h"

using namespace ctphan;

namespace {

Diagram a3_path(int q) {
  return Diagram(q, {0, 1, 2}, {{0, 1, EdgeType::A2}, {1, 2, EdgeType::A2}});
}

Diagram loop4(int q) {
  return Diagram(q, {0, 1, 2, 3},
                 {{0, 1, EdgeType::A2}, {1, 2, EdgeType::A2}, {2, 3, EdgeType::A2},
                  {0, 3, EdgeType::A2}});
}

}  // namespace

TEST_CASE("structural validation") {
  CHECK_NOTHROW(a3_path(2).validate_structure());
  // disconnected
  Diagram dis(2, {0, 1, 2, 3}, {{0, 1, EdgeType::A2}, {2, 3, EdgeType::A2}});
  CHECK_THROWS_AS(dis.validate_structure(), DiagramError);
  // missing head on C2
  Diagram noh(2, {0, 1}, {{0, 1, EdgeType::C2}});
  CHECK_THROWS_AS(noh.validate_structure(), DiagramError);
  CHECK_NOTHROW(Diagram(2, {0, 1}, {{0, 1, EdgeType::C2, 0}}).validate_structure());
  // not a prime power
  CHECK_THROWS_AS(Diagram(6, {0, 1}, {{0, 1, EdgeType::A2}}), DiagramError);
}

TEST_CASE("3-sphericity") {
  CHECK_FALSE(a3_path(2).three_spherical_violation().has_value());

  Diagram tri(2, {0, 1, 2},
              {{0, 1, EdgeType::A2}, {1, 2, EdgeType::A2}, {0, 2, EdgeType::A2}});
  auto v = tri.three_spherical_violation();
  REQUIRE(v.has_value());
  CHECK(v->find("triangle") != std::string::npos);

  Diagram two4(2, {0, 1, 2},
               {{0, 1, EdgeType::C2, 0}, {1, 2, EdgeType::TA3, 2}});
  auto w = two4.three_spherical_violation();
  REQUIRE(w.has_value());
  CHECK(w->find("label-4") != std::string::npos);
}

TEST_CASE("field degree propagation") {
  SUBCASE("single 2A3 edge: head doubles") {
    Diagram d(2, {0, 1}, {{0, 1, EdgeType::TA3, 0}});
    auto deg = d.field_degrees();
    CHECK(deg[0] == 2);
    CHECK(deg[1] == 1);
  }
  SUBCASE("all-A2 path") {
    auto deg = a3_path(3).field_degrees();
    for (auto [v, e] : deg) CHECK(e == 1);
  }
  SUBCASE("cycle with one unbalanced 2A3 edge") {
    Diagram d(2, {0, 1, 2, 3},
              {{0, 1, EdgeType::TA3, 0}, {1, 2, EdgeType::A2}, {2, 3, EdgeType::A2},
               {0, 3, EdgeType::A2}});
    CHECK_THROWS_AS(d.field_degrees(), DiagramError);
  }
  SUBCASE("balanced cycle with two 2A3 edges") {
    Diagram d(2, {0, 1, 2, 3},
              {{0, 1, EdgeType::TA3, 0}, {1, 2, EdgeType::A2}, {2, 3, EdgeType::TA3, 3},
               {0, 3, EdgeType::A2}});
    auto deg = d.field_degrees();
    CHECK(deg[0] == 2);
    CHECK(deg[1] == 1);
    CHECK(deg[2] == 1);
    CHECK(deg[3] == 2);
  }
}

TEST_CASE("homotopy rank") {
  CHECK(a3_path(2).homotopy_rank() == 0);
  CHECK(loop4(2).homotopy_rank() == 1);
}

TEST_CASE("minimal spanning tree") {
  SUBCASE("simple all-A2 loop of length 4") {
    auto td = minimal_spanning_tree(loop4(2));
    REQUIRE(td.off_tree.size() == 1);
    CHECK(td.off_tree[0].degree == 1);
    CHECK(td.tree_edges.size() == 3);
    CHECK(td.off_tree[0].loop.size() == 5);  // closed walk over 4 vertices
  }
  SUBCASE("loop containing one C2 edge: off-tree edge is A2") {
    Diagram d(2, {0, 1, 2, 3},
              {{0, 1, EdgeType::C2, 0}, {1, 2, EdgeType::A2}, {2, 3, EdgeType::A2},
               {0, 3, EdgeType::A2}});
    auto td = minimal_spanning_tree(d);
    REQUIRE(td.off_tree.size() == 1);
    const auto* e = d.edge_between(td.off_tree[0].i, td.off_tree[0].j);
    REQUIRE(e != nullptr);
    CHECK(e->type == EdgeType::A2);
    // the C2 edge stays in the tree
    CHECK(td.tree_contains(0, 1));
  }
  SUBCASE("theta graph has rank 2") {
    Diagram d(2, {0, 1, 2, 3, 4},
              {{0, 1, EdgeType::A2}, {1, 4, EdgeType::A2}, {0, 2, EdgeType::A2},
               {2, 4, EdgeType::A2}, {0, 3, EdgeType::A2}, {3, 4, EdgeType::A2}});
    CHECK(d.homotopy_rank() == 2);
    auto td = minimal_spanning_tree(d);
    CHECK(td.off_tree.size() == 2);
    CHECK(td.tree_edges.size() == 4);
  }
  SUBCASE("deterministic") {
    auto a = minimal_spanning_tree(loop4(4));
    auto b = minimal_spanning_tree(loop4(4));
    REQUIRE(a.off_tree.size() == b.off_tree.size());
    CHECK(a.off_tree[0].i == b.off_tree[0].i);
    CHECK(a.off_tree[0].j == b.off_tree[0].j);
    CHECK(a.off_tree[0].loop == b.off_tree[0].loop);
  }
  SUBCASE("loop through a 2A3 edge keeps it in the tree") {
    // 0-1 (2A3, head 0), 1-2, 2-0 is a triangle: not 3-spherical; use a square
    Diagram d(2, {0, 1, 2, 3},
              {{0, 1, EdgeType::TA3, 0}, {1, 2, EdgeType::A2}, {2, 3, EdgeType::TA3, 3},
               {0, 3, EdgeType::A2}});
    auto td = minimal_spanning_tree(d);
    REQUIRE(td.off_tree.size() == 1);
    const auto* e = d.edge_between(td.off_tree[0].i, td.off_tree[0].j);
    CHECK(e->type == EdgeType::A2);
    // minimal-degree choice: the degree-1 A2 edge {1,2} is removed, not {0,3}
    CHECK(td.off_tree[0].i == 1);
    CHECK(td.off_tree[0].j == 2);
    CHECK(td.off_tree[0].degree == 1);
    // witness loop vertices all have degree >= 1 (here the whole square)
    CHECK(td.off_tree[0].loop.size() == 5);
  }
}

TEST_CASE("degrees invariant under relabeling") {
  Diagram d1(2, {0, 1, 2}, {{0, 1, EdgeType::TA3, 0}, {1, 2, EdgeType::A2}});
  Diagram d2(2, {5, 7, 9}, {{5, 7, EdgeType::TA3, 5}, {7, 9, EdgeType::A2}});
  auto a = d1.field_degrees();
  auto b = d2.field_degrees();
  CHECK(a[0] == b[5]);
  CHECK(a[1] == b[7]);
  CHECK(a[2] == b[9]);
}

TEST_CASE("canonical string and hash") {
  auto a = loop4(2), b = loop4(2);
  CHECK(a.canonical_string() == b.canonical_string());
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != a3_path(2).hash());
}
