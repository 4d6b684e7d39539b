#pragma once

#include <array>
#include <optional>

#include "ctphan/ffield.hpp"
#include "ctphan/matgrp.hpp"
#include "ctphan/standard_pairs.hpp"

namespace ctphan {

/// The abelian C-part of a vertex or edge automorphism: a Frobenius
/// exponent r (mod the automorphism group order of the relevant field) and
/// a tau exponent s (mod 2; absent for Phan, where tau = sigma is already
/// a field power).
struct CCoord {
  int r = 0;
  int s = 0;
  int r_mod = 1;
  bool has_s = true;

  static CCoord zero(int r_mod, bool has_s) { return {0, 0, r_mod, has_s}; }
  CCoord plus(const CCoord& o) const;
  CCoord minus(const CCoord& o) const;
  CCoord negated() const;
  bool is_zero() const { return r == 0 && s == 0; }
  bool operator==(const CCoord& o) const { return r == o.r && s == o.s; }
  bool operator!=(const CCoord& o) const { return !(*this == o); }
};

/// Element of A_i = T_i x| C_i in coordinates: torus part t (conjugation by
/// diag(t, 1); for Phan t has norm 1), then the C-part.  An automorphism
/// acts as m -> tau^s(Frob^r(diag(t,1) m diag(t,1)^-1)).
struct VertexAut {
  uint8_t t = 1;
  CCoord c;
  bool is_identity(const Field& F) const { return t == F.one() && c.is_zero(); }
  bool operator==(const VertexAut& o) const { return t == o.t && c == o.c; }
};

/// Context of one amalgam vertex: its kind and field (F_{q^{e_i}} for
/// Curtis-Tits, F_{q^2} for Phan).
struct VertexCtx {
  Kind kind = Kind::CT;
  const Field* field = nullptr;
  int base_exp = 1;  // e' with q = p^{e'}

  int r_mod() const { return field->e(); }
  bool has_s() const { return kind == Kind::CT; }
  CCoord c_zero() const { return CCoord::zero(r_mod(), has_s()); }
  VertexAut identity() const { return {field->one(), c_zero()}; }
};

VertexCtx make_vertex_ctx(Kind kind, int q, int degree);

Mat apply_vertex_aut(const VertexCtx& ctx, const VertexAut& a, const Mat& m);
/// Composition a o b (b applied first).
VertexAut compose_vertex_auts(const VertexCtx& ctx, const VertexAut& a, const VertexAut& b);
VertexAut invert_vertex_aut(const VertexCtx& ctx, const VertexAut& a);
/// Action of the C-part on a torus coordinate (Frobenius power, then
/// inversion when the tau exponent is set).
uint8_t vertex_c_on_t(const VertexCtx& ctx, const CCoord& c, uint8_t t);

/// Context of one edge component: the standard pair's ambient field and
/// the TA3 constants when applicable.  side-1 is the head for C2/TA3.
struct EdgeCtx {
  Kind kind = Kind::CT;
  PairType type = PairType::A2;
  int qe = 2;                       // effective prime power of the pair
  const Field* afield = nullptr;    // ambient field
  const Field* tail_field = nullptr;  // TA3: the q-side vertex field
  int dim = 3;
  SpecialConstants sc{};            // TA3
  // TA3 tau correction: the edge tau-generator is conj by
  // diag(b, b, b^-q, b^-q) composed with transpose-inverse, where
  // N(b) = eta^2; plain transpose-inverse restricts to the q-side as tau
  // twisted by diag(eta^-2, 1).
  uint8_t tau_b = 1;

  int r_mod() const { return afield->e(); }
  bool has_s() const { return kind == Kind::CT; }
  CCoord c_zero() const { return CCoord::zero(r_mod(), has_s()); }
  /// r_mod of the vertex on the given side.
  int side_r_mod(int side) const;
};

/// edge_degree: common vertex degree for A2/C2; tail (q-side) degree for
/// TA3.  q is the diagram's base prime power.
EdgeCtx make_edge_ctx(Kind kind, PairType type, int q, int edge_degree);

/// Torus part of an edge automorphism: a diagonal matrix in the standard
/// torus GD, stored by its entries in a fixed transversal of the center.
struct EdgeTorus {
  std::array<uint8_t, 4> d{1, 1, 1, 1};
  bool operator==(const EdgeTorus& o) const { return d == o.d; }
};

struct EdgeAut {
  EdgeTorus t;
  CCoord c;
};

EdgeTorus edge_torus_identity(const EdgeCtx& e);
/// Reduce arbitrary GD entries to the fixed transversal (throws on entries
/// outside GD).
EdgeTorus edge_torus_canonicalize(const EdgeCtx& e, const EdgeTorus& t);
/// Restriction to the two side coordinates, in the vertex fields.
std::pair<uint8_t, uint8_t> edge_torus_restrict(const EdgeCtx& e, const EdgeTorus& t);
/// Preimage of a side pair under the torus restriction (throws when no
/// preimage exists; only possible at C2 with a non-square side-1 target).
EdgeTorus edge_torus_from_sides(const EdgeCtx& e, uint8_t t1, uint8_t t2);
EdgeTorus edge_torus_mul(const EdgeCtx& e, const EdgeTorus& a, const EdgeTorus& b);
/// Conjugation action of the C-part on torus coordinates.
EdgeTorus edge_c_on_torus(const EdgeCtx& e, const CCoord& c, const EdgeTorus& t);

/// Restrict an edge C-coordinate to the vertex on the given side (1 or 2).
CCoord edge_c_restrict(const EdgeCtx& e, const CCoord& c, int side);
/// Canonical (minimal-representative) preimage of a vertex C-coordinate.
CCoord edge_c_lift(const EdgeCtx& e, const CCoord& vc, int side);

/// Apply the C-part of an edge automorphism to an ambient element: for
/// CT A2/C2 the entrywise Frobenius and transpose-inverse, for TA3 the
/// corrected automorphism that acts entrywise on both side images, for
/// Phan the entrywise Frobenius.
Mat realize_edge_c(const EdgeCtx& e, const CCoord& c, const Mat& m);
Mat realize_edge_aut(const EdgeCtx& e, const EdgeAut& a, const Mat& m);
EdgeAut compose_edge_auts(const EdgeCtx& e, const EdgeAut& a, const EdgeAut& b);

/// Hexagon completion on C-parts.  Side 1 must be the side
/// whose restriction is injective (the q^2-side for TA3).  Given the four
/// side-1 maps and gamma_{j,i}, plus exactly one of gamma+_{j,i} / phi_j,
/// returns the unique remaining side-2 coordinate and the edge C-part.
struct HexagonInput {
  CCoord gamma_ij, gamma_plus_ij, phi_i, gamma_ji;
  std::optional<CCoord> gamma_plus_ji;  // exactly one of these two is set
  std::optional<CCoord> phi_j;
};
struct HexagonResult {
  CCoord remaining;
  CCoord phi_edge;
};
HexagonResult hexagon_solve(const EdgeCtx& e, const HexagonInput& in);

/// The distinguished structures of the abstract vertex groups.
GroupHandle abstract_root_group(const VertexCtx& ctx, int eps);  // eps 0:'+', 1:'-'
GroupHandle abstract_phan_torus(const VertexCtx& ctx);

/// Oracle: enumerate Aut(G) for the abstract vertex group G by exhaustive
/// generator-image search, filter to the normalizer of the distinguished
/// structure, and compare against the coordinate family (t, r, s).
struct BruteForceAResult {
  size_t normalizing_count;      // |A_i| found by the oracle
  size_t full_aut_count;         // |Aut(G)|
  bool coordinates_match;        // coordinate maps biject onto the filtered set
};
BruteForceAResult brute_force_A(const VertexCtx& ctx);

}  // namespace ctphan
