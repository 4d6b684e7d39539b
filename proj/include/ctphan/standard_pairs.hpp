#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctphan/ffield.hpp"
#include "ctphan/matgrp.hpp"

namespace ctphan {

enum class Kind { CT, Phan };
enum class PairType { A1A1, A2, C2, TA3 };

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& s);
std::string pair_type_name(PairType t);
PairType pair_type_from_name(const std::string& s);

/// Standard identification map: the fixed block embedding of a rank-1
/// vertex group SL2(q^e) / SU2(q) into the rank-2 ambient group.
struct IdentMap {
  Kind kind = Kind::CT;
  PairType type = PairType::A2;
  int side = 1;  // 1 or 2
  const Field* vfield = nullptr;
  const Field* afield = nullptr;
  int dim = 0;
  uint8_t eta = 0;                  // TA3 side 2 twist
  const Embedding* emb = nullptr;   // vertex field -> ambient field, when proper

  Mat apply(const Mat& m) const;
  /// Reads the 2x2 back; nullopt when M does not match the image pattern.
  std::optional<Mat> preimage(const Mat& M) const;
};

/// An explicitly constructed Curtis-Tits or Phan standard pair
/// (G, G_1, G_2) with identification maps, fundamental root groups (CT)
/// and edge tori (Phan).  Immutable and cached per (kind, type, q).
struct StandardPair {
  Kind kind;
  PairType type;
  int q;                       // base prime power
  int base_exp;                // e' with q = p^{e'}
  const Field* vertex_field[2];
  const Field* ambient_field;
  int dim;
  SpecialConstants sc{};       // TA3 only

  IdentMap iota[2];            // indexed by side-1 and side-2 (0-based)
  GroupHandle vertex_group[2];
  GroupHandle ambient;
  GroupHandle side_image[2];
  GroupHandle root_group[2][2];       // CT: [side][0:'+', 1:'-']
  GroupHandle phan_torus_explicit[2]; // Phan A2/C2: D_1^2 at [0], D_2^1 at [1]
  std::vector<GroupHandle::FormTag> forms;

  long long expected_order() const;
};

/// Classical order of the pair's ambient group.
long long expected_pair_order(Kind kind, PairType type, int q);

/// Cached construction. The predicted ambient order is checked against the
/// budget before enumeration; throws BudgetError when it would exceed it.
const StandardPair& get_standard_pair(Kind kind, PairType type, int q,
                                      size_t budget = GroupHandle::kDefaultBudget);

/// Like get_standard_pair but without enumerating the ambient group (its
/// handle is left empty) and without the Phan tori cross-check; for work
/// that only touches the identification maps and side images.
const StandardPair& get_standard_pair_shallow(Kind kind, PairType type, int q);

/// Brute-force edge tori D_i^j = N_{G_{i,j}}(g_{j,i}(G_j)) cap g_{i,j}(G_i)
/// computed from the element tables; verified against the explicit form at
/// construction.  Returns {D_1^2, D_2^1}.
std::pair<GroupHandle, GroupHandle> phan_tori_brute_force(const StandardPair& pair);

/// SL2 over F: closure of the elementary transvections u(b), l(b) over a
/// basis of F.
GroupHandle enumerate_sl2(const Field& F, size_t budget = GroupHandle::kDefaultBudget);
/// SU2(q) over F_{q^2} w.r.t. an orthonormal basis: all
/// [[a, b], [-b^s, a^s]] with N(a) + N(b) = 1.
GroupHandle enumerate_su2(const Field& fq2);

/// Upper/lower unitriangular 2x2 matrices u(b) / l(c).
Mat sl2_upper(const Field& F, uint8_t b);
Mat sl2_lower(const Field& F, uint8_t c);

/// A small generating set (greedy, deterministic) for an enumerated group.
std::vector<Mat> small_generating_set(const GroupHandle& G);

/// Direct-product component for A1 x A1 pairs (also non-edges of an
/// amalgam), with possibly different vertex field degrees; the ambient is
/// the block-diagonal group over the compositum field.
struct ProductComponent {
  const Field* ambient_field;
  GroupHandle ambient;
  IdentMap iota[2];
};
ProductComponent make_product_component(Kind kind, int q, int deg1, int deg2,
                                        size_t budget = GroupHandle::kDefaultBudget);

}  // namespace ctphan
