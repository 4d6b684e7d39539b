#pragma once

#include "ctphan/amalgam.hpp"
#include "ctphan/standard_pairs.hpp"

namespace ctphan {

enum class SylowTag { ParabolicPlus, ParabolicMinus, Full, Exceptional };
std::string sylow_tag_name(SylowTag t);

/// Verdict table for the Sylow p-subgroups of one side of a Curtis-Tits
/// standard pair: each of the q^{e_j}+1 Sylows of the side image is tagged
/// by the closure it generates with the other side.
struct SylowVerdict {
  int side;  // 1 or 2
  struct Entry {
    GroupHandle sylow;
    SylowTag tag;
    size_t closure_order;
    std::string witness;  // invariant structure stabilized by the closure
  };
  std::vector<Entry> entries;

  int count(SylowTag t) const;
  int parabolic_count() const {
    return count(SylowTag::ParabolicPlus) + count(SylowTag::ParabolicMinus);
  }
};

/// Tags Parabolic(+/-) by containment in the two parabolic subgroups of
/// the ambient containing the other side, Full by closure = ambient, and
/// Exceptional otherwise (the C2(2) case).  Verdicts for distinct Sylows
/// are independent; threads > 1 computes them concurrently with the same
/// deterministic result table.
SylowVerdict classify_sylows(const StandardPair& pair, int side, int threads = 1);

/// The two parabolic subgroups of the ambient that contain the side's
/// partner group, in sign order, with their invariant-structure labels.
struct ParabolicPairResult {
  GroupHandle plus, minus;
  std::string plus_witness, minus_witness;
};
ParabolicPairResult parabolic_subgroups(const StandardPair& pair, int side);

/// The two Parabolic-tagged Sylows, signed by the explicit
/// upper-unitriangular convention.
struct FundamentalPairResult {
  GroupHandle plus, minus;
};
FundamentalPairResult fundamental_pair(const StandardPair& pair, int side);

/// Weak-system detection on a realized CT amalgam: per edge, the
/// distinguished pair of Sylows on each side (by minimal closure order),
/// pulled back to the vertex group; succeeds iff consistent per vertex.
struct WeakSystemResult {
  bool ok = false;
  std::string witness;
  // per vertex, the unordered pair as element-set handles
  std::map<int, std::pair<GroupHandle, GroupHandle>> system;
};
WeakSystemResult weak_system(const RealizedAmalgam& ra);

/// Property-(D) detection on a realized Phan amalgam: per directed edge
/// the torus D_j^i = N(image_i) cap image_j, pulled back; succeeds iff a
/// common torus of order q+1 exists at every vertex.
struct PropertyDResult {
  bool ok = false;
  std::string witness;
  std::map<int, GroupHandle> tori;
};
PropertyDResult property_D(const RealizedAmalgam& ra);

/// For both directions (i,j): D_j^i is the unique conjugate of the
/// standard torus of side image j normalized by D_i^j.  This fails for
/// Phan C2 at q = 3, where D_1^2 acts on the side-2 image through an
/// element of D_2^1 itself (conjugation inside the quaternion subgroup of
/// SU2(3)), which normalizes all three order-4 tori.
bool torus_uniqueness(const StandardPair& pair);

/// Per-direction diagnostics: counts[j] = number of conjugates of D_j^i
/// normalized by D_i^j (0-based side index j).
std::array<int, 2> torus_uniqueness_counts(const StandardPair& pair);

}  // namespace ctphan
