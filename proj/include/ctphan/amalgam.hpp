#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctphan/coeffsys.hpp"
#include "ctphan/diagram.hpp"

namespace ctphan {

class AmalgamError : public std::runtime_error {
 public:
  explicit AmalgamError(const std::string& what) : std::runtime_error(what) {}
};

/// An amalgam in coordinate form: a diagram plus, per directed pair (i,j)
/// of distinct vertices (edges and non-edges alike), the connecting-map
/// coordinate delta_{i,j} in A_i.  Absent entries mean the identity, i.e.
/// the standard identification map.
struct AmalgamSpec {
  Kind kind = Kind::CT;
  Diagram diagram;
  std::map<std::pair<int, int>, VertexAut> delta;

  AmalgamSpec(Kind k, Diagram d) : kind(k), diagram(std::move(d)) {}

  std::map<int, int> degrees() const { return diagram.field_degrees(); }
  VertexCtx vertex_ctx(int v) const;
  VertexAut get_delta(int from, int to) const;
  void set_delta(int from, int to, const VertexAut& a);

  /// Structural and coordinate validation: diagram valid and 3-spherical,
  /// Phan diagrams free of 2A3 edges, coordinates in the correct fields
  /// and moduli (Phan torus parts of norm 1, no tau exponent).
  void validate() const;
};

/// The complete isomorphism invariant: per off-tree edge of the minimal
/// spanning tree, a canonical C-coordinate in Aut(F_{q^{e_s}}) x Z/2 (CT)
/// or Aut(F_{q^2}) (Phan).
struct KappaClass {
  Kind kind = Kind::CT;
  int q = 2;
  uint64_t diagram_hash = 0;
  struct Entry {
    int i, j;  // i < j; the coordinate lives on the direction j -> i
    CCoord c;
  };
  std::vector<Entry> entries;

  bool is_identity() const;
  bool operator==(const KappaClass& o) const;
  bool operator!=(const KappaClass& o) const { return !(*this == o); }
};

/// Isomorphism witness: one A_i coordinate per vertex, one A_{i,j}
/// coordinate per edge, a coordinate pair per non-edge (keys (min,max),
/// components in that vertex order).
struct AmalgamWitness {
  std::map<int, VertexAut> phi_v;
  std::map<std::pair<int, int>, EdgeAut> phi_edge;
  std::map<std::pair<int, int>, std::pair<VertexAut, VertexAut>> phi_prod;
};

struct NormalizeResult {
  AmalgamSpec normal_form;
  KappaClass kappa;
  AmalgamWitness witness;
  TreeData tree;
};

/// The standard amalgam: all-identity coordinates.
AmalgamSpec make_standard(const Diagram& d, Kind kind);
/// Coordinate frame for build_kappa: one zero C-coordinate per off-tree
/// edge, with the correct moduli, in TreeData order.
std::vector<CCoord> kappa_coordinate_frame(const Diagram& d, Kind kind);
/// Plant the given C-coordinates on the directions (j_s, i_s).
AmalgamSpec build_kappa(const Diagram& d, Kind kind, const std::vector<CCoord>& coords);

/// Torus stripping alone: an isomorphic spec whose coordinates all have
/// trivial torus part, with the isomorphism witness.  Per vertex the
/// distinguished neighbor is the unique C2-neighbor when present, else
/// the least-index neighbor.
std::pair<AmalgamSpec, AmalgamWitness> strip_tori(const AmalgamSpec& spec);

/// The normalization pipeline: minimal spanning tree, torus stripping,
/// hexagon-driven trivialization along a BFS of the tree, and extraction
/// of the residual off-tree coordinates.  Deterministic.
NormalizeResult normalize(const AmalgamSpec& spec);

struct IsoResult {
  bool isomorphic;
  KappaClass kappa_a, kappa_b;
};
/// Same kind, q and diagram required (up to identical vertex indexing).
IsoResult iso_decide(const AmalgamSpec& a, const AmalgamSpec& b);

struct ClassRep {
  std::vector<CCoord> coords;
  KappaClass kappa;
};
std::vector<ClassRep> classify(const Diagram& d, Kind kind);
long long classify_count(const Diagram& d, Kind kind);

enum class Orientation { Orientable, NonOrientable };
/// CT only: propagates tau-sign flips along the spanning tree; orientable
/// iff every fundamental cycle has trivial total flip.
Orientation orientation_check(const AmalgamSpec& spec);

// ---------- realized amalgams ----------

/// A connecting map g_{i,j} = ul_g o delta realized on matrices, with an
/// optional extra conjugation inside the ambient (used to build mock
/// amalgams outside coordinate form).
struct RealizedMap {
  const IdentMap* iota = nullptr;
  VertexCtx vctx;
  VertexAut delta;
  std::optional<Mat> rogue;

  Mat apply(const Mat& m) const;
  std::optional<Mat> preimage(const Mat& M) const;
};

struct RealizedComponent {
  bool is_edge = false;
  PairType type = PairType::A1A1;
  int side_vertex[2] = {-1, -1};  // diagram vertices playing side 1 / 2
  const StandardPair* pair = nullptr;
  std::shared_ptr<ProductComponent> prod;
  std::optional<EdgeCtx> ectx;

  const GroupHandle& ambient() const;
  const IdentMap& iota(int side) const;  // side 0 or 1
  int side_of(int vertex) const;
};

struct RealizedAmalgam {
  Kind kind = Kind::CT;
  int q = 2;
  Diagram diagram;
  std::map<int, int> degrees;
  std::map<int, VertexCtx> vctx;
  std::map<int, GroupHandle> vgroup;
  std::map<std::pair<int, int>, RealizedComponent> comps;
  std::map<std::pair<int, int>, RealizedMap> maps;

  RealizedAmalgam(Diagram d) : diagram(std::move(d)) {}
  const RealizedComponent& comp(int a, int b) const;
  const RealizedMap& map_of(int from, int to) const;
};

/// Instantiates every vertex group, edge group (a cached standard pair)
/// and product component, and every connecting map; validates each map as
/// an injective homomorphism on all elements.
RealizedAmalgam realize(const AmalgamSpec& spec, size_t budget = GroupHandle::kDefaultBudget);

/// Compose the (from -> {from,to}) map with conjugation by an ambient
/// element.  Produces amalgams outside coordinate form (mock inputs for
/// the detection engines).
void add_rogue_twist(RealizedAmalgam& ra, int from, int to, const Mat& h);

/// Coordinate fitting: the delta in A_from whose realized map equals the
/// stored (possibly twisted) map elementwise, found by exhaustive search
/// over the coordinate family; nullopt when the map is not of the form
/// standard-identification composed with an A_from element.
std::optional<VertexAut> fit_coordinate(const RealizedAmalgam& ra, int from, int to);

/// Elementwise check that the witness is a type-preserving isomorphism of
/// realized amalgams: phi_{i,j} o g_{i,j} = g+_{i,j} o phi_i on every
/// element of every vertex group, over all component pairs.
bool verify_witness_elementwise(const RealizedAmalgam& src, const RealizedAmalgam& dst,
                                const AmalgamWitness& w, std::string* fail = nullptr);

struct PrecheckResult {
  bool ok;
  std::string witness;
};
/// Weak-system (CT) or property-(D) (Phan) detection on a realized
/// amalgam; failure proves every completion is trivial.
PrecheckResult noncollapse_precheck(const RealizedAmalgam& ra);

}  // namespace ctphan
