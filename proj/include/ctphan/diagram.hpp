#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctphan/ffield.hpp"

namespace ctphan {

class DiagramError : public std::runtime_error {
 public:
  explicit DiagramError(const std::string& what) : std::runtime_error(what) {}
};

enum class EdgeType { A2, C2, TA3 };

std::string edge_type_name(EdgeType t);
EdgeType edge_type_from_name(const std::string& s);

/// Typed edge {i, j}. `head` names the distinguished endpoint: for C2 the
/// vertex playing G_1 (the 2-space stabilizer side), for TA3 the q^2-side.
/// A2 edges carry no orientation (head = -1).
struct DiagEdge {
  int i, j;
  EdgeType type;
  int head = -1;

  int other(int v) const { return v == i ? j : i; }
  bool touches(int v) const { return v == i || v == j; }
  bool same_ends(int a, int b) const { return (i == a && j == b) || (i == b && j == a); }
};

/// A Lie diagram over F_q: vertices with field-degree labels and typed
/// edges.  A1 x A1 pairs are represented by the absence of an edge.
class Diagram {
 public:
  Diagram(int q, std::vector<int> vertices, std::vector<DiagEdge> edges);

  int q() const { return q_; }
  int prime() const { return p_; }
  /// e' with q = p^{e'}.
  int base_exponent() const { return base_exp_; }
  const std::vector<int>& vertices() const { return vertices_; }
  const std::vector<DiagEdge>& edges() const { return edges_; }

  bool has_edge(int a, int b) const;
  const DiagEdge* edge_between(int a, int b) const;
  std::vector<int> neighbors(int v) const;
  /// Homotopy rank r = |E| - |I| + 1.
  int homotopy_rank() const { return int(edges_.size()) - int(vertices_.size()) + 1; }

  /// Structural validity: simple, connected, no isolated vertex, valid q,
  /// C2/TA3 edges carry a head.  Throws DiagramError.
  void validate_structure() const;

  /// 3-sphericity: no 3-cycles and no vertex on two label-4 (C2/TA3) edges.
  /// Returns std::nullopt when OK, otherwise a description of the violation.
  std::optional<std::string> three_spherical_violation() const;

  /// Field degree e_i per vertex: A2/C2 edges force equal degrees, TA3
  /// edges force head = 2 * tail; normalized so min e_i = 1.  Throws
  /// DiagramError on conflicting propagation.
  std::map<int, int> field_degrees() const;

  /// Canonical serialization (also the hash input).
  std::string canonical_string() const;
  uint64_t hash() const;

  bool operator==(const Diagram& o) const { return canonical_string() == o.canonical_string(); }

 private:
  int q_, p_, base_exp_;
  std::vector<int> vertices_;
  std::vector<DiagEdge> edges_;
};

/// Spanning tree with the minimal-degree off-tree edge selection: off-tree
/// edges are A2 and each has a witness loop whose vertex degrees are all
/// >= the edge degree.
struct TreeData {
  std::vector<DiagEdge> tree_edges;
  struct OffTree {
    int i, j;      // i < j; the classification coordinate lives on (j, i)
    int degree;    // common field degree e_s of the endpoints
    std::vector<int> loop;  // witness loop as a closed vertex sequence
  };
  std::vector<OffTree> off_tree;

  bool tree_contains(int a, int b) const;
  const OffTree* off_tree_between(int a, int b) const;
};

/// Deterministic greedy removal: repeatedly remove an A2 edge lying on a
/// cycle whose endpoint degree is minimal (ties by lexicographic vertex
/// index), recording a witness loop at removal time.
TreeData minimal_spanning_tree(const Diagram& d);

}  // namespace ctphan
