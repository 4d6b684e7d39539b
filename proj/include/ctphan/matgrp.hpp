#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "ctphan/ffield.hpp"

namespace ctphan {

class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, size_t partial)
      : std::runtime_error(what), partial_count(partial) {}
  size_t partial_count;
};

/// Canonical byte encoding of a matrix, usable as a hash key.
struct MatKey {
  uint64_t lo = 0, hi = 0;
  bool operator==(const MatKey& o) const { return lo == o.lo && hi == o.hi; }
  bool operator<(const MatKey& o) const { return hi != o.hi ? hi < o.hi : lo < o.lo; }
};

struct MatKeyHash {
  size_t operator()(const MatKey& k) const {
    uint64_t x = k.lo * 0x9e3779b97f4a7c15ull ^ (k.hi + 0xbf58476d1ce4e5b9ull);
    x ^= x >> 31;
    x *= 0x94d049bb133111ebull;
    return size_t(x ^ (x >> 29));
  }
};

/// Dense n x n matrix (n <= 4) over an interned Field. Entries are stored
/// as element indices.
class Mat {
 public:
  Mat() : F_(nullptr), n_(0) { a_.fill(0); }
  Mat(const Field& F, int n);
  static Mat identity(const Field& F, int n);

  const Field& field() const { return *F_; }
  int n() const { return n_; }
  uint8_t at(int i, int j) const { return a_[size_t(i) * n_ + j]; }
  void set(int i, int j, uint8_t v) { a_[size_t(i) * n_ + j] = v; }

  Mat operator*(const Mat& o) const;
  bool operator==(const Mat& o) const;
  bool operator!=(const Mat& o) const { return !(*this == o); }

  uint8_t det() const;
  bool invertible() const { return det() != 0; }
  /// Throws FieldError on a singular matrix.
  Mat inverse() const;
  Mat transpose() const;
  /// Entrywise x -> x^(p^k).
  Mat frobenius(int k) const;
  /// Transpose-inverse map.
  Mat tau() const { return inverse().transpose(); }
  Mat scaled(uint8_t c) const;

  /// Column-vector image g * v.
  std::array<uint8_t, 4> apply(const std::array<uint8_t, 4>& v) const;

  MatKey key() const;
  std::string str() const;

 private:
  const Field* F_;
  int n_;
  std::array<uint8_t, 16> a_;
};

using MatSet = std::unordered_set<MatKey, MatKeyHash>;

/// A finite matrix group: generators plus an optional fully enumerated
/// element table.  Immutable after enumeration; queries are re-entrant.
class GroupHandle {
 public:
  struct FormTag {
    enum Kind { Symplectic, Hermitian } kind;
    Mat gram;
  };

  GroupHandle() = default;
  explicit GroupHandle(std::vector<Mat> generators);

  /// Breadth-first product closure with deterministic insertion order.
  /// Throws BudgetError when the element count exceeds the budget.
  static GroupHandle closure(const std::vector<Mat>& generators,
                             size_t budget = kDefaultBudget);
  /// Wrap an explicit element list (must be closed; not re-verified here).
  static GroupHandle from_elements(std::vector<Mat> elements,
                                   std::vector<Mat> generators = {});

  static constexpr size_t kDefaultBudget = 20'000'000;

  const std::vector<Mat>& generators() const { return gens_; }
  bool enumerated() const { return !elems_.empty(); }
  size_t order() const { return elems_.size(); }
  const std::vector<Mat>& elements() const { return elems_; }
  bool contains(const Mat& m) const { return keys_.count(m.key()) > 0; }
  bool contains_set(const GroupHandle& h) const;
  bool same_elements(const GroupHandle& h) const;

  const Field& field() const { return gens_.at(0).field(); }
  int dim() const { return gens_.at(0).n(); }

  std::vector<FormTag> formtags;
  /// True iff every element preserves every declared form.
  bool all_preserve_forms() const;

 private:
  std::vector<Mat> gens_;
  std::vector<Mat> elems_;
  MatSet keys_;
};

/// Textbook order of a universal classical group.
/// type in {SL2, SL3, Sp4, SU2, SU3, SU4}; q a prime power.
long long classical_order(const std::string& type, int q);

/// True iff g preserves the form exactly (symplectic: g^T M g = M;
/// hermitian: g^T M g^sigma = M, sigma the order-2 Frobenius).
bool preserves_form(const Mat& g, const GroupHandle::FormTag& form);

/// All conjugates of `seed` under G; for G = SL2(q^e) and seed the
/// upper-unitriangular subgroup these are the q^e + 1 Sylow p-subgroups.
/// Deduplicated by element-set equality.
std::vector<GroupHandle> sylow_p_family(const GroupHandle& G, const GroupHandle& seed);

/// Grow a p-subgroup U of G to a full Sylow p-subgroup by repeatedly
/// adjoining p-elements of its normalizer.
GroupHandle grow_to_sylow(const GroupHandle& G, const GroupHandle& U);

/// Exhaustive normalizer of H in G (both enumerated, H <= G).
GroupHandle normalizer(const GroupHandle& G, const GroupHandle& H);
/// Exhaustive centralizer of H in G.
GroupHandle centralizer(const GroupHandle& G, const GroupHandle& H);
/// Derived subgroup: normal closure of the commutators of generators.
GroupHandle derived_subgroup(const GroupHandle& G, size_t budget = GroupHandle::kDefaultBudget);

/// Elements of G fixing the line spanned by v (v nonzero, padded to 4).
GroupHandle line_stabilizer(const GroupHandle& G, const std::array<uint8_t, 4>& v);
/// Elements mapping span(v1, v2) into itself.
GroupHandle subspace_stabilizer(const GroupHandle& G, const std::array<uint8_t, 4>& v1,
                                const std::array<uint8_t, 4>& v2);
/// Elements fixing v pointwise.
GroupHandle vector_stabilizer(const GroupHandle& G, const std::array<uint8_t, 4>& v);

/// Subgroup generated inside an ambient enumerated group (for subset checks);
/// equivalent to closure but without re-deriving field/dim.
GroupHandle generated_subgroup(const std::vector<Mat>& generators,
                               size_t budget = GroupHandle::kDefaultBudget);

/// All determinant-1 matrices preserving every listed form, enumerated by
/// column-by-column assembly under the Gram constraints (columns c_i must
/// satisfy beta(c_i, c_j) = M_ij resp. h(c_i, c_j) = H_ij).
std::vector<Mat> special_isometry_group(const Field& F, int n,
                                        const std::vector<GroupHandle::FormTag>& forms,
                                        size_t budget = GroupHandle::kDefaultBudget);

}  // namespace ctphan
