#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctphan {

/// Error thrown for invalid field parameters or element operations.
class FieldError : public std::runtime_error {
 public:
  explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

/// Exact arithmetic in F_{p^e} for small prime powers (p^e <= 81).
///
/// Elements are stored in the polynomial basis over F_p with a fixed,
/// published irreducible modulus per (p, e), so serialized data is
/// bit-reproducible.  An element is addressed by its index
///   idx = sum_i c_i * p^i,  0 <= c_i < p,
/// which also defines the canonical enumeration order used whenever a
/// "smallest solution" is required.
///
/// Instances are interned and immutable; all operations are pure and safe
/// to call from multiple threads.
class Field {
 public:
  static constexpr int kMaxSize = 81;

  /// Interned lookup. Throws FieldError for non-prime p, e < 1, or
  /// p^e > kMaxSize.
  static const Field& get(int p, int e);

  int p() const { return p_; }
  int e() const { return e_; }
  int size() const { return size_; }

  /// Monic modulus, coefficients ascending (length e+1).
  const std::vector<int>& modulus() const { return modulus_; }

  uint8_t zero() const { return 0; }
  uint8_t one() const { return 1; }
  /// The class of the integer n mod p.
  uint8_t from_int(long long n) const;

  uint8_t add(uint8_t a, uint8_t b) const { return add_[idx(a, b)]; }
  uint8_t sub(uint8_t a, uint8_t b) const { return add(a, neg(b)); }
  uint8_t neg(uint8_t a) const { return neg_[a]; }
  uint8_t mul(uint8_t a, uint8_t b) const { return mul_[idx(a, b)]; }
  uint8_t inv(uint8_t a) const;
  uint8_t div(uint8_t a, uint8_t b) const { return mul(a, inv(b)); }
  uint8_t pow(uint8_t a, long long k) const;

  /// x ^ (p^k); a field automorphism for any k >= 0.
  uint8_t frob(uint8_t x, int k) const;

  /// Relative norm onto the subfield of degree d (d must divide e):
  /// product of the conjugates x^(p^(d*i)), i = 0..e/d-1.
  uint8_t norm(uint8_t x, int d) const;
  /// Relative trace onto the subfield of degree d: sum of the conjugates.
  uint8_t trace(uint8_t x, int d) const;

  /// True iff x lies in the subfield of degree d (x^(p^d) == x).
  bool in_subfield(uint8_t x, int d) const { return frob(x, d) == x; }

  std::vector<int> coords(uint8_t x) const;
  uint8_t from_coords(const std::vector<int>& c) const;

  std::string str(uint8_t x) const;

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

 private:
  Field(int p, int e, std::vector<int> modulus);
  int idx(uint8_t a, uint8_t b) const { return int(a) * size_ + int(b); }

  int p_, e_, size_;
  std::vector<int> modulus_;
  std::vector<uint8_t> add_, mul_;   // size^2 tables
  std::vector<uint8_t> neg_, inv_;   // size tables
  std::vector<uint8_t> frob1_;       // x -> x^p
};

/// Embedding of a smaller field F_{p^d} into F_{p^e} (d | e), sending the
/// small field's generator to the smallest root of its modulus in the big
/// field.  Cached per field pair.
class Embedding {
 public:
  static const Embedding& get(const Field& small, const Field& big);

  const Field& small() const { return *small_; }
  const Field& big() const { return *big_; }
  uint8_t fwd(uint8_t x) const { return fwd_[x]; }
  /// Preimage; throws FieldError if x is not in the embedded subfield.
  uint8_t back(uint8_t x) const;
  bool in_image(uint8_t x) const { return back_[x] >= 0; }

 private:
  Embedding(const Field& small, const Field& big);
  const Field* small_;
  const Field* big_;
  std::vector<uint8_t> fwd_;
  std::vector<int> back_;
};

/// The constants eta, f, zeta attached to a quadratic extension
/// F_{q^2} / F_q with q = p^(e/2):
///   eta  != 0 with eta + eta^q = 0   (smallest in enumeration order),
///   f    = eta^(p-1), the element of F_q with eta^p = f * eta; it
///          satisfies N_{F_q/F_p}(f) = -1,
///   zeta:  N_{F_{q^2}/F_q}(zeta) = f^{-1} (smallest solution).
/// All three are returned as elements of F_{q^2}; f lies in the subfield.
struct SpecialConstants {
  uint8_t eta;
  uint8_t f;
  uint8_t zeta;
};

/// Requires an even extension degree. Deterministic.
SpecialConstants special_constants(const Field& fq2);

}  // namespace ctphan
