#include "ctphan/ffield.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace ctphan {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Fixed modulus table: the Conway polynomial for each (p, e) with
// p^e <= 81.  Coefficients ascending, monic.
const std::vector<int>* table_modulus(int p, int e) {
  static const std::map<std::pair<int, int>, std::vector<int>> table = {
      {{2, 1}, {1, 1}},
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
      {{3, 1}, {1, 1}},
      {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},
      {{3, 4}, {2, 0, 0, 2, 1}},
      {{5, 1}, {3, 1}},
      {{5, 2}, {2, 4, 1}},
      {{7, 1}, {4, 1}},
      {{7, 2}, {3, 6, 1}},
      {{11, 1}, {9, 1}},
      {{13, 1}, {11, 1}},
      {{17, 1}, {14, 1}},
      {{19, 1}, {17, 1}},
      {{23, 1}, {18, 1}},
      {{29, 1}, {27, 1}},
      {{31, 1}, {28, 1}},
      {{37, 1}, {35, 1}},
      {{41, 1}, {35, 1}},
      {{43, 1}, {40, 1}},
      {{47, 1}, {42, 1}},
      {{53, 1}, {51, 1}},
      {{59, 1}, {57, 1}},
      {{61, 1}, {59, 1}},
      {{67, 1}, {65, 1}},
      {{71, 1}, {64, 1}},
      {{73, 1}, {68, 1}},
      {{79, 1}, {76, 1}},
  };
  auto it = table.find({p, e});
  return it == table.end() ? nullptr : &it->second;
}

std::vector<int> index_to_poly(int idx, int p, int e) {
  std::vector<int> c(e, 0);
  for (int i = 0; i < e; ++i) {
    c[i] = idx % p;
    idx /= p;
  }
  return c;
}

int poly_to_index(const std::vector<int>& c, int p) {
  int idx = 0;
  for (int i = int(c.size()) - 1; i >= 0; --i) idx = idx * p + c[i];
  return idx;
}

// Product of two coefficient vectors reduced mod (modulus, p).
std::vector<int> poly_mul_mod(const std::vector<int>& a, const std::vector<int>& b,
                              const std::vector<int>& modulus, int p) {
  int e = int(modulus.size()) - 1;
  std::vector<int> prod(2 * e - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  for (int d = int(prod.size()) - 1; d >= e; --d) {
    int c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    for (int i = 0; i < e; ++i) {
      int t = prod[d - e + i] - c * modulus[i];
      prod[d - e + i] = ((t % p) + p) % p;
    }
  }
  prod.resize(e);
  return prod;
}

}  // namespace

Field::Field(int p, int e, std::vector<int> modulus)
    : p_(p), e_(e), size_(1), modulus_(std::move(modulus)) {
  for (int i = 0; i < e_; ++i) size_ *= p_;
  add_.resize(size_t(size_) * size_);
  mul_.resize(size_t(size_) * size_);
  neg_.resize(size_);
  inv_.resize(size_, 0);
  frob1_.resize(size_);
  for (int a = 0; a < size_; ++a) {
    auto ca = index_to_poly(a, p_, e_);
    std::vector<int> cn(e_);
    for (int i = 0; i < e_; ++i) cn[i] = (p_ - ca[i]) % p_;
    neg_[a] = uint8_t(poly_to_index(cn, p_));
    for (int b = 0; b < size_; ++b) {
      auto cb = index_to_poly(b, p_, e_);
      std::vector<int> cs(e_);
      for (int i = 0; i < e_; ++i) cs[i] = (ca[i] + cb[i]) % p_;
      add_[size_t(a) * size_ + b] = uint8_t(poly_to_index(cs, p_));
      mul_[size_t(a) * size_ + b] =
          uint8_t(poly_to_index(poly_mul_mod(ca, cb, modulus_, p_), p_));
    }
  }
  for (int a = 1; a < size_; ++a)
    for (int b = 1; b < size_; ++b)
      if (mul_[size_t(a) * size_ + b] == 1) {
        inv_[a] = uint8_t(b);
        break;
      }
  for (int a = 0; a < size_; ++a) {
    uint8_t r = 1;
    for (int i = 0; i < p_; ++i) r = mul_[size_t(r) * size_ + a];
    frob1_[a] = r;
  }
}

const Field& Field::get(int p, int e) {
  if (!is_prime(p)) throw FieldError("field characteristic must be prime: " + std::to_string(p));
  if (e < 1) throw FieldError("extension degree must be >= 1");
  long long size = 1;
  for (int i = 0; i < e; ++i) {
    size *= p;
    if (size > kMaxSize)
      throw FieldError("field size " + std::to_string(p) + "^" + std::to_string(e) +
                       " exceeds bound " + std::to_string(kMaxSize));
  }
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Field>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, e}];
  if (!slot) {
    const auto* mod = table_modulus(p, e);
    if (!mod) throw FieldError("no modulus table entry for (" + std::to_string(p) + "," +
                               std::to_string(e) + ")");
    slot.reset(new Field(p, e, *mod));
  }
  return *slot;
}

uint8_t Field::from_int(long long n) const {
  long long r = n % p_;
  if (r < 0) r += p_;
  return uint8_t(r);  // index of the constant polynomial r
}

uint8_t Field::inv(uint8_t a) const {
  if (a == 0) throw FieldError("division by zero");
  return inv_[a];
}

uint8_t Field::pow(uint8_t a, long long k) const {
  if (a == 0) {
    if (k < 0) throw FieldError("division by zero");
    return k == 0 ? one() : zero();
  }
  long long ord = size_ - 1;
  long long r = k % ord;
  if (r < 0) r += ord;
  uint8_t acc = 1, base = a;
  while (r > 0) {
    if (r & 1) acc = mul(acc, base);
    base = mul(base, base);
    r >>= 1;
  }
  return acc;
}

uint8_t Field::frob(uint8_t x, int k) const {
  uint8_t r = x;
  for (int i = 0; i < k % e_ + (k % e_ < 0 ? e_ : 0); ++i) r = frob1_[r];
  return r;
}

uint8_t Field::norm(uint8_t x, int d) const {
  if (d < 1 || e_ % d != 0) throw FieldError("norm: subfield degree must divide e");
  uint8_t acc = 1;
  for (int i = 0; i < e_ / d; ++i) acc = mul(acc, frob(x, d * i));
  return acc;
}

uint8_t Field::trace(uint8_t x, int d) const {
  if (d < 1 || e_ % d != 0) throw FieldError("trace: subfield degree must divide e");
  uint8_t acc = 0;
  for (int i = 0; i < e_ / d; ++i) acc = add(acc, frob(x, d * i));
  return acc;
}

std::vector<int> Field::coords(uint8_t x) const { return index_to_poly(x, p_, e_); }

uint8_t Field::from_coords(const std::vector<int>& c) const {
  if (int(c.size()) != e_) throw FieldError("coordinate vector has wrong length");
  for (int v : c)
    if (v < 0 || v >= p_) throw FieldError("coordinate out of range [0,p)");
  return uint8_t(poly_to_index(c, p_));
}

std::string Field::str(uint8_t x) const {
  auto c = coords(x);
  std::string s = "[";
  for (int i = 0; i < e_; ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + "]";
}

Embedding::Embedding(const Field& small, const Field& big) : small_(&small), big_(&big) {
  if (small.p() != big.p() || big.e() % small.e() != 0)
    throw FieldError("no embedding: degrees incompatible");
  // Smallest root of the small modulus in the big field.
  const auto& m = small.modulus();
  int root = -1;
  for (int x = 0; x < big.size(); ++x) {
    uint8_t acc = 0, xp = 1;
    for (size_t i = 0; i < m.size(); ++i) {
      acc = big.add(acc, big.mul(big.from_int(m[i]), xp));
      xp = big.mul(xp, uint8_t(x));
    }
    if (acc == 0) {
      root = x;
      break;
    }
  }
  if (root < 0) throw FieldError("modulus has no root in the big field");
  fwd_.resize(small.size());
  back_.assign(big.size(), -1);
  for (int x = 0; x < small.size(); ++x) {
    auto c = small.coords(uint8_t(x));
    uint8_t acc = 0, rp = 1;
    for (int i = 0; i < small.e(); ++i) {
      acc = big.add(acc, big.mul(big.from_int(c[i]), rp));
      rp = big.mul(rp, uint8_t(root));
    }
    fwd_[x] = acc;
    back_[acc] = x;
  }
}

const Embedding& Embedding::get(const Field& small, const Field& big) {
  static std::mutex mu;
  static std::map<std::pair<const Field*, const Field*>, std::unique_ptr<Embedding>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{&small, &big}];
  if (!slot) slot.reset(new Embedding(small, big));
  return *slot;
}

uint8_t Embedding::back(uint8_t x) const {
  if (back_[x] < 0) throw FieldError("element is not in the embedded subfield");
  return uint8_t(back_[x]);
}

SpecialConstants special_constants(const Field& fq2) {
  if (fq2.e() % 2 != 0) throw FieldError("special constants need a quadratic extension");
  int ep = fq2.e() / 2;  // q = p^ep
  SpecialConstants sc{};
  // eta: smallest nonzero with eta + eta^q = 0.
  sc.eta = 0;
  for (int x = 1; x < fq2.size(); ++x)
    if (fq2.add(uint8_t(x), fq2.frob(uint8_t(x), ep)) == 0) {
      sc.eta = uint8_t(x);
      break;
    }
  // f = eta^p / eta, the subfield element with eta^p = f*eta.
  sc.f = fq2.div(fq2.frob(sc.eta, 1), sc.eta);
  // zeta: smallest with N_{F_{q^2}/F_q}(zeta) = f^{-1}.
  uint8_t target = fq2.inv(sc.f);
  sc.zeta = 0;
  for (int x = 1; x < fq2.size(); ++x)
    if (fq2.norm(uint8_t(x), ep) == target) {
      sc.zeta = uint8_t(x);
      break;
    }
  return sc;
}

}  // namespace ctphan
