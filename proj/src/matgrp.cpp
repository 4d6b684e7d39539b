#include "ctphan/matgrp.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace ctphan {

Mat::Mat(const Field& F, int n) : F_(&F), n_(n) {
  if (n < 1 || n > 4) throw FieldError("matrix dimension must be 1..4");
  a_.fill(0);
}

Mat Mat::identity(const Field& F, int n) {
  Mat m(F, n);
  for (int i = 0; i < n; ++i) m.set(i, i, F.one());
  return m;
}

Mat Mat::operator*(const Mat& o) const {
  const Field& F = *F_;
  Mat r(F, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      uint8_t acc = 0;
      for (int k = 0; k < n_; ++k) acc = F.add(acc, F.mul(at(i, k), o.at(k, j)));
      r.set(i, j, acc);
    }
  return r;
}

bool Mat::operator==(const Mat& o) const {
  if (F_ != o.F_ || n_ != o.n_) return false;
  return std::equal(a_.begin(), a_.begin() + n_ * n_, o.a_.begin());
}

uint8_t Mat::det() const {
  const Field& F = *F_;
  // Gaussian elimination on a copy.
  Mat m = *this;
  uint8_t d = F.one();
  for (int c = 0; c < n_; ++c) {
    int piv = -1;
    for (int r = c; r < n_; ++r)
      if (m.at(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n_; ++j) {
        uint8_t t = m.at(c, j);
        m.set(c, j, m.at(piv, j));
        m.set(piv, j, t);
      }
      d = F.neg(d);
    }
    d = F.mul(d, m.at(c, c));
    uint8_t pinv = F.inv(m.at(c, c));
    for (int r = c + 1; r < n_; ++r) {
      uint8_t factor = F.mul(m.at(r, c), pinv);
      if (factor == 0) continue;
      for (int j = c; j < n_; ++j)
        m.set(r, j, F.sub(m.at(r, j), F.mul(factor, m.at(c, j))));
    }
  }
  return d;
}

Mat Mat::inverse() const {
  const Field& F = *F_;
  Mat m = *this;
  Mat inv = identity(F, n_);
  for (int c = 0; c < n_; ++c) {
    int piv = -1;
    for (int r = c; r < n_; ++r)
      if (m.at(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw FieldError("singular matrix has no inverse");
    if (piv != c)
      for (int j = 0; j < n_; ++j) {
        std::swap(m.a_[size_t(c) * n_ + j], m.a_[size_t(piv) * n_ + j]);
        std::swap(inv.a_[size_t(c) * n_ + j], inv.a_[size_t(piv) * n_ + j]);
      }
    uint8_t pinv = F.inv(m.at(c, c));
    for (int j = 0; j < n_; ++j) {
      m.set(c, j, F.mul(m.at(c, j), pinv));
      inv.set(c, j, F.mul(inv.at(c, j), pinv));
    }
    for (int r = 0; r < n_; ++r) {
      if (r == c) continue;
      uint8_t factor = m.at(r, c);
      if (factor == 0) continue;
      for (int j = 0; j < n_; ++j) {
        m.set(r, j, F.sub(m.at(r, j), F.mul(factor, m.at(c, j))));
        inv.set(r, j, F.sub(inv.at(r, j), F.mul(factor, inv.at(c, j))));
      }
    }
  }
  return inv;
}

Mat Mat::transpose() const {
  Mat r(*F_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.set(j, i, at(i, j));
  return r;
}

Mat Mat::frobenius(int k) const {
  Mat r(*F_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.set(i, j, F_->frob(at(i, j), k));
  return r;
}

Mat Mat::scaled(uint8_t c) const {
  Mat r(*F_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.set(i, j, F_->mul(at(i, j), c));
  return r;
}

std::array<uint8_t, 4> Mat::apply(const std::array<uint8_t, 4>& v) const {
  std::array<uint8_t, 4> r{0, 0, 0, 0};
  for (int i = 0; i < n_; ++i) {
    uint8_t acc = 0;
    for (int j = 0; j < n_; ++j) acc = F_->add(acc, F_->mul(at(i, j), v[j]));
    r[i] = acc;
  }
  return r;
}

MatKey Mat::key() const {
  // 7 bits per entry (indices < 81 < 128), row-major; dimension in the top
  // bits so different dims never collide.
  MatKey k;
  for (int idx = 0; idx < n_ * n_; ++idx) {
    uint64_t v = a_[idx];
    if (idx < 9)
      k.lo |= v << (7 * idx);
    else
      k.hi |= v << (7 * (idx - 9));
  }
  k.hi |= uint64_t(n_) << 56;
  return k;
}

std::string Mat::str() const {
  std::string s = "[";
  for (int i = 0; i < n_; ++i) {
    s += i ? "; " : "";
    for (int j = 0; j < n_; ++j) s += (j ? " " : "") + std::to_string(at(i, j));
  }
  return s + "]";
}

GroupHandle::GroupHandle(std::vector<Mat> generators) : gens_(std::move(generators)) {}

GroupHandle GroupHandle::closure(const std::vector<Mat>& generators, size_t budget) {
  if (generators.empty()) throw FieldError("closure needs at least one generator");
  const Field& F = generators[0].field();
  int n = generators[0].n();
  for (const Mat& g : generators) {
    if (&g.field() != &F || g.n() != n) throw FieldError("generators over mixed fields/dims");
    if (!g.invertible()) throw FieldError("non-invertible generator");
  }
  GroupHandle h(generators);
  Mat id = Mat::identity(F, n);
  h.elems_.push_back(id);
  h.keys_.insert(id.key());
  std::deque<size_t> frontier{0};
  while (!frontier.empty()) {
    size_t i = frontier.front();
    frontier.pop_front();
    Mat cur = h.elems_[i];
    for (const Mat& g : h.gens_) {
      Mat next = cur * g;
      if (h.keys_.insert(next.key()).second) {
        if (h.elems_.size() >= budget)
          throw BudgetError("closure budget exceeded", h.elems_.size());
        frontier.push_back(h.elems_.size());
        h.elems_.push_back(next);
      }
    }
  }
  return h;
}

GroupHandle GroupHandle::from_elements(std::vector<Mat> elements, std::vector<Mat> generators) {
  GroupHandle h(generators.empty() ? elements : std::move(generators));
  h.elems_ = std::move(elements);
  for (const Mat& m : h.elems_) h.keys_.insert(m.key());
  return h;
}

bool GroupHandle::contains_set(const GroupHandle& h) const {
  for (const Mat& m : h.elems_)
    if (!contains(m)) return false;
  return true;
}

bool GroupHandle::same_elements(const GroupHandle& h) const {
  return order() == h.order() && contains_set(h);
}

bool GroupHandle::all_preserve_forms() const {
  for (const auto& tag : formtags)
    for (const Mat& m : elems_)
      if (!preserves_form(m, tag)) return false;
  return true;
}

long long classical_order(const std::string& type, int q) {
  long long Q = q;
  if (type == "SL2" || type == "SU2") return Q * (Q * Q - 1);
  if (type == "SL3") return Q * Q * Q * (Q * Q * Q - 1) * (Q * Q - 1);
  if (type == "Sp4") return Q * Q * Q * Q * (Q * Q - 1) * (Q * Q * Q * Q - 1);
  if (type == "SU3") return Q * Q * Q * (Q * Q - 1) * (Q * Q * Q + 1);
  if (type == "SU4")
    return Q * Q * Q * Q * Q * Q * (Q * Q - 1) * (Q * Q * Q + 1) * (Q * Q * Q * Q - 1);
  throw FieldError("unknown classical type: " + type);
}

bool preserves_form(const Mat& g, const GroupHandle::FormTag& form) {
  const Field& F = g.field();
  Mat gt = g.transpose();
  Mat rhs = form.kind == GroupHandle::FormTag::Symplectic ? g : g.frobenius(F.e() / 2);
  return gt * form.gram * rhs == form.gram;
}

std::vector<GroupHandle> sylow_p_family(const GroupHandle& G, const GroupHandle& seed) {
  if (!G.enumerated()) throw FieldError("sylow_p_family needs an enumerated group");
  int p = G.field().p();
  size_t so = seed.order();
  // seed must be a p-group inside G
  size_t t = so;
  while (t % p == 0) t /= p;
  if (t != 1 || !G.contains_set(seed))
    throw FieldError("seed is not a p-subgroup of the group");
  std::map<std::vector<MatKey>, std::vector<Mat>> found;
  for (const Mat& g : G.elements()) {
    Mat gi = g.inverse();
    std::vector<MatKey> sig;
    std::vector<Mat> elems;
    sig.reserve(so);
    for (const Mat& x : seed.elements()) {
      Mat c = g * x * gi;
      elems.push_back(c);
      sig.push_back(c.key());
    }
    std::sort(sig.begin(), sig.end());
    found.emplace(std::move(sig), std::move(elems));
  }
  std::vector<GroupHandle> out;
  for (auto& [sig, elems] : found) out.push_back(GroupHandle::from_elements(std::move(elems)));
  return out;
}

GroupHandle grow_to_sylow(const GroupHandle& G, const GroupHandle& U) {
  int p = G.field().p();
  size_t target = G.order();
  size_t ppart = 1;
  while (target % p == 0) {
    target /= p;
    ppart *= p;
  }
  GroupHandle cur = U;
  while (cur.order() < ppart) {
    GroupHandle N = normalizer(G, cur);
    bool grew = false;
    for (const Mat& x : N.elements()) {
      if (cur.contains(x)) continue;
      size_t ord = 1;
      Mat id = Mat::identity(G.field(), G.dim());
      Mat m = x;
      while (!(m == id)) {
        m = m * x;
        ++ord;
      }
      if (ord % p != 0 && ord != 1) continue;
      size_t t = ord;
      while (t % p == 0) t /= p;
      if (t != 1) continue;
      std::vector<Mat> gens = cur.elements();
      gens.push_back(x);
      GroupHandle bigger = GroupHandle::closure(gens);
      if (bigger.order() > cur.order() && bigger.order() % p == 0) {
        size_t bo = bigger.order();
        while (bo % p == 0) bo /= p;
        if (bo == 1) {
          cur = bigger;
          grew = true;
          break;
        }
      }
    }
    if (!grew) throw FieldError("could not grow p-subgroup to a Sylow subgroup");
  }
  return cur;
}

namespace {
bool normalizes(const Mat& g, const GroupHandle& H) {
  Mat gi = g.inverse();
  for (const Mat& h : H.elements())
    if (!H.contains(g * h * gi)) return false;
  return true;
}
}  // namespace

GroupHandle normalizer(const GroupHandle& G, const GroupHandle& H) {
  std::vector<Mat> out;
  for (const Mat& g : G.elements())
    if (normalizes(g, H)) out.push_back(g);
  return GroupHandle::from_elements(std::move(out));
}

GroupHandle centralizer(const GroupHandle& G, const GroupHandle& H) {
  std::vector<Mat> out;
  for (const Mat& g : G.elements()) {
    bool ok = true;
    for (const Mat& h : H.elements())
      if (!(g * h == h * g)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(g);
  }
  return GroupHandle::from_elements(std::move(out));
}

GroupHandle derived_subgroup(const GroupHandle& G, size_t budget) {
  // Normal closure of the commutators of the generators: first close the
  // commutator seeds under conjugation by the generators, then take the
  // product closure of that normal generating set.
  std::vector<Mat> gens = G.generators();
  if (gens.empty()) gens = G.elements();
  std::vector<Mat> normgens;
  MatSet seen;
  std::deque<Mat> todo;
  auto push = [&](const Mat& m) {
    if (seen.insert(m.key()).second) {
      if (normgens.size() >= budget) throw BudgetError("derived subgroup budget", normgens.size());
      normgens.push_back(m);
      todo.push_back(m);
    }
  };
  for (const Mat& a : gens)
    for (const Mat& b : gens) push(a.inverse() * b.inverse() * a * b);
  while (!todo.empty()) {
    Mat cur = todo.front();
    todo.pop_front();
    for (const Mat& g : gens) push(g.inverse() * cur * g);
  }
  return GroupHandle::closure(normgens, budget);
}

namespace {
// True iff w lies in the span of v1 (and v2 when nonzero).
bool in_span(const Field& F, int n, const std::array<uint8_t, 4>& w,
             const std::array<uint8_t, 4>& v1, const std::array<uint8_t, 4>& v2,
             bool two_dim) {
  // Solve a*v1 + b*v2 = w by brute force over the field (fields are tiny).
  for (int a = 0; a < F.size(); ++a) {
    for (int b = 0; b < (two_dim ? F.size() : 1); ++b) {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        uint8_t s = F.add(F.mul(uint8_t(a), v1[i]), F.mul(uint8_t(b), v2[i]));
        ok = s == w[i];
      }
      if (ok) return true;
    }
  }
  return false;
}
}  // namespace

GroupHandle line_stabilizer(const GroupHandle& G, const std::array<uint8_t, 4>& v) {
  const Field& F = G.field();
  int n = G.dim();
  std::array<uint8_t, 4> zero{0, 0, 0, 0};
  std::vector<Mat> out;
  for (const Mat& g : G.elements())
    if (in_span(F, n, g.apply(v), v, zero, false)) out.push_back(g);
  return GroupHandle::from_elements(std::move(out));
}

GroupHandle subspace_stabilizer(const GroupHandle& G, const std::array<uint8_t, 4>& v1,
                                const std::array<uint8_t, 4>& v2) {
  const Field& F = G.field();
  int n = G.dim();
  std::vector<Mat> out;
  for (const Mat& g : G.elements())
    if (in_span(F, n, g.apply(v1), v1, v2, true) && in_span(F, n, g.apply(v2), v1, v2, true))
      out.push_back(g);
  return GroupHandle::from_elements(std::move(out));
}

GroupHandle vector_stabilizer(const GroupHandle& G, const std::array<uint8_t, 4>& v) {
  std::vector<Mat> out;
  for (const Mat& g : G.elements())
    if (g.apply(v) == v) out.push_back(g);
  return GroupHandle::from_elements(std::move(out));
}

GroupHandle generated_subgroup(const std::vector<Mat>& generators, size_t budget) {
  return GroupHandle::closure(generators, budget);
}

namespace {

// Pairing of two column vectors under a form: symplectic v^T M w, hermitian
// v^T H w^sigma.
uint8_t pairing(const Field& F, int n, const GroupHandle::FormTag& form,
                const std::array<uint8_t, 4>& v, const std::array<uint8_t, 4>& w) {
  int ep = F.e() / 2;
  uint8_t acc = 0;
  for (int k = 0; k < n; ++k) {
    if (v[k] == 0) continue;
    for (int l = 0; l < n; ++l) {
      uint8_t m = form.gram.at(k, l);
      if (m == 0 || w[l] == 0) continue;
      uint8_t wl = form.kind == GroupHandle::FormTag::Hermitian ? F.frob(w[l], ep) : w[l];
      acc = F.add(acc, F.mul(F.mul(v[k], m), wl));
    }
  }
  return acc;
}

}  // namespace

std::vector<Mat> special_isometry_group(const Field& F, int n,
                                        const std::vector<GroupHandle::FormTag>& forms,
                                        size_t budget) {
  // Candidate vectors for column i must satisfy the self-pairing
  // constraints; with our Gram matrices these agree for all i, so one
  // candidate list serves every column.
  std::vector<std::array<uint8_t, 4>> all;
  {
    std::array<uint8_t, 4> v{0, 0, 0, 0};
    size_t total = 1;
    for (int i = 0; i < n; ++i) total *= size_t(F.size());
    for (size_t code = 1; code < total; ++code) {
      size_t c = code;
      for (int i = 0; i < n; ++i) {
        v[i] = uint8_t(c % F.size());
        c /= F.size();
      }
      all.push_back(v);
    }
  }
  auto col_ok = [&](const std::array<uint8_t, 4>& v, int i) {
    for (const auto& form : forms)
      if (pairing(F, n, form, v, v) != form.gram.at(i, i)) return false;
    return true;
  };
  std::vector<std::vector<std::array<uint8_t, 4>>> cand(n);
  for (int i = 0; i < n; ++i)
    for (const auto& v : all)
      if (col_ok(v, i)) cand[i].push_back(v);

  std::vector<Mat> out;
  std::array<std::array<uint8_t, 4>, 4> cols{};
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      Mat m(F, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m.set(r, c, cols[c][r]);
      if (m.det() == F.one()) {
        if (out.size() >= budget) throw BudgetError("isometry group budget", out.size());
        out.push_back(m);
      }
      return;
    }
    for (const auto& v : cand[i]) {
      bool ok = true;
      for (int j = 0; j < i && ok; ++j)
        for (const auto& form : forms) {
          if (pairing(F, n, form, cols[j], v) != form.gram.at(j, i) ||
              pairing(F, n, form, v, cols[j]) != form.gram.at(i, j)) {
            ok = false;
            break;
          }
        }
      if (!ok) continue;
      cols[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace ctphan
