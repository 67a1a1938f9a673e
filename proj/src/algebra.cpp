#include <algorithm>
#include <array>
#include <sstream>

#include "chainfix/chain.hpp"

namespace chainfix {

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char ch : s)
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '/'))
      throw std::invalid_argument("bad rational literal: " + s);
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  return c.get_str();
}

Rat pow2(int e) {
  Rat r(1);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), e);
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), -e);
  }
  return r;
}

Ring Ring::Zp(long p) {
  CFX_INPUT(p >= 2, "modulus must be >= 2");
  for (long d = 2; d * d <= p; ++d)
    CFX_INPUT(p % d != 0, "modulus must be prime");
  return {RingKind::IntegersModP, p};
}

Rat Ring::normalize(const Rat& x) const {
  Rat c = x;
  c.canonicalize();
  switch (kind) {
    case RingKind::Rationals:
      return c;
    case RingKind::Integers:
      CFX_CHECK(c.get_den() == 1, "non-integer coefficient over Z: " + rat_str(c));
      return c;
    case RingKind::IntegersModP: {
      Int den = c.get_den();
      Int pm(p);
      CFX_CHECK(den % pm != 0, "denominator divisible by modulus");
      Int dinv;
      CFX_CHECK(mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), pm.get_mpz_t()) != 0,
                "no inverse modulo p");
      Int num = c.get_num() % pm;
      Int r = (num * dinv) % pm;
      if (r < 0) r += pm;
      return Rat(r);
    }
  }
  return c;
}

bool Ring::is_unit(const Rat& x) const {
  Rat c = normalize(x);
  if (c == 0) return false;
  if (kind == RingKind::Integers) return c == 1 || c == -1;
  return true;
}

Rat Ring::inv(const Rat& x) const {
  CFX_CHECK(is_unit(x), "not a unit: " + rat_str(x));
  if (kind == RingKind::IntegersModP) {
    Rat c = normalize(x);
    Int r, pm(p);
    Int num = c.get_num();
    mpz_invert(r.get_mpz_t(), num.get_mpz_t(), pm.get_mpz_t());
    return normalize(Rat(r));
  }
  return normalize(1 / x);
}

bool Ring::divides(const Rat& a, const Rat& b) const {
  Rat na = normalize(a);
  if (na == 0) return normalize(b) == 0;
  if (is_field()) return true;
  Rat q = b / na;
  q.canonicalize();
  return q.get_den() == 1;
}

Rat Ring::div(const Rat& b, const Rat& a) const {
  CFX_CHECK(divides(a, b), "non-exact division");
  if (kind == RingKind::IntegersModP) return mul(b, inv(a));
  return normalize(b / a);
}

Rat Ring::fraction_field_normalize(const Rat& x) const {
  if (kind == RingKind::IntegersModP) return normalize(x);
  Rat c = x;
  c.canonicalize();
  return c;
}

std::string Ring::name() const {
  switch (kind) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::IntegersModP: return "Zp:" + std::to_string(p);
  }
  return "?";
}

Ring parse_ring(const std::string& s) {
  if (s == "Z") return Ring::Z();
  if (s == "Q") return Ring::Q();
  if (s.rfind("Zp:", 0) == 0) {
    long p = 0;
    try {
      p = std::stol(s.substr(3));
    } catch (...) {
      throw InputError("bad ring spec: " + s);
    }
    return Ring::Zp(p);
  }
  throw InputError("bad ring spec: " + s);
}

void SparseMat::set(const Ring& R, int i, int j, const Rat& v) {
  CFX_CHECK(i >= 0 && i < rows && j >= 0 && j < cols, "matrix index out of range");
  Rat n = R.normalize(v);
  if (n == 0)
    col[j].erase(i);
  else
    col[j][i] = n;
}

Rat SparseMat::get(int i, int j) const {
  if (j < 0 || j >= cols) return Rat(0);
  auto it = col[j].find(i);
  return it == col[j].end() ? Rat(0) : it->second;
}

void SparseMat::add_to(const Ring& R, int i, int j, const Rat& v) {
  set(R, i, j, get(i, j) + v);
}

bool SparseMat::is_zero() const {
  for (const auto& c : col)
    if (!c.empty()) return false;
  return true;
}

SparseMat mat_mul(const Ring& R, const SparseMat& A, const SparseMat& B) {
  CFX_CHECK(A.cols == B.rows, "matrix shape mismatch in product");
  SparseMat C(A.rows, B.cols);
  for (int j = 0; j < B.cols; ++j) {
    std::map<int, Rat> acc;
    for (const auto& [k, bkj] : B.col[j])
      for (const auto& [i, aik] : A.col[k]) acc[i] += aik * bkj;
    for (auto& [i, v] : acc) {
      Rat n = R.normalize(v);
      if (n != 0) C.col[j][i] = n;
    }
  }
  return C;
}

static SparseMat mat_combine(const Ring& R, const SparseMat& A, const SparseMat& B,
                             int sign) {
  CFX_CHECK(A.rows == B.rows && A.cols == B.cols, "matrix shape mismatch");
  SparseMat C = A;
  for (int j = 0; j < B.cols; ++j)
    for (const auto& [i, v] : B.col[j]) C.add_to(R, i, j, sign > 0 ? v : Rat(-v));
  return C;
}

SparseMat mat_add(const Ring& R, const SparseMat& A, const SparseMat& B) {
  return mat_combine(R, A, B, +1);
}
SparseMat mat_sub(const Ring& R, const SparseMat& A, const SparseMat& B) {
  return mat_combine(R, A, B, -1);
}

Chain chain_add(const Ring& R, const Chain& a, const Chain& b) {
  CFX_CHECK(a.degree == b.degree || a.zero() || b.zero(), "degree mismatch");
  Chain r = a;
  if (r.zero()) r.degree = b.degree;
  for (const auto& [id, v] : b.c) {
    Rat n = R.normalize(r.c.count(id) ? Rat(r.c[id] + v) : v);
    if (n == 0)
      r.c.erase(id);
    else
      r.c[id] = n;
  }
  return r;
}

Chain chain_scale(const Ring& R, const Rat& s, const Chain& a) {
  Chain r;
  r.degree = a.degree;
  Rat ns = R.normalize(s);
  if (ns == 0) return r;
  for (const auto& [id, v] : a.c) {
    Rat n = R.normalize(v * ns);
    if (n != 0) r.c[id] = n;
  }
  return r;
}

Chain chain_sub(const Ring& R, const Chain& a, const Chain& b) {
  return chain_add(R, a, chain_scale(R, Rat(-1), b));
}

bool chain_eq(const Chain& a, const Chain& b) {
  return a.c == b.c && (a.c.empty() || a.degree == b.degree);
}

Chain mat_apply(const Ring& R, const SparseMat& M, const Chain& x, int out_degree) {
  Chain r;
  r.degree = out_degree;
  std::map<int, Rat> acc;
  for (const auto& [j, v] : x.c) {
    CFX_CHECK(j >= 0 && j < M.cols, "chain index out of matrix range");
    for (const auto& [i, m] : M.col[j]) acc[i] += m * v;
  }
  for (auto& [i, v] : acc) {
    Rat n = R.normalize(v);
    if (n != 0) r.c[i] = n;
  }
  return r;
}

Chain ChainComplex::boundary_of(const Chain& x) const {
  if (x.degree <= 0 || x.degree > top_degree() || x.zero()) {
    Chain z;
    z.degree = x.degree - 1;
    return z;
  }
  return mat_apply(ring, boundary[x.degree], x, x.degree - 1);
}

Rat ChainComplex::augment(const Chain& x) const {
  CFX_CHECK(x.degree == 0 || x.zero(), "augmentation of positive degree chain");
  Rat s(0);
  for (const auto& [id, v] : x.c) {
    CFX_CHECK(id >= 0 && id < static_cast<int>(augmentation.size()),
              "0-cell out of range");
    s += augmentation[id] * v;
  }
  return ring.normalize(s);
}

std::string ChainComplex::cell_name(int q, int id) const {
  if (q >= 0 && q < static_cast<int>(names.size()) &&
      id < static_cast<int>(names[q].size()))
    return names[q][id];
  return "c" + std::to_string(q) + ":" + std::to_string(id);
}

VerifyReport verify_complex(const ChainComplex& C) {
  VerifyReport rep;
  int top = C.top_degree();
  if (static_cast<int>(C.boundary.size()) != top + 1 && top >= 0)
    rep.fail("boundary vector has wrong length");
  if (top >= 0 && static_cast<int>(C.augmentation.size()) != C.dims[0])
    rep.fail("augmentation has wrong length");
  if (!rep.ok) return rep;
  for (int q = 1; q <= top; ++q) {
    const SparseMat& d = C.boundary[q];
    if (d.rows != C.dim_at(q - 1) || d.cols != C.dim_at(q)) {
      rep.fail("boundary matrix shape wrong in degree " + std::to_string(q));
      continue;
    }
    if (q >= 2) {
      SparseMat dd = mat_mul(C.ring, C.boundary[q - 1], d);
      if (!dd.is_zero()) rep.fail("d.d != 0 from degree " + std::to_string(q));
    }
  }
  if (top >= 1) {
    // augmentation kills boundaries of 1-chains
    for (int j = 0; j < C.dim_at(1); ++j) {
      Rat s(0);
      for (const auto& [i, v] : C.boundary[1].col[j]) s += C.augmentation[i] * v;
      if (C.ring.normalize(s) != 0) {
        rep.fail("augmentation does not vanish on boundaries (1-cell " +
                 std::to_string(j) + ")");
        break;
      }
    }
  }
  return rep;
}

Chain ChainMorphism::apply(const Chain& x) const {
  int q = x.degree;
  if (x.zero() || q < 0 || q >= static_cast<int>(deg.size()) || deg[q].cols == 0) {
    Chain z;
    z.degree = q;
    return z;
  }
  return mat_apply(dst->ring, deg[q], x, q);
}

ChainMorphism ChainMorphism::identity(const ChainComplex& C) {
  ChainMorphism f;
  f.src = f.dst = &C;
  f.deg.resize(C.top_degree() + 1);
  for (int q = 0; q <= C.top_degree(); ++q) {
    f.deg[q] = SparseMat(C.dims[q], C.dims[q]);
    for (int i = 0; i < C.dims[q]; ++i) f.deg[q].col[i][i] = 1;
  }
  return f;
}

ChainMorphism ChainMorphism::zero(const ChainComplex& A, const ChainComplex& B) {
  ChainMorphism f;
  f.src = &A;
  f.dst = &B;
  f.deg.resize(A.top_degree() + 1);
  for (int q = 0; q <= A.top_degree(); ++q)
    f.deg[q] = SparseMat(B.dim_at(q), A.dims[q]);
  return f;
}

VerifyReport verify_morphism(const ChainMorphism& f, bool check_augmentation) {
  VerifyReport rep;
  const ChainComplex& A = *f.src;
  const ChainComplex& B = *f.dst;
  if (!(A.ring == B.ring)) rep.fail("ring mismatch");
  for (int q = 0; q < static_cast<int>(f.deg.size()); ++q) {
    if (f.deg[q].cols == 0) continue;
    if (f.deg[q].cols != A.dim_at(q) || f.deg[q].rows != B.dim_at(q)) {
      rep.fail("morphism matrix shape wrong in degree " + std::to_string(q));
      return rep;
    }
  }
  auto mat_at = [&](int q) {
    if (q >= 0 && q < static_cast<int>(f.deg.size()) && f.deg[q].cols > 0)
      return f.deg[q];
    return SparseMat(B.dim_at(q), A.dim_at(q));
  };
  for (int q = 1; q <= A.top_degree(); ++q) {
    if (A.dims[q] == 0) continue;
    SparseMat lhs = (q <= B.top_degree() && B.dims[q] > 0)
                        ? mat_mul(A.ring, B.boundary[q], mat_at(q))
                        : SparseMat(B.dim_at(q - 1), A.dims[q]);
    SparseMat rhs = mat_mul(A.ring, mat_at(q - 1), A.boundary[q]);
    if (!mat_sub(A.ring, lhs, rhs).is_zero())
      rep.fail("does not commute with boundary in degree " + std::to_string(q));
  }
  if (check_augmentation && A.dim_at(0) > 0) {
    SparseMat f0 = mat_at(0);
    for (int j = 0; j < A.dims[0]; ++j) {
      Rat s(0);
      for (const auto& [i, v] : f0.col[j]) s += B.augmentation[i] * v;
      if (A.ring.normalize(s) != A.ring.normalize(A.augmentation[j])) {
        rep.fail("augmentation not preserved at 0-cell " + std::to_string(j));
        break;
      }
    }
  }
  return rep;
}

ChainMorphism morphism_compose(const ChainMorphism& g, const ChainMorphism& f) {
  CFX_CHECK(f.dst == g.src, "composition mismatch");
  ChainMorphism h;
  h.src = f.src;
  h.dst = g.dst;
  int n = f.src->top_degree() + 1;
  h.deg.resize(n);
  for (int q = 0; q < n; ++q) {
    SparseMat fq = (q < static_cast<int>(f.deg.size()) && f.deg[q].cols > 0)
                       ? f.deg[q]
                       : SparseMat(f.dst->dim_at(q), f.src->dim_at(q));
    SparseMat gq = (q < static_cast<int>(g.deg.size()) && g.deg[q].cols > 0)
                       ? g.deg[q]
                       : SparseMat(g.dst->dim_at(q), g.src->dim_at(q));
    h.deg[q] = mat_mul(f.src->ring, gq, fq);
  }
  return h;
}

ChainMorphism morphism_sub(const ChainMorphism& a, const ChainMorphism& b) {
  CFX_CHECK(a.src == b.src && a.dst == b.dst, "morphism difference mismatch");
  ChainMorphism r = a;
  int n = a.src->top_degree() + 1;
  r.deg.resize(n);
  for (int q = 0; q < n; ++q) {
    SparseMat aq = (q < static_cast<int>(a.deg.size()) && a.deg[q].cols > 0)
                       ? a.deg[q]
                       : SparseMat(a.dst->dim_at(q), a.src->dim_at(q));
    SparseMat bq = (q < static_cast<int>(b.deg.size()) && b.deg[q].cols > 0)
                       ? b.deg[q]
                       : SparseMat(b.dst->dim_at(q), b.src->dim_at(q));
    r.deg[q] = mat_sub(a.src->ring, aq, bq);
  }
  return r;
}

VerifyReport verify_homotopy(const ChainMorphism& f0, const ChainMorphism& f1,
                             const ChainHomotopy& h) {
  VerifyReport rep;
  const ChainComplex& A = *f0.src;
  const ChainComplex& B = *f0.dst;
  if (f1.src != &A || f1.dst != &B || h.src != &A || h.dst != &B) {
    rep.fail("homotopy endpoints mismatch");
    return rep;
  }
  auto hq = [&](int q) {
    if (q >= 0 && q < static_cast<int>(h.deg.size()) && h.deg[q].cols > 0)
      return h.deg[q];
    return SparseMat(B.dim_at(q + 1), A.dim_at(q));
  };
  ChainMorphism diff = morphism_sub(f1, f0);
  for (int q = 0; q <= A.top_degree(); ++q) {
    if (A.dims[q] == 0) continue;
    SparseMat want = diff.deg[q];
    SparseMat got(B.dim_at(q), A.dim_at(q));
    if (B.dim_at(q + 1) > 0)
      got = mat_mul(A.ring, B.boundary[q + 1], hq(q));
    if (q >= 1) got = mat_add(A.ring, got, mat_mul(A.ring, hq(q - 1), A.boundary[q]));
    if (!mat_sub(A.ring, want, got).is_zero())
      rep.fail("dh + hd != f1 - f0 in degree " + std::to_string(q));
  }
  return rep;
}

TensorComplex tensor_complex(const ChainComplex& A, const ChainComplex& B) {
  CFX_CHECK(A.ring == B.ring, "tensor over different rings");
  TensorComplex T;
  int top = A.top_degree() + B.top_degree();
  if (A.top_degree() < 0 || B.top_degree() < 0) top = -1;
  T.cells.resize(std::max(top + 1, 0));
  for (int q = 0; q <= top; ++q)
    for (int p = 0; p <= std::min(q, A.top_degree()); ++p) {
      int r = q - p;
      if (r > B.top_degree()) continue;
      for (int a = 0; a < A.dims[p]; ++a)
        for (int b = 0; b < B.dims[r]; ++b) {
          T.index[{q, p, a, b}] = static_cast<int>(T.cells[q].size());
          T.cells[q].push_back({p, a, b});
        }
    }
  ChainComplex& C = T.complex;
  C.ring = A.ring;
  C.dims.resize(top + 1);
  C.names.resize(top + 1);
  for (int q = 0; q <= top; ++q) {
    C.dims[q] = static_cast<int>(T.cells[q].size());
    for (auto& [p, a, b] : T.cells[q])
      C.names[q].push_back(A.cell_name(p, a) + "(x)" + B.cell_name(q - p, b));
  }
  C.boundary.resize(top + 1);
  for (int q = 1; q <= top; ++q) {
    SparseMat d(C.dims[q - 1], C.dims[q]);
    for (int j = 0; j < C.dims[q]; ++j) {
      auto [p, a, b] = T.cells[q][j];
      int r = q - p;
      if (p >= 1)
        for (const auto& [a2, v] : A.boundary[p].col[a])
          d.add_to(C.ring, T.index.at({q - 1, p - 1, a2, b}), j, v);
      if (r >= 1) {
        Rat sign = (p % 2 == 0) ? Rat(1) : Rat(-1);
        for (const auto& [b2, v] : B.boundary[r].col[b])
          d.add_to(C.ring, T.index.at({q - 1, p, a, b2}), j, Rat(sign * v));
      }
    }
    C.boundary[q] = d;
  }
  if (top >= 0) {
    C.augmentation.resize(C.dims[0]);
    for (int j = 0; j < C.dims[0]; ++j) {
      auto [p, a, b] = T.cells[0][j];
      C.augmentation[j] = C.ring.mul(A.augmentation[a], B.augmentation[b]);
    }
  }
  return T;
}

ChainMorphism tensor_morphism(const TensorComplex& TA, const TensorComplex& TB,
                              const ChainMorphism& f, const ChainMorphism& g) {
  // degree-0 morphisms tensored: no Koszul sign appears
  ChainMorphism h;
  h.src = &TA.complex;
  h.dst = &TB.complex;
  h.deg.resize(TA.complex.top_degree() + 1);
  const Ring& R = TA.complex.ring;
  for (int q = 0; q <= TA.complex.top_degree(); ++q) {
    SparseMat m(TB.complex.dim_at(q), TA.complex.dim_at(q));
    for (int j = 0; j < TA.complex.dim_at(q); ++j) {
      auto [p, a, b] = TA.cells[q][j];
      int r = q - p;
      if (p >= static_cast<int>(f.deg.size()) || f.deg[p].cols == 0) continue;
      if (r >= static_cast<int>(g.deg.size()) || g.deg[r].cols == 0) continue;
      for (const auto& [a2, va] : f.deg[p].col[a])
        for (const auto& [b2, vb] : g.deg[r].col[b]) {
          auto it = TB.index.find({q, p, a2, b2});
          CFX_CHECK(it != TB.index.end(), "tensor image cell missing");
          m.add_to(R, it->second, j, Rat(va * vb));
        }
    }
    h.deg[q] = m;
  }
  return h;
}

}  // namespace chainfix
