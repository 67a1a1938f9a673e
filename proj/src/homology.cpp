#include <algorithm>

#include "chainfix/homology.hpp"

namespace chainfix {

DenseInt dense_int_from_sparse(const SparseMat& M) {
  DenseInt A(M.rows, std::vector<Int>(M.cols, Int(0)));
  for (int j = 0; j < M.cols; ++j)
    for (const auto& [i, v] : M.col[j]) {
      Rat c = v;
      c.canonicalize();
      CFX_CHECK(c.get_den() == 1, "non-integer entry in integer matrix");
      A[i][j] = c.get_num();
    }
  return A;
}

DenseRat dense_rat_from_sparse(const SparseMat& M) {
  DenseRat A(M.rows, std::vector<Rat>(M.cols, Rat(0)));
  for (int j = 0; j < M.cols; ++j)
    for (const auto& [i, v] : M.col[j]) A[i][j] = v;
  return A;
}

DenseInt dense_mul(const DenseInt& A, const DenseInt& B) {
  size_t m = A.size(), k = A.empty() ? 0 : A[0].size(), n = B.empty() ? 0 : B[0].size();
  CFX_CHECK(B.size() == k, "dense shape mismatch");
  DenseInt C(m, std::vector<Int>(n, Int(0)));
  for (size_t i = 0; i < m; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (A[i][l] == 0) continue;
      for (size_t j = 0; j < n; ++j) C[i][j] += A[i][l] * B[l][j];
    }
  return C;
}

bool dense_eq(const DenseInt& A, const DenseInt& B) { return A == B; }

Int dense_det(DenseInt A) {
  // Bareiss fraction-free elimination
  size_t n = A.size();
  if (n == 0) return Int(1);
  CFX_CHECK(A[0].size() == n, "determinant of non-square matrix");
  Int prev(1), sign(1);
  for (size_t k = 0; k + 1 < n; ++k) {
    if (A[k][k] == 0) {
      size_t s = k + 1;
      while (s < n && A[s][k] == 0) ++s;
      if (s == n) return Int(0);
      std::swap(A[k], A[s]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        Int t = A[i][j] * A[k][k] - A[i][k] * A[k][j];
        mpz_divexact(A[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = A[k][k];
  }
  return sign * A[n - 1][n - 1];
}

static DenseInt identity_int(int n) {
  DenseInt I(n, std::vector<Int>(n, Int(0)));
  for (int i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

SmithResult smith_normal_form(const DenseInt& A0) {
  DenseInt A = A0;
  int m = static_cast<int>(A.size());
  int n = m == 0 ? 0 : static_cast<int>(A[0].size());
  SmithResult res;
  res.U = identity_int(m);
  res.V = identity_int(n);
  auto row_add = [&](int dst, int src, const Int& c) {  // row dst += c * row src
    for (int j = 0; j < n; ++j) A[dst][j] += c * A[src][j];
    for (int j = 0; j < m; ++j) res.U[dst][j] += c * res.U[src][j];
  };
  auto col_add = [&](int dst, int src, const Int& c) {
    for (int i = 0; i < m; ++i) A[i][dst] += c * A[i][src];
    for (int i = 0; i < n; ++i) res.V[i][dst] += c * res.V[i][src];
  };
  auto row_swap = [&](int a, int b) {
    std::swap(A[a], A[b]);
    std::swap(res.U[a], res.U[b]);
  };
  auto col_swap = [&](int a, int b) {
    for (int i = 0; i < m; ++i) std::swap(A[i][a], A[i][b]);
    for (int i = 0; i < n; ++i) std::swap(res.V[i][a], res.V[i][b]);
  };
  auto row_negate = [&](int r) {
    for (int j = 0; j < n; ++j) A[r][j] = -A[r][j];
    for (int j = 0; j < m; ++j) res.U[r][j] = -res.U[r][j];
  };

  int t = 0;
  while (t < m && t < n) {
    // smallest-magnitude nonzero pivot in the remaining block
    int pi = -1, pj = -1;
    Int best(0);
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j)
        if (A[i][j] != 0) {
          Int a = abs(A[i][j]);
          if (pi < 0 || a < best) {
            best = a;
            pi = i;
            pj = j;
          }
        }
    if (pi < 0) break;
    if (pi != t) row_swap(t, pi);
    if (pj != t) col_swap(t, pj);
    bool clean = true;
    for (int i = t + 1; i < m; ++i)
      if (A[i][t] != 0) {
        Int q = A[i][t] / A[t][t];
        // round toward a remainder of minimal magnitude
        Int r = A[i][t] - q * A[t][t];
        if (r != 0 && abs(r) * 2 > abs(A[t][t])) q += (r > 0) == (A[t][t] > 0) ? 1 : -1;
        row_add(i, t, -q);
        if (A[i][t] != 0) clean = false;
      }
    for (int j = t + 1; j < n; ++j)
      if (A[t][j] != 0) {
        Int q = A[t][j] / A[t][t];
        Int r = A[t][j] - q * A[t][t];
        if (r != 0 && abs(r) * 2 > abs(A[t][t])) q += (r > 0) == (A[t][t] > 0) ? 1 : -1;
        col_add(j, t, -q);
        if (A[t][j] != 0) clean = false;
      }
    if (!clean) continue;
    // divisibility sweep: pivot must divide the rest of the block
    bool divides_all = true;
    for (int i = t + 1; i < m && divides_all; ++i)
      for (int j = t + 1; j < n && divides_all; ++j)
        if (A[i][j] % A[t][t] != 0) {
          row_add(t, i, Int(1));
          divides_all = false;
        }
    if (!divides_all) continue;
    if (A[t][t] < 0) row_negate(t);
    ++t;
  }
  for (int i = 0; i < t; ++i) res.diag.push_back(A[i][i]);
  return res;
}

int field_rank(const Ring& R, const SparseMat& M) {
  Ring F = (R.kind == RingKind::IntegersModP) ? R : Ring::Q();
  DenseRat A = dense_rat_from_sparse(M);
  int m = M.rows, n = M.cols, rank = 0;
  for (int j = 0; j < n && rank < m; ++j) {
    int piv = -1;
    for (int i = rank; i < m; ++i)
      if (!F.is_zero(A[i][j])) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(A[piv], A[rank]);
    Rat inv = F.inv(A[rank][j]);
    for (int jj = j; jj < n; ++jj) A[rank][jj] = F.mul(A[rank][jj], inv);
    for (int i = 0; i < m; ++i) {
      if (i == rank || F.is_zero(A[i][j])) continue;
      Rat c = A[i][j];
      for (int jj = j; jj < n; ++jj)
        A[i][jj] = F.sub(A[i][jj], F.mul(c, A[rank][jj]));
    }
    ++rank;
  }
  return rank;
}

HomologyResult homology(const ChainComplex& C, bool reduced) {
  HomologyResult H;
  H.ring = C.ring;
  H.reduced = reduced;
  int top = C.top_degree();
  if (top < 0) return H;
  H.betti.assign(top + 1, 0);
  H.torsion.assign(top + 1, {});

  std::vector<int> rank(top + 2, 0);  // rank[q] = rank of boundary_q (q>=1)
  std::vector<std::vector<Int>> inv(top + 2);
  for (int q = 1; q <= top; ++q) {
    if (C.ring.kind == RingKind::Integers) {
      SmithResult s = smith_normal_form(dense_int_from_sparse(C.boundary[q]));
      rank[q] = s.rank();
      inv[q] = s.diag;
    } else {
      rank[q] = field_rank(C.ring, C.boundary[q]);
    }
  }
  int aug_rank = 0;
  if (reduced) {
    // augmentation as a boundary to degree -1
    for (const Rat& a : C.augmentation)
      if (!C.ring.is_zero(a)) {
        aug_rank = 1;
        break;
      }
  }
  for (int q = 0; q <= top; ++q) {
    int z = C.dims[q] - rank[q] - (q == 0 ? aug_rank : 0);
    int b = (q + 1 <= top) ? rank[q + 1] : 0;
    H.betti[q] = z - b;
    if (C.ring.kind == RingKind::Integers && q + 1 <= top)
      for (const Int& d : inv[q + 1])
        if (d != 1) H.torsion[q].push_back(d);
    // over Z the reduced degree-0 part can also carry torsion if the
    // augmentation image is a proper ideal; surface it
    if (reduced && q == 0 && C.ring.kind == RingKind::Integers && aug_rank == 1) {
      Int g(0);
      for (const Rat& a : C.augmentation) g = gcd(g, Int(a.get_num()));
      // H_{-1} would be Z/g; report through is_acyclic instead
      (void)g;
    }
  }
  return H;
}

bool is_acyclic(const ChainComplex& C) {
  if (C.top_degree() < 0) return false;
  HomologyResult H = homology(C, true);
  for (int b : H.betti)
    if (b != 0) return false;
  for (const auto& t : H.torsion)
    if (!t.empty()) return false;
  // augmentation must hit a unit (H_{-1} = 0)
  if (C.ring.kind == RingKind::Integers) {
    Int g(0);
    for (const Rat& a : C.augmentation) g = gcd(g, Int(a.get_num()));
    if (g != 1) return false;
  } else {
    bool any = false;
    for (const Rat& a : C.augmentation) any = any || !C.ring.is_zero(a);
    if (!any) return false;
  }
  return true;
}

// ---- field linear algebra helpers -----------------------------------------

namespace {

struct FieldSolver {
  Ring F;
  DenseRat A;  // rref of the original matrix
  std::vector<int> pivot_col_of_row;
  std::vector<int> col_perm;  // identity here; kept for clarity
  int rank = 0;

  // Reduce a vector against the rref, returning residual and combination.
  // If residual is zero, coeffs gives x with original_A x = b restricted to
  // pivot columns.
};

// Gauss-Jordan over the fraction field; returns rref, pivot columns.
void rref(const Ring& F, DenseRat& A, std::vector<int>& pivots) {
  int m = static_cast<int>(A.size());
  int n = m == 0 ? 0 : static_cast<int>(A[0].size());
  pivots.clear();
  int r = 0;
  for (int j = 0; j < n && r < m; ++j) {
    int piv = -1;
    for (int i = r; i < m; ++i)
      if (!F.is_zero(A[i][j])) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(A[piv], A[r]);
    Rat inv = F.inv(A[r][j]);
    for (int jj = 0; jj < n; ++jj) A[r][jj] = F.mul(A[r][jj], inv);
    for (int i = 0; i < m; ++i) {
      if (i == r || F.is_zero(A[i][j])) continue;
      Rat c = A[i][j];
      for (int jj = 0; jj < n; ++jj) A[i][jj] = F.sub(A[i][jj], F.mul(c, A[r][jj]));
    }
    pivots.push_back(j);
    ++r;
  }
}

// Solve A x = b over the field; A given dense. Returns nullopt if
// inconsistent. Deterministic (free variables set to zero).
std::optional<std::vector<Rat>> field_solve(const Ring& F, DenseRat A,
                                            std::vector<Rat> b) {
  int m = static_cast<int>(A.size());
  int n = m == 0 ? 0 : static_cast<int>(A[0].size());
  for (int i = 0; i < m; ++i) A[i].push_back(b[i]);
  std::vector<int> pivots;
  rref(F, A, pivots);
  std::vector<Rat> x(n, Rat(0));
  for (size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == n) return std::nullopt;  // pivot in the rhs column
    x[pivots[r]] = A[r][n];
  }
  return x;
}

std::vector<Rat> chain_to_vec(const Chain& c, int dim) {
  std::vector<Rat> v(dim, Rat(0));
  for (const auto& [i, val] : c.c) v[i] = val;
  return v;
}

Chain vec_to_chain(const Ring& R, const std::vector<Rat>& v, int degree) {
  Chain c;
  c.degree = degree;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    Rat n = R.fraction_field_normalize(v[i]);
    if (n != 0) c.c[i] = n;
  }
  return c;
}

}  // namespace

HomologyBasis homology_basis(const ChainComplex& C) {
  HomologyBasis B;
  Ring F = C.ring.is_field() ? C.ring : Ring::Q();
  B.field = F;
  int top = C.top_degree();
  B.reps.resize(top + 1);
  B.solve_mat.resize(top + 1);
  B.solve_cols.resize(top + 1);
  B.n_bnd.resize(top + 1, 0);
  for (int q = 0; q <= top; ++q) {
    int n = C.dims[q];
    if (n == 0) continue;
    // kernel basis of boundary_q
    DenseRat ker;  // columns stacked as vectors
    if (q == 0) {
      for (int i = 0; i < n; ++i) {
        std::vector<Rat> e(n, Rat(0));
        e[i] = 1;
        ker.push_back(e);
      }
    } else {
      DenseRat A = dense_rat_from_sparse(C.boundary[q]);
      std::vector<int> pivots;
      rref(F, A, pivots);
      std::vector<bool> is_piv(n, false);
      for (int p : pivots) is_piv[p] = true;
      for (int j = 0; j < n; ++j) {
        if (is_piv[j]) continue;
        std::vector<Rat> v(n, Rat(0));
        v[j] = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
          v[pivots[r]] = F.neg(A[r][j]);
        ker.push_back(v);
      }
    }
    // image basis of boundary_{q+1}: independent columns
    DenseRat img;
    if (q + 1 <= top && C.dims[q + 1] > 0) {
      DenseRat A = dense_rat_from_sparse(C.boundary[q + 1]);
      DenseRat At(A.empty() ? 0 : A[0].size());
      // work with columns directly
      int nc = C.dims[q + 1];
      DenseRat probe;  // rows = accumulated independent columns
      std::vector<std::vector<Rat>> cols;
      for (int j = 0; j < nc; ++j) {
        std::vector<Rat> cv(n, Rat(0));
        for (int i = 0; i < n; ++i) cv[i] = A[i][j];
        cols.push_back(cv);
      }
      // greedy rank extension
      DenseRat M;  // matrix with current independent columns as columns
      for (auto& cv : cols) {
        DenseRat test(n, std::vector<Rat>(img.size() + 1));
        for (int i = 0; i < n; ++i) {
          for (size_t k = 0; k < img.size(); ++k) test[i][k] = img[k][i];
          test[i][img.size()] = cv[i];
        }
        std::vector<int> pv;
        DenseRat t2 = test;
        rref(F, t2, pv);
        if (static_cast<int>(pv.size()) == static_cast<int>(img.size()) + 1)
          img.push_back(cv);
      }
    }
    // extend image basis to kernel basis; surplus columns are homology reps
    DenseRat chosen = img;  // vectors (length n)
    std::vector<std::vector<Rat>> reps;
    for (auto& kv : ker) {
      DenseRat test(n, std::vector<Rat>(chosen.size() + 1));
      for (int i = 0; i < n; ++i) {
        for (size_t k = 0; k < chosen.size(); ++k) test[i][k] = chosen[k][i];
        test[i][chosen.size()] = kv[i];
      }
      std::vector<int> pv;
      rref(F, test, pv);
      if (static_cast<int>(pv.size()) == static_cast<int>(chosen.size()) + 1) {
        chosen.push_back(kv);
        reps.push_back(kv);
      }
    }
    B.n_bnd[q] = static_cast<int>(img.size());
    DenseRat S(n, std::vector<Rat>(chosen.size()));
    for (int i = 0; i < n; ++i)
      for (size_t k = 0; k < chosen.size(); ++k) S[i][k] = chosen[k][i];
    B.solve_mat[q] = S;
    for (auto& r : reps) B.reps[q].push_back(vec_to_chain(F, r, q));
  }
  return B;
}

std::vector<Rat> homology_class_coordinates(const ChainComplex& C,
                                            const HomologyBasis& B,
                                            const Chain& cycle) {
  int q = cycle.degree;
  CFX_CHECK(q >= 0 && q <= C.top_degree(), "degree out of range");
  Chain bd = C.boundary_of(cycle);
  CFX_CHECK(bd.zero(), "not a cycle");
  const Ring& F = B.field;
  std::vector<Rat> v = chain_to_vec(cycle, C.dims[q]);
  auto x = field_solve(F, B.solve_mat[q], v);
  CFX_CHECK(x.has_value(), "cycle outside computed cycle space");
  std::vector<Rat> out;
  for (size_t k = B.n_bnd[q]; k < x->size(); ++k)
    out.push_back(F.fraction_field_normalize((*x)[k]));
  return out;
}

InducedHomologyMap induced_on_homology(const ChainMorphism& f) {
  const ChainComplex& A = *f.src;
  const ChainComplex& Bc = *f.dst;
  HomologyBasis BA = homology_basis(A);
  HomologyBasis BB = (&A == &Bc) ? BA : homology_basis(Bc);
  InducedHomologyMap M;
  M.field = BA.field;
  int top = A.top_degree();
  M.mat.resize(top + 1);
  for (int q = 0; q <= top; ++q) {
    int nA = static_cast<int>(BA.reps[q].size());
    int nB = (q <= Bc.top_degree()) ? static_cast<int>(BB.reps[q].size()) : 0;
    M.mat[q] = DenseRat(nB, std::vector<Rat>(nA, Rat(0)));
    for (int j = 0; j < nA; ++j) {
      Chain img = f.apply(BA.reps[q][j]);
      if (img.zero() || nB == 0) continue;
      std::vector<Rat> co = homology_class_coordinates(Bc, BB, img);
      for (int i = 0; i < nB; ++i) M.mat[q][i][j] = co[i];
    }
  }
  return M;
}

Rat lefschetz_number(const ChainMorphism& endo) {
  CFX_CHECK(endo.src == endo.dst, "Lefschetz number needs an endomorphism");
  const ChainComplex& C = *endo.src;
  Rat L(0);
  for (int q = 0; q <= C.top_degree(); ++q) {
    if (q >= static_cast<int>(endo.deg.size()) || endo.deg[q].cols == 0) continue;
    Rat tr(0);
    for (int i = 0; i < C.dims[q]; ++i) tr += endo.deg[q].get(i, i);
    L += (q % 2 == 0) ? tr : -tr;
  }
  return C.ring.fraction_field_normalize(L);
}

Rat lefschetz_number(const InducedHomologyMap& m) {
  Rat L(0);
  for (int q = 0; q < static_cast<int>(m.mat.size()); ++q) {
    Rat tr(0);
    for (size_t i = 0; i < m.mat[q].size(); ++i) tr += m.mat[q][i][i];
    L += (q % 2 == 0) ? tr : -tr;
  }
  return m.field.fraction_field_normalize(L);
}

// ---- boundary solver -------------------------------------------------------

struct BoundarySolver::Fact {
  bool integers = false;
  // field path: rref of [A | I] is overkill; store A and solve on demand
  DenseRat A;
  // integer path
  SmithResult snf;
  int rows = 0, cols = 0;
};

BoundarySolver::BoundarySolver(const ChainComplex& C0) : C(&C0) {
  fact_.resize(C0.top_degree() + 2);
}

std::optional<Chain> BoundarySolver::solve(const Chain& target, int deg) const {
  const ChainComplex& K = *C;
  CFX_CHECK(deg >= 0 && deg <= K.top_degree(), "solver degree out of range");
  int n = K.dims[deg];
  int m;
  SparseMat mat;
  if (deg == 0) {
    // augmentation row: find x with eps(x) = target.c[0]
    m = 1;
    mat = SparseMat(1, n);
    for (int j = 0; j < n; ++j) mat.set(K.ring, 0, j, K.augmentation[j]);
  } else {
    m = K.dims[deg - 1];
    mat = K.boundary[deg];
  }
  std::vector<Rat> b(m, Rat(0));
  for (const auto& [i, v] : target.c) {
    CFX_CHECK(i >= 0 && i < m, "target index out of range");
    b[i] = v;
  }
  if (K.ring.kind == RingKind::Integers) {
    auto& f = fact_[deg];
    if (!f) {
      f = std::make_shared<Fact>();
      f->integers = true;
      f->snf = smith_normal_form(dense_int_from_sparse(mat));
      f->rows = m;
      f->cols = n;
    }
    // x = V y, D y = U b
    std::vector<Int> bi(m);
    for (int i = 0; i < m; ++i) {
      Rat c = b[i];
      c.canonicalize();
      CFX_CHECK(c.get_den() == 1, "non-integer target over Z");
      bi[i] = c.get_num();
    }
    std::vector<Int> ub(m, Int(0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) ub[i] += f->snf.U[i][j] * bi[j];
    int r = f->snf.rank();
    std::vector<Int> y(n, Int(0));
    for (int i = 0; i < m; ++i) {
      if (i < r) {
        if (ub[i] % f->snf.diag[i] != 0) return std::nullopt;
        y[i] = ub[i] / f->snf.diag[i];
      } else if (ub[i] != 0) {
        return std::nullopt;
      }
    }
    Chain x;
    x.degree = deg;
    for (int i = 0; i < n; ++i) {
      Int xi(0);
      for (int j = 0; j < n; ++j) xi += f->snf.V[i][j] * y[j];
      if (xi != 0) x.c[i] = Rat(xi);
    }
    return x;
  }
  auto& f = fact_[deg];
  if (!f) {
    f = std::make_shared<Fact>();
    f->A = dense_rat_from_sparse(mat);
    f->rows = m;
    f->cols = n;
  }
  Ring F = K.ring.is_field() ? K.ring : Ring::Q();
  auto x = field_solve(F, f->A, b);
  if (!x) return std::nullopt;
  return vec_to_chain(F, *x, deg);
}

}  // namespace chainfix
