#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chainfix/ring.hpp"

namespace chainfix {

// Sparse column matrix over the ambient ring. Entries are kept normalized
// and nonzero.
struct SparseMat {
  int rows = 0, cols = 0;
  std::vector<std::map<int, Rat>> col;

  SparseMat() = default;
  SparseMat(int r, int c) : rows(r), cols(c), col(c) {}

  void set(const Ring& R, int i, int j, const Rat& v);
  Rat get(int i, int j) const;
  void add_to(const Ring& R, int i, int j, const Rat& v);
  bool is_zero() const;
};

SparseMat mat_mul(const Ring& R, const SparseMat& A, const SparseMat& B);
SparseMat mat_sub(const Ring& R, const SparseMat& A, const SparseMat& B);
SparseMat mat_add(const Ring& R, const SparseMat& A, const SparseMat& B);

// Formal linear combination of degree-q basis cells of some complex.
struct Chain {
  int degree = 0;
  std::map<int, Rat> c;

  bool zero() const { return c.empty(); }
};

Chain chain_add(const Ring& R, const Chain& a, const Chain& b);
Chain chain_scale(const Ring& R, const Rat& s, const Chain& a);
Chain chain_sub(const Ring& R, const Chain& a, const Chain& b);
bool chain_eq(const Chain& a, const Chain& b);
Chain mat_apply(const Ring& R, const SparseMat& M, const Chain& x, int out_degree);

// Finite free chain complex, degrees 0..top, with augmentation in degree 0.
// boundary[q] : C_q -> C_{q-1}; boundary[0] is unused (kept empty).
struct ChainComplex {
  Ring ring;
  std::vector<int> dims;
  std::vector<SparseMat> boundary;
  std::vector<Rat> augmentation;                // one entry per 0-cell
  std::vector<std::vector<std::string>> names;  // optional, for reports

  int top_degree() const { return static_cast<int>(dims.size()) - 1; }
  int dim_at(int q) const {
    return (q >= 0 && q <= top_degree()) ? dims[q] : 0;
  }
  Chain boundary_of(const Chain& x) const;
  Rat augment(const Chain& x) const;
  std::string cell_name(int q, int id) const;

  static ChainComplex empty(const Ring& R) {
    ChainComplex C;
    C.ring = R;
    return C;
  }
};

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> errors;
  void fail(const std::string& m) {
    ok = false;
    errors.push_back(m);
  }
};

// d.d = 0, augmentation.d_1 = 0, shape consistency.
VerifyReport verify_complex(const ChainComplex& C);

// Degree-0 chain map between finite complexes, stored as one matrix per
// degree. Missing degrees act as zero.
struct ChainMorphism {
  const ChainComplex* src = nullptr;
  const ChainComplex* dst = nullptr;
  std::vector<SparseMat> deg;

  Chain apply(const Chain& x) const;
  static ChainMorphism identity(const ChainComplex& C);
  static ChainMorphism zero(const ChainComplex& A, const ChainComplex& B);
};

// Checks commutation with the boundary and augmentation preservation
// (the latter only when `check_augmentation`).
VerifyReport verify_morphism(const ChainMorphism& f, bool check_augmentation = true);

ChainMorphism morphism_compose(const ChainMorphism& g, const ChainMorphism& f);
ChainMorphism morphism_sub(const ChainMorphism& a, const ChainMorphism& b);

// Degree +1 maps h_q : C_q -> D_{q+1}.
struct ChainHomotopy {
  const ChainComplex* src = nullptr;
  const ChainComplex* dst = nullptr;
  std::vector<SparseMat> deg;
};

// Verifies f1 - f0 = d h + h d degreewise.
VerifyReport verify_homotopy(const ChainMorphism& f0, const ChainMorphism& f1,
                             const ChainHomotopy& h);

// Tensor product complex with Koszul signs, cells indexed by pairs.
// pair_index(q, i) recovers (deg_a, id_a, id_b) for cell i of degree q.
struct TensorComplex {
  ChainComplex complex;
  // per total degree: list of (p, a, b) with p + q' = degree
  std::vector<std::vector<std::array<int, 3>>> cells;
  // (p, a, b) alone does not fix the degree of b, so the key carries it
  std::map<std::array<int, 4>, int> index;  // {q, p, a, b} -> cell id in degree q
};
TensorComplex tensor_complex(const ChainComplex& A, const ChainComplex& B);
ChainMorphism tensor_morphism(const TensorComplex& TA, const TensorComplex& TB,
                              const ChainMorphism& f, const ChainMorphism& g);

}  // namespace chainfix
