#pragma once

#include <memory>
#include <optional>

#include "chainfix/chain.hpp"

namespace chainfix {

using DenseInt = std::vector<std::vector<Int>>;
using DenseRat = std::vector<std::vector<Rat>>;

// Smith normal form U A V = D with U, V unimodular and d1 | d2 | ... .
// Pivoting picks a smallest-magnitude nonzero entry (ties: lowest row, then
// lowest column), so results are deterministic.
struct SmithResult {
  std::vector<Int> diag;  // nonzero invariant factors, positive
  DenseInt U, V;          // transforms, U: rows x rows, V: cols x cols
  int rank() const { return static_cast<int>(diag.size()); }
};
SmithResult smith_normal_form(const DenseInt& A);

DenseInt dense_int_from_sparse(const SparseMat& M);
DenseRat dense_rat_from_sparse(const SparseMat& M);
DenseInt dense_mul(const DenseInt& A, const DenseInt& B);
bool dense_eq(const DenseInt& A, const DenseInt& B);
Int dense_det(DenseInt A);  // for unimodularity checks in tests

// Rank over the fraction field (Gaussian elimination; exact).
int field_rank(const Ring& R, const SparseMat& M);

struct HomologyResult {
  Ring ring;
  std::vector<int> betti;                 // free rank per degree
  std::vector<std::vector<Int>> torsion;  // per degree, empty over fields
  bool reduced = false;
};

// Homology of C over its ring: Z via Smith normal form (free ranks +
// torsion), fields via rank counting. `reduced` folds the augmentation in
// as a boundary to degree -1.
HomologyResult homology(const ChainComplex& C, bool reduced = false);

bool is_acyclic(const ChainComplex& C);  // reduced homology vanishes

// Basis of H_q over the fraction field with enough data to express cycles.
struct HomologyBasis {
  Ring field;  // fraction field of the complex ring
  // per degree: representative cycles, as columns
  std::vector<std::vector<Chain>> reps;
  // internals for coordinates_of
  struct DegreeData;
  std::vector<DenseRat> solve_mat;   // [boundary-basis | reps] per degree
  std::vector<std::vector<int>> solve_cols;  // originating column ids
  std::vector<int> n_bnd;            // number of boundary-basis columns
};
HomologyBasis homology_basis(const ChainComplex& C);

// Coordinates of a cycle's class in the chosen basis. Throws CheckError if
// the input is not a cycle of the complex.
std::vector<Rat> homology_class_coordinates(const ChainComplex& C,
                                            const HomologyBasis& B,
                                            const Chain& cycle);

// Square matrices of the induced endomorphism on homology over the fraction
// field (free part for Z complexes).
struct InducedHomologyMap {
  Ring field;
  std::vector<DenseRat> mat;  // per degree
};
InducedHomologyMap induced_on_homology(const ChainMorphism& f);

// Alternating sum of traces. Chain level: sum_q (-1)^q tr(f_q).
Rat lefschetz_number(const ChainMorphism& endo);
Rat lefschetz_number(const InducedHomologyMap& m);

// Solves d x = b inside the complex, x of degree `deg`, b = boundary of the
// sought chain (degree deg-1, or the augmentation target for deg == 0).
// Works over Z (Smith-backed) and fields. Returns nullopt when inconsistent.
// Cached factorizations keyed by degree live in the solver object.
struct BoundarySolver {
  explicit BoundarySolver(const ChainComplex& C);
  const ChainComplex* C;
  std::optional<Chain> solve(const Chain& target_boundary, int deg) const;

 private:
  struct Fact;
  mutable std::vector<std::shared_ptr<Fact>> fact_;
};

}  // namespace chainfix
