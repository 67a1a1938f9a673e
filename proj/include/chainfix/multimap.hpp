#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chainfix/chain.hpp"
#include "chainfix/simplicial.hpp"

namespace chainfix {

// Sorted, face-closed list of cells of one complex.
using CellSet = std::vector<std::pair<int, int>>;

// Multivalued map on a finite complex. Every domain cell carries a nonempty
// closed subcomplex of the target as its value; points interior to a cell
// share the cell's value. A map may instead be generated by a family of
// single-valued simplicial selections, in which case the stored values are
// the closed envelopes of the selection images. Rational coefficients only.
struct MultiMap {
  GeomComplex X, Y;
  std::vector<std::vector<CellSet>> values;  // [q][id], closed and nonempty
  std::vector<std::vector<int>> selections;  // optional generating family
};

MultiMap multimap_from_cells(const GeomComplex& X, const GeomComplex& Y,
                             std::vector<std::vector<CellSet>> values);
MultiMap multimap_from_selections(const GeomComplex& X, const GeomComplex& Y,
                                  std::vector<std::vector<int>> selections);

struct ContinuityReport {
  bool ok = true;
  std::string witness;  // violating face pair when not ok
};

// Upper semicontinuity of the cell-constant semantics: values may only
// shrink from a face to a cell around it. Selection families are unions of
// single-valued simplicial maps and pass outright.
ContinuityReport is_usc(const MultiMap& F);

// Continuity for the Vietoris topology on closed values: cell-constant
// values must agree across every face pair, selections pass outright.
ContinuityReport is_vietoris_continuous(const MultiMap& F);

// Closed union of the values met along the closed cell (q, id).
CellSet value_envelope(const MultiMap& F, int q, int id);

// Exact weighted-l1 distance between the closed cell (q, id) of A and the
// realization of the set in Y, by one small linear program per target cell.
Rat set_distance(const GeomComplex& A, int q, int id, const GeomComplex& Y,
                 const CellSet& set);

// Cells of Y within distance eps of the set, closed under faces.
CellSet metric_fattening(const GeomComplex& Y, const CellSet& set,
                         const Rat& eps);

// Scale-indexed approximation certificate: phi carries every cell of the
// level_V subdivision of X into the eps-fattened value envelope of its
// level_U host cell, the open-star covers of the two levels standing in as
// the cover pair. rebind() restores the endpoint pointers after a move.
struct ApproximationCertificate {
  MultiMap F;
  int level_U = 0;
  int level_V = 1;
  Rat eps;
  GeomComplex fineX;  // level_V subdivision of F.X
  ChainComplex CV, CY;
  ChainMorphism phi;  // CV -> CY
  std::vector<std::vector<std::pair<int, int>>> host;  // fine cell -> level_U
  void rebind() {
    phi.src = &CV;
    phi.dst = &CY;
  }
};

// Builds phi by acyclic-carrier recursion. Cell-valued maps take the
// acyclic-values route and are rejected when a fattened value envelope has
// nonvanishing reduced homology; selection families average one point per
// value component in degree zero. Passing selection >= 0 follows that
// single selection instead of the average.
ApproximationCertificate approximate(const MultiMap& F, int level_U,
                                     int level_V, const Rat& eps,
                                     int selection = -1,
                                     bool alt_pick = false);

struct ApproximationAudit {
  bool ok = true;
  std::vector<std::string> notes;
};

// Re-derives every carrier inclusion exactly and rechecks that phi is an
// augmentation-preserving chain map.
ApproximationAudit verify_approximation(const ApproximationCertificate& cert);

// Affine mixture q a + (1 - q) b of two certificates at the same scale.
ApproximationCertificate mix_certificates(const ApproximationCertificate& a,
                                          const ApproximationCertificate& b,
                                          const Rat& q);

// Chain-level trace of phi against the subdivision transfer; self-maps only.
Rat lefschetz_of_certificate(const ApproximationCertificate& cert);

struct DichotomyScale {
  int level_U = 0;
  int level_V = 1;
  Rat eps;
};

// Either all sampled certificates share one trace (a sampled stability
// certificate, not a proof over all finer scales) or two certificates at a
// common scale disagree and the affine mixing law realizes every rational
// in between.
struct LefschetzDichotomy {
  bool determinate = false;
  Rat value;                 // shared trace when determinate
  std::vector<Rat> samples;  // one per certificate, scale-major
  Rat witness_a, witness_b;  // distinct traces when indeterminate
  std::vector<std::string> notes;
};

LefschetzDichotomy lefschetz_of_multimap(
    const MultiMap& F, const std::vector<DichotomyScale>& schedule);

struct FixSearchResult {
  enum class Kind { Located, Refuted, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::pair<int, int> cell{-1, -1};        // cell meeting its value
  std::pair<int, int> value_cell{-1, -1};  // value cell it meets
  Rat gap;    // smallest cell-to-value distance at the scale
  Rat trace;  // trace of the audited certificate when refuted
  std::vector<std::string> notes;
};

// Locates a cell whose closed value envelope meets it, or certifies a gap
// above three times eps, which forces every certificate at the scale to be
// fixed-point free with vanishing trace; inconclusive otherwise.
FixSearchResult fixed_point_certificate(const MultiMap& F,
                                        const DichotomyScale& scale);

}  // namespace chainfix
