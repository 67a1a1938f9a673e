#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "chainfix/chain.hpp"
#include "chainfix/cover.hpp"
#include "chainfix/simplicial.hpp"

namespace chainfix {

// Interned rational points of a fixed ambient dimension, so affine simplices
// can be carried around as id tuples and compared exactly.
struct PointStore {
  int ambient = 0;
  std::vector<std::vector<Rat>> pts;
  std::map<std::vector<Rat>, int> ids;

  explicit PointStore(int dim) : ambient(dim) {}
  int intern(const std::vector<Rat>& p);
  const std::vector<Rat>& point(int id) const { return pts.at(id); }
  int size() const { return static_cast<int>(pts.size()); }
};

// Affine singular chain: ordered point-id tuples with coefficients. A tuple
// of length q+1 is a degree-q simplex; repeated vertices (degenerate
// simplices) are legitimate generators. One chain may mix degrees.
struct AffChain {
  std::map<std::vector<int>, Rat> t;
  bool zero() const { return t.empty(); }
};

void aff_add_term(const Ring& R, AffChain& a, const std::vector<int>& tup, const Rat& v);
AffChain aff_add(const Ring& R, const AffChain& a, const AffChain& b);
AffChain aff_sub(const Ring& R, const AffChain& a, const AffChain& b);
AffChain aff_scale(const Ring& R, const Rat& s, const AffChain& a);
bool aff_eq(const AffChain& a, const AffChain& b);

// Alternating sum of vertex deletions; tuples of length 1 have no boundary.
AffChain aff_boundary(const Ring& R, const AffChain& a);
// Sum of the degree-0 coefficients.
Rat aff_augment(const Ring& R, const AffChain& a);
// Apex-first cone: d(apex.c) = c - apex.dc in degree >= 1.
AffChain aff_cone(const Ring& R, int apex, const AffChain& a);

// Chain-level barycentric subdivision Sd(s) = b_s . Sd(ds), the identity in
// degree 0; b_s is the vertex average, interned on demand.
AffChain aff_sd(const Ring& R, PointStore& P, const AffChain& a);
// h with dh + hd = Sd - id, h = 0 in degree 0.
AffChain aff_sd_homotopy(const Ring& R, PointStore& P, const AffChain& a);

// Smallness predicates must be hereditary: every sub-tuple of a small tuple
// is small. Containment in one ball of one cover member is.
using TuplePred = std::function<bool(const std::vector<int>&)>;
TuplePred cover_small_pred(const PointStore& P, const BallCover& U);

struct CoverSubdivision {
  AffChain image;     // all tuples small
  AffChain homotopy;  // dh + hd = image - input
  int rounds = 0;
};

// Subdivision relative to a cover: each simplex is coned at its barycenter,
// recursing into the boundary but stopping at small faces, and the pass is
// iterated to a fixed point. The identity on small chains, carriers only
// shrink. Rejects input whose vertices the cover misses.
CoverSubdivision cover_subdivide(const Ring& R, PointStore& P, const AffChain& a,
                                 const TuplePred& small, int max_rounds = 64);

// Zeroes every generator the predicate hits, keeps the rest. Not a chain map.
AffChain aff_kill(const Ring& R, const AffChain& a, const TuplePred& hits);

// Exact test conv(tuple) meets union of closed cells, one LP per cell.
bool conv_meets_cells(const PointStore& P, const std::vector<int>& tup,
                      const GeomComplex& K,
                      const std::vector<std::pair<int, int>>& cells);

// Piecewise affine evaluation of a simplicial vertex map at a point of |K|:
// locate the open cell, take barycentric coordinates, push them through the
// vertex images. Throws off the polyhedron.
std::vector<Rat> simplicial_eval(const GeomComplex& K,
                                 const std::vector<std::vector<Rat>>& vertex_images,
                                 const std::vector<Rat>& p);

// Lowest-degree (then lowest-id) closed cell containing every point of the
// tuple, if one exists.
std::optional<std::pair<int, int>> common_cell(const GeomComplex& K,
                                               const PointStore& P,
                                               const std::vector<int>& tup);

using PointMap = std::function<std::vector<Rat>(const std::vector<Rat>&)>;

// Vertexwise image of each tuple. A chain map whenever f is affine on the
// convex hull of every tuple of a (so subdivide first).
AffChain aff_pushforward(const Ring& R, const PointStore& src, PointStore& dst,
                         const AffChain& a, const PointMap& f);

// Degree-q chain of K rewritten on interned vertex tuples. Commutes with
// the boundary since cell boundaries use the same alternating-face signs.
AffChain affine_of_cells(const Ring& R, PointStore& P, const GeomComplex& K,
                         const Chain& x, int q);

}  // namespace chainfix
