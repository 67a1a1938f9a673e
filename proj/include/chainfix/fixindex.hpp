#pragma once

#include "chainfix/chain.hpp"
#include "chainfix/homology.hpp"
#include "chainfix/simplicial.hpp"

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chainfix {

// ---------------------------------------------------------------------------
// subdivision tower
//
// level[0] = X, level[j+1] = barycentric subdivision of level[j], with chain
// complexes and the two transfer maps per step: sub (subdivision, carriers
// shrink) and proj (vertex projection, a simplicial approximation of the
// identity).  proj o sub is the identity on the nose; sub o proj is chain
// homotopic to the identity one level up.

struct SubdivisionTower {
  Ring ring;
  std::deque<GeomComplex> level;
  std::deque<BarySubdivision> S;      // S[j]: level[j] -> level[j+1]
  std::deque<ChainComplex> C;         // C[j] = chains of level[j]; deque keeps
                                      // morphism endpoints stable under growth
  std::vector<ChainMorphism> sub;     // C[j] -> C[j+1]
  std::vector<ChainMorphism> projl;   // C[j+1] -> C[j], last-vertex
  std::vector<ChainMorphism> projf;   // C[j+1] -> C[j], first-vertex

  int depth() const { return (int)S.size(); }
};

SubdivisionTower build_tower(const GeomComplex& X, const Ring& R, int depth);
void extend_tower(SubdivisionTower& T, int depth);

// chain morphism of a simplicial vertex map A -> B (degenerate images drop)
ChainMorphism chain_map_of(const Ring& R, const GeomComplex& A,
                           const ChainComplex& CA, const GeomComplex& B,
                           const ChainComplex& CB,
                           const std::vector<int>& vmap);

// vertex map of level[j+1] -> level[j] picking the last (resp. first)
// vertex of the carrier cell of each fine vertex
std::vector<int> last_vertex_map(const GeomComplex& coarse,
                                 const BarySubdivision& S);
std::vector<int> first_vertex_map(const GeomComplex& coarse,
                                  const BarySubdivision& S);

// one subdivision step packaged with its certificates: back o sd == id is
// checked exactly, sd o back ~ id is exhibited as a solved homotopy, and
// image carriers never grow
struct SubdivisionStep {
  ChainMorphism sd;     // C[j] -> C[j+1]
  ChainMorphism back;   // C[j+1] -> C[j]
  ChainHomotopy h;      // on C[j+1]: boundary(h) + h(boundary) = sd o back - id
  bool left_identity = false;
  bool carriers_shrink = false;
};
SubdivisionStep subdivision_step(const SubdivisionTower& T, int j);

// ---------------------------------------------------------------------------
// self-maps given by vertex images, possibly only simplicial after
// subdividing the source

struct VertexSelfMap {
  int source_rounds = 0;        // simplicial from level[source_rounds] to X
  std::vector<int> image;       // per vertex of level[source_rounds]
};

// induced vertex map one level up: level[a+1] -> level[b+1] from a vertex
// map level[a] -> level[b] (barycenters go to barycenters of image cells)
std::vector<int> lift_vertex_map(const GeomComplex& A,
                                 const BarySubdivision& SA,
                                 const GeomComplex& B,
                                 const BarySubdivision& SB,
                                 const std::vector<int>& f);

// iterate a vertex self-map (source_rounds must be 0)
std::vector<int> iterate_vertex_map(const std::vector<int>& f, int times);

// ---------------------------------------------------------------------------
// open regions as unions of open stars

struct OpenRegion {
  std::vector<std::pair<int, int>> star_cells;
  std::vector<std::vector<char>> in_U;   // per degree, per open cell of X
};

OpenRegion region_of_stars(const GeomComplex& X,
                           const std::vector<std::pair<int, int>>& cells);
OpenRegion whole_region(const GeomComplex& X);

// ---------------------------------------------------------------------------
// fixed-point detection at star resolution
//
// Stars live on level[rounds + source_rounds - 1]; test chains one level
// finer.  A cell is reported when a chain carried in its open star has image
// carrier meeting that star.  The union of the returned closed cells
// contains every fixed point of the piecewise-affine map; under iteration
// the report shrinks onto the true fixed set.

std::vector<std::pair<int, int>> fix_points(const GeomComplex& X,
                                            const Ring& R,
                                            const VertexSelfMap& f,
                                            int rounds);

// graded endomorphism killing generators whose closed carrier meets the
// closed cell set A; not a chain map
std::vector<SparseMat> theta_A(const Ring& R, const GeomComplex& X,
                               const ChainComplex& C,
                               const std::vector<std::pair<int, int>>& Acells);

// ---------------------------------------------------------------------------
// separation data for the index: A covers the complement of U, B covers the
// detected fixed part, both as unions of vertex stars at a tower depth
// chosen by deepening until the separation certificates hold

struct SeparationData {
  int depth = 0;
  int widen = 0;                       // star-steps added around the fixed part
  std::vector<int> A_verts, B_verts;   // vertices of level[depth]
  bool alpha = false;                  // stars of the closures stay apart
  bool beta = false;                   // members near U fit in base stars
  bool gamma = false;                  // chains near non-fixed cells move away
  std::vector<std::string> notes;
};

struct IndexChoices {
  int depth = 2;           // minimum tower depth
  int max_depth = 6;
  int fix_rounds = 1;      // detection resolution
  bool last_vertex = true; // projection flavor
  bool big_B = true;       // when A is empty, let B swallow everything
};

struct IndexResult {
  Rat value{0};
  SeparationData sep;
  std::vector<std::pair<int, int>> fix_cells;  // at detection level
  int fix_level = 0;
  int depth = 0;                               // tower depth used
};

// the fixed-point index of the map over the region: the Lefschetz number of
// proj o map-chain o sub o theta on C(level[1]).  Throws InputError when the
// detected fixed part touches the frontier of U, or no admissible separation
// exists within the depth budget.
IndexResult index_of_map(const GeomComplex& X, const Ring& R,
                         const VertexSelfMap& f, const OpenRegion& U,
                         const IndexChoices& choices = {});

// ---------------------------------------------------------------------------
// products: staircase triangulation, the two comparison maps with the
// tensor complex, and product vertex maps

struct ProductComplex {
  GeomComplex P;
  std::vector<int> vertex1, vertex2;           // per product vertex
  std::map<std::pair<int, int>, int> vertex_of;
};

ProductComplex simplicial_product(const GeomComplex& X1, const GeomComplex& X2);

struct EZData {
  TensorComplex T;        // C(X1) (x) C(X2)
  ChainMorphism aw;       // C(P) -> T, front/back faces
  ChainMorphism shuffle;  // T -> C(P), signed staircases
  void rebind() {
    aw.dst = &T.complex;
    shuffle.src = &T.complex;
  }
};

EZData ez_maps(const Ring& R, const ProductComplex& P, const GeomComplex& X1,
               const ChainComplex& C1, const GeomComplex& X2,
               const ChainComplex& C2, const ChainComplex& CP);

std::vector<int> product_vertex_map(const ProductComplex& P,
                                    const std::vector<int>& f1,
                                    const std::vector<int>& f2);

// ---------------------------------------------------------------------------
// the region-free composite through the tower, for comparing maps that agree
// up to deformation; owns its copy of the level-one complex

struct PipelineMap {
  ChainComplex C1;
  ChainMorphism M;
  void rebind() {
    M.src = &C1;
    M.dst = &C1;
  }
};
PipelineMap pipeline_map(const GeomComplex& X, const Ring& R,
                         const VertexSelfMap& f, int depth = 2);

// degreewise solve of d h + h d = f1 - f0; needs a field or an
// obstruction-free pair over Z
std::optional<ChainHomotopy> solve_chain_homotopy(const ChainMorphism& f0,
                                                  const ChainMorphism& f1);

// ---------------------------------------------------------------------------
// congruence of the index under prime-power iteration, both sides over Z

struct ModPReport {
  int p = 0, k = 0;
  Rat ind_f{0}, ind_fm{0};
  bool hypothesis_ok = false;  // iterated fixed part is carried back into itself
  bool congruent = false;
  bool ok() const { return hypothesis_ok && congruent; }
};

ModPReport mod_p_check(const GeomComplex& X, const VertexSelfMap& f,
                       const OpenRegion& U, int p, int k,
                       const IndexChoices& choices = {});

// ---------------------------------------------------------------------------
// property suite over the built-in battery; each line checks one of the
// seven index laws with both sides computed by independent code paths

std::vector<std::pair<std::string, bool>> index_property_suite(const Ring& R);

}  // namespace chainfix
