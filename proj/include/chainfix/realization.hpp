#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainfix/affine.hpp"
#include "chainfix/cover.hpp"
#include "chainfix/cubical.hpp"
#include "chainfix/homology.hpp"
#include "chainfix/simplicial.hpp"
#include "chainfix/special_cw.hpp"

namespace chainfix {

// A convex body in [0,1]^d given by generators together with a finite sample
// of points used for all cell-membership and covering decisions.
struct ConvexBody {
  int d = 0;
  std::vector<std::vector<Rat>> generators;
  std::vector<std::vector<Rat>> sample;
};
VerifyReport validate_body(const ConvexBody& X);

// eps1 = eps/16, delta = eps1/8, n minimal with 2^-n < eps1/8, k minimal
// above n+1 with 2^(n+1-k) < delta.  trunc = max(k, d) fixes the coordinate
// horizon: distances between constructed points are exact, and point-distance
// certificates add the 2^-trunc tail margin on their left-hand sides.
struct RealizationParams {
  Rat eps, eps1, delta;
  int n = 0, k = 0;
  int trunc = 0;
};
RealizationParams choose_parameters(const ConvexBody& X, const Rat& eps);

// Averaging certificate: for tuples of sampled body points inside B(x, r) the
// barycentric combinations stay within pairwise distance 2r, checked exactly
// on a deterministic family of weight vectors.
bool convexity_certificate(const ConvexBody& X, const Rat& r, const Rat& bound,
                           int arity);

// N and M: subcomplexes of the dyadic grids on the first min(n,d) and
// min(k,d) coordinates, both at resolution 2^-k, spanned by the open cells of
// the sample plus faces.  pi drops the trailing axes.
struct GridPair {
  CubicalComplex N, M;
  int mN = 0, mM = 0;
};
GridPair build_N_M_pi(const ConvexBody& X, const RealizationParams& par);
GridCell project_cell(const GridCell& tau, int mN);

// Fibre pieces: for a cell sigma of N, L(sigma) is the complex of suffix
// cells lambda with (sigma, lambda) in M.  Nodes are pairs (sigma, component
// of L(sigma)); j' <= j iff sigma' <= sigma and the component of j lands
// inside the component of j' when restricted to L(sigma').
struct ComponentPoset {
  struct Node {
    int q = 0;        // dim sigma
    int sigma = 0;    // cell id within N.cells[q]
    int comp = 0;     // component index within L(sigma)
    std::vector<GridCell> suffixes;  // cells of the component, sorted
  };
  std::vector<Node> nodes;
  std::vector<std::vector<int>> below;  // per j: sorted list of j' <= j
  std::map<std::pair<std::pair<int, int>, int>, int> id_of;
  // per N cell: suffix cell -> component index of L(sigma)
  std::vector<std::vector<std::map<GridCell, int>>> comp_of;

  int size() const { return static_cast<int>(nodes.size()); }
  int dim_of(int j) const { return nodes[j].q; }
  bool leq(int a, int b) const;
  bool comparable(int a, int b) const { return leq(a, b) || leq(b, a); }
};
ComponentPoset build_component_poset(const GridPair& G);
// membership uniqueness, reflexivity, antisymmetry, transitivity
VerifyReport audit_poset(const ComponentPoset& P, long cap = 2000000);

// K: the order complex of the poset, with vertex j placed at the unit vector
// e_j.  q_image records the cell of N under j -> b_{sigma_j}; it is injective
// on every simplex.
struct KComplexData {
  GeomComplex K;
  std::vector<std::pair<int, int>> q_image;  // per j: (q, id) in N
};
KComplexData build_K(const GridPair& G, const ComponentPoset& P);

// One open member G_j per node, built stratum by stratum as a union of balls
// of radius rho_r around the sample points of p_k^-1(M_j) not yet covered.
// Incomparable members stay disjoint (so the nerve embeds in K), members of a
// common stratum are disjoint, and diam G_j < 2 * 2^-n.
struct CoverG {
  BallCover G;
  std::vector<std::vector<int>> retained;  // per j: sample indices
  std::vector<Rat> rho;                    // per stratum dimension
  std::vector<Rat> diam_bound;             // per j (0 for empty members)
  int retries = 0;
};
CoverG build_covering_G(const ConvexBody& X, const GridPair& G,
                        const ComponentPoset& P, const RealizationParams& par);

// V_s = intersection of the G_j over the vertices of s, one member per
// simplex of K; empties are kept but flagged.
struct CoverV {
  std::vector<std::vector<char>> nonempty;  // per K degree, per cell
  bool contains(const CoverG& G, const GeomComplex& K, int q, int id,
                const std::vector<Rat>& p) const;
};
CoverV build_covering_V(const CoverG& G, const KComplexData& KD);
// meets imply a common simplex; each nonempty member fits in an eps-ball
VerifyReport audit_V(const ConvexBody& X, const CoverG& G,
                     const KComplexData& KD, const CoverV& V,
                     const RealizationParams& par);

struct Realization;  // below

// Carrier-guided projection of affine chains onto C(K'): a tuple is carried
// by the simplex of all j whose member holds it inside one ball, and is sent
// to the cone over its boundary image with apex at that simplex's barycenter.
// Tuples carried nowhere raise InputError naming the offending simplex.
std::map<int, Chain> psi_apply(Realization& B, const AffChain& a);
std::vector<int> psi_carrier(const Realization& B, const std::vector<int>& tup);

// The full bundle produced by build_realization.
struct Realization {
  ConvexBody body;
  Ring ring;
  RealizationParams par;
  GridPair grids;
  ComponentPoset poset;
  KComplexData KD;
  ChainComplex CK;        // chains of K
  BarySubdivision KS;     // K' = KS.fine
  ChainComplex CKf;       // chains of K'
  CoverG G;
  CoverV V;

  // special CW model of K: one cell per node, boundary pulled back from N
  CellSystem tildeK{Ring::Z()};
  ChainComplex CtildeK;
  ChainMorphism nu;            // C(K') -> C(tildeK), smallest-cell carriers
  std::vector<std::vector<int>> j_of_fine;  // per K' degree, per cell: j(s')

  // P: the 1-skeleton fibre model Q, apexes v_j, cones over C_j and joins
  // along comparable pairs; tau: C(tildeK) -> C(P) carried by Pi_j.
  CellSystem P{Ring::Z()};
  ChainComplex CP;
  ChainMorphism tau;
  std::vector<std::vector<std::vector<int>>> Pi;  // per j, per degree: cell ids
  std::vector<std::vector<std::vector<int>>> Cj;  // per j, per degree: cell ids

  // mu: explicit affine cones per P-cell over the barycenter/apex points;
  // f maps those points to sample points x(tau).
  PointStore Ppts{1};
  std::vector<std::vector<AffChain>> mu;  // per P degree, per cell
  std::vector<int> f_img;                 // P point id -> sample index
  std::vector<std::vector<int>> x_of;     // per M degree, per cell: sample idx
  std::vector<std::pair<int, int>> tau_of_j;  // per j: chosen cell of C_j

  // zeta = f o mu o tau o nu on the generators of C(K'), as affine chains on
  // body points, plus the diameter ledger of the f-images of the Pi_j.
  PointStore Xpts{1};
  std::vector<std::vector<AffChain>> zeta;  // per K' degree, per cell
  std::vector<std::vector<int>> Wset;       // per j: sample indices hit
  std::vector<Rat> diamW;                   // per j: exact diameter

  std::map<std::vector<int>, std::pair<std::vector<int>, std::map<int, Chain>>>
      psi_memo;  // tuple -> (carrier, image per degree)
};

Realization build_realization(const ConvexBody& X, const Rat& eps,
                              const Ring& R);

// Structural audits of the bundle: morphism identities, carrier contracts,
// the diameter certificates, and the exact inequality chains behind them.
VerifyReport audit_realization(Realization& B);

// The four admissibility conditions for the pair (psi, zeta) against the
// canonical eps-ball cover of the sample, with exhibited witnesses.
struct Thm2Report {
  bool carriers = false;      // (a) pieces of K' carry V_s with a ball witness
  bool cells = false;         // (b) zeta of faces of s' inside one eps-ball
  bool composite = false;     // (c) zeta(psi(t)) near t, exact bound chain
  bool finite_piece = false;  // (d) compact sets land in finite subcomplexes
  std::vector<std::string> notes;
  bool all() const { return carriers && cells && composite && finite_piece; }
};
Thm2Report verify_theorem2(Realization& B);

// Chain-level retraction checks for an operator mu on small chains of U:
// identity on the small chains of A, and per neighborhood (x, V) a radius W
// whose small chains land in S(V).
struct RetractionReport {
  bool identity_ok = false;
  bool neighborhoods_ok = false;
  std::vector<Rat> chosen_W;  // per neighborhood, 0 when none found
  std::vector<std::string> notes;
  bool all() const { return identity_ok && neighborhoods_ok; }
};
RetractionReport check_algebraic_retraction(
    const Ring& R, const GeomComplex& U,
    const std::vector<std::pair<int, int>>& Acells, const BallCover& cover,
    const std::function<AffChain(const AffChain&)>& op, PointStore& pts,
    const std::vector<std::pair<std::vector<Rat>, Rat>>& neighborhoods);

}  // namespace chainfix
