#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainfix/chain.hpp"
#include "chainfix/metric.hpp"

namespace chainfix {

// Geometric simplicial complex: exact rational vertex coordinates in [0,1]^d,
// cells stored per degree as ascending vertex tuples in lexicographic order.
struct GeomComplex {
  int ambient = 0;
  std::vector<std::vector<Rat>> vertices;
  std::vector<std::vector<std::vector<int>>> cells;
  std::map<std::vector<int>, int> id_of;  // tuple -> index within its degree

  int top_degree() const { return static_cast<int>(cells.size()) - 1; }
  int cell_count(int q) const {
    return (q >= 0 && q <= top_degree()) ? static_cast<int>(cells[q].size()) : 0;
  }
  const std::vector<int>& cell(int q, int id) const { return cells[q][id]; }
  std::optional<int> find_cell(const std::vector<int>& verts) const;
  std::string cell_label(int q, int id) const;
};

// Builds the downward closure of the given top simplices.
GeomComplex make_complex(int ambient, std::vector<std::vector<Rat>> vertices,
                         const std::vector<std::vector<int>>& top_simplices);

enum class EmbeddingCheck { None, AffineIndependence, Full };
VerifyReport validate_complex(const GeomComplex& K, EmbeddingCheck level);

ChainComplex chain_complex_of(const GeomComplex& K, const Ring& R);

std::vector<Rat> barycenter_of(const GeomComplex& K, int q, int id);

// Barycentric coordinates of p in cell (q,id) when p lies in its affine hull.
std::optional<std::vector<Rat>> barycentric_coords(const GeomComplex& K, int q,
                                                   int id,
                                                   const std::vector<Rat>& p);

// The unique cell whose relative interior contains p, by linear scan.
std::optional<std::pair<int, int>> locate_open_cell(const GeomComplex& K,
                                                    const std::vector<Rat>& p);

struct BarySubdivision {
  GeomComplex fine;
  std::map<std::pair<int, int>, int> bary_vertex;  // coarse cell -> fine vertex
  std::vector<std::pair<int, int>> vertex_cell;    // fine vertex -> coarse cell
  // per fine degree, per fine cell: the coarse carrier (top element of the flag)
  std::vector<std::vector<std::pair<int, int>>> carrier;
};
BarySubdivision barycentric_subdivision(const GeomComplex& K);

// Chain-level subdivision Sd(s) = b_s . Sd(boundary s); augmentation-preserving.
ChainMorphism subdivision_map(const ChainComplex& coarse,
                              const ChainComplex& fine, const GeomComplex& K,
                              const BarySubdivision& S);

// Tr s: the fine simplices [b_t0,...,b_tq] with s <= t0 < ... < tq.
// A cone with apex b_s, so acyclic. Returned as fine cell ids per degree.
std::vector<std::vector<int>> trail_cells(const GeomComplex& K,
                                          const BarySubdivision& S, int q,
                                          int id);

std::vector<std::pair<int, int>> cells_containing_vertex(const GeomComplex& K,
                                                         int v);
// Open stars St(v), St(w) intersect iff some cell has both as vertices.
bool open_stars_meet(const GeomComplex& K, int v, int w);
bool point_in_open_star(const GeomComplex& K, int v, const std::vector<Rat>& p);

// Closed support of a chain: cells with nonzero coefficient plus all faces.
std::vector<std::pair<int, int>> chain_support_closure(const GeomComplex& K,
                                                       const Chain& c);

// Restriction of a chain complex to a face-closed subset of generators.
struct Restriction {
  ChainComplex complex;
  std::vector<std::vector<int>> global_of;  // per degree: local id -> global id
  std::vector<std::map<int, int>> local_of;
};
Restriction restrict_chain(const ChainComplex& C,
                           const std::vector<std::vector<int>>& keep);

}  // namespace chainfix
