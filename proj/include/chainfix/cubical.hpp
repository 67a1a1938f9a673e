#pragma once

#include <map>
#include <string>
#include <vector>

#include "chainfix/chain.hpp"
#include "chainfix/metric.hpp"

namespace chainfix {

// One axis of a dyadic grid cell at resolution 2^-k: the interval
// [j 2^-k, (j+1) 2^-k] or the degenerate point j 2^-k.
struct GridAxis {
  long j = 0;
  bool interval = false;
  auto operator<=>(const GridAxis&) const = default;
};
using GridCell = std::vector<GridAxis>;

struct CubicalComplex {
  int ambient = 0;  // number of axes kept
  int k = 1;        // resolution exponent
  std::vector<std::vector<GridCell>> cells;  // per dimension
  std::map<GridCell, std::pair<int, int>> id_of;

  int top_degree() const { return static_cast<int>(cells.size()) - 1; }
  int cell_count(int q) const {
    return (q >= 0 && q <= top_degree()) ? static_cast<int>(cells[q].size()) : 0;
  }
  std::string cell_label(int q, int id) const;
};

int grid_cell_dim(const GridCell& c);
bool grid_cell_face(const GridCell& a, const GridCell& b);  // a face of b
std::vector<GridCell> grid_cell_facets(const GridCell& c);

// The open grid cell of the first m coordinates of p: a coordinate sitting on
// a grid line degenerates its axis.
GridCell open_cell_of_point(const std::vector<Rat>& p, int m, int k);

// Cells of the m-dimensional grid whose open cell meets the projected sample,
// plus all faces.
CubicalComplex grid_subcomplex_from_sample(const std::vector<std::vector<Rat>>& X,
                                           int m, int k);

ChainComplex chain_complex_of(const CubicalComplex& C, const Ring& R);

std::vector<std::pair<Rat, Rat>> cell_box(const GridCell& c, int k);
std::vector<Rat> cell_barycenter(const GridCell& c, int k);
std::vector<std::vector<Rat>> cell_corners(const GridCell& c, int k);
Rat cell_diam_l1w(const GridCell& c, int k);
// diameter bound of the projection preimage within [0,1]^d
Rat preimage_diam_bound(const GridCell& c, int k, int d);

std::vector<std::pair<int, int>> cubical_support_closure(
    const CubicalComplex& C, const Chain& c);

}  // namespace chainfix
