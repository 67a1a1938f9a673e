#include "chainfix/cubical.hpp"

#include <algorithm>
#include <set>

namespace chainfix {

std::string CubicalComplex::cell_label(int q, int id) const {
  const GridCell& c = cells[q][id];
  std::string s = "[";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) s += " ";
    s += std::to_string(c[i].j);
    if (c[i].interval) s += "+";
  }
  return s + "]";
}

int grid_cell_dim(const GridCell& c) {
  int d = 0;
  for (const GridAxis& a : c) d += a.interval ? 1 : 0;
  return d;
}

bool grid_cell_face(const GridCell& a, const GridCell& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (b[i].interval) {
      if (a[i].interval ? (a[i].j != b[i].j)
                        : (a[i].j != b[i].j && a[i].j != b[i].j + 1))
        return false;
    } else if (a[i].interval || a[i].j != b[i].j) {
      return false;
    }
  }
  return true;
}

std::vector<GridCell> grid_cell_facets(const GridCell& c) {
  std::vector<GridCell> out;
  for (size_t i = 0; i < c.size(); ++i) {
    if (!c[i].interval) continue;
    GridCell lo = c, hi = c;
    lo[i] = {c[i].j, false};
    hi[i] = {c[i].j + 1, false};
    out.push_back(lo);
    out.push_back(hi);
  }
  return out;
}

GridCell open_cell_of_point(const std::vector<Rat>& p, int m, int k) {
  CFX_INPUT(static_cast<int>(p.size()) >= m, "point has fewer coordinates");
  GridCell c(m);
  Rat scale = pow2(k);
  for (int i = 0; i < m; ++i) {
    Rat v = p[i] * scale;
    CFX_INPUT(v >= 0 && v <= scale, "coordinate outside [0,1]");
    if (is_integer(v)) {
      c[i] = {static_cast<long>(mpz_get_si(v.get_num_mpz_t())), false};
    } else {
      Int fl = v.get_num() / v.get_den();  // floor for nonnegative v
      c[i] = {mpz_get_si(fl.get_mpz_t()), true};
    }
  }
  return c;
}

CubicalComplex grid_subcomplex_from_sample(const std::vector<std::vector<Rat>>& X,
                                           int m, int k) {
  CFX_INPUT(k >= 1, "resolution exponent must be at least 1");
  CFX_INPUT(m >= 1, "projection dimension must be at least 1");
  std::set<GridCell> all;
  for (const auto& p : X) {
    GridCell c = open_cell_of_point(p, m, k);
    // downward closure
    std::vector<GridCell> stack = {c};
    while (!stack.empty()) {
      GridCell t = stack.back();
      stack.pop_back();
      if (!all.insert(t).second) continue;
      for (GridCell& f : grid_cell_facets(t)) stack.push_back(std::move(f));
    }
  }
  CubicalComplex C;
  C.ambient = m;
  C.k = k;
  int top = 0;
  for (const GridCell& c : all) top = std::max(top, grid_cell_dim(c));
  C.cells.assign(all.empty() ? 0 : top + 1, {});
  for (const GridCell& c : all) C.cells[grid_cell_dim(c)].push_back(c);
  for (auto& layer : C.cells) std::sort(layer.begin(), layer.end());
  for (int q = 0; q <= C.top_degree(); ++q)
    for (int i = 0; i < C.cell_count(q); ++i) C.id_of[C.cells[q][i]] = {q, i};
  return C;
}

ChainComplex chain_complex_of(const CubicalComplex& K, const Ring& R) {
  ChainComplex C;
  C.ring = R;
  int top = K.top_degree();
  C.dims.assign(std::max(top + 1, 0), 0);
  C.names.assign(std::max(top + 1, 0), {});
  C.boundary.assign(std::max(top + 1, 0), SparseMat());
  for (int q = 0; q <= top; ++q) {
    C.dims[q] = K.cell_count(q);
    for (int i = 0; i < K.cell_count(q); ++i)
      C.names[q].push_back(K.cell_label(q, i));
  }
  for (int q = 1; q <= top; ++q) {
    SparseMat d(C.dims[q - 1], C.dims[q]);
    for (int i = 0; i < K.cell_count(q); ++i) {
      const GridCell& c = K.cells[q][i];
      int s = 0;  // index among interval axes
      for (size_t ax = 0; ax < c.size(); ++ax) {
        if (!c[ax].interval) continue;
        GridCell lo = c, hi = c;
        lo[ax] = {c[ax].j, false};
        hi[ax] = {c[ax].j + 1, false};
        Rat sign = (s % 2 == 0) ? Rat(1) : Rat(-1);
        d.add_to(R, K.id_of.at(hi).second, i, sign);
        d.add_to(R, K.id_of.at(lo).second, i, -sign);
        ++s;
      }
    }
    C.boundary[q] = d;
  }
  if (top >= 0) C.augmentation.assign(C.dims[0], Rat(1));
  return C;
}

std::vector<std::pair<Rat, Rat>> cell_box(const GridCell& c, int k) {
  std::vector<std::pair<Rat, Rat>> out;
  Rat w = pow2(-k);
  for (const GridAxis& a : c) {
    Rat lo = Rat(a.j) * w;
    Rat hi = a.interval ? Rat(a.j + 1) * w : lo;
    out.push_back({lo, hi});
  }
  return out;
}

std::vector<Rat> cell_barycenter(const GridCell& c, int k) {
  std::vector<Rat> out;
  for (auto& [lo, hi] : cell_box(c, k)) {
    Rat t = (lo + hi) / 2;
    out.push_back(t);
  }
  return out;
}

std::vector<std::vector<Rat>> cell_corners(const GridCell& c, int k) {
  std::vector<std::vector<Rat>> out = {{}};
  for (auto& [lo, hi] : cell_box(c, k)) {
    std::vector<std::vector<Rat>> next;
    for (const auto& prefix : out) {
      std::vector<Rat> a = prefix;
      a.push_back(lo);
      next.push_back(a);
      if (hi != lo) {
        std::vector<Rat> b = prefix;
        b.push_back(hi);
        next.push_back(b);
      }
    }
    out = std::move(next);
  }
  return out;
}

Rat cell_diam_l1w(const GridCell& c, int k) {
  Rat acc(0);
  int i = 0;
  for (auto& [lo, hi] : cell_box(c, k)) {
    Rat t = acc + coord_weight(i) * (hi - lo);
    acc = t;
    ++i;
  }
  return acc;
}

Rat preimage_diam_bound(const GridCell& c, int k, int d) {
  int m = static_cast<int>(c.size());
  CFX_INPUT(d >= m, "ambient dimension smaller than the projection");
  // box diameter plus the unconstrained coordinates m..d-1
  Rat acc = cell_diam_l1w(c, k);
  Rat t = acc + (pow2(-m) - pow2(-d));
  return t;
}

std::vector<std::pair<int, int>> cubical_support_closure(
    const CubicalComplex& C, const Chain& c) {
  std::set<GridCell> cells;
  for (const auto& [id, v] : c.c) {
    if (v == 0) continue;
    std::vector<GridCell> stack = {C.cells[c.degree][id]};
    while (!stack.empty()) {
      GridCell t = stack.back();
      stack.pop_back();
      if (!cells.insert(t).second) continue;
      for (GridCell& f : grid_cell_facets(t)) stack.push_back(std::move(f));
    }
  }
  std::vector<std::pair<int, int>> out;
  for (const GridCell& g : cells) out.push_back(C.id_of.at(g));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace chainfix
