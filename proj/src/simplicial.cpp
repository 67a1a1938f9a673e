#include "chainfix/simplicial.hpp"

#include <algorithm>
#include <set>

#include "chainfix/lp.hpp"

namespace chainfix {

Rat l1w_dist(const std::vector<Rat>& x, const std::vector<Rat>& y) {
  size_t d = std::max(x.size(), y.size());
  Rat acc(0);
  for (size_t i = 0; i < d; ++i) {
    Rat xi = i < x.size() ? x[i] : Rat(0);
    Rat yi = i < y.size() ? y[i] : Rat(0);
    Rat diff = xi - yi;
    Rat t = acc + coord_weight(static_cast<int>(i)) * rat_abs(diff);
    acc = t;
  }
  return acc;
}

Rat l1w_diam(const std::vector<std::vector<Rat>>& pts) {
  Rat best(0);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      Rat d = l1w_dist(pts[i], pts[j]);
      if (d > best) best = d;
    }
  return best;
}

std::optional<int> GeomComplex::find_cell(const std::vector<int>& verts) const {
  auto it = id_of.find(verts);
  if (it == id_of.end()) return std::nullopt;
  return it->second;
}

std::string GeomComplex::cell_label(int q, int id) const {
  std::string s = "<";
  const std::vector<int>& t = cells[q][id];
  for (size_t i = 0; i < t.size(); ++i)
    s += (i ? " " : "") + std::to_string(t[i]);
  return s + ">";
}

GeomComplex make_complex(int ambient, std::vector<std::vector<Rat>> vertices,
                         const std::vector<std::vector<int>>& top_simplices) {
  GeomComplex K;
  K.ambient = ambient;
  K.vertices = std::move(vertices);
  int nv = static_cast<int>(K.vertices.size());
  std::set<std::vector<int>> all;
  // downward closure by subset enumeration
  for (const std::vector<int>& s0 : top_simplices) {
    std::vector<int> s = s0;
    std::sort(s.begin(), s.end());
    CFX_INPUT(std::adjacent_find(s.begin(), s.end()) == s.end(),
              "repeated vertex in simplex");
    for (int v : s) CFX_INPUT(v >= 0 && v < nv, "vertex index out of range");
    int n = static_cast<int>(s.size());
    CFX_INPUT(n >= 1 && n <= 30, "simplex arity out of range");
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> f;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) f.push_back(s[i]);
      all.insert(f);
    }
  }
  int top = 0;
  for (const auto& s : all) top = std::max(top, static_cast<int>(s.size()) - 1);
  K.cells.assign(all.empty() ? 0 : top + 1, {});
  for (const auto& s : all) K.cells[s.size() - 1].push_back(s);
  for (auto& layer : K.cells) std::sort(layer.begin(), layer.end());
  for (int q = 0; q <= K.top_degree(); ++q)
    for (int i = 0; i < K.cell_count(q); ++i) K.id_of[K.cells[q][i]] = i;
  return K;
}

namespace {

// rank of a rational matrix by Gaussian elimination
int rat_rank(std::vector<std::vector<Rat>> M) {
  int rows = static_cast<int>(M.size());
  int cols = rows ? static_cast<int>(M[0].size()) : 0;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (M[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[rank], M[piv]);
    for (int r = rank + 1; r < rows; ++r) {
      if (M[r][c] == 0) continue;
      Rat factor = M[r][c] / M[rank][c];
      for (int j = c; j < cols; ++j) {
        Rat t = M[r][j] - factor * M[rank][j];
        M[r][j] = t;
      }
    }
    ++rank;
  }
  return rank;
}

bool affinely_independent(const GeomComplex& K, const std::vector<int>& cell) {
  int q = static_cast<int>(cell.size()) - 1;
  if (q == 0) return true;
  std::vector<std::vector<Rat>> M(q, std::vector<Rat>(K.ambient));
  for (int i = 1; i <= q; ++i)
    for (int j = 0; j < K.ambient; ++j) {
      Rat t = K.vertices[cell[i]][j] - K.vertices[cell[0]][j];
      M[i - 1][j] = t;
    }
  return rat_rank(std::move(M)) == q;
}

// closed cells intersect exactly in the simplex spanned by shared vertices
bool pair_embeds(const GeomComplex& K, const std::vector<int>& a,
                 const std::vector<int>& b) {
  std::vector<int> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  if (std::includes(a.begin(), a.end(), b.begin(), b.end()) ||
      std::includes(b.begin(), b.end(), a.begin(), a.end()))
    return true;
  int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  int d = K.ambient;
  // vars: lambda (na), mu (nb); x eliminated via the two convex combinations
  LinearProgram lp(na + nb);
  for (int j = 0; j < d; ++j) {
    std::vector<Rat> row(na + nb, Rat(0));
    for (int i = 0; i < na; ++i) row[i] = K.vertices[a[i]][j];
    for (int i = 0; i < nb; ++i) {
      Rat t = -K.vertices[b[i]][j];
      row[na + i] = t;
    }
    lp.eq(row, Rat(0));
  }
  std::vector<Rat> ones_a(na + nb, Rat(0)), ones_b(na + nb, Rat(0));
  for (int i = 0; i < na; ++i) ones_a[i] = 1;
  for (int i = 0; i < nb; ++i) ones_b[na + i] = 1;
  lp.eq(ones_a, Rat(1));
  lp.eq(ones_b, Rat(1));
  for (int i = 0; i < na + nb; ++i) {
    std::vector<Rat> row(na + nb, Rat(0));
    row[i] = -1;
    lp.leq(row, Rat(0));
  }
  for (int i = 0; i < na; ++i)
    if (!std::binary_search(common.begin(), common.end(), a[i])) {
      Rat t = lp.c[i] - 1;
      lp.c[i] = t;
    }
  for (int i = 0; i < nb; ++i)
    if (!std::binary_search(common.begin(), common.end(), b[i])) {
      Rat t = lp.c[na + i] - 1;
      lp.c[na + i] = t;
    }
  LPResult r = lp_solve(lp);
  if (r.status == LPStatus::Infeasible) return true;
  CFX_CHECK(r.status == LPStatus::Optimal, "bounded feasible program");
  return r.value == 0;
}

}  // namespace

VerifyReport validate_complex(const GeomComplex& K, EmbeddingCheck level) {
  VerifyReport rep;
  int nv = static_cast<int>(K.vertices.size());
  for (int v = 0; v < nv; ++v) {
    if (static_cast<int>(K.vertices[v].size()) != K.ambient)
      rep.fail("vertex " + std::to_string(v) + ": coordinate count mismatch");
    for (const Rat& c : K.vertices[v])
      if (c < 0 || c > 1)
        rep.fail("vertex " + std::to_string(v) + ": coordinate outside [0,1]");
  }
  for (int q = 0; q <= K.top_degree(); ++q) {
    if (!std::is_sorted(K.cells[q].begin(), K.cells[q].end()))
      rep.fail("degree " + std::to_string(q) + ": cells not in canonical order");
    for (int i = 0; i < K.cell_count(q); ++i) {
      const std::vector<int>& s = K.cells[q][i];
      if (static_cast<int>(s.size()) != q + 1) {
        rep.fail(K.cell_label(q, i) + ": arity does not match degree");
        continue;
      }
      if (!std::is_sorted(s.begin(), s.end()) ||
          std::adjacent_find(s.begin(), s.end()) != s.end())
        rep.fail(K.cell_label(q, i) + ": vertex tuple not strictly ascending");
      for (int v : s)
        if (v < 0 || v >= nv) rep.fail(K.cell_label(q, i) + ": bad vertex id");
      auto it = K.id_of.find(s);
      if (it == K.id_of.end() || it->second != i)
        rep.fail(K.cell_label(q, i) + ": index entry missing or wrong");
      if (q > 0)
        for (size_t drop = 0; drop < s.size(); ++drop) {
          std::vector<int> f = s;
          f.erase(f.begin() + drop);
          if (!K.id_of.count(f))
            rep.fail(K.cell_label(q, i) + ": face " + "missing");
        }
    }
  }
  if (!rep.ok || level == EmbeddingCheck::None) return rep;
  for (int q = 1; q <= K.top_degree(); ++q)
    for (int i = 0; i < K.cell_count(q); ++i)
      if (!affinely_independent(K, K.cells[q][i]))
        rep.fail(K.cell_label(q, i) + ": vertices affinely dependent");
  if (!rep.ok || level == EmbeddingCheck::AffineIndependence) return rep;
  std::vector<std::pair<int, int>> all;
  for (int q = 0; q <= K.top_degree(); ++q)
    for (int i = 0; i < K.cell_count(q); ++i) all.push_back({q, i});
  for (size_t u = 0; u < all.size(); ++u)
    for (size_t w = u + 1; w < all.size(); ++w) {
      const auto& a = K.cells[all[u].first][all[u].second];
      const auto& b = K.cells[all[w].first][all[w].second];
      if (!pair_embeds(K, a, b))
        rep.fail(K.cell_label(all[u].first, all[u].second) + " and " +
                 K.cell_label(all[w].first, all[w].second) +
                 ": intersection is not the shared face");
    }
  return rep;
}

ChainComplex chain_complex_of(const GeomComplex& K, const Ring& R) {
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
      const std::vector<int>& s = K.cells[q][i];
      for (size_t drop = 0; drop < s.size(); ++drop) {
        std::vector<int> f = s;
        f.erase(f.begin() + drop);
        d.add_to(R, K.id_of.at(f), i, (drop % 2 == 0) ? Rat(1) : Rat(-1));
      }
    }
    C.boundary[q] = d;
  }
  if (top >= 0) C.augmentation.assign(C.dims[0], Rat(1));
  return C;
}

std::vector<Rat> barycenter_of(const GeomComplex& K, int q, int id) {
  const std::vector<int>& s = K.cells[q][id];
  std::vector<Rat> b(K.ambient, Rat(0));
  for (int v : s)
    for (int j = 0; j < K.ambient; ++j) {
      Rat t = b[j] + K.vertices[v][j];
      b[j] = t;
    }
  for (int j = 0; j < K.ambient; ++j) {
    Rat t = b[j] / Rat(static_cast<int>(s.size()));
    b[j] = t;
  }
  return b;
}

std::optional<std::vector<Rat>> barycentric_coords(const GeomComplex& K, int q,
                                                   int id,
                                                   const std::vector<Rat>& p) {
  CFX_INPUT(static_cast<int>(p.size()) == K.ambient, "point dimension mismatch");
  const std::vector<int>& s = K.cells[q][id];
  int n = q + 1;
  int rows = K.ambient + 1;
  std::vector<std::vector<Rat>> M(rows, std::vector<Rat>(n + 1, Rat(0)));
  for (int j = 0; j < K.ambient; ++j) {
    for (int i = 0; i < n; ++i) M[j][i] = K.vertices[s[i]][j];
    M[j][n] = p[j];
  }
  for (int i = 0; i <= n; ++i) M[rows - 1][i] = 1;
  // Gaussian elimination with column pivots
  std::vector<int> pivot_row(n, -1);
  int r = 0;
  for (int c = 0; c < n && r < rows; ++c) {
    int piv = -1;
    for (int rr = r; rr < rows; ++rr)
      if (M[rr][c] != 0) {
        piv = rr;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[r], M[piv]);
    for (int rr = 0; rr < rows; ++rr) {
      if (rr == r || M[rr][c] == 0) continue;
      Rat factor = M[rr][c] / M[r][c];
      for (int j = c; j <= n; ++j) {
        Rat t = M[rr][j] - factor * M[r][j];
        M[rr][j] = t;
      }
    }
    pivot_row[c] = r;
    ++r;
  }
  for (int rr = r; rr < rows; ++rr)
    if (M[rr][n] != 0) return std::nullopt;  // p outside the affine hull
  for (int c = 0; c < n; ++c)
    CFX_CHECK(pivot_row[c] >= 0, "degenerate simplex in coordinate solve");
  std::vector<Rat> lam(n);
  for (int c = 0; c < n; ++c) {
    Rat t = M[pivot_row[c]][n] / M[pivot_row[c]][c];
    lam[c] = t;
  }
  return lam;
}

std::optional<std::pair<int, int>> locate_open_cell(const GeomComplex& K,
                                                    const std::vector<Rat>& p) {
  for (int q = K.top_degree(); q >= 0; --q)
    for (int i = 0; i < K.cell_count(q); ++i) {
      auto lam = barycentric_coords(K, q, i, p);
      if (!lam) continue;
      bool inside = true;
      for (const Rat& l : *lam)
        if (l <= 0) {
          inside = false;
          break;
        }
      if (inside) return std::make_pair(q, i);
    }
  return std::nullopt;
}

BarySubdivision barycentric_subdivision(const GeomComplex& K) {
  BarySubdivision S;
  std::vector<std::vector<Rat>> verts;
  for (int q = 0; q <= K.top_degree(); ++q)
    for (int i = 0; i < K.cell_count(q); ++i) {
      S.bary_vertex[{q, i}] = static_cast<int>(verts.size());
      S.vertex_cell.push_back({q, i});
      verts.push_back(barycenter_of(K, q, i));
    }
  // maximal cells of K
  std::vector<std::pair<int, int>> maximal;
  for (int q = 0; q <= K.top_degree(); ++q)
    for (int i = 0; i < K.cell_count(q); ++i) {
      bool is_face = false;
      if (q < K.top_degree())
        for (int j = 0; j < K.cell_count(q + 1) && !is_face; ++j)
          if (std::includes(K.cells[q + 1][j].begin(), K.cells[q + 1][j].end(),
                            K.cells[q][i].begin(), K.cells[q][i].end()))
            is_face = true;
      if (!is_face) maximal.push_back({q, i});
    }
  // complete flags below each maximal cell
  std::vector<std::vector<int>> tops;
  std::vector<int> flag;
  auto emit = [&](auto&& self, int q, int id) -> void {
    flag.push_back(S.bary_vertex.at({q, id}));
    if (q == 0) {
      std::vector<int> t(flag.rbegin(), flag.rend());
      tops.push_back(t);
    } else {
      const std::vector<int>& s = K.cells[q][id];
      for (size_t drop = 0; drop < s.size(); ++drop) {
        std::vector<int> f = s;
        f.erase(f.begin() + drop);
        self(self, q - 1, K.id_of.at(f));
      }
    }
    flag.pop_back();
  };
  for (auto [q, id] : maximal) emit(emit, q, id);
  S.fine = make_complex(K.ambient, std::move(verts), tops);
  S.carrier.resize(S.fine.top_degree() + 1);
  for (int q = 0; q <= S.fine.top_degree(); ++q)
    for (int i = 0; i < S.fine.cell_count(q); ++i)
      S.carrier[q].push_back(S.vertex_cell[S.fine.cells[q][i].back()]);
  return S;
}

namespace {

// b . c in the fine complex where b exceeds every vertex id in c
Chain cone_fine(const GeomComplex& fine, int b, const Chain& c) {
  Chain out;
  out.degree = c.degree + 1;
  for (const auto& [id, coeff] : c.c) {
    std::vector<int> t = fine.cells[c.degree][id];
    CFX_CHECK(t.empty() || t.back() < b, "cone apex must have the top id");
    t.push_back(b);
    int sign = (t.size() % 2 == 0) ? -1 : 1;  // move b from front to back
    auto it = fine.id_of.find(t);
    CFX_CHECK(it != fine.id_of.end(), "cone cell missing from subdivision");
    Rat v = coeff * Rat(sign);
    out.c[it->second] += v;
    if (out.c[it->second] == 0) out.c.erase(it->second);
  }
  return out;
}

}  // namespace

ChainMorphism subdivision_map(const ChainComplex& coarse,
                              const ChainComplex& fine_chain,
                              const GeomComplex& K, const BarySubdivision& S) {
  ChainMorphism m;
  m.src = &coarse;
  m.dst = &fine_chain;
  int top = coarse.top_degree();
  m.deg.resize(top + 1);
  std::vector<std::vector<Chain>> memo(top + 1);
  for (int q = 0; q <= top; ++q) memo[q].resize(coarse.dims[q]);
  for (int q = 0; q <= top; ++q) {
    m.deg[q] = SparseMat(fine_chain.dim_at(q), coarse.dims[q]);
    for (int i = 0; i < coarse.dims[q]; ++i) {
      Chain sd;
      if (q == 0) {
        sd.degree = 0;
        sd.c[S.bary_vertex.at({0, i})] = 1;
      } else {
        Chain bnd;
        bnd.degree = q - 1;
        for (const auto& [f, coeff] : coarse.boundary[q].col[i]) {
          for (const auto& [id, v] : memo[q - 1][f].c) {
            Rat t = coeff * v;
            bnd.c[id] += t;
            if (bnd.c[id] == 0) bnd.c.erase(id);
          }
        }
        sd = cone_fine(S.fine, S.bary_vertex.at({q, i}), bnd);
      }
      memo[q][i] = sd;
      for (const auto& [id, v] : sd.c) m.deg[q].set(coarse.ring, id, i, v);
    }
  }
  return m;
}

std::vector<std::vector<int>> trail_cells(const GeomComplex& K,
                                          const BarySubdivision& S, int q,
                                          int id) {
  CFX_INPUT(q >= 0 && q <= K.top_degree() && id >= 0 && id < K.cell_count(q),
            "trail of a cell not in the complex");
  const std::vector<int>& base = K.cells[q][id];
  std::vector<std::vector<int>> out(S.fine.top_degree() + 1);
  for (int fq = 0; fq <= S.fine.top_degree(); ++fq)
    for (int i = 0; i < S.fine.cell_count(fq); ++i) {
      auto [bq, bid] = S.vertex_cell[S.fine.cells[fq][i].front()];
      const std::vector<int>& bottom = K.cells[bq][bid];
      if (std::includes(bottom.begin(), bottom.end(), base.begin(), base.end()))
        out[fq].push_back(i);
    }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::vector<std::pair<int, int>> cells_containing_vertex(const GeomComplex& K,
                                                         int v) {
  std::vector<std::pair<int, int>> out;
  for (int q = 0; q <= K.top_degree(); ++q)
    for (int i = 0; i < K.cell_count(q); ++i)
      if (std::binary_search(K.cells[q][i].begin(), K.cells[q][i].end(), v))
        out.push_back({q, i});
  return out;
}

bool open_stars_meet(const GeomComplex& K, int v, int w) {
  for (int q = 0; q <= K.top_degree(); ++q)
    for (int i = 0; i < K.cell_count(q); ++i) {
      const auto& s = K.cells[q][i];
      if (std::binary_search(s.begin(), s.end(), v) &&
          std::binary_search(s.begin(), s.end(), w))
        return true;
    }
  return false;
}

bool point_in_open_star(const GeomComplex& K, int v,
                        const std::vector<Rat>& p) {
  auto cell = locate_open_cell(K, p);
  if (!cell) return false;
  const auto& s = K.cells[cell->first][cell->second];
  return std::binary_search(s.begin(), s.end(), v);
}

std::vector<std::pair<int, int>> chain_support_closure(const GeomComplex& K,
                                                       const Chain& c) {
  std::set<std::vector<int>> cells;
  for (const auto& [id, v] : c.c) {
    if (v == 0) continue;
    const std::vector<int>& s = K.cells[c.degree][id];
    int n = static_cast<int>(s.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> f;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) f.push_back(s[i]);
      cells.insert(f);
    }
  }
  std::vector<std::pair<int, int>> out;
  for (const auto& s : cells)
    out.push_back({static_cast<int>(s.size()) - 1, K.id_of.at(s)});
  std::sort(out.begin(), out.end());
  return out;
}

Restriction restrict_chain(const ChainComplex& C,
                           const std::vector<std::vector<int>>& keep) {
  Restriction R;
  int top = static_cast<int>(keep.size()) - 1;
  while (top >= 0 && keep[top].empty()) --top;
  R.complex.ring = C.ring;
  R.complex.dims.assign(top + 1, 0);
  R.complex.names.assign(top + 1, {});
  R.complex.boundary.assign(top + 1, SparseMat());
  R.global_of.assign(top + 1, {});
  R.local_of.assign(top + 1, {});
  for (int q = 0; q <= top; ++q) {
    std::vector<int> ids = keep[q];
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int g : ids) {
      CFX_INPUT(g >= 0 && g < C.dim_at(q), "restriction id out of range");
      R.local_of[q][g] = static_cast<int>(R.global_of[q].size());
      R.global_of[q].push_back(g);
      R.complex.names[q].push_back(C.cell_name(q, g));
    }
    R.complex.dims[q] = static_cast<int>(R.global_of[q].size());
  }
  for (int q = 1; q <= top; ++q) {
    SparseMat d(R.complex.dims[q - 1], R.complex.dims[q]);
    for (int j = 0; j < R.complex.dims[q]; ++j) {
      int g = R.global_of[q][j];
      for (const auto& [row, v] : C.boundary[q].col[g]) {
        auto it = R.local_of[q - 1].find(row);
        CFX_INPUT(it != R.local_of[q - 1].end(),
                  "restriction is not face-closed");
        d.set(C.ring, it->second, j, v);
      }
    }
    R.complex.boundary[q] = d;
  }
  if (top >= 0) {
    R.complex.augmentation.resize(R.complex.dims[0]);
    for (int j = 0; j < R.complex.dims[0]; ++j)
      R.complex.augmentation[j] = C.augmentation[R.global_of[0][j]];
  }
  return R;
}

}  // namespace chainfix
