#include "chainfix/special_cw.hpp"

namespace chainfix {

std::pair<int, int> CellSystem::id(const std::string& name) const {
  auto it = id_of.find(name);
  CFX_INPUT(it != id_of.end(), "unknown cell: " + name);
  return it->second;
}

int CellSystem::add(int dim, const std::string& name,
                    const std::vector<std::pair<std::string, Rat>>& boundary,
                    const Rat& augmentation) {
  CFX_INPUT(dim >= 0, "negative cell dimension");
  CFX_INPUT(!has(name), "duplicate cell: " + name);
  CFX_INPUT(dim > 0 || boundary.empty(), "vertex with a boundary");
  std::map<int, Rat> col;
  for (const auto& [face, coeff] : boundary) {
    auto [fd, fi] = id(face);
    CFX_INPUT(fd == dim - 1, "boundary term " + face + " has wrong dimension");
    Rat t = col[fi] + ring.normalize(coeff);
    col[fi] = ring.normalize(t);
    if (col[fi] == 0) col.erase(fi);
  }
  if (static_cast<int>(names.size()) <= dim) {
    names.resize(dim + 1);
    bnd.resize(dim + 1);
  }
  int idx = static_cast<int>(names[dim].size());
  names[dim].push_back(name);
  bnd[dim].push_back(std::move(col));
  if (dim == 0) aug.push_back(ring.normalize(augmentation));
  id_of[name] = {dim, idx};
  return idx;
}

ChainComplex CellSystem::freeze() const {
  ChainComplex C;
  C.ring = ring;
  int top = static_cast<int>(names.size()) - 1;
  C.dims.assign(top + 1, 0);
  C.names.assign(top + 1, {});
  C.boundary.assign(top + 1, SparseMat());
  for (int q = 0; q <= top; ++q) {
    C.dims[q] = static_cast<int>(names[q].size());
    C.names[q] = names[q];
  }
  for (int q = 1; q <= top; ++q) {
    SparseMat d(C.dims[q - 1], C.dims[q]);
    for (int j = 0; j < C.dims[q]; ++j)
      for (const auto& [row, v] : bnd[q][j]) d.set(ring, row, j, v);
    C.boundary[q] = d;
  }
  if (top >= 0) C.augmentation = aug;
  return C;
}

ProductWithI product_with_interval(const ChainComplex& M) {
  const Ring& R = M.ring;
  int top = M.top_degree();
  ProductWithI P;
  P.chain.ring = R;
  P.chain.dims.assign(top + 2, 0);
  P.chain.names.assign(top + 2, {});
  P.chain.boundary.assign(top + 2, SparseMat());
  P.bot.assign(top + 1, {});
  P.top.assign(top + 1, {});
  P.prism.assign(top + 1, {});
  // degree q of the product: [bottom copies][top copies][prisms of degree q-1]
  for (int q = 0; q <= top + 1; ++q) {
    int nb = (q <= top) ? M.dims[q] : 0;
    int np = (q >= 1) ? M.dims[q - 1] : 0;
    P.chain.dims[q] = 2 * nb + np;
    for (int i = 0; i < nb; ++i)
      P.chain.names[q].push_back(M.cell_name(q, i) + "@0");
    for (int i = 0; i < nb; ++i)
      P.chain.names[q].push_back(M.cell_name(q, i) + "@1");
    for (int i = 0; i < np; ++i)
      P.chain.names[q].push_back(M.cell_name(q - 1, i) + "@I");
    if (q <= top)
      for (int i = 0; i < nb; ++i) {
        P.bot[q].push_back(i);
        P.top[q].push_back(nb + i);
      }
    if (q >= 1)
      for (int i = 0; i < np; ++i) P.prism[q - 1].push_back(2 * nb + i);
  }
  for (int q = 1; q <= top + 1; ++q) {
    SparseMat d(P.chain.dims[q - 1], P.chain.dims[q]);
    int nb = (q <= top) ? M.dims[q] : 0;
    if (q <= top)
      for (int i = 0; i < nb; ++i)
        for (const auto& [row, v] : M.boundary[q].col[i]) {
          d.add_to(R, P.bot[q - 1][row], i, v);
          d.add_to(R, P.top[q - 1][row], nb + i, v);
        }
    for (int i = 0; i < ((q >= 1) ? M.dims[q - 1] : 0); ++i) {
      int col = P.prism[q - 1][i];
      d.add_to(R, P.top[q - 1][i], col, Rat(1));
      d.add_to(R, P.bot[q - 1][i], col, Rat(-1));
      if (q >= 2)
        for (const auto& [row, v] : M.boundary[q - 1].col[i]) {
          Rat t = -v;
          d.add_to(R, P.prism[q - 2][row], col, t);
        }
    }
    P.chain.boundary[q] = d;
  }
  P.chain.augmentation.assign(P.chain.dims[0], Rat(0));
  for (int i = 0; i < M.dim_at(0); ++i) {
    P.chain.augmentation[P.bot[0][i]] = M.augmentation[i];
    P.chain.augmentation[P.top[0][i]] = M.augmentation[i];
  }
  return P;
}

namespace {

ChainMorphism idmap_morphism(const ChainComplex& src, const ChainComplex& dst,
                             const std::vector<std::vector<int>>& idmap) {
  ChainMorphism m;
  m.src = &src;
  m.dst = &dst;
  m.deg.resize(src.top_degree() + 1);
  for (int q = 0; q <= src.top_degree(); ++q) {
    m.deg[q] = SparseMat(dst.dim_at(q), src.dims[q]);
    for (int i = 0; i < src.dims[q]; ++i)
      m.deg[q].set(src.ring, idmap[q][i], i, Rat(1));
  }
  return m;
}

}  // namespace

ChainMorphism include_bottom(const ChainComplex& M, const ProductWithI& P) {
  return idmap_morphism(M, P.chain, P.bot);
}

ChainMorphism include_top(const ChainComplex& M, const ProductWithI& P) {
  return idmap_morphism(M, P.chain, P.top);
}

ChainMorphism project_product(const ProductWithI& P, const ChainComplex& M) {
  ChainMorphism m;
  m.src = &P.chain;
  m.dst = &M;
  m.deg.resize(P.chain.top_degree() + 1);
  for (int q = 0; q <= P.chain.top_degree(); ++q) {
    m.deg[q] = SparseMat(M.dim_at(q), P.chain.dims[q]);
    if (q > M.top_degree()) continue;
    for (int i = 0; i < M.dims[q]; ++i) {
      m.deg[q].set(M.ring, i, P.bot[q][i], Rat(1));
      m.deg[q].set(M.ring, i, P.top[q][i], Rat(1));
    }
  }
  return m;
}

ChainHomotopy prism_homotopy(const ChainComplex& M, const ProductWithI& P) {
  ChainHomotopy h;
  h.src = &M;
  h.dst = &P.chain;
  h.deg.resize(M.top_degree() + 1);
  for (int q = 0; q <= M.top_degree(); ++q) {
    h.deg[q] = SparseMat(P.chain.dim_at(q + 1), M.dims[q]);
    for (int i = 0; i < M.dims[q]; ++i)
      h.deg[q].set(M.ring, P.prism[q][i], i, Rat(1));
  }
  return h;
}

ConeData cone_complex(const ChainComplex& C, const std::string& apex_name) {
  for (int q = 0; q <= C.top_degree(); ++q)
    for (const std::string& n : C.names[q])
      CFX_INPUT(n != apex_name, "apex collides with an existing cell");
  const Ring& R = C.ring;
  int top = C.top_degree();
  ConeData K;
  K.chain.ring = R;
  K.chain.dims.assign(top + 2, 0);
  K.chain.names.assign(top + 2, {});
  K.chain.boundary.assign(top + 2, SparseMat());
  K.base_id.assign(top + 1, {});
  K.cone_id.assign(top + 1, {});
  // degree q: [base cells][apex or cones of degree q-1]
  for (int q = 0; q <= top + 1; ++q) {
    int nb = (q <= top) ? C.dims[q] : 0;
    int nc = (q == 0) ? 1 : ((q - 1 <= top) ? C.dims[q - 1] : 0);
    K.chain.dims[q] = nb + nc;
    for (int i = 0; i < nb; ++i) K.chain.names[q].push_back(C.cell_name(q, i));
    if (q == 0) {
      K.apex = nb;
      K.chain.names[0].push_back(apex_name);
    } else {
      for (int i = 0; i < nc; ++i)
        K.chain.names[q].push_back(apex_name + "." + C.cell_name(q - 1, i));
    }
    if (q <= top)
      for (int i = 0; i < nb; ++i) K.base_id[q].push_back(i);
    if (q >= 1 && q - 1 <= top)
      for (int i = 0; i < nc; ++i) K.cone_id[q - 1].push_back(nb + i);
  }
  for (int q = 1; q <= top + 1; ++q) {
    SparseMat d(K.chain.dims[q - 1], K.chain.dims[q]);
    int nb = (q <= top) ? C.dims[q] : 0;
    if (q <= top)
      for (int i = 0; i < nb; ++i)
        for (const auto& [row, v] : C.boundary[q].col[i])
          d.add_to(R, K.base_id[q - 1][row], i, v);
    for (int i = 0; i < ((q - 1 <= top) ? C.dims[q - 1] : 0); ++i) {
      int col = K.cone_id[q - 1][i];
      // d(v.s) = s - v.ds, with ds read through the augmentation at q = 1
      d.add_to(R, K.base_id[q - 1][i], col, Rat(1));
      if (q == 1) {
        Rat t = -C.augmentation[i];
        d.add_to(R, K.apex, col, t);
      } else {
        for (const auto& [row, v] : C.boundary[q - 1].col[i]) {
          Rat t = -v;
          d.add_to(R, K.cone_id[q - 2][row], col, t);
        }
      }
    }
    K.chain.boundary[q] = d;
  }
  K.chain.augmentation.assign(K.chain.dims[0], Rat(1));
  for (int i = 0; i < C.dim_at(0); ++i)
    K.chain.augmentation[i] = C.augmentation[i];
  return K;
}

Chain cone_chain(const ConeData& K, const Chain& d) {
  Chain out;
  out.degree = d.degree + 1;
  if (d.degree == -1) {
    if (auto it = d.c.find(0); it != d.c.end() && it->second != 0)
      out.c[K.apex] = it->second;
    return out;
  }
  for (const auto& [id, v] : d.c)
    if (v != 0) out.c[K.cone_id[d.degree][id]] = v;
  return out;
}

JoinData join_with_edge(const ChainComplex& C, const std::string& v0_name,
                        const std::string& v1_name) {
  CFX_INPUT(v0_name != v1_name, "join vertices must differ");
  for (int q = 0; q <= C.top_degree(); ++q)
    for (const std::string& n : C.names[q])
      CFX_INPUT(n != v0_name && n != v1_name,
                "join vertex collides with an existing cell");
  const Ring& R = C.ring;
  int top = C.top_degree();
  JoinData J;
  J.chain.ring = R;
  int jtop = top + 2;
  J.chain.dims.assign(jtop + 1, 0);
  J.chain.names.assign(jtop + 1, {});
  J.chain.boundary.assign(jtop + 1, SparseMat());
  J.base_id.assign(top + 1, {});
  J.cone0_id.assign(top + 1, {});
  J.cone1_id.assign(top + 1, {});
  J.join_id.assign(top + 1, {});
  // degree q: [base cells][v0, v1 at q=0][v0.(q-1)][v1.(q-1)][edge or v0v1.(q-2)]
  for (int q = 0; q <= jtop; ++q) {
    int nb = (q <= top) ? C.dims[q] : 0;
    int nc = (q >= 1 && q - 1 <= top) ? C.dims[q - 1] : 0;
    int nj = (q >= 2 && q - 2 <= top) ? C.dims[q - 2] : 0;
    std::vector<std::string>& nm = J.chain.names[q];
    for (int i = 0; i < nb; ++i) {
      J.base_id[q].push_back(static_cast<int>(nm.size()));
      nm.push_back(C.cell_name(q, i));
    }
    if (q == 0) {
      J.v0 = static_cast<int>(nm.size());
      nm.push_back(v0_name);
      J.v1 = static_cast<int>(nm.size());
      nm.push_back(v1_name);
    }
    if (q >= 1) {
      for (int i = 0; i < nc; ++i) {
        J.cone0_id[q - 1].push_back(static_cast<int>(nm.size()));
        nm.push_back(v0_name + "." + C.cell_name(q - 1, i));
      }
      for (int i = 0; i < nc; ++i) {
        J.cone1_id[q - 1].push_back(static_cast<int>(nm.size()));
        nm.push_back(v1_name + "." + C.cell_name(q - 1, i));
      }
    }
    if (q == 1) {
      J.edge = static_cast<int>(nm.size());
      nm.push_back(v0_name + v1_name);
    }
    if (q >= 2)
      for (int i = 0; i < nj; ++i) {
        J.join_id[q - 2].push_back(static_cast<int>(nm.size()));
        nm.push_back(v0_name + v1_name + "." + C.cell_name(q - 2, i));
      }
    J.chain.dims[q] = static_cast<int>(nm.size());
  }
  for (int q = 1; q <= jtop; ++q) {
    SparseMat d(J.chain.dims[q - 1], J.chain.dims[q]);
    if (q <= top)
      for (int i = 0; i < C.dims[q]; ++i)
        for (const auto& [row, v] : C.boundary[q].col[i])
          d.add_to(R, J.base_id[q - 1][row], J.base_id[q][i], v);
    // cones: d(v.s) = s - v.ds
    if (q - 1 >= 0 && q - 1 <= top)
      for (int i = 0; i < C.dims[q - 1]; ++i) {
        for (auto [cid, apex] :
             {std::pair{J.cone0_id[q - 1][i], 0}, {J.cone1_id[q - 1][i], 1}}) {
          const std::vector<std::vector<int>>& cone =
              apex == 0 ? J.cone0_id : J.cone1_id;
          d.add_to(R, J.base_id[q - 1][i], cid, Rat(1));
          if (q == 1) {
            Rat t = -C.augmentation[i];
            d.add_to(R, apex == 0 ? J.v0 : J.v1, cid, t);
          } else {
            for (const auto& [row, v] : C.boundary[q - 1].col[i]) {
              Rat t = -v;
              d.add_to(R, cone[q - 2][row], cid, t);
            }
          }
        }
      }
    if (q == 1) {
      d.add_to(R, J.v1, J.edge, Rat(1));
      d.add_to(R, J.v0, J.edge, Rat(-1));
    }
    // joins: d(v0v1.s) = v1.s - v0.s + v0v1.ds
    if (q >= 2 && q - 2 <= top)
      for (int i = 0; i < C.dims[q - 2]; ++i) {
        int jid = J.join_id[q - 2][i];
        d.add_to(R, J.cone1_id[q - 2][i], jid, Rat(1));
        d.add_to(R, J.cone0_id[q - 2][i], jid, Rat(-1));
        if (q == 2) {
          d.add_to(R, J.edge, jid, C.augmentation[i]);
        } else {
          for (const auto& [row, v] : C.boundary[q - 2].col[i])
            d.add_to(R, J.join_id[q - 3][row], jid, v);
        }
      }
    J.chain.boundary[q] = d;
  }
  J.chain.augmentation.assign(J.chain.dims[0], Rat(1));
  for (int i = 0; i < C.dim_at(0); ++i)
    J.chain.augmentation[J.base_id[0][i]] = C.augmentation[i];
  return J;
}

Chain join_chain(const JoinData& J, const Chain& d) {
  Chain out;
  out.degree = d.degree + 2;
  if (d.degree == -1) {
    if (auto it = d.c.find(0); it != d.c.end() && it->second != 0)
      out.c[J.edge] = it->second;
    return out;
  }
  for (const auto& [id, v] : d.c)
    if (v != 0) out.c[J.join_id[d.degree][id]] = v;
  return out;
}

Chain cone_chain0(const JoinData& J, const Chain& d) {
  Chain out;
  out.degree = d.degree + 1;
  if (d.degree == -1) {
    if (auto it = d.c.find(0); it != d.c.end() && it->second != 0)
      out.c[J.v0] = it->second;
    return out;
  }
  for (const auto& [id, v] : d.c)
    if (v != 0) out.c[J.cone0_id[d.degree][id]] = v;
  return out;
}

Chain cone_chain1(const JoinData& J, const Chain& d) {
  Chain out;
  out.degree = d.degree + 1;
  if (d.degree == -1) {
    if (auto it = d.c.find(0); it != d.c.end() && it->second != 0)
      out.c[J.v1] = it->second;
    return out;
  }
  for (const auto& [id, v] : d.c)
    if (v != 0) out.c[J.cone1_id[d.degree][id]] = v;
  return out;
}

Chain map_chain(const std::vector<std::vector<int>>& idmap, const Chain& d,
                int degree_shift) {
  Chain out;
  out.degree = d.degree + degree_shift;
  for (const auto& [id, v] : d.c)
    if (v != 0) out.c[idmap[d.degree][id]] = v;
  return out;
}

}  // namespace chainfix
