#include "chainfix/multimap.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chainfix/fixindex.hpp"
#include "chainfix/homology.hpp"
#include "chainfix/lp.hpp"
#include "chainfix/metric.hpp"

namespace chainfix {

namespace {

void sort_unique(CellSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

bool in_set(const CellSet& s, std::pair<int, int> c) {
  return std::binary_search(s.begin(), s.end(), c);
}

bool cell_in_range(const GeomComplex& Y, std::pair<int, int> c) {
  return c.first >= 0 && c.first <= Y.top_degree() && c.second >= 0 &&
         c.second < Y.cell_count(c.first);
}

// all faces of one cell, the cell included
CellSet faces_of(const GeomComplex& Y, int q, int id) {
  const std::vector<int>& v = Y.cell(q, id);
  int n = static_cast<int>(v.size());
  CellSet out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> sub;
    for (int k = 0; k < n; ++k)
      if (mask & (1 << k)) sub.push_back(v[k]);
    auto cid = Y.find_cell(sub);
    CFX_CHECK(cid.has_value(), "complex is not closed under faces");
    out.push_back({static_cast<int>(sub.size()) - 1, *cid});
  }
  sort_unique(out);
  return out;
}

void check_values(const GeomComplex& X, const GeomComplex& Y,
                  std::vector<std::vector<CellSet>>& values) {
  CFX_INPUT(static_cast<int>(values.size()) == X.top_degree() + 1,
            "one value list per degree of the domain");
  for (int q = 0; q <= X.top_degree(); ++q) {
    CFX_INPUT(static_cast<int>(values[q].size()) == X.cell_count(q),
              "one value per domain cell");
    for (int id = 0; id < X.cell_count(q); ++id) {
      CellSet& v = values[q][id];
      sort_unique(v);
      CFX_INPUT(!v.empty(), "empty value at cell " + X.cell_label(q, id));
      for (auto c : v)
        CFX_INPUT(cell_in_range(Y, c),
                  "value cell out of range at " + X.cell_label(q, id));
      for (auto c : v)
        for (auto f : faces_of(Y, c.first, c.second))
          CFX_INPUT(in_set(v, f),
                    "value at " + X.cell_label(q, id) +
                        " is not closed: missing face " +
                        Y.cell_label(f.first, f.second));
    }
  }
}

// exact weighted-l1 distance between two closed cells, one small LP
Rat cell_pair_distance(const GeomComplex& A, int q, int id,
                       const GeomComplex& Y, int p, int e) {
  const std::vector<int>& sa = A.cell(q, id);
  const std::vector<int>& sb = Y.cell(p, e);
  int na = static_cast<int>(sa.size());
  int nb = static_cast<int>(sb.size());
  int d = A.ambient;
  LinearProgram lp(na + nb + d);
  std::vector<Rat> row(lp.n, Rat(0));
  auto zero_row = [&]() { std::fill(row.begin(), row.end(), Rat(0)); };
  for (int k = 0; k < na + nb; ++k) {
    zero_row();
    row[k] = Rat(-1);
    lp.leq(row, Rat(0));
  }
  zero_row();
  for (int k = 0; k < na; ++k) row[k] = Rat(1);
  lp.eq(row, Rat(1));
  zero_row();
  for (int k = 0; k < nb; ++k) row[na + k] = Rat(1);
  lp.eq(row, Rat(1));
  for (int i = 0; i < d; ++i) {
    zero_row();
    for (int k = 0; k < na; ++k) row[k] = A.vertices[sa[k]][i];
    for (int k = 0; k < nb; ++k) row[na + k] = -Y.vertices[sb[k]][i];
    row[na + nb + i] = Rat(-1);
    lp.leq(row, Rat(0));
    zero_row();
    for (int k = 0; k < na; ++k) row[k] = -A.vertices[sa[k]][i];
    for (int k = 0; k < nb; ++k) row[na + k] = Y.vertices[sb[k]][i];
    row[na + nb + i] = Rat(-1);
    lp.leq(row, Rat(0));
    lp.c[na + nb + i] = coord_weight(i);
  }
  auto r = lp_solve(lp);
  CFX_CHECK(r.status == LPStatus::Optimal, "distance program did not solve");
  return r.value;
}

std::pair<int, int> host_at(const SubdivisionTower& T, int lv,
                            std::pair<int, int> c, int down_to) {
  while (lv > down_to) {
    c = T.S[lv - 1].carrier[c.first][c.second];
    --lv;
  }
  return c;
}

// iterated last-vertex map level[lv] -> level[0]
std::vector<int> descent_map(const SubdivisionTower& T, int lv) {
  std::vector<int> comp(T.level[lv].vertices.size());
  for (int w = 0; w < static_cast<int>(comp.size()); ++w) comp[w] = w;
  for (int j = lv; j > 0; --j) {
    std::vector<int> m = last_vertex_map(T.level[j - 1], T.S[j - 1]);
    for (auto& w : comp) w = m[w];
  }
  return comp;
}

SparseMat mat_scale(const Ring& R, const Rat& s, const SparseMat& M) {
  SparseMat out(M.rows, M.cols);
  for (int j = 0; j < M.cols; ++j)
    for (const auto& [i, v] : M.col[j]) out.set(R, i, j, Rat(s * v));
  return out;
}

struct EnvCache {
  const MultiMap* F;
  std::map<std::pair<int, int>, CellSet> env;
  const CellSet& get(std::pair<int, int> c) {
    auto it = env.find(c);
    if (it == env.end())
      it = env.emplace(c, value_envelope(*F, c.first, c.second)).first;
    return it->second;
  }
};

std::vector<std::vector<int>> keep_of(const ChainComplex& C,
                                      const CellSet& set) {
  std::vector<std::vector<int>> keep(C.dims.size());
  for (auto c : set) keep[c.first].push_back(c.second);
  return keep;
}

// connected components of the realization of a closed cell set
int component_count(const GeomComplex& Y, const CellSet& set,
                    std::map<int, int>* comp_of = nullptr) {
  std::map<int, int> root;
  for (auto c : set)
    for (int v : Y.cell(c.first, c.second))
      if (!root.count(v)) root[v] = v;
  auto findr = [&](int v) {
    while (root[v] != v) {
      root[v] = root[root[v]];
      v = root[v];
    }
    return v;
  };
  for (auto c : set) {
    const auto& cv = Y.cell(c.first, c.second);
    for (size_t k = 1; k < cv.size(); ++k) root[findr(cv[k])] = findr(cv[0]);
  }
  std::set<int> roots;
  for (const auto& [v, r] : root) roots.insert(findr(v));
  if (comp_of) {
    comp_of->clear();
    for (const auto& [v, r] : root) (*comp_of)[v] = findr(v);
  }
  return static_cast<int>(roots.size());
}

bool same_complex(const GeomComplex& A, const GeomComplex& B) {
  return A.vertices == B.vertices && A.cells == B.cells;
}

}  // namespace

MultiMap multimap_from_cells(const GeomComplex& X, const GeomComplex& Y,
                             std::vector<std::vector<CellSet>> values) {
  MultiMap F;
  F.X = X;
  F.Y = Y;
  F.values = std::move(values);
  check_values(F.X, F.Y, F.values);
  return F;
}

MultiMap multimap_from_selections(const GeomComplex& X, const GeomComplex& Y,
                                  std::vector<std::vector<int>> selections) {
  CFX_INPUT(!selections.empty(),
            "a selection family needs at least one member");
  for (const auto& f : selections) {
    CFX_INPUT(f.size() == X.vertices.size(),
              "selection must map every vertex");
    for (int u : f)
      CFX_INPUT(u >= 0 && u < static_cast<int>(Y.vertices.size()),
                "selection image out of range");
  }
  std::vector<std::vector<CellSet>> values(X.top_degree() + 1);
  for (int q = 0; q <= X.top_degree(); ++q) {
    values[q].resize(X.cell_count(q));
    for (int id = 0; id < X.cell_count(q); ++id) {
      CellSet& val = values[q][id];
      for (const auto& f : selections) {
        std::vector<int> img;
        for (int v : X.cell(q, id)) img.push_back(f[v]);
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        auto cid = Y.find_cell(img);
        CFX_INPUT(cid.has_value(),
                  "selection is not simplicial at cell " + X.cell_label(q, id));
        CellSet cf = faces_of(Y, static_cast<int>(img.size()) - 1, *cid);
        val.insert(val.end(), cf.begin(), cf.end());
      }
      sort_unique(val);
    }
  }
  MultiMap F;
  F.X = X;
  F.Y = Y;
  F.values = std::move(values);
  F.selections = std::move(selections);
  return F;
}

ContinuityReport is_usc(const MultiMap& F) {
  if (!F.selections.empty()) return {true, ""};
  for (int q = 1; q <= F.X.top_degree(); ++q)
    for (int id = 0; id < F.X.cell_count(q); ++id) {
      const std::vector<int>& cv = F.X.cell(q, id);
      for (size_t k = 0; k < cv.size(); ++k) {
        std::vector<int> face;
        for (size_t j = 0; j < cv.size(); ++j)
          if (j != k) face.push_back(cv[j]);
        auto fid = F.X.find_cell(face);
        CFX_CHECK(fid.has_value(), "complex is not closed under faces");
        const CellSet& big = F.values[q - 1][*fid];
        const CellSet& small = F.values[q][id];
        if (!std::includes(big.begin(), big.end(), small.begin(), small.end()))
          return {false, "value at " + F.X.cell_label(q, id) +
                             " is not contained in the value at its face " +
                             F.X.cell_label(q - 1, *fid)};
      }
    }
  return {true, ""};
}

ContinuityReport is_vietoris_continuous(const MultiMap& F) {
  if (!F.selections.empty()) return {true, ""};
  ContinuityReport u = is_usc(F);
  if (!u.ok) return u;
  for (int q = 1; q <= F.X.top_degree(); ++q)
    for (int id = 0; id < F.X.cell_count(q); ++id) {
      const std::vector<int>& cv = F.X.cell(q, id);
      for (size_t k = 0; k < cv.size(); ++k) {
        std::vector<int> face;
        for (size_t j = 0; j < cv.size(); ++j)
          if (j != k) face.push_back(cv[j]);
        auto fid = F.X.find_cell(face);
        if (F.values[q][id] != F.values[q - 1][*fid])
          return {false, "value changes across the face pair " +
                             F.X.cell_label(q - 1, *fid) + " < " +
                             F.X.cell_label(q, id)};
      }
    }
  return {true, ""};
}

CellSet value_envelope(const MultiMap& F, int q, int id) {
  CFX_INPUT(cell_in_range(F.X, {q, id}), "envelope cell out of range");
  const std::vector<int>& v = F.X.cell(q, id);
  int n = static_cast<int>(v.size());
  CellSet out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> sub;
    for (int k = 0; k < n; ++k)
      if (mask & (1 << k)) sub.push_back(v[k]);
    auto cid = F.X.find_cell(sub);
    CFX_CHECK(cid.has_value(), "complex is not closed under faces");
    const CellSet& val = F.values[sub.size() - 1][*cid];
    out.insert(out.end(), val.begin(), val.end());
  }
  sort_unique(out);
  return out;
}

Rat set_distance(const GeomComplex& A, int q, int id, const GeomComplex& Y,
                 const CellSet& set) {
  CFX_INPUT(cell_in_range(A, {q, id}), "distance cell out of range");
  CFX_INPUT(!set.empty(), "distance to an empty set");
  CFX_INPUT(A.ambient == Y.ambient, "distance needs one ambient space");
  bool first = true;
  Rat best(0);
  for (auto c : set) {
    CFX_INPUT(cell_in_range(Y, c), "set cell out of range");
    Rat d = cell_pair_distance(A, q, id, Y, c.first, c.second);
    if (first || d < best) {
      best = d;
      first = false;
    }
    if (best == 0) break;
  }
  return best;
}

CellSet metric_fattening(const GeomComplex& Y, const CellSet& set,
                         const Rat& eps) {
  CFX_INPUT(!set.empty(), "fattening an empty set");
  CFX_INPUT(eps >= 0, "fattening radius must be nonnegative");
  std::vector<char> pool(Y.vertices.size(), 0);
  for (auto c : set) {
    CFX_INPUT(cell_in_range(Y, c), "set cell out of range");
    for (int v : Y.cell(c.first, c.second)) pool[v] = 1;
  }
  std::set<std::pair<int, int>> out;
  for (int q = 0; q <= Y.top_degree(); ++q)
    for (int id = 0; id < Y.cell_count(q); ++id) {
      bool near = false;
      for (int v : Y.cell(q, id))
        if (pool[v]) {
          near = true;
          break;
        }
      if (!near) near = set_distance(Y, q, id, Y, set) <= eps;
      if (near)
        for (auto f : faces_of(Y, q, id)) out.insert(f);
    }
  return CellSet(out.begin(), out.end());
}

ApproximationCertificate approximate(const MultiMap& F, int level_U,
                                     int level_V, const Rat& eps,
                                     int selection, bool alt_pick) {
  CFX_INPUT(level_U >= 0 && level_U <= level_V, "cover levels must nest");
  CFX_INPUT(eps > 0, "approximation radius must be positive");
  CFX_INPUT(selection < static_cast<int>(F.selections.size()),
            "selection out of range");

  Ring R = Ring::Q();
  SubdivisionTower T = build_tower(F.X, R, level_V);

  ApproximationCertificate cert;
  cert.F = F;
  cert.level_U = level_U;
  cert.level_V = level_V;
  cert.eps = eps;
  cert.fineX = T.level[level_V];
  cert.CV = chain_complex_of(cert.fineX, R);
  cert.CY = chain_complex_of(F.Y, R);
  cert.host.resize(cert.fineX.cells.size());
  for (int q = 0; q <= cert.fineX.top_degree(); ++q) {
    cert.host[q].resize(cert.fineX.cell_count(q));
    for (int id = 0; id < cert.fineX.cell_count(q); ++id)
      cert.host[q][id] = host_at(T, level_V, {q, id}, level_U);
  }

  EnvCache env{&F, {}};

  if (!F.selections.empty()) {
    std::vector<int> down = descent_map(T, level_V);
    auto one = [&](int i) {
      std::vector<int> vm(down.size());
      for (size_t w = 0; w < down.size(); ++w)
        vm[w] = F.selections[i][down[w]];
      return chain_map_of(R, cert.fineX, cert.CV, F.Y, cert.CY, vm);
    };
    if (selection >= 0) {
      cert.phi = one(selection);
    } else {
      int k = static_cast<int>(F.selections.size());
      // the value over every host must split into one or k pieces, each
      // with vanishing reduced homology
      std::set<std::pair<int, int>> hosts;
      for (int q = 0; q <= cert.fineX.top_degree(); ++q)
        for (int id = 0; id < cert.fineX.cell_count(q); ++id)
          hosts.insert(host_at(T, level_V, {q, id}, 0));
      for (auto h : hosts) {
        const CellSet& E = env.get(h);
        std::map<int, int> comp_of;
        int comps = component_count(F.Y, E, &comp_of);
        CFX_INPUT(comps == 1 || comps == k,
                  "value over cell " + F.X.cell_label(h.first, h.second) +
                      " splits into " + std::to_string(comps) +
                      " pieces, not one per selection");
        std::map<int, CellSet> parts;
        for (auto c : E)
          parts[comp_of[F.Y.cell(c.first, c.second)[0]]].push_back(c);
        for (const auto& [r, part] : parts) {
          Restriction rs = restrict_chain(cert.CY, keep_of(cert.CY, part));
          CFX_INPUT(is_acyclic(rs.complex),
                    "a value piece over cell " +
                        F.X.cell_label(h.first, h.second) + " is not acyclic");
        }
      }
      std::vector<ChainMorphism> parts;
      for (int i = 0; i < k; ++i) parts.push_back(one(i));
      Rat s(1, k);
      cert.phi.deg.assign(cert.CV.top_degree() + 1, SparseMat());
      for (int q = 0; q <= cert.CV.top_degree(); ++q) {
        SparseMat acc(cert.CY.dim_at(q), cert.CV.dim_at(q));
        for (const auto& p : parts)
          if (q < static_cast<int>(p.deg.size()))
            acc = mat_add(R, acc, mat_scale(R, s, p.deg[q]));
        cert.phi.deg[q] = acc;
      }
    }
  } else {
    // acyclic-carrier recursion inside the fattened value of each host
    struct CarrierData {
      CellSet B;
      Restriction rst;
      std::unique_ptr<BoundarySolver> solver;
    };
    std::map<std::pair<int, int>, CarrierData> car;
    auto carrier_of = [&](std::pair<int, int> h) -> CarrierData& {
      auto it = car.find(h);
      if (it == car.end()) {
        CarrierData cd;
        cd.B = metric_fattening(F.Y, env.get(h), eps);
        cd.rst = restrict_chain(cert.CY, keep_of(cert.CY, cd.B));
        if (!is_acyclic(cd.rst.complex)) {
          HomologyResult H = homology(cd.rst.complex, true);
          std::ostringstream os;
          os << "fattened value at cell "
             << F.X.cell_label(h.first, h.second)
             << " is not acyclic (reduced betti:";
          for (int b : H.betti) os << ' ' << b;
          os << ")";
          throw InputError(os.str());
        }
        it = car.emplace(h, std::move(cd)).first;
        it->second.solver =
            std::make_unique<BoundarySolver>(it->second.rst.complex);
      }
      return it->second;
    };

    cert.phi.deg.assign(cert.CV.top_degree() + 1, SparseMat());
    for (int q = 0; q <= cert.CV.top_degree(); ++q)
      cert.phi.deg[q] = SparseMat(cert.CY.dim_at(q), cert.CV.dim_at(q));

    for (int w = 0; w < cert.fineX.cell_count(0); ++w) {
      auto h = host_at(T, level_V, {0, w}, 0);
      carrier_of(h);
      const CellSet& E = env.get(h);
      int pick = -1;
      for (auto c : E) {
        if (c.first != 0) continue;
        if (pick < 0)
          pick = c.second;
        else
          pick = alt_pick ? std::max(pick, c.second)
                          : std::min(pick, c.second);
      }
      CFX_CHECK(pick >= 0, "closed value has no vertex");
      cert.phi.deg[0].set(R, pick, w, Rat(1));
    }

    for (int q = 1; q <= cert.fineX.top_degree(); ++q)
      for (int id = 0; id < cert.fineX.cell_count(q); ++id) {
        auto h = host_at(T, level_V, {q, id}, 0);
        CarrierData& cd = carrier_of(h);
        Chain basis;
        basis.degree = q;
        basis.c[id] = Rat(1);
        Chain db = cert.CV.boundary_of(basis);
        Chain tgt = mat_apply(R, cert.phi.deg[q - 1], db, q - 1);
        int rtop = cd.rst.complex.top_degree();
        if (q - 1 > rtop) {
          CFX_CHECK(tgt.zero(), "face image leaves its carrier");
          continue;
        }
        Chain lt;
        lt.degree = q - 1;
        for (const auto& [gid, v] : tgt.c) {
          auto li = cd.rst.local_of[q - 1].find(gid);
          CFX_CHECK(li != cd.rst.local_of[q - 1].end(),
                    "face image leaves its carrier");
          lt.c[li->second] = v;
        }
        if (q > rtop) {
          CFX_CHECK(lt.zero(),
                    "carrier has no cells to bound the face image");
          continue;
        }
        auto x = cd.solver->solve(lt, q);
        CFX_CHECK(x.has_value(), "acyclic carrier must bound the face image");
        for (const auto& [lid, v] : x->c)
          cert.phi.deg[q].set(R, cd.rst.global_of[q][lid], id, v);
      }
  }
  cert.rebind();
  return cert;
}

ApproximationAudit verify_approximation(const ApproximationCertificate& cert) {
  ApproximationAudit a;
  auto fail = [&](const std::string& m) {
    a.ok = false;
    a.notes.push_back(m);
  };
  if (cert.level_U < 0 || cert.level_U > cert.level_V) {
    fail("cover levels do not nest");
    return a;
  }
  if (!(cert.eps > 0)) {
    fail("radius is not positive");
    return a;
  }

  Ring R = Ring::Q();
  SubdivisionTower T = build_tower(cert.F.X, R, cert.level_V);
  const GeomComplex& fine = T.level[cert.level_V];

  if (fine.cells.size() != cert.fineX.cells.size() ||
      cert.host.size() != fine.cells.size()) {
    fail("fine complex does not match the subdivision");
    return a;
  }
  for (int q = 0; q <= fine.top_degree(); ++q)
    if (fine.cell_count(q) != cert.fineX.cell_count(q) ||
        static_cast<int>(cert.host[q].size()) != fine.cell_count(q)) {
      fail("fine complex does not match the subdivision");
      return a;
    }
  ChainComplex CV = chain_complex_of(fine, R);
  ChainComplex CY = chain_complex_of(cert.F.Y, R);
  if (CV.dims != cert.CV.dims || CY.dims != cert.CY.dims) {
    fail("stored chain complexes do not match their complexes");
    return a;
  }

  ChainMorphism phi = cert.phi;
  phi.src = &CV;
  phi.dst = &CY;
  VerifyReport vr = verify_morphism(phi, true);
  if (!vr.ok) {
    a.ok = false;
    for (const auto& e : vr.errors) a.notes.push_back(e);
  }

  EnvCache env{&cert.F, {}};
  std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, char> memb;
  auto in_fattening = [&](std::pair<int, int> h,
                          std::pair<int, int> t) -> bool {
    auto key = std::make_pair(h, t);
    auto it = memb.find(key);
    if (it != memb.end()) return it->second != 0;
    const CellSet& E = env.get(h);
    bool ok = in_set(E, t);
    const std::vector<int>& tv = cert.F.Y.cell(t.first, t.second);
    for (int p = t.first; p <= cert.F.Y.top_degree() && !ok; ++p)
      for (int id = 0; id < cert.F.Y.cell_count(p) && !ok; ++id) {
        const std::vector<int>& cv = cert.F.Y.cell(p, id);
        if (!std::includes(cv.begin(), cv.end(), tv.begin(), tv.end()))
          continue;
        if (set_distance(cert.F.Y, p, id, cert.F.Y, E) <= cert.eps) ok = true;
      }
    memb[key] = ok ? 1 : 0;
    return ok;
  };

  for (int q = 0; q <= fine.top_degree(); ++q)
    for (int id = 0; id < fine.cell_count(q); ++id) {
      auto hU = host_at(T, cert.level_V, {q, id}, cert.level_U);
      if (cert.host[q][id] != hU) {
        fail("stored host differs at " + fine.cell_label(q, id));
        continue;
      }
      if (q >= static_cast<int>(phi.deg.size())) continue;
      if (id >= phi.deg[q].cols) continue;
      Chain col;
      col.degree = q;
      col.c = phi.deg[q].col[id];
      if (col.zero()) continue;
      auto hb = host_at(T, cert.level_V, {q, id}, 0);
      for (auto t : chain_support_closure(cert.F.Y, col))
        if (!in_fattening(hb, t))
          fail("image of " + fine.cell_label(q, id) +
               " leaves the fattened value near " +
               cert.F.Y.cell_label(t.first, t.second));
    }
  return a;
}

ApproximationCertificate mix_certificates(const ApproximationCertificate& a,
                                          const ApproximationCertificate& b,
                                          const Rat& q) {
  CFX_INPUT(a.level_U == b.level_U && a.level_V == b.level_V &&
                a.eps == b.eps,
            "certificates must share one scale");
  CFX_INPUT(a.CV.dims == b.CV.dims && a.CY.dims == b.CY.dims,
            "certificates must share the complex pair");
  Ring R = Ring::Q();
  ApproximationCertificate out = a;
  out.rebind();
  Rat p = Rat(1) - q;
  int n = static_cast<int>(std::max(a.phi.deg.size(), b.phi.deg.size()));
  out.phi.deg.assign(n, SparseMat());
  for (int d = 0; d < n; ++d) {
    SparseMat A = (d < static_cast<int>(a.phi.deg.size()) &&
                   a.phi.deg[d].cols == out.CV.dim_at(d))
                      ? a.phi.deg[d]
                      : SparseMat(out.CY.dim_at(d), out.CV.dim_at(d));
    SparseMat B = (d < static_cast<int>(b.phi.deg.size()) &&
                   b.phi.deg[d].cols == out.CV.dim_at(d))
                      ? b.phi.deg[d]
                      : SparseMat(out.CY.dim_at(d), out.CV.dim_at(d));
    out.phi.deg[d] = mat_add(R, mat_scale(R, q, A), mat_scale(R, p, B));
  }
  return out;
}

Rat lefschetz_of_certificate(const ApproximationCertificate& cert) {
  CFX_INPUT(same_complex(cert.F.X, cert.F.Y), "trace needs a self map");
  Ring R = Ring::Q();
  SubdivisionTower T = build_tower(cert.F.X, R, cert.level_V);
  CFX_CHECK(T.C[cert.level_V].dims == cert.CV.dims,
            "certificate does not match its subdivision");
  ChainMorphism phi = cert.phi;
  phi.src = &T.C[cert.level_V];
  phi.dst = &T.C[0];
  if (cert.level_V == 0) return lefschetz_number(phi);
  ChainMorphism s = T.sub[0];
  for (int j = 1; j < cert.level_V; ++j) s = morphism_compose(T.sub[j], s);
  return lefschetz_number(morphism_compose(phi, s));
}

LefschetzDichotomy lefschetz_of_multimap(
    const MultiMap& F, const std::vector<DichotomyScale>& schedule) {
  CFX_INPUT(!schedule.empty(), "empty scale schedule");
  LefschetzDichotomy out;
  bool have_witness = false;
  for (const auto& sc : schedule) {
    std::vector<ApproximationCertificate> certs;
    if (F.selections.empty()) {
      certs.push_back(approximate(F, sc.level_U, sc.level_V, sc.eps, -1,
                                  false));
      certs.push_back(approximate(F, sc.level_U, sc.level_V, sc.eps, -1,
                                  true));
    } else {
      for (int i = 0; i < static_cast<int>(F.selections.size()); ++i)
        certs.push_back(approximate(F, sc.level_U, sc.level_V, sc.eps, i));
      if (F.selections.size() >= 2)
        certs.push_back(approximate(F, sc.level_U, sc.level_V, sc.eps));
    }
    std::vector<Rat> traces;
    for (const auto& c : certs) traces.push_back(lefschetz_of_certificate(c));
    for (const Rat& t : traces) out.samples.push_back(t);
    if (have_witness) continue;
    for (size_t i = 0; i < traces.size() && !have_witness; ++i)
      for (size_t j = i + 1; j < traces.size() && !have_witness; ++j) {
        if (traces[i] == traces[j]) continue;
        have_witness = true;
        out.witness_a = traces[i];
        out.witness_b = traces[j];
        std::ostringstream os;
        os << "distinct traces " << rat_str(traces[i]) << " and "
           << rat_str(traces[j]) << " at level " << sc.level_V << ", radius "
           << rat_str(sc.eps);
        out.notes.push_back(os.str());
        ApproximationCertificate m =
            mix_certificates(certs[i], certs[j], Rat(1, 2));
        Rat tm = lefschetz_of_certificate(m);
        Rat want((traces[i] + traces[j]) / 2);
        std::ostringstream os2;
        os2 << "midpoint mix has trace " << rat_str(tm)
            << (tm == want ? ", matching the affine law"
                           : ", breaking the affine law");
        out.notes.push_back(os2.str());
      }
  }
  bool all_equal = true;
  for (const Rat& t : out.samples)
    if (t != out.samples.front()) {
      all_equal = false;
      break;
    }
  if (all_equal) {
    out.determinate = true;
    out.value = out.samples.front();
    std::ostringstream os;
    os << out.samples.size() << " certificates across " << schedule.size()
       << " scales agree; stability is sampled, not proven";
    out.notes.push_back(os.str());
  } else if (!have_witness) {
    out.witness_a = out.samples.front();
    for (const Rat& t : out.samples)
      if (t != out.witness_a) {
        out.witness_b = t;
        break;
      }
    out.notes.push_back(
        "traces drift across scales without a common-scale pair");
  }
  return out;
}

FixSearchResult fixed_point_certificate(const MultiMap& F,
                                        const DichotomyScale& scale) {
  CFX_INPUT(same_complex(F.X, F.Y), "search needs a self map");
  FixSearchResult res;

  for (int q = 0; q <= F.X.top_degree(); ++q)
    for (int id = 0; id < F.X.cell_count(q); ++id) {
      CellSet E = value_envelope(F, q, id);
      const std::vector<int>& sv = F.X.cell(q, id);
      for (auto c : E) {
        const std::vector<int>& tv = F.Y.cell(c.first, c.second);
        bool meet = false;
        for (int v : sv)
          if (std::binary_search(tv.begin(), tv.end(), v)) {
            meet = true;
            break;
          }
        if (!meet) continue;
        res.kind = FixSearchResult::Kind::Located;
        res.cell = {q, id};
        res.value_cell = c;
        res.notes.push_back("closed cell " + F.X.cell_label(q, id) +
                            " meets its value envelope at " +
                            F.Y.cell_label(c.first, c.second));
        res.notes.push_back(
            "location is evidence at this resolution; existence needs a "
            "nonvanishing determinate trace");
        return res;
      }
    }

  Ring R = Ring::Q();
  SubdivisionTower T = build_tower(F.X, R, scale.level_V);
  const GeomComplex& fine = T.level[scale.level_V];
  EnvCache env{&F, {}};
  bool first = true;
  for (int q = 0; q <= fine.top_degree(); ++q)
    for (int id = 0; id < fine.cell_count(q); ++id) {
      auto h = host_at(T, scale.level_V, {q, id}, 0);
      Rat d = set_distance(fine, q, id, F.Y, env.get(h));
      if (first || d < res.gap) {
        res.gap = d;
        first = false;
      }
    }
  Rat three(Rat(3) * scale.eps);
  if (!(res.gap > three)) {
    res.kind = FixSearchResult::Kind::Inconclusive;
    res.notes.push_back("no cell meets its value, and the gap " +
                        rat_str(res.gap) +
                        " does not clear three times the radius " +
                        rat_str(scale.eps));
    return res;
  }

  ApproximationCertificate cert =
      approximate(F, scale.level_U, scale.level_V, scale.eps);
  ApproximationAudit audit = verify_approximation(cert);
  bool moved = true;
  for (int q = 0; q <= fine.top_degree() && moved; ++q)
    for (int id = 0; id < fine.cell_count(q) && moved; ++id) {
      if (q >= static_cast<int>(cert.phi.deg.size())) continue;
      Chain col;
      col.degree = q;
      col.c = cert.phi.deg[q].col[id];
      if (col.zero()) continue;
      CellSet supp = chain_support_closure(F.Y, col);
      Rat d = set_distance(fine, q, id, F.Y, supp);
      if (!(d > scale.eps)) {
        moved = false;
        res.notes.push_back("certificate image of " + fine.cell_label(q, id) +
                            " stays within the radius");
      }
    }
  if (audit.ok && moved) {
    res.trace = lefschetz_of_certificate(cert);
    res.notes.push_back("every cell sits at least " + rat_str(res.gap) +
                        " from its value, above three times the radius " +
                        rat_str(scale.eps));
    res.notes.push_back(
        "audited certificate moves every cell beyond the radius; its trace "
        "is " +
        rat_str(res.trace));
    if (res.trace == 0) {
      res.kind = FixSearchResult::Kind::Refuted;
    } else {
      res.kind = FixSearchResult::Kind::Inconclusive;
      res.notes.push_back("separated certificate carries a nonzero trace");
    }
  } else {
    res.kind = FixSearchResult::Kind::Inconclusive;
    if (!audit.ok) res.notes.push_back("certificate audit failed");
  }
  return res;
}

}  // namespace chainfix
