#include "chainfix/realization.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <set>

#include "chainfix/lp.hpp"

namespace chainfix {

namespace {

std::string gname(const GridCell& c) {
  std::string s = "g";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) s += "_";
    s += std::to_string(c[i].j);
    s += c[i].interval ? "I" : "p";
  }
  return s;
}

std::string vname(int j) { return "v" + std::to_string(j); }

std::string ename(int jlo, int jhi) {
  return "v" + std::to_string(jlo) + "v" + std::to_string(jhi);
}

// facets with the cubical signs: the s-th interval axis contributes
// (-1)^s (hi - lo)
std::vector<std::pair<GridCell, int>> signed_facets(const GridCell& c) {
  std::vector<std::pair<GridCell, int>> out;
  int s = 0;
  for (size_t ax = 0; ax < c.size(); ++ax) {
    if (!c[ax].interval) continue;
    GridCell lo = c, hi = c;
    lo[ax] = {c[ax].j, false};
    hi[ax] = {c[ax].j + 1, false};
    int sign = (s % 2 == 0) ? 1 : -1;
    out.push_back({hi, sign});
    out.push_back({lo, -sign});
    ++s;
  }
  return out;
}

// every face of c, the cell itself included
std::vector<GridCell> all_faces(const GridCell& c) {
  std::vector<GridCell> out = {GridCell{}};
  for (const GridAxis& a : c) {
    std::vector<GridCell> next;
    next.reserve(out.size() * (a.interval ? 3 : 1));
    for (const GridCell& p : out) {
      GridCell x = p;
      x.push_back({a.j, false});
      next.push_back(std::move(x));
      if (a.interval) {
        GridCell y = p;
        y.push_back({a.j + 1, false});
        next.push_back(std::move(y));
        GridCell z = p;
        z.push_back({a.j, true});
        next.push_back(std::move(z));
      }
    }
    out = std::move(next);
  }
  return out;
}

void absorb(VerifyReport& into, const VerifyReport& part, const std::string& where) {
  for (const std::string& e : part.errors) into.fail(where + ": " + e);
}

// node ids grouped by dimension; the rank of a node within its dimension is
// its cell index in tildeK
std::vector<std::vector<int>> nodes_by_dim(const ComponentPoset& P) {
  std::vector<std::vector<int>> out;
  for (int j = 0; j < P.size(); ++j) {
    int q = P.dim_of(j);
    if (static_cast<int>(out.size()) <= q) out.resize(q + 1);
    out[q].push_back(j);
  }
  return out;
}

std::vector<int> node_ranks(const ComponentPoset& P) {
  std::vector<int> rank(P.size(), -1);
  auto byd = nodes_by_dim(P);
  for (const auto& layer : byd)
    for (int r = 0; r < static_cast<int>(layer.size()); ++r) rank[layer[r]] = r;
  return rank;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int a) {
    while (p[a] != a) {
      p[a] = p[p[a]];
      a = p[a];
    }
    return a;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

VerifyReport validate_body(const ConvexBody& X) {
  VerifyReport r;
  if (X.d < 1) r.fail("ambient dimension must be positive");
  if (X.generators.empty()) r.fail("no generators");
  if (X.sample.empty()) r.fail("empty sample");
  auto in_cube = [&](const std::vector<Rat>& p, const char* what) {
    if (static_cast<int>(p.size()) != X.d) {
      r.fail(std::string(what) + " with wrong dimension");
      return false;
    }
    for (const Rat& c : p)
      if (c < 0 || c > 1) {
        r.fail(std::string(what) + " outside the unit cube");
        return false;
      }
    return true;
  };
  for (const auto& g : X.generators) in_cube(g, "generator");
  bool shaped = true;
  for (const auto& p : X.sample) shaped = in_cube(p, "sample point") && shaped;
  if (!r.ok || !shaped) return r;
  int m = static_cast<int>(X.generators.size());
  for (size_t i = 0; i < X.sample.size(); ++i) {
    LinearProgram lp(m);
    for (int g = 0; g < m; ++g) {
      std::vector<Rat> row(m, Rat(0));
      row[g] = Rat(-1);
      lp.leq(row, Rat(0));
    }
    lp.eq(std::vector<Rat>(m, Rat(1)), Rat(1));
    for (int c = 0; c < X.d; ++c) {
      std::vector<Rat> row(m);
      for (int g = 0; g < m; ++g) row[g] = X.generators[g][c];
      lp.eq(row, X.sample[i][c]);
    }
    if (!lp_feasible(lp)) r.fail("sample point " + std::to_string(i) + " outside the hull");
  }
  return r;
}

RealizationParams choose_parameters(const ConvexBody& X, const Rat& eps) {
  CFX_INPUT(X.d >= 1, "ambient dimension must be positive");
  CFX_INPUT(eps > 0 && eps <= 1, "scale must lie in (0, 1]");
  RealizationParams par;
  par.eps = eps;
  par.eps1 = eps / 16;
  Rat target = par.eps1 / 8;
  par.delta = target;
  int n = 0;
  while (!(pow2(-n) < target)) {
    ++n;
    CFX_CHECK(n <= 512, "resolution search ran away");
  }
  par.n = n;
  int k = n + 2;
  while (!(pow2(n + 1 - k) < par.delta)) {
    ++k;
    CFX_CHECK(k <= 1024, "resolution search ran away");
  }
  par.k = k;
  par.trunc = std::max(k, X.d);
  return par;
}

bool convexity_certificate(const ConvexBody& X, const Rat& r, const Rat& bound,
                           int arity) {
  CFX_INPUT(arity >= 0, "negative arity");
  CFX_INPUT(r > 0 && bound > 0, "radius and bound must be positive");
  int m = arity + 1;  // tuple length
  for (const auto& x : X.sample) {
    std::vector<const std::vector<Rat>*> S;
    for (const auto& p : X.sample) {
      Rat d = l1w_dist(p, x);
      if (d < r) S.push_back(&p);
    }
    if (S.empty()) continue;
    long combos = 1;
    for (int t = 0; t < m; ++t) {
      combos *= static_cast<long>(S.size());
      CFX_INPUT(combos <= 20000, "certificate neighbourhood too large");
    }
    std::vector<std::vector<Rat>> weights;
    weights.push_back(std::vector<Rat>(m, Rat(1, m)));
    {
      std::vector<Rat> w(m, Rat(0));
      w[0] = Rat(1);
      weights.push_back(w);
    }
    if (m >= 2) {
      std::vector<Rat> w(m, Rat(0));
      w[0] = Rat(1, 2);
      w[1] = Rat(1, 2);
      weights.push_back(w);
      w[0] = Rat(3, 4);
      w[1] = Rat(1, 4);
      weights.push_back(w);
    }
    if (m >= 3) {
      std::vector<Rat> w(m, Rat(0));
      w[0] = Rat(1, 2);
      w[1] = Rat(1, 4);
      w[2] = Rat(1, 4);
      weights.push_back(w);
    }
    std::vector<std::vector<Rat>> pts;
    std::vector<int> odo(m, 0);
    while (true) {
      for (const auto& w : weights) {
        std::vector<Rat> pt(X.d, Rat(0));
        for (int t = 0; t < m; ++t)
          for (int c = 0; c < X.d; ++c) {
            Rat v = pt[c] + w[t] * (*S[odo[t]])[c];
            pt[c] = v;
          }
        pts.push_back(std::move(pt));
      }
      int t = m - 1;
      while (t >= 0 && odo[t] + 1 == static_cast<int>(S.size())) odo[t--] = 0;
      if (t < 0) break;
      ++odo[t];
    }
    Rat diam = l1w_diam(pts);
    if (!(diam < bound)) return false;
  }
  return true;
}

GridPair build_N_M_pi(const ConvexBody& X, const RealizationParams& par) {
  CFX_INPUT(X.d >= 1, "ambient dimension must be positive");
  CFX_INPUT(!X.sample.empty(), "empty sample");
  for (const auto& p : X.sample)
    CFX_INPUT(static_cast<int>(p.size()) == X.d, "sample point with wrong dimension");
  GridPair g;
  g.mN = std::min(par.n, X.d);
  g.mM = std::min(par.k, X.d);
  g.N = grid_subcomplex_from_sample(X.sample, g.mN, par.k);
  g.M = grid_subcomplex_from_sample(X.sample, g.mM, par.k);
  for (int q = 0; q <= g.M.top_degree(); ++q)
    for (const GridCell& c : g.M.cells[q])
      CFX_CHECK(g.N.id_of.count(project_cell(c, g.mN)) == 1,
                "projection of a cell escapes the coarse grid");
  return g;
}

GridCell project_cell(const GridCell& tau, int mN) {
  int m = std::min<int>(mN, static_cast<int>(tau.size()));
  return GridCell(tau.begin(), tau.begin() + m);
}

bool ComponentPoset::leq(int a, int b) const {
  return std::binary_search(below[b].begin(), below[b].end(), a);
}

ComponentPoset build_component_poset(const GridPair& G) {
  const CubicalComplex& N = G.N;
  const CubicalComplex& M = G.M;
  ComponentPoset P;
  std::map<GridCell, std::vector<GridCell>> bysig;
  for (int q = 0; q <= M.top_degree(); ++q)
    for (const GridCell& c : M.cells[q]) {
      GridCell pre(c.begin(), c.begin() + G.mN);
      GridCell suf(c.begin() + G.mN, c.end());
      bysig[pre].push_back(std::move(suf));
    }
  P.comp_of.resize(N.top_degree() + 1);
  for (int q = 0; q <= N.top_degree(); ++q) {
    P.comp_of[q].resize(N.cell_count(q));
    for (int i = 0; i < N.cell_count(q); ++i) {
      const GridCell& sigma = N.cells[q][i];
      auto it = bysig.find(sigma);
      CFX_CHECK(it != bysig.end(), "grid cell with an empty fibre");
      std::vector<GridCell> L = it->second;
      std::sort(L.begin(), L.end());
      L.erase(std::unique(L.begin(), L.end()), L.end());
      int m = static_cast<int>(L.size());
      UnionFind uf(m);
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
          if (grid_cell_face(L[a], L[b]) || grid_cell_face(L[b], L[a]))
            uf.unite(a, b);
      std::map<int, int> cid;
      std::vector<std::vector<GridCell>> comps;
      for (int a = 0; a < m; ++a) {
        int root = uf.find(a);
        auto c = cid.find(root);
        if (c == cid.end()) {
          c = cid.insert({root, static_cast<int>(comps.size())}).first;
          comps.push_back({});
        }
        comps[c->second].push_back(L[a]);
        P.comp_of[q][i][L[a]] = c->second;
      }
      for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
        P.id_of[{{q, i}, c}] = P.size();
        P.nodes.push_back({q, i, c, comps[c]});
      }
    }
  }
  P.below.resize(P.size());
  for (int j = 0; j < P.size(); ++j) {
    const auto& nd = P.nodes[j];
    const GridCell& sigma = N.cells[nd.q][nd.sigma];
    for (const GridCell& f : all_faces(sigma)) {
      auto fi = N.id_of.find(f);
      CFX_CHECK(fi != N.id_of.end(), "face escapes the coarse grid");
      const auto& cm = P.comp_of[fi->second.first][fi->second.second];
      int comp = -1;
      for (const GridCell& s : nd.suffixes) {
        auto c = cm.find(s);
        CFX_CHECK(c != cm.end(), "fibre cell missing over a face");
        if (comp < 0)
          comp = c->second;
        else
          CFX_CHECK(c->second == comp, "fibre component splits over a face");
      }
      P.below[j].push_back(P.id_of.at({{fi->second.first, fi->second.second}, comp}));
    }
    std::sort(P.below[j].begin(), P.below[j].end());
    CFX_CHECK(std::adjacent_find(P.below[j].begin(), P.below[j].end()) ==
                  P.below[j].end(),
              "two faces resolve to one node");
  }
  return P;
}

VerifyReport audit_poset(const ComponentPoset& P, long cap) {
  VerifyReport r;
  for (int j = 0; j < P.size(); ++j) {
    const auto& b = P.below[j];
    if (!std::is_sorted(b.begin(), b.end()) ||
        std::adjacent_find(b.begin(), b.end()) != b.end()) {
      r.fail("unsorted face list at node " + std::to_string(j));
      continue;
    }
    if (!P.leq(j, j)) r.fail("node " + std::to_string(j) + " not below itself");
    long want = 1;
    for (int t = 0; t < P.nodes[j].q; ++t) want *= 3;
    if (static_cast<long>(b.size()) != want)
      r.fail("face resolution not unique at node " + std::to_string(j));
    for (int j2 : b)
      if (j2 != j && P.leq(j, j2))
        r.fail("nodes " + std::to_string(j) + " and " + std::to_string(j2) +
               " below each other");
    auto key = std::make_pair(std::make_pair(P.nodes[j].q, P.nodes[j].sigma),
                              P.nodes[j].comp);
    auto it = P.id_of.find(key);
    if (it == P.id_of.end() || it->second != j)
      r.fail("node index mismatch at " + std::to_string(j));
  }
  long done = 0;
  for (int j = 0; j < P.size() && done <= cap; ++j)
    for (int j1 : P.below[j]) {
      if (done > cap) break;
      for (int j2 : P.below[j1]) {
        if (++done > cap) break;
        if (!P.leq(j2, j))
          r.fail("order not transitive through " + std::to_string(j1));
      }
    }
  return r;
}

KComplexData build_K(const GridPair& G, const ComponentPoset& P) {
  int nn = P.size();
  std::vector<std::vector<Rat>> verts(nn, std::vector<Rat>(nn, Rat(0)));
  for (int j = 0; j < nn; ++j) verts[j][j] = Rat(1);
  std::vector<std::vector<int>> above(nn);
  for (int j = 0; j < nn; ++j)
    for (int j1 : P.below[j])
      if (j1 != j) above[j1].push_back(j);
  std::vector<std::vector<int>> chains;
  std::vector<int> path;
  auto walk = [&](auto&& self, int j) -> void {
    path.push_back(j);
    chains.push_back(path);
    CFX_CHECK(static_cast<int>(path.size()) <= G.mN + 1, "chain outgrows the grid");
    for (int j2 : above[j]) self(self, j2);
    path.pop_back();
  };
  for (int j = 0; j < nn; ++j) walk(walk, j);
  KComplexData KD;
  KD.K = make_complex(nn, std::move(verts), chains);
  KD.q_image.resize(nn);
  for (int j = 0; j < nn; ++j) KD.q_image[j] = {P.nodes[j].q, P.nodes[j].sigma};
  return KD;
}

CoverG build_covering_G(const ConvexBody& X, const GridPair& G,
                        const ComponentPoset& P, const RealizationParams& par) {
  int ns = static_cast<int>(X.sample.size());
  CFX_INPUT(ns > 0, "empty sample");
  std::vector<std::pair<int, int>> preid(ns);
  std::vector<GridCell> suf(ns);
  for (int i = 0; i < ns; ++i) {
    GridCell t = open_cell_of_point(X.sample[i], G.mM, par.k);
    GridCell pre = project_cell(t, G.mN);
    suf[i] = GridCell(t.begin() + G.mN, t.end());
    auto it = G.N.id_of.find(pre);
    CFX_CHECK(it != G.N.id_of.end(), "sample escapes the grid");
    preid[i] = it->second;
  }
  int maxq = G.N.top_degree();
  Rat two_n = Rat(2) * pow2(-par.n);
  for (int t = 0; t <= 40; ++t) {
    CoverG out;
    out.G.members.assign(P.size(), {});
    out.retained.assign(P.size(), {});
    out.rho.assign(maxq + 1, Rat(0));
    out.retries = t;
    std::vector<char> covered(ns, 0);
    for (int r = 0; r <= maxq; ++r) {
      std::vector<int> stratum;
      for (int i = 0; i < ns; ++i) {
        if (covered[i]) continue;
        CFX_CHECK(preid[i].first >= r, "uncovered point below its stratum");
        if (preid[i].first != r) continue;
        int comp = P.comp_of[r][preid[i].second].at(suf[i]);
        int j = P.id_of.at({{r, preid[i].second}, comp});
        if (out.retained[j].empty()) stratum.push_back(j);
        out.retained[j].push_back(i);
      }
      std::sort(stratum.begin(), stratum.end());
      std::optional<Rat> cand;
      auto consider = [&](const Rat& v) {
        if (!cand || v < *cand) cand = v;
      };
      for (size_t a = 0; a < stratum.size(); ++a)
        for (size_t b = a + 1; b < stratum.size(); ++b)
          for (int ia : out.retained[stratum[a]])
            for (int ib : out.retained[stratum[b]]) {
              Rat h = l1w_dist(X.sample[ia], X.sample[ib]) / 2;
              consider(h);
            }
      for (int j : stratum) {
        std::vector<std::vector<Rat>> pts;
        for (int i : out.retained[j]) pts.push_back(X.sample[i]);
        Rat diam = l1w_diam(pts);
        Rat slack = two_n - diam;
        CFX_CHECK(slack > 0, "stratum piece too wide");
        Rat quarter = slack / 4;
        consider(quarter);
      }
      Rat rho = cand ? Rat(*cand * pow2(-t)) : Rat(pow2(-par.n - 1 - t));
      out.rho[r] = rho;
      for (int j : stratum)
        for (int i : out.retained[j]) out.G.members[j].push_back(Ball{X.sample[i], rho});
      for (int i = 0; i < ns; ++i) {
        if (covered[i]) continue;
        for (int j : stratum)
          if (out.G.member_contains(j, X.sample[i])) {
            covered[i] = 1;
            break;
          }
      }
    }
    bool good = true;
    for (int a = 0; a < P.size() && good; ++a) {
      if (out.G.members[a].empty()) continue;
      for (int b = a + 1; b < P.size(); ++b) {
        if (out.G.members[b].empty() || P.comparable(a, b)) continue;
        if (out.G.members_meet(a, b)) {
          good = false;
          break;
        }
      }
    }
    if (!good) continue;
    out.diam_bound.assign(P.size(), Rat(0));
    for (int j = 0; j < P.size(); ++j) {
      if (out.G.members[j].empty()) continue;
      Rat db = out.G.member_diam_bound(j);
      CFX_CHECK(db < two_n, "covering member too wide");
      out.diam_bound[j] = db;
    }
    CFX_CHECK(out.G.covers(X.sample), "sample escapes its own covering");
    return out;
  }
  throw InputError("no admissible covering radius after 40 retries");
}

CoverV build_covering_V(const CoverG& G, const KComplexData& KD) {
  const GeomComplex& K = KD.K;
  CoverV V;
  V.nonempty.resize(K.top_degree() + 1);
  for (int q = 0; q <= K.top_degree(); ++q) {
    V.nonempty[q].assign(K.cell_count(q), 0);
    for (int id = 0; id < K.cell_count(q); ++id) {
      const auto& verts = K.cell(q, id);
      bool ok = true;
      for (int v : verts)
        if (G.G.members[v].empty()) ok = false;
      for (size_t a = 0; a < verts.size() && ok; ++a)
        for (size_t b = a + 1; b < verts.size(); ++b)
          if (!G.G.members_meet(verts[a], verts[b])) {
            ok = false;
            break;
          }
      if (!ok) continue;
      if (q == 0) {
        V.nonempty[0][id] = 1;
        continue;
      }
      bool found = false;
      for (int v : verts) {
        for (const Ball& b : G.G.members[v]) {
          bool inside = true;
          for (int w : verts)
            if (!G.G.member_contains(w, b.center)) {
              inside = false;
              break;
            }
          if (inside) {
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (!found) {
        std::vector<const std::vector<Ball>*> fams;
        for (int v : verts) fams.push_back(&G.G.members[v]);
        found = unions_have_common_point(fams);
      }
      V.nonempty[q][id] = found ? 1 : 0;
    }
  }
  return V;
}

bool CoverV::contains(const CoverG& G, const GeomComplex& K, int q, int id,
                      const std::vector<Rat>& p) const {
  for (int v : K.cell(q, id))
    if (!G.G.member_contains(v, p)) return false;
  return true;
}

VerifyReport audit_V(const ConvexBody& X, const CoverG& G,
                     const KComplexData& KD, const CoverV& V,
                     const RealizationParams& par) {
  VerifyReport r;
  const GeomComplex& K = KD.K;
  std::vector<std::pair<int, int>> ne;
  for (int q = 0; q <= K.top_degree(); ++q)
    for (int id = 0; id < K.cell_count(q); ++id)
      if (V.nonempty[q][id]) ne.push_back({q, id});
  // members meeting outside a common simplex would break the nerve embedding
  for (size_t a = 0; a < ne.size(); ++a)
    for (size_t b = a + 1; b < ne.size(); ++b) {
      std::set<int> u;
      const auto& va = K.cell(ne[a].first, ne[a].second);
      const auto& vb = K.cell(ne[b].first, ne[b].second);
      u.insert(va.begin(), va.end());
      u.insert(vb.begin(), vb.end());
      std::vector<int> tup(u.begin(), u.end());
      if (K.find_cell(tup)) continue;
      bool disjoint = false;
      for (size_t x = 0; x < tup.size() && !disjoint; ++x)
        for (size_t y = x + 1; y < tup.size(); ++y)
          if (!G.G.members_meet(tup[x], tup[y])) {
            disjoint = true;
            break;
          }
      if (!disjoint) {
        std::vector<const std::vector<Ball>*> fams;
        for (int v : tup) fams.push_back(&G.G.members[v]);
        if (unions_have_common_point(fams))
          r.fail("members meet across " + K.cell_label(ne[a].first, ne[a].second) +
                 " and " + K.cell_label(ne[b].first, ne[b].second) +
                 " yet span no simplex");
      }
    }
  // each nonempty member fits into one eps-ball around a sample point
  Rat margin = pow2(-par.trunc);
  for (auto& [q, id] : ne) {
    bool cert = false;
    for (int v : K.cell(q, id)) {
      if (G.G.members[v].empty()) continue;
      const std::vector<Rat>& x = G.G.members[v][0].center;
      Rat worst(0);
      for (const Ball& b : G.G.members[v]) {
        Rat reach = l1w_dist(x, b.center) + b.radius;
        if (reach > worst) worst = reach;
      }
      Rat lhs = worst + margin;
      if (lhs < par.eps) {
        cert = true;
        break;
      }
    }
    if (!cert)
      r.fail("no ball certificate for " + K.cell_label(q, id));
  }
  return r;
}

std::vector<int> psi_carrier(const Realization& B, const std::vector<int>& tup) {
  std::vector<std::vector<Rat>> pts;
  pts.reserve(tup.size());
  for (int id : tup) pts.push_back(B.Xpts.point(id));
  std::vector<int> out;
  for (int j = 0; j < B.G.G.size(); ++j)
    if (B.G.G.member_ball_containing_all(j, pts)) out.push_back(j);
  return out;
}

namespace {

std::string tuple_text(const std::vector<int>& tup) {
  std::string s = "(";
  for (size_t i = 0; i < tup.size(); ++i) {
    if (i) s += " ";
    s += std::to_string(tup[i]);
  }
  return s + ")";
}

const std::pair<std::vector<int>, std::map<int, Chain>>& psi_tuple(
    Realization& B, const std::vector<int>& tup) {
  auto hit = B.psi_memo.find(tup);
  if (hit != B.psi_memo.end()) return hit->second;
  std::vector<int> car = psi_carrier(B, tup);
  CFX_INPUT(!car.empty(), "tuple " + tuple_text(tup) + " carried by no member");
  auto cid = B.KD.K.find_cell(car);
  CFX_CHECK(cid.has_value(), "carrier misses the order complex");
  int qs = static_cast<int>(car.size()) - 1;
  int bv = B.KS.bary_vertex.at({qs, *cid});
  int deg = static_cast<int>(tup.size()) - 1;
  Chain img{deg};
  if (deg == 0) {
    auto fid = B.KS.fine.find_cell({bv});
    CFX_CHECK(fid.has_value(), "barycenter missing from the subdivision");
    img.c[*fid] = Rat(1);
  } else {
    Chain target{deg - 1};
    for (size_t i = 0; i < tup.size(); ++i) {
      std::vector<int> face = tup;
      face.erase(face.begin() + i);
      const auto& sub = psi_tuple(B, face).second;
      auto it = sub.find(deg - 1);
      if (it == sub.end()) continue;
      Rat sign = (i % 2 == 0) ? Rat(1) : Rat(-1);
      target = chain_add(B.ring, target, chain_scale(B.ring, sign, it->second));
    }
    for (const auto& [fid, cf] : target.c) {
      const auto& verts = B.KS.fine.cells[deg - 1][fid];
      if (verts[0] == bv) continue;
      CFX_CHECK(verts[0] > bv, "carrier apex out of order");
      std::vector<int> nt;
      nt.reserve(verts.size() + 1);
      nt.push_back(bv);
      nt.insert(nt.end(), verts.begin(), verts.end());
      auto nid = B.KS.fine.find_cell(nt);
      CFX_CHECK(nid.has_value(), "cone cell missing from the subdivision");
      Rat v = B.ring.add(img.c[*nid], cf);
      if (v == 0)
        img.c.erase(*nid);
      else
        img.c[*nid] = v;
    }
  }
  std::map<int, Chain> out;
  if (!img.zero()) out[deg] = std::move(img);
  auto ins = B.psi_memo.emplace(tup, std::make_pair(std::move(car), std::move(out)));
  return ins.first->second;
}

}  // namespace

std::map<int, Chain> psi_apply(Realization& B, const AffChain& a) {
  std::map<int, Chain> acc;
  for (const auto& [tup, cf] : a.t) {
    const auto& img = psi_tuple(B, tup).second;
    for (const auto& [deg, ch] : img) {
      auto it = acc.find(deg);
      if (it == acc.end()) {
        acc[deg] = chain_scale(B.ring, cf, ch);
      } else {
        it->second = chain_add(B.ring, it->second, chain_scale(B.ring, cf, ch));
      }
    }
  }
  for (auto it = acc.begin(); it != acc.end();)
    it = it->second.zero() ? acc.erase(it) : std::next(it);
  return acc;
}

namespace {

void build_tilde(Realization& B) {
  const ComponentPoset& P = B.poset;
  B.tildeK = CellSystem(B.ring);
  for (int j = 0; j < P.size(); ++j) {
    const auto& nd = P.nodes[j];
    const GridCell& sigma = B.grids.N.cells[nd.q][nd.sigma];
    std::vector<std::pair<std::string, Rat>> bnd;
    for (const auto& [f, sg] : signed_facets(sigma)) {
      auto fi = B.grids.N.id_of.at(f);
      int comp = P.comp_of[fi.first][fi.second].at(nd.suffixes[0]);
      int jf = P.id_of.at({{fi.first, fi.second}, comp});
      bnd.push_back({"c" + std::to_string(jf), Rat(sg)});
    }
    B.tildeK.add(nd.q, "c" + std::to_string(j), bnd, Rat(1));
  }
  B.CtildeK = B.tildeK.freeze();
}

struct Tower {
  Restriction rst;
  std::unique_ptr<BoundarySolver> solver;
};

void build_nu(Realization& B) {
  const Ring& R = B.ring;
  const ComponentPoset& P = B.poset;
  std::vector<int> rank = node_ranks(P);
  int ftop = B.CKf.top_degree();
  B.j_of_fine.assign(ftop + 1, {});
  for (int q = 0; q <= ftop; ++q) {
    B.j_of_fine[q].resize(B.CKf.dims[q]);
    for (int id = 0; id < B.CKf.dims[q]; ++id) {
      const auto& verts = B.KS.fine.cells[q][id];
      auto vc = B.KS.vertex_cell[verts.back()];
      const auto& tup = B.KD.K.cells[vc.first][vc.second];
      int m = tup[0];
      for (int v : tup)
        if (P.leq(m, v)) m = v;
      B.j_of_fine[q][id] = m;
    }
  }
  std::map<int, Tower> towers;
  auto tower = [&](int j) -> Tower& {
    auto it = towers.find(j);
    if (it != towers.end()) return it->second;
    std::vector<std::vector<int>> keep(B.CtildeK.top_degree() + 1);
    for (int j2 : P.below[j]) keep[P.dim_of(j2)].push_back(rank[j2]);
    Tower t{restrict_chain(B.CtildeK, keep), nullptr};
    auto& slot = towers.emplace(j, std::move(t)).first->second;
    slot.solver = std::make_unique<BoundarySolver>(slot.rst.complex);
    return slot;
  };
  B.nu = ChainMorphism{};
  B.nu.src = &B.CKf;
  B.nu.dst = &B.CtildeK;
  B.nu.deg.resize(ftop + 1);
  std::vector<std::vector<Chain>> img(ftop + 1);
  for (int q = 0; q <= ftop; ++q) {
    B.nu.deg[q] = SparseMat(B.CtildeK.dim_at(q), B.CKf.dims[q]);
    img[q].resize(B.CKf.dims[q]);
    for (int id = 0; id < B.CKf.dims[q]; ++id) {
      int j = B.j_of_fine[q][id];
      Chain out{q};
      if (q == 0) {
        int j0 = P.below[j][0];
        CFX_CHECK(P.dim_of(j0) == 0, "tower without a vertex");
        out.c[rank[j0]] = Rat(1);
      } else {
        Chain target{q - 1};
        for (const auto& [row, cf] : B.CKf.boundary[q].col[id])
          target = chain_add(R, target, chain_scale(R, cf, img[q - 1][row]));
        Tower& tw = tower(j);
        Chain tl{q - 1};
        for (const auto& [gid, cf] : target.c) {
          auto it = tw.rst.local_of[q - 1].find(gid);
          CFX_CHECK(it != tw.rst.local_of[q - 1].end(),
                    "carrier violated below a cell");
          tl.c[it->second] = cf;
        }
        auto sol = tw.solver->solve(tl, q);
        CFX_CHECK(sol.has_value(), "no filler below the cell");
        for (const auto& [lid, cf] : sol->c) out.c[tw.rst.global_of[q][lid]] = cf;
      }
      img[q][id] = out;
      for (const auto& [row, cf] : out.c) B.nu.deg[q].set(R, row, id, cf);
    }
  }
}

struct PCellDesc {
  int kind = 0;  // 0 grid, 1 apex, 2 cone, 3 edge, 4 join
  GridCell cell;
  int j = -1, j2 = -1;
};

void build_bundle(Realization& B) {
  const Ring& R = B.ring;
  const ComponentPoset& P = B.poset;
  const CubicalComplex& M = B.grids.M;
  int nn = P.size();

  std::vector<std::vector<GridCell>> Qj(nn), Cset(nn);
  for (int j = 0; j < nn; ++j) {
    const auto& nd = P.nodes[j];
    const GridCell& sigma = B.grids.N.cells[nd.q][nd.sigma];
    std::vector<GridCell> S1;
    for (const GridCell& l : nd.suffixes)
      if (grid_cell_dim(l) <= 1) S1.push_back(l);
    std::set<GridCell> acc;
    for (const GridCell& f : all_faces(sigma))
      for (const GridCell& l : S1) {
        GridCell c = f;
        c.insert(c.end(), l.begin(), l.end());
        CFX_CHECK(M.id_of.count(c) == 1, "fibre cell escapes the fine grid");
        acc.insert(std::move(c));
      }
    Qj[j].assign(acc.begin(), acc.end());
  }
  for (int j = 0; j < nn; ++j) {
    std::set<GridCell> acc;
    for (int j2 : P.below[j]) acc.insert(Qj[j2].begin(), Qj[j2].end());
    Cset[j].assign(acc.begin(), acc.end());
  }

  CellSystem sys(R);
  std::vector<std::vector<PCellDesc>> desc;
  auto note_cell = [&](int dim, int idx, PCellDesc pc) {
    if (static_cast<int>(desc.size()) <= dim) desc.resize(dim + 1);
    if (static_cast<int>(desc[dim].size()) <= idx) desc[dim].resize(idx + 1);
    desc[dim][idx] = std::move(pc);
  };
  std::map<int, std::set<GridCell>> bydim;
  for (int j = 0; j < nn; ++j)
    for (const GridCell& c : Qj[j]) bydim[grid_cell_dim(c)].insert(c);
  int maxq = bydim.empty() ? 0 : bydim.rbegin()->first;
  for (int d = 0; d <= maxq; ++d)
    for (const GridCell& c : bydim[d]) {
      std::vector<std::pair<std::string, Rat>> bnd;
      for (const auto& [f, sg] : signed_facets(c)) bnd.push_back({gname(f), Rat(sg)});
      int idx = sys.add(d, gname(c), bnd, Rat(1));
      note_cell(d, idx, {0, c, -1, -1});
    }
  for (int j = 0; j < nn; ++j) {
    int idx = sys.add(0, vname(j), {}, Rat(1));
    note_cell(0, idx, {1, {}, j, -1});
  }
  for (int j = 0; j < nn; ++j)
    for (int j2 : P.below[j]) {
      if (j2 == j) continue;
      int idx = sys.add(1, ename(j2, j), {{vname(j), Rat(1)}, {vname(j2), Rat(-1)}});
      note_cell(1, idx, {3, {}, j2, j});
    }
  for (int level = 0; level <= maxq; ++level) {
    for (int j = 0; j < nn; ++j)
      for (const GridCell& c : Cset[j]) {
        if (grid_cell_dim(c) != level) continue;
        std::vector<std::pair<std::string, Rat>> bnd = {{gname(c), Rat(1)}};
        if (level == 0)
          bnd.push_back({vname(j), Rat(-1)});
        else
          for (const auto& [f, sg] : signed_facets(c))
            bnd.push_back({vname(j) + "." + gname(f), Rat(-sg)});
        int idx = sys.add(level + 1, vname(j) + "." + gname(c), bnd);
        note_cell(level + 1, idx, {2, c, j, -1});
      }
    for (int j = 0; j < nn; ++j)
      for (int j2 : P.below[j]) {
        if (j2 == j) continue;
        for (const GridCell& c : Cset[j2]) {
          if (grid_cell_dim(c) != level) continue;
          std::vector<std::pair<std::string, Rat>> bnd = {
              {vname(j) + "." + gname(c), Rat(1)},
              {vname(j2) + "." + gname(c), Rat(-1)}};
          if (level == 0)
            bnd.push_back({ename(j2, j), Rat(1)});
          else
            for (const auto& [f, sg] : signed_facets(c))
              bnd.push_back({ename(j2, j) + "." + gname(f), Rat(sg)});
          int idx = sys.add(level + 2, ename(j2, j) + "." + gname(c), bnd);
          note_cell(level + 2, idx, {4, c, j2, j});
        }
      }
  }
  B.P = sys;
  B.CP = B.P.freeze();
  int ptop = B.CP.top_degree();
  desc.resize(ptop + 1);

  B.Pi.assign(nn, {});
  B.Cj.assign(nn, {});
  for (int j = 0; j < nn; ++j) {
    std::vector<std::set<int>> pi(ptop + 1), cj(ptop + 1);
    for (const GridCell& c : Cset[j]) {
      auto ci = B.P.id(gname(c));
      cj[ci.first].insert(ci.second);
    }
    for (int j1 : P.below[j]) {
      pi[0].insert(B.P.id(vname(j1)).second);
      for (const GridCell& c : Cset[j1]) {
        auto ci = B.P.id(gname(c));
        pi[ci.first].insert(ci.second);
        auto co = B.P.id(vname(j1) + "." + gname(c));
        pi[co.first].insert(co.second);
      }
      for (int j0 : P.below[j1]) {
        if (j0 == j1) continue;
        pi[1].insert(B.P.id(ename(j0, j1)).second);
        for (const GridCell& c : Cset[j0]) {
          auto jo = B.P.id(ename(j0, j1) + "." + gname(c));
          pi[jo.first].insert(jo.second);
        }
      }
    }
    B.Pi[j].resize(ptop + 1);
    B.Cj[j].resize(ptop + 1);
    for (int d = 0; d <= ptop; ++d) {
      B.Pi[j][d].assign(pi[d].begin(), pi[d].end());
      B.Cj[j][d].assign(cj[d].begin(), cj[d].end());
    }
  }

  // tau, one node at a time, filling boundaries inside the tower
  std::vector<int> rank = node_ranks(P);
  auto byd = nodes_by_dim(P);
  int ttop = B.CtildeK.top_degree();
  B.tau = ChainMorphism{};
  B.tau.src = &B.CtildeK;
  B.tau.dst = &B.CP;
  B.tau.deg.resize(ttop + 1);
  for (int q = 0; q <= ttop; ++q)
    B.tau.deg[q] = SparseMat(B.CP.dim_at(q), B.CtildeK.dims[q]);
  std::vector<Chain> tauimg(nn);
  for (int q = 0; q < static_cast<int>(byd.size()); ++q)
    for (int r2 = 0; r2 < static_cast<int>(byd[q].size()); ++r2) {
      int j = byd[q][r2];
      Chain img{q};
      if (q == 0) {
        const GridCell* pick = nullptr;
        for (const GridCell& c : Qj[j])
          if (grid_cell_dim(c) == 0) {
            pick = &c;
            break;
          }
        CFX_CHECK(pick, "tower without a base vertex");
        img.c[B.P.id(gname(*pick)).second] = Rat(1);
      } else {
        Chain target{q - 1};
        for (const auto& [row, cf] : B.CtildeK.boundary[q].col[r2]) {
          int jf = byd[q - 1][row];
          target = chain_add(R, target, chain_scale(R, cf, tauimg[jf]));
        }
        Restriction rst = restrict_chain(B.CP, B.Pi[j]);
        BoundarySolver solver(rst.complex);
        Chain tl{q - 1};
        for (const auto& [gid, cf] : target.c) {
          auto it = rst.local_of[q - 1].find(gid);
          CFX_CHECK(it != rst.local_of[q - 1].end(), "boundary escapes the tower");
          tl.c[it->second] = cf;
        }
        auto sol = solver.solve(tl, q);
        CFX_CHECK(sol.has_value(), "no filler inside the tower");
        for (const auto& [lid, cf] : sol->c) img.c[rst.global_of[q][lid]] = cf;
      }
      tauimg[j] = img;
      for (const auto& [row, cf] : img.c) B.tau.deg[q].set(R, row, r2, cf);
    }

  // sample representative of every fine cell: the cell itself when occupied,
  // else the largest then earliest occupied cell around it
  std::map<GridCell, std::vector<int>> occ;
  for (int i = 0; i < static_cast<int>(B.body.sample.size()); ++i)
    occ[open_cell_of_point(B.body.sample[i], B.grids.mM, B.par.k)].push_back(i);
  B.x_of.assign(M.top_degree() + 1, {});
  for (int q = 0; q <= M.top_degree(); ++q) {
    B.x_of[q].assign(M.cell_count(q), -1);
    for (int i = 0; i < M.cell_count(q); ++i) {
      const GridCell& t = M.cells[q][i];
      auto it = occ.find(t);
      if (it != occ.end()) {
        B.x_of[q][i] = it->second[0];
        continue;
      }
      for (int d = M.top_degree(); d > q && B.x_of[q][i] < 0; --d)
        for (int s = 0; s < M.cell_count(d); ++s) {
          auto o = occ.find(M.cells[d][s]);
          if (o != occ.end() && grid_cell_face(t, M.cells[d][s])) {
            B.x_of[q][i] = o->second[0];
            break;
          }
        }
      CFX_CHECK(B.x_of[q][i] >= 0, "cell with no occupied cell around it");
    }
  }
  B.tau_of_j.assign(nn, {-1, -1});
  for (int j = 0; j < nn; ++j) {
    for (int d = 0; d <= ptop && B.tau_of_j[j].first < 0; ++d)
      if (!B.Cj[j][d].empty())
        B.tau_of_j[j] = M.id_of.at(desc[d][B.Cj[j][d][0]].cell);
    CFX_CHECK(B.tau_of_j[j].first >= 0, "empty tower base");
  }

  // mu with its point bookkeeping, and f on the points
  B.Ppts = PointStore(B.grids.mM + 1);
  B.f_img.clear();
  std::vector<int> apexpid(nn, -1);
  auto intern_pt = [&](std::vector<Rat> p, int fx) {
    int id = B.Ppts.intern(p);
    if (static_cast<int>(B.f_img.size()) <= id) B.f_img.resize(id + 1, -1);
    if (B.f_img[id] < 0) B.f_img[id] = fx;
    CFX_CHECK(B.f_img[id] == fx, "point with two images");
    return id;
  };
  B.mu.assign(ptop + 1, {});
  for (int d = 0; d <= ptop; ++d) B.mu[d].resize(B.CP.dims[d]);
  for (int d = 0; d <= ptop; ++d)
    for (int idx = 0; idx < B.CP.dims[d]; ++idx) {
      const PCellDesc& pc = desc[d][idx];
      AffChain a;
      if (pc.kind == 0) {
        std::vector<Rat> b = cell_barycenter(pc.cell, B.par.k);
        b.push_back(Rat(0));
        auto mi = M.id_of.at(pc.cell);
        int pid = intern_pt(std::move(b), B.x_of[mi.first][mi.second]);
        if (d == 0) {
          aff_add_term(R, a, {pid}, Rat(1));
        } else {
          AffChain bd;
          for (const auto& [f, sg] : signed_facets(pc.cell)) {
            auto fi = B.P.id(gname(f));
            bd = aff_add(R, bd, aff_scale(R, Rat(sg), B.mu[fi.first][fi.second]));
          }
          a = aff_cone(R, pid, bd);
        }
      } else if (pc.kind == 1) {
        const auto& nd = P.nodes[pc.j];
        std::vector<Rat> b = cell_barycenter(B.grids.N.cells[nd.q][nd.sigma], B.par.k);
        b.resize(B.grids.mM, Rat(0));
        b.push_back(Rat(pc.j + 1));
        auto t = B.tau_of_j[pc.j];
        int pid = intern_pt(std::move(b), B.x_of[t.first][t.second]);
        apexpid[pc.j] = pid;
        aff_add_term(R, a, {pid}, Rat(1));
      } else if (pc.kind == 2) {
        auto ci = B.P.id(gname(pc.cell));
        a = aff_cone(R, apexpid[pc.j], B.mu[ci.first][ci.second]);
      } else if (pc.kind == 3) {
        aff_add_term(R, a, {apexpid[pc.j], apexpid[pc.j2]}, Rat(1));
      } else {
        auto ci = B.P.id(gname(pc.cell));
        AffChain inner = aff_cone(R, apexpid[pc.j2], B.mu[ci.first][ci.second]);
        a = aff_cone(R, apexpid[pc.j], inner);
      }
      B.mu[d][idx] = std::move(a);
    }

  // zeta on every fine generator, pushed to the sample points
  int ftop = B.CKf.top_degree();
  B.zeta.assign(ftop + 1, {});
  for (int q = 0; q <= ftop; ++q) {
    B.zeta[q].resize(B.CKf.dims[q]);
    for (int id = 0; id < B.CKf.dims[q]; ++id) {
      Chain tc{q};
      for (const auto& [row, cf] : B.nu.deg[q].col[id]) tc.c[row] = cf;
      Chain pch = mat_apply(R, B.tau.deg[q], tc, q);
      AffChain pa;
      for (const auto& [cid, cf] : pch.c)
        pa = aff_add(R, pa, aff_scale(R, cf, B.mu[q][cid]));
      AffChain out;
      for (const auto& [tup, cf] : pa.t) {
        std::vector<int> mapped;
        mapped.reserve(tup.size());
        for (int pid : tup) mapped.push_back(B.f_img[pid]);
        aff_add_term(R, out, mapped, cf);
      }
      B.zeta[q][id] = std::move(out);
    }
  }

  B.Wset.assign(nn, {});
  B.diamW.assign(nn, Rat(0));
  for (int j = 0; j < nn; ++j) {
    std::set<int> w;
    for (int d = 0; d <= ptop; ++d)
      for (int idx : B.Cj[j][d]) {
        auto mi = M.id_of.at(desc[d][idx].cell);
        w.insert(B.x_of[mi.first][mi.second]);
      }
    B.Wset[j].assign(w.begin(), w.end());
    std::vector<std::vector<Rat>> pts;
    for (int i : B.Wset[j]) pts.push_back(B.body.sample[i]);
    B.diamW[j] = l1w_diam(pts);
  }
}

void rebind(Realization& B) {
  B.nu.src = &B.CKf;
  B.nu.dst = &B.CtildeK;
  B.tau.src = &B.CtildeK;
  B.tau.dst = &B.CP;
}

}  // namespace

Realization build_realization(const ConvexBody& X, const Rat& eps, const Ring& R) {
  VerifyReport vb = validate_body(X);
  CFX_INPUT(vb.ok, vb.errors.empty() ? "invalid body" : vb.errors[0]);
  Realization B;
  B.body = X;
  B.ring = R;
  B.par = choose_parameters(X, eps);
  B.grids = build_N_M_pi(X, B.par);
  B.poset = build_component_poset(B.grids);
  B.KD = build_K(B.grids, B.poset);
  B.CK = chain_complex_of(B.KD.K, R);
  B.KS = barycentric_subdivision(B.KD.K);
  B.CKf = chain_complex_of(B.KS.fine, R);
  B.G = build_covering_G(X, B.grids, B.poset, B.par);
  B.V = build_covering_V(B.G, B.KD);
  B.Xpts = PointStore(X.d);
  for (const auto& p : X.sample) B.Xpts.intern(p);
  build_tilde(B);
  build_nu(B);
  build_bundle(B);
  return B;
}

VerifyReport audit_realization(Realization& B) {
  rebind(B);
  const Ring& R = B.ring;
  const ComponentPoset& P = B.poset;
  VerifyReport r;
  absorb(r, verify_complex(B.CtildeK), "cell model");
  absorb(r, verify_complex(B.CP), "tower complex");
  absorb(r, verify_morphism(B.nu), "projection to the cell model");
  absorb(r, verify_morphism(B.tau), "lift into the towers");

  auto byd = nodes_by_dim(P);
  std::vector<int> rank = node_ranks(P);
  int ftop = B.CKf.top_degree();
  for (int q = 0; q <= ftop; ++q)
    for (int id = 0; id < B.CKf.dims[q]; ++id)
      for (const auto& [row, cf] : B.nu.deg[q].col[id])
        if (!P.leq(byd[q][row], B.j_of_fine[q][id]))
          r.fail("projection escapes its carrier at a fine cell");
  for (int j = 0; j < P.size(); ++j) {
    int q = P.dim_of(j);
    for (const auto& [row, cf] : B.tau.deg[q].col[rank[j]])
      if (!std::binary_search(B.Pi[j][q].begin(), B.Pi[j][q].end(), row))
        r.fail("lift escapes the tower of node " + std::to_string(j));
  }

  int ptop = B.CP.top_degree();
  for (int d = 0; d <= ptop; ++d)
    for (int idx = 0; idx < B.CP.dims[d]; ++idx) {
      if (d == 0) {
        Rat got = aff_augment(R, B.mu[0][idx]);
        if (got != B.CP.augmentation[idx])
          r.fail("affine model breaks augmentation at " + B.CP.cell_name(0, idx));
        continue;
      }
      AffChain lhs = aff_boundary(R, B.mu[d][idx]);
      AffChain rhs;
      for (const auto& [row, cf] : B.CP.boundary[d].col[idx])
        rhs = aff_add(R, rhs, aff_scale(R, cf, B.mu[d - 1][row]));
      if (!aff_eq(lhs, rhs))
        r.fail("affine model breaks the boundary at " + B.CP.cell_name(d, idx));
    }

  for (int q = 0; q <= ftop; ++q)
    for (int id = 0; id < B.CKf.dims[q]; ++id) {
      if (q == 0) {
        Rat got = aff_augment(R, B.zeta[0][id]);
        if (got != Rat(1)) r.fail("composite map breaks augmentation");
        continue;
      }
      AffChain lhs = aff_boundary(R, B.zeta[q][id]);
      AffChain rhs;
      for (const auto& [row, cf] : B.CKf.boundary[q].col[id])
        rhs = aff_add(R, rhs, aff_scale(R, cf, B.zeta[q - 1][row]));
      if (!aff_eq(lhs, rhs)) r.fail("composite map breaks the boundary");
    }

  const CubicalComplex& M = B.grids.M;
  for (int q = 0; q <= M.top_degree(); ++q)
    for (int i = 0; i < M.cell_count(q); ++i) {
      GridCell oc = open_cell_of_point(B.body.sample[B.x_of[q][i]], B.grids.mM,
                                       B.par.k);
      if (!grid_cell_face(M.cells[q][i], oc))
        r.fail("representative escapes its cell at " + M.cell_label(q, i));
    }

  // the parameter ladder
  const RealizationParams& par = B.par;
  {
    Rat e16 = par.eps / 16;
    if (par.eps1 != e16) r.fail("wrong scale subdivision");
    Rat d8 = par.eps1 / 8;
    if (par.delta != d8) r.fail("wrong separation threshold");
    if (!(pow2(-par.n) < d8)) r.fail("coarse resolution too low");
    if (par.n > 0 && pow2(-(par.n - 1)) < d8) r.fail("coarse resolution not minimal");
    if (!(pow2(par.n + 1 - par.k) < par.delta)) r.fail("fine resolution too low");
    if (par.trunc != std::max(par.k, B.body.d)) r.fail("wrong coordinate horizon");
    Rat f4 = Rat(4) * pow2(-par.n);
    Rat e12 = par.eps1 / 2;
    if (!(f4 < e12)) r.fail("grid scale too coarse against the mesh bound");
    for (int j = 0; j < P.size(); ++j) {
      if (!(B.diamW[j] < f4))
        r.fail("image spread too wide at node " + std::to_string(j));
      if (!(B.diamW[j] < par.eps1))
        r.fail("image spread beats the mesh at node " + std::to_string(j));
      Rat e2 = par.eps / 2;
      if (!(B.diamW[j] < e2))
        r.fail("image spread beats the scale at node " + std::to_string(j));
    }
    Rat nb = pow2(-par.n) + pow2(-par.k);
    for (int q = 0; q <= B.grids.N.top_degree(); ++q)
      for (const GridCell& c : B.grids.N.cells[q]) {
        Rat pd = preimage_diam_bound(c, par.k, B.body.d);
        if (!(pd < nb)) r.fail("coarse cell preimage too wide");
      }
    Rat mb = Rat(2) * pow2(-par.k);
    for (int q = 0; q <= M.top_degree(); ++q)
      for (const GridCell& c : M.cells[q]) {
        Rat pd = preimage_diam_bound(c, par.k, B.body.d);
        if (!(pd < mb)) r.fail("fine cell preimage too wide");
      }
  }

  // covering invariants
  {
    Rat two_n = Rat(2) * pow2(-par.n);
    for (int a = 0; a < P.size(); ++a) {
      if (B.G.G.members[a].empty() != B.G.retained[a].empty())
        r.fail("member and retained set disagree at node " + std::to_string(a));
      if (B.G.G.members[a].empty()) continue;
      if (!(B.G.diam_bound[a] < two_n))
        r.fail("covering member too wide at node " + std::to_string(a));
      for (const Ball& bl : B.G.G.members[a])
        if (bl.radius != B.G.rho[P.dim_of(a)])
          r.fail("ball radius off its stratum at node " + std::to_string(a));
      for (int b = a + 1; b < P.size(); ++b) {
        if (B.G.G.members[b].empty() || P.comparable(a, b)) continue;
        if (B.G.G.members_meet(a, b))
          r.fail("incomparable members meet: " + std::to_string(a) + ", " +
                 std::to_string(b));
      }
    }
    if (!B.G.G.covers(B.body.sample)) r.fail("sample escapes the covering");
  }
  return r;
}

Thm2Report verify_theorem2(Realization& B) {
  rebind(B);
  const Ring& R = B.ring;
  const ComponentPoset& P = B.poset;
  const GeomComplex& K = B.KD.K;
  Thm2Report T;
  Rat margin = pow2(-B.par.trunc);
  Rat eps = B.par.eps;
  Rat half = eps / 2;
  int ns = static_cast<int>(B.body.sample.size());

  // anchor of a simplex: first retained point of its top vertex
  auto anchor = [&](int q, int id) -> int {
    const auto& verts = K.cell(q, id);
    int jr = verts[0];
    for (int v : verts)
      if (P.leq(jr, v)) jr = v;
    CFX_CHECK(!B.G.retained[jr].empty(), "anchored at an empty member");
    return B.G.retained[jr][0];
  };

  // witness tuples: all sampled points, pairs, and small instances of triples
  std::vector<std::vector<int>> tuples;
  for (int i = 0; i < ns; ++i) tuples.push_back({i});
  for (int i = 0; i < ns; ++i)
    for (int j = i; j < ns; ++j) tuples.push_back({i, j});
  if (ns <= 16)
    for (int i = 0; i < ns; ++i)
      for (int j = i; j < ns; ++j)
        for (int l = j; l < ns; ++l) tuples.push_back({i, j, l});
  std::vector<std::vector<int>> carriers(tuples.size());
  std::vector<char> carried(tuples.size(), 0);
  for (size_t t = 0; t < tuples.size(); ++t) {
    carriers[t] = psi_carrier(B, tuples[t]);
    carried[t] = carriers[t].empty() ? 0 : 1;
  }
  auto image_of = [&](const std::vector<int>& tup) {
    AffChain a;
    aff_add_term(R, a, tup, Rat(1));
    return psi_apply(B, a);
  };

  bool okA = true, okB = true, okC = true, okD = true;
  long piece_cells = 0;
  int piece_members = 0;

  std::vector<std::vector<std::vector<int>>> trails;  // aligned with nonempty list
  std::vector<std::pair<int, int>> ne;
  for (int q = 0; q <= K.top_degree(); ++q)
    for (int id = 0; id < K.cell_count(q); ++id)
      if (B.V.nonempty[q][id]) ne.push_back({q, id});
  piece_members = static_cast<int>(ne.size());

  std::vector<std::vector<char>> inL(B.CKf.top_degree() + 1);
  for (int q = 0; q <= B.CKf.top_degree(); ++q) inL[q].assign(B.CKf.dims[q], 0);

  for (auto& [q, id] : ne) {
    int xi = anchor(q, id);
    const std::vector<Rat>& xs = B.body.sample[xi];
    const auto& verts = K.cell(q, id);
    int jr = verts[0];
    for (int v : verts)
      if (P.leq(jr, v)) jr = v;
    for (const Ball& bl : B.G.G.members[jr]) {
      Rat reach = l1w_dist(xs, bl.center) + bl.radius + margin;
      if (!(reach < eps)) {
        okA = false;
        T.notes.push_back("no ball certificate at " + K.cell_label(q, id));
      }
    }
    auto trail = trail_cells(K, B.KS, q, id);
    for (auto& layer : trail) std::sort(layer.begin(), layer.end());
    for (int d = 0; d < static_cast<int>(trail.size()); ++d)
      for (int fid : trail[d]) {
        if (!inL[d][fid]) ++piece_cells;
        inL[d][fid] = 1;
        for (const auto& [tup, cf] : B.zeta[d][fid].t)
          for (int pt : tup) {
            Rat dd = l1w_dist(xs, B.body.sample[pt]) + margin;
            if (!(dd < eps)) {
              okA = false;
              T.notes.push_back("image drifts off " + K.cell_label(q, id));
            }
          }
      }
    for (size_t t = 0; t < tuples.size(); ++t) {
      if (!carried[t]) continue;
      bool inside = true;
      for (int pt : tuples[t])
        if (!B.V.contains(B.G, K, q, id, B.body.sample[pt])) {
          inside = false;
          break;
        }
      if (!inside) continue;
      if (!std::includes(carriers[t].begin(), carriers[t].end(), verts.begin(),
                         verts.end()))
        continue;
      auto img = image_of(tuples[t]);
      for (const auto& [d, ch] : img)
        for (const auto& [fid, cf] : ch.c)
          if (!std::binary_search(trail[d].begin(), trail[d].end(), fid)) {
            okA = false;
            T.notes.push_back("projection leaves the trail of " +
                              K.cell_label(q, id));
          }
    }
  }
  T.carriers = okA;

  for (int q = 0; q <= B.CKf.top_degree(); ++q)
    for (int id = 0; id < B.CKf.dims[q]; ++id) {
      int j = B.j_of_fine[q][id];
      auto tj = B.tau_of_j[j];
      int wi = B.x_of[tj.first][tj.second];
      const std::vector<Rat>& wp = B.body.sample[wi];
      Rat spread = B.diamW[j] + margin;
      if (!(spread < half)) {
        okB = false;
        T.notes.push_back("tower image too wide at node " + std::to_string(j));
      }
      if (!std::binary_search(B.Wset[j].begin(), B.Wset[j].end(), wi)) okB = false;
      Chain unit{q};
      unit.c[id] = Rat(1);
      for (auto& [cq, cid] : chain_support_closure(B.KS.fine, unit))
        for (const auto& [tup, cf] : B.zeta[cq][cid].t)
          for (int pt : tup) {
            if (!std::binary_search(B.Wset[j].begin(), B.Wset[j].end(), pt)) {
              okB = false;
              T.notes.push_back("face image escapes the tower ledger");
            }
            Rat dd = l1w_dist(wp, B.body.sample[pt]) + margin;
            if (!(dd < half)) {
              okB = false;
              T.notes.push_back("face image drifts from its witness");
            }
          }
    }
  T.cells = okB;

  Rat reach3 = Rat(3) * pow2(-B.par.n) + half;
  if (!(reach3 < eps)) {
    okC = false;
    T.notes.push_back("composite reach exceeds the scale");
  }
  for (size_t t = 0; t < tuples.size(); ++t) {
    if (!carried[t]) continue;
    auto cid = K.find_cell(carriers[t]);
    CFX_CHECK(cid.has_value(), "carrier misses the order complex");
    int xi = anchor(static_cast<int>(carriers[t].size()) - 1, *cid);
    const std::vector<Rat>& xs = B.body.sample[xi];
    for (int pt : tuples[t]) {
      Rat dd = l1w_dist(xs, B.body.sample[pt]) + margin;
      if (!(dd < eps)) {
        okC = false;
        T.notes.push_back("witness tuple drifts from its anchor");
      }
    }
    auto img = image_of(tuples[t]);
    for (const auto& [d, ch] : img)
      for (const auto& [fid, cf] : ch.c) {
        for (const auto& [tup, cf2] : B.zeta[d][fid].t)
          for (int pt : tup) {
            Rat dd = l1w_dist(xs, B.body.sample[pt]) + margin;
            if (!(dd < reach3)) {
              okC = false;
              T.notes.push_back("composite image drifts from its anchor");
            }
          }
        if (!inL[d][fid]) {
          okD = false;
          T.notes.push_back("projection leaves the finite piece");
        }
      }
  }
  T.composite = okC;
  T.finite_piece = okD;
  T.notes.push_back("piece: " + std::to_string(piece_members) + " members, " +
                    std::to_string(piece_cells) + " cells, " +
                    std::to_string(tuples.size()) + " tuples");
  return T;
}

RetractionReport check_algebraic_retraction(
    const Ring& R, const GeomComplex& U,
    const std::vector<std::pair<int, int>>& Acells, const BallCover& cover,
    const std::function<AffChain(const AffChain&)>& op, PointStore& pts,
    const std::vector<std::pair<std::vector<Rat>, Rat>>& neighborhoods) {
  RetractionReport rep;
  TuplePred small = cover_small_pred(pts, cover);
  rep.identity_ok = true;
  for (const auto& [q, id] : Acells) {
    CFX_INPUT(q >= 0 && q <= U.top_degree() && id >= 0 && id < U.cell_count(q),
              "cell outside the complex");
    Chain unit{q};
    unit.c[id] = Rat(1);
    AffChain a = affine_of_cells(R, pts, U, unit, q);
    for (const auto& [tup, cf] : a.t)
      if (!small(tup)) {
        rep.identity_ok = false;
        rep.notes.push_back("cell " + U.cell_label(q, id) + " is not small");
      }
    if (!aff_eq(op(a), a)) {
      rep.identity_ok = false;
      rep.notes.push_back("operator moves " + U.cell_label(q, id));
    }
  }
  rep.neighborhoods_ok = true;
  for (const auto& [x, V] : neighborhoods) {
    Rat chosen(0);
    for (int t = 1; t <= 5 && chosen == 0; ++t) {
      Rat W = V * pow2(-t);
      bool ok = true;
      for (int q = 0; q <= U.top_degree() && ok; ++q)
        for (int id = 0; id < U.cell_count(q) && ok; ++id) {
          Chain unit{q};
          unit.c[id] = Rat(1);
          AffChain a = affine_of_cells(R, pts, U, unit, q);
          bool inside = true;
          for (const auto& [tup, cf] : a.t)
            for (int pid : tup) {
              Rat d = l1w_dist(pts.point(pid), x);
              if (!(d < W)) inside = false;
            }
          if (!inside) continue;
          AffChain img = op(a);
          for (const auto& [tup, cf] : img.t)
            for (int pid : tup) {
              Rat d = l1w_dist(pts.point(pid), x);
              if (!(d < V)) ok = false;
            }
        }
      if (ok) chosen = W;
    }
    rep.chosen_W.push_back(chosen);
    if (chosen == 0) {
      rep.neighborhoods_ok = false;
      rep.notes.push_back("no stable radius for a neighborhood");
    }
  }
  return rep;
}

}  // namespace chainfix
