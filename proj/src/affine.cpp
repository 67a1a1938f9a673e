#include "chainfix/affine.hpp"

#include <algorithm>
#include <set>

#include "chainfix/lp.hpp"

namespace chainfix {

int PointStore::intern(const std::vector<Rat>& p) {
  CFX_INPUT(static_cast<int>(p.size()) == ambient,
            "point dimension does not match the store");
  auto it = ids.find(p);
  if (it != ids.end()) return it->second;
  int id = static_cast<int>(pts.size());
  pts.push_back(p);
  ids.emplace(p, id);
  return id;
}

void aff_add_term(const Ring& R, AffChain& a, const std::vector<int>& tup,
                  const Rat& v) {
  Rat nv = R.normalize(v);
  if (nv == 0) return;
  auto it = a.t.find(tup);
  if (it == a.t.end()) {
    a.t.emplace(tup, nv);
    return;
  }
  Rat s = R.add(it->second, nv);
  if (s == 0)
    a.t.erase(it);
  else
    it->second = s;
}

AffChain aff_add(const Ring& R, const AffChain& a, const AffChain& b) {
  AffChain out = a;
  for (const auto& [tup, v] : b.t) aff_add_term(R, out, tup, v);
  return out;
}

AffChain aff_sub(const Ring& R, const AffChain& a, const AffChain& b) {
  AffChain out = a;
  for (const auto& [tup, v] : b.t) aff_add_term(R, out, tup, R.neg(v));
  return out;
}

AffChain aff_scale(const Ring& R, const Rat& s, const AffChain& a) {
  AffChain out;
  for (const auto& [tup, v] : a.t) aff_add_term(R, out, tup, R.mul(s, v));
  return out;
}

bool aff_eq(const AffChain& a, const AffChain& b) { return a.t == b.t; }

AffChain aff_boundary(const Ring& R, const AffChain& a) {
  AffChain out;
  for (const auto& [tup, v] : a.t) {
    if (tup.size() < 2) continue;
    int sign = 1;
    for (size_t i = 0; i < tup.size(); ++i, sign = -sign) {
      std::vector<int> face;
      face.reserve(tup.size() - 1);
      for (size_t j = 0; j < tup.size(); ++j)
        if (j != i) face.push_back(tup[j]);
      aff_add_term(R, out, face, R.mul(Rat(sign), v));
    }
  }
  return out;
}

Rat aff_augment(const Ring& R, const AffChain& a) {
  Rat s(0);
  for (const auto& [tup, v] : a.t)
    if (tup.size() == 1) s = R.add(s, v);
  return s;
}

AffChain aff_cone(const Ring& R, int apex, const AffChain& a) {
  AffChain out;
  for (const auto& [tup, v] : a.t) {
    std::vector<int> coned;
    coned.reserve(tup.size() + 1);
    coned.push_back(apex);
    coned.insert(coned.end(), tup.begin(), tup.end());
    aff_add_term(R, out, coned, v);
  }
  return out;
}

namespace {

AffChain tuple_chain(const std::vector<int>& tup) {
  AffChain a;
  a.t[tup] = 1;
  return a;
}

int tuple_barycenter(PointStore& P, const std::vector<int>& tup) {
  std::vector<Rat> b(P.ambient, Rat(0));
  for (int id : tup) {
    const auto& p = P.point(id);
    for (int k = 0; k < P.ambient; ++k) {
      Rat s = b[k] + p[k];
      b[k] = s;
    }
  }
  Rat inv(1, static_cast<unsigned long>(tup.size()));
  for (int k = 0; k < P.ambient; ++k) {
    Rat s = b[k] * inv;
    b[k] = s;
  }
  return P.intern(b);
}

// Shared recursion state for the subdivision operators. `small` is absent
// for the plain barycentric subdivision (nothing is small, recursion runs
// to the vertices), present for the cover-relative one.
struct SdCtx {
  const Ring& R;
  PointStore& P;
  const TuplePred* small = nullptr;
  std::map<std::vector<int>, AffChain> sd, h;

  bool stop(const std::vector<int>& tup) {
    if (small == nullptr) return tup.size() == 1;
    if ((*small)(tup)) return true;
    CFX_INPUT(tup.size() > 1, "cover misses a vertex of the chain");
    return false;
  }

  AffChain sd_chain(const AffChain& a) {
    AffChain out;
    for (const auto& [tup, v] : a.t)
      out = aff_add(R, out, aff_scale(R, v, sd_tuple(tup)));
    return out;
  }

  const AffChain& sd_tuple(const std::vector<int>& tup) {
    auto it = sd.find(tup);
    if (it != sd.end()) return it->second;
    AffChain res;
    if (stop(tup)) {
      res = tuple_chain(tup);
    } else {
      int b = tuple_barycenter(P, tup);
      res = aff_cone(R, b, sd_chain(aff_boundary(R, tuple_chain(tup))));
    }
    return sd.emplace(tup, std::move(res)).first->second;
  }

  AffChain h_chain(const AffChain& a) {
    AffChain out;
    for (const auto& [tup, v] : a.t)
      out = aff_add(R, out, aff_scale(R, v, h_tuple(tup)));
    return out;
  }

  const AffChain& h_tuple(const std::vector<int>& tup) {
    auto it = h.find(tup);
    if (it != h.end()) return it->second;
    AffChain res;
    if (!stop(tup)) {
      AffChain inner = aff_sub(R, sd_tuple(tup), tuple_chain(tup));
      inner = aff_sub(R, inner, h_chain(aff_boundary(R, tuple_chain(tup))));
      int b = tuple_barycenter(P, tup);
      res = aff_cone(R, b, inner);
    }
    return h.emplace(tup, std::move(res)).first->second;
  }
};

}  // namespace

AffChain aff_sd(const Ring& R, PointStore& P, const AffChain& a) {
  SdCtx ctx{R, P};
  return ctx.sd_chain(a);
}

AffChain aff_sd_homotopy(const Ring& R, PointStore& P, const AffChain& a) {
  SdCtx ctx{R, P};
  return ctx.h_chain(a);
}

TuplePred cover_small_pred(const PointStore& P, const BallCover& U) {
  return [&P, &U](const std::vector<int>& tup) {
    std::vector<std::vector<Rat>> pts;
    pts.reserve(tup.size());
    for (int id : tup) pts.push_back(P.point(id));
    for (int i = 0; i < U.size(); ++i)
      if (U.member_ball_containing_all(i, pts)) return true;
    return false;
  };
}

CoverSubdivision cover_subdivide(const Ring& R, PointStore& P, const AffChain& a,
                                 const TuplePred& small, int max_rounds) {
  SdCtx ctx{R, P, &small};
  CoverSubdivision out;
  out.image = a;
  for (out.rounds = 0; out.rounds <= max_rounds; ++out.rounds) {
    AffChain next = ctx.sd_chain(out.image);
    if (aff_eq(next, out.image)) return out;
    out.homotopy = aff_add(R, out.homotopy, ctx.h_chain(out.image));
    out.image = next;
  }
  throw InputError("cover relative subdivision did not reach small chains");
}

AffChain aff_kill(const Ring& R, const AffChain& a, const TuplePred& hits) {
  AffChain out;
  for (const auto& [tup, v] : a.t)
    if (!hits(tup)) aff_add_term(R, out, tup, v);
  return out;
}

bool conv_meets_cells(const PointStore& P, const std::vector<int>& tup,
                      const GeomComplex& K,
                      const std::vector<std::pair<int, int>>& cells) {
  CFX_INPUT(P.ambient == K.ambient, "point store and complex dimensions differ");
  int nt = static_cast<int>(tup.size());
  for (auto [q, id] : cells) {
    const auto& verts = K.cell(q, id);
    int nv = static_cast<int>(verts.size());
    LinearProgram lp(nt + nv);
    for (int k = 0; k < K.ambient; ++k) {
      std::vector<Rat> row(lp.n, Rat(0));
      for (int i = 0; i < nt; ++i) row[i] = P.point(tup[i])[k];
      for (int j = 0; j < nv; ++j) row[nt + j] = Rat(-K.vertices[verts[j]][k]);
      lp.eq(row, Rat(0));
    }
    std::vector<Rat> ones(lp.n, Rat(0)), ones2(lp.n, Rat(0));
    for (int i = 0; i < nt; ++i) ones[i] = 1;
    for (int j = 0; j < nv; ++j) ones2[nt + j] = 1;
    lp.eq(ones, Rat(1));
    lp.eq(ones2, Rat(1));
    for (int i = 0; i < lp.n; ++i) {
      std::vector<Rat> row(lp.n, Rat(0));
      row[i] = -1;
      lp.leq(row, Rat(0));
    }
    if (lp_feasible(lp)) return true;
  }
  return false;
}

std::vector<Rat> simplicial_eval(const GeomComplex& K,
                                 const std::vector<std::vector<Rat>>& vertex_images,
                                 const std::vector<Rat>& p) {
  CFX_INPUT(vertex_images.size() == K.vertices.size(),
            "one image per vertex required");
  auto cell = locate_open_cell(K, p);
  CFX_INPUT(cell.has_value(), "point lies outside the polyhedron");
  auto [q, id] = *cell;
  auto lambda = barycentric_coords(K, q, id, p);
  CFX_CHECK(lambda.has_value(), "located cell must contain the point");
  const auto& verts = K.cell(q, id);
  size_t m = vertex_images.at(verts[0]).size();
  std::vector<Rat> out(m, Rat(0));
  for (size_t i = 0; i < verts.size(); ++i) {
    const auto& img = vertex_images.at(verts[i]);
    CFX_INPUT(img.size() == m, "vertex images must share a dimension");
    for (size_t k = 0; k < m; ++k) {
      Rat s = out[k] + (*lambda)[i] * img[k];
      out[k] = s;
    }
  }
  return out;
}

namespace {

bool closed_cell_contains(const GeomComplex& K, int q, int id,
                          const std::vector<Rat>& p) {
  auto lambda = barycentric_coords(K, q, id, p);
  if (!lambda) return false;
  for (const Rat& l : *lambda)
    if (l < 0) return false;
  return true;
}

}  // namespace

std::optional<std::pair<int, int>> common_cell(const GeomComplex& K,
                                               const PointStore& P,
                                               const std::vector<int>& tup) {
  for (int q = 0; q <= K.top_degree(); ++q)
    for (int id = 0; id < K.cell_count(q); ++id) {
      bool all = true;
      for (int pid : tup)
        if (!closed_cell_contains(K, q, id, P.point(pid))) {
          all = false;
          break;
        }
      if (all) return std::make_pair(q, id);
    }
  return std::nullopt;
}

AffChain aff_pushforward(const Ring& R, const PointStore& src, PointStore& dst,
                         const AffChain& a, const PointMap& f) {
  AffChain out;
  for (const auto& [tup, v] : a.t) {
    std::vector<int> img;
    img.reserve(tup.size());
    for (int id : tup) img.push_back(dst.intern(f(src.point(id))));
    aff_add_term(R, out, img, v);
  }
  return out;
}

AffChain affine_of_cells(const Ring& R, PointStore& P, const GeomComplex& K,
                         const Chain& x, int q) {
  AffChain out;
  for (const auto& [id, v] : x.c) {
    std::vector<int> tup;
    for (int vert : K.cell(q, id)) tup.push_back(P.intern(K.vertices[vert]));
    aff_add_term(R, out, tup, v);
  }
  return out;
}

}  // namespace chainfix
