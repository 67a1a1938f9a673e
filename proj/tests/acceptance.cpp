// Acceptance battery: nine end-to-end criteria, one line each, exact
// rational oracles and pinned wall-clock budgets.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "chainfix/affine.hpp"
#include "chainfix/fixindex.hpp"
#include "chainfix/homology.hpp"
#include "chainfix/instances.hpp"
#include "chainfix/multimap.hpp"
#include "chainfix/realization.hpp"

using namespace chainfix;

namespace {

struct Battery {
  std::vector<std::pair<std::string, GeomComplex>> all = {
      {"point", inst_point()},
      {"segment", inst_segment()},
      {"path3", inst_path3()},
      {"path5", inst_path5()},
      {"hollow-triangle", inst_hollow_triangle()},
      {"solid-triangle", inst_solid_triangle()},
      {"hollow-hexagon", inst_hollow_hexagon()},
      {"hexagonal-disk", inst_hexagonal_disk()},
      {"octahedron", inst_octahedron()},
      {"projective-plane", inst_projective_plane()},
  };
};

Chain random_chain(std::mt19937_64& rng, const ChainComplex& C, int q) {
  std::uniform_int_distribution<int> coeff(-2, 2);
  Chain x;
  x.degree = q;
  for (int id = 0; id < C.dim_at(q); ++id) {
    int v = coeff(rng);
    if (v != 0) x.c[id] = Rat(v);
  }
  if (x.c.empty() && C.dim_at(q) > 0) x.c[0] = Rat(1);
  return x;
}

bool chains_equal(const Chain& a, const Chain& b) {
  std::map<int, Rat> ca, cb;
  for (auto& [k, v] : a.c)
    if (v != 0) ca[k] = v;
  for (auto& [k, v] : b.c)
    if (v != 0) cb[k] = v;
  return ca == cb;
}

AffChain lift_chain(const Ring& R, const std::vector<std::vector<AffChain>>& table,
                    const Chain& x) {
  AffChain out;
  for (auto& [id, v] : x.c)
    out = aff_add(R, out, aff_scale(R, v, table[x.degree][id]));
  return out;
}

class Runner {
 public:
  bool run(int n, const std::string& what, long budget_ms,
           const std::function<bool(std::string&)>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    long ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    if (ms > budget_ms) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("over budget");
    }
    std::printf("%s  %d  %s (%ld ms, budget %ld ms)\n", ok ? "PASS" : "FAIL",
                n, what.c_str(), ms, budget_ms);
    if (!ok && !detail.empty()) std::printf("        %s\n", detail.c_str());
    failures_ += ok ? 0 : 1;
    return ok;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

}  // namespace

int main() {
  Runner run;
  const Ring Q = Ring::Q();
  const Ring Z = Ring::Z();
  std::printf("acceptance: chain-level fixed point engine\n");

  // 1: exact traces of the two octahedron poles over the rationals
  run.run(1, "octahedron traces: identity 2, antipode 0, exact over Q", 1000,
          [&](std::string& why) {
            GeomComplex O = inst_octahedron();
            ChainComplex C = chain_complex_of(O, Q);
            ChainMorphism id = chain_map_of(Q, O, C, O, C, map_identity(O));
            ChainMorphism an =
                chain_map_of(Q, O, C, O, C, map_octahedron_antipode());
            Rat li = lefschetz_number(id), la = lefschetz_number(an);
            why = "identity " + rat_str(li) + ", antipode " + rat_str(la);
            return li == Rat(2) && la == Rat(0);
          });

  // 2: affine mixing of certified approximations
  run.run(2, "mixed certificates: trace 2q at q = 0, 1/4, 1/2, 1", 30000,
          [&](std::string& why) {
            GeomComplex O = inst_octahedron();
            MultiMap F = multimap_from_selections(
                O, O, {map_identity(O), map_octahedron_antipode()});
            ApproximationCertificate cid = approximate(F, 0, 1, Rat(1, 4), 0);
            ApproximationCertificate ca = approximate(F, 0, 1, Rat(1, 4), 1);
            for (const Rat& q :
                 {Rat(0), Rat(1, 4), Rat(1, 2), Rat(1)}) {
              ApproximationCertificate m = mix_certificates(cid, ca, q);
              if (!verify_approximation(m).ok) {
                why = "mixed certificate fails its audit at q = " + rat_str(q);
                return false;
              }
              Rat got = lefschetz_of_certificate(m);
              Rat want = Rat(2) * q;
              if (got != want) {
                why = "trace " + rat_str(got) + " at q = " + rat_str(q);
                return false;
              }
            }
            return true;
          });

  // 3: nerve realization of the cube-embedded triangle at radius 1/4
  run.run(3, "triangle body at radius 1/4: bundle audits and all four laws",
          300000, [&](std::string& why) {
            ConvexBody X = inst_triangle_body();
            Realization B = build_realization(X, Rat(1, 4), Z);
            if (B.par.n != 10 || B.par.k != 21 || B.par.trunc != 21) {
              why = "derived parameters moved";
              return false;
            }
            VerifyReport ar = audit_realization(B);
            if (!ar.ok) {
              why = ar.errors.empty() ? "audit failed" : ar.errors.front();
              return false;
            }
            Thm2Report t = verify_theorem2(B);
            why = std::string("carriers ") + (t.carriers ? "ok" : "BAD") +
                  ", cells " + (t.cells ? "ok" : "BAD") + ", composite " +
                  (t.composite ? "ok" : "BAD") + ", finite piece " +
                  (t.finite_piece ? "ok" : "BAD");
            return t.all();
          });

  // 4: boundary and commutation identities, battery plus 100 random chains
  run.run(4, "chain identities: boundaries, carriers, prisms, cones", 60000,
          [&](std::string& why) {
            std::mt19937_64 rng(20260816ULL);
            Battery bat;
            for (auto& [name, K] : bat.all)
              for (const Ring& R : {Q, Z})
                if (!verify_complex(chain_complex_of(K, R)).ok) {
                  why = "boundary square fails on " + name;
                  return false;
                }

            for (const GeomComplex& K :
                 {inst_path3(), inst_solid_triangle()}) {
              SubdivisionTower T = build_tower(K, Q, 2);
              for (int j = 0; j < 2; ++j) {
                if (!verify_morphism(T.sub[j]).ok ||
                    !verify_morphism(T.projl[j]).ok ||
                    !verify_morphism(T.projf[j]).ok) {
                  why = "a subdivision transfer breaks commutation";
                  return false;
                }
                SubdivisionStep st = subdivision_step(T, j);
                ChainMorphism round = morphism_compose(st.sd, st.back);
                if (!st.left_identity || !st.carriers_shrink ||
                    !verify_homotopy(ChainMorphism::identity(T.C[j + 1]),
                                     round, st.h)
                         .ok) {
                  why = "prism identity fails at tower level " +
                        std::to_string(j);
                  return false;
                }
              }
            }

            int done = 0;
            ConvexBody X = inst_triangle_body();
            Realization B = build_realization(X, Rat(1, 2), Z);
            const Ring& R = B.ring;
            auto pick_deg = [&](const ChainComplex& C, int lo) {
              std::uniform_int_distribution<int> d(lo, C.top_degree());
              return d(rng);
            };
            for (int i = 0; i < 15; ++i, ++done) {  // smallest-cell projection
              Chain x = random_chain(rng, B.CKf, pick_deg(B.CKf, 1));
              Chain lhs = B.CtildeK.boundary_of(B.nu.apply(x));
              Chain rhs = B.nu.apply(B.CKf.boundary_of(x));
              if (!chains_equal(lhs, rhs)) {
                why = "smallest-cell projection breaks commutation";
                return false;
              }
            }
            for (int i = 0; i < 15; ++i, ++done) {  // fibre-model comparison
              Chain x = random_chain(rng, B.CtildeK, pick_deg(B.CtildeK, 1));
              Chain lhs = B.CP.boundary_of(B.tau.apply(x));
              Chain rhs = B.tau.apply(B.CtildeK.boundary_of(x));
              if (!chains_equal(lhs, rhs)) {
                why = "fibre comparison breaks commutation";
                return false;
              }
            }
            for (int i = 0; i < 15; ++i, ++done) {  // affine cones over P
              Chain x = random_chain(rng, B.CP, pick_deg(B.CP, 1));
              AffChain lhs = aff_boundary(R, lift_chain(R, B.mu, x));
              AffChain rhs = lift_chain(R, B.mu, B.CP.boundary_of(x));
              if (!aff_eq(lhs, rhs)) {
                why = "cone family over the fibre model breaks commutation";
                return false;
              }
            }
            for (int i = 0; i < 15; ++i, ++done) {  // full composite to the body
              Chain x = random_chain(rng, B.CKf, pick_deg(B.CKf, 1));
              AffChain lhs = aff_boundary(R, lift_chain(R, B.zeta, x));
              AffChain rhs = lift_chain(R, B.zeta, B.CKf.boundary_of(x));
              if (!aff_eq(lhs, rhs)) {
                why = "body-valued composite breaks commutation";
                return false;
              }
            }
            for (int i = 0; i < 10; ++i, ++done) {  // carrier-guided projection
              int q = pick_deg(B.CKf, 1);
              Chain x = random_chain(rng, B.CKf, q);
              AffChain a = lift_chain(R, B.zeta, x);
              std::map<int, Chain> img = psi_apply(B, a);
              std::map<int, Chain> imgd = psi_apply(B, aff_boundary(R, a));
              Chain lhs = img.count(q) ? B.CKf.boundary_of(img.at(q)) : Chain{};
              Chain rhs = imgd.count(q - 1) ? imgd.at(q - 1) : Chain{};
              if (!chains_equal(lhs, rhs)) {
                why = "carrier-guided projection breaks commutation";
                return false;
              }
            }
            GeomComplex Tri = inst_solid_triangle();
            ChainComplex CT = chain_complex_of(Tri, Q);
            PointStore P(Tri.ambient);
            for (int i = 0; i < 15; ++i, ++done) {  // barycentric prism
              int q = 1 + (int)(rng() % 2);
              AffChain a = affine_of_cells(Q, P, Tri, random_chain(rng, CT, q), q);
              AffChain ha = aff_sd_homotopy(Q, P, a);
              AffChain hda = aff_sd_homotopy(Q, P, aff_boundary(Q, a));
              AffChain lhs =
                  aff_add(Q, aff_boundary(Q, ha), hda);
              AffChain rhs = aff_sub(Q, aff_sd(Q, P, a), a);
              if (!aff_eq(lhs, rhs)) {
                why = "barycentric prism identity fails";
                return false;
              }
            }
            for (int i = 0; i < 15; ++i, ++done) {  // cone boundary
              int q = 1 + (int)(rng() % 2);
              AffChain a = affine_of_cells(Q, P, Tri, random_chain(rng, CT, q), q);
              int apex = P.intern(Tri.vertices[0]);
              AffChain lhs = aff_boundary(Q, aff_cone(Q, apex, a));
              AffChain rhs =
                  aff_sub(Q, a, aff_cone(Q, apex, aff_boundary(Q, a)));
              if (!aff_eq(lhs, rhs)) {
                why = "cone boundary identity fails";
                return false;
              }
            }
            why = std::to_string(done) + "/100 random chains";
            return done == 100;
          });

  // 5: the seven index laws, each on at least three instances
  run.run(5, "index law suite over Q and Z", 120000, [&](std::string& why) {
    for (const Ring& R : {Q, Z}) {
      auto suite = index_property_suite(R);
      if (suite.size() < 21) {
        why = "suite too small: " + std::to_string(suite.size());
        return false;
      }
      for (auto& [name, ok] : suite)
        if (!ok) {
          why = name + " fails over " + R.name();
          return false;
        }
    }
    return true;
  });

  // 6: the index ignores bookkeeping choices and cover refinement
  run.run(6, "index invariance across choices and refinement", 120000,
          [&](std::string& why) {
            std::vector<IndexChoices> variants;
            variants.push_back({});                      // reference
            variants.push_back({3, 7, 1, true, true});   // refined cover
            variants.push_back({2, 6, 2, true, true});   // finer detection
            variants.push_back({2, 6, 1, false, true});  // other projection

            GeomComplex P5 = inst_path5();
            VertexSelfMap interior{1, map_path5_interior()};
            OpenRegion mid = region_of_stars(P5, {{0, 2}});
            GeomComplex D = inst_hexagonal_disk();
            VertexSelfMap rot = {0, map_hexdisk_rotation(2)};
            GeomComplex O = inst_octahedron();
            VertexSelfMap anti = {0, map_octahedron_antipode()};
            for (const IndexChoices& ch : variants) {
              Rat a = index_of_map(P5, Q, interior, mid, ch).value;
              Rat b = index_of_map(D, Q, rot, whole_region(D), ch).value;
              Rat c = index_of_map(O, Q, anti, whole_region(O), ch).value;
              if (a != Rat(-1) || b != Rat(1) || c != Rat(0)) {
                why = "values " + rat_str(a) + ", " + rat_str(b) + ", " +
                      rat_str(c) + " drift from -1, 1, 0";
                return false;
              }
            }
            return true;
          });

  // 7: prime congruence for an order-3 rotation and an order-2 reflection
  run.run(7, "mod p congruence: rotation at p = 3, reflection at p = 2",
          60000, [&](std::string& why) {
            GeomComplex D = inst_hexagonal_disk();
            ModPReport a = mod_p_check(D, {0, map_hexdisk_rotation(2)},
                                       whole_region(D), 3, 1);
            GeomComplex P = inst_path3();
            ModPReport b = mod_p_check(P, {0, map_path3_reflection()},
                                       whole_region(P), 2, 1);
            GeomComplex O = inst_octahedron();
            ModPReport c = mod_p_check(O, {0, map_octahedron_antipode()},
                                       whole_region(O), 2, 1);
            why = "indices " + rat_str(a.ind_f) + "=" + rat_str(a.ind_fm) +
                  " (3), " + rat_str(b.ind_f) + "=" + rat_str(b.ind_fm) +
                  " (2), " + rat_str(c.ind_f) + "~" + rat_str(c.ind_fm) +
                  " (2)";
            return a.ok() && a.ind_f == Rat(1) && a.ind_fm == Rat(1) &&
                   b.ok() && b.ind_f == Rat(1) && b.ind_fm == Rat(1) &&
                   c.ok() && c.ind_f == Rat(0) && c.ind_fm == Rat(2);
          });

  // 8: a rotation separated by more than three radii refutes fixed points
  run.run(8, "separated rotation: refuted with gap 1/4 and zero trace",
          120000, [&](std::string& why) {
            GeomComplex H = inst_hollow_hexagon();
            MultiMap F =
                multimap_from_selections(H, H, {map_hexagon_rotation(3)});
            DichotomyScale s{0, 2, Rat(1, 32)};
            FixSearchResult r = fixed_point_certificate(F, s);
            Rat three(Rat(3) * s.eps);
            why = "gap " + rat_str(r.gap) + ", trace " + rat_str(r.trace);
            if (r.kind != FixSearchResult::Kind::Refuted || r.gap != Rat(1, 4) ||
                !(r.gap > three) || r.trace != Rat(0))
              return false;
            LefschetzDichotomy d = lefschetz_of_multimap(F, {s});
            if (!d.determinate || d.value != Rat(0)) {
              why += "; sampled trace not a determinate zero";
              return false;
            }
            return true;
          });

  // 9: field Betti numbers match integral free ranks; traces match homology
  run.run(9, "rational Betti = integral free rank; trace descends", 60000,
          [&](std::string& why) {
            Battery bat;
            for (auto& [name, K] : bat.all) {
              HomologyResult hq = homology(chain_complex_of(K, Q));
              HomologyResult hz = homology(chain_complex_of(K, Z));
              if (hq.betti != hz.betti) {
                why = "Betti mismatch on " + name;
                return false;
              }
            }
            std::vector<std::pair<GeomComplex, std::vector<int>>> endos;
            for (auto& [name, K] : bat.all)
              endos.push_back({K, map_identity(K)});
            GeomComplex O = inst_octahedron();
            endos.push_back({O, map_octahedron_antipode()});
            endos.push_back({O, map_octahedron_rotation()});
            GeomComplex H = inst_hollow_hexagon();
            for (int k = 1; k <= 5; ++k)
              endos.push_back({H, map_hexagon_rotation(k)});
            endos.push_back({H, map_hexagon_reflection()});
            GeomComplex D = inst_hexagonal_disk();
            for (int k = 1; k <= 5; ++k)
              endos.push_back({D, map_hexdisk_rotation(k)});
            endos.push_back({D, map_constant(D, 6)});
            GeomComplex P3 = inst_path3();
            endos.push_back({P3, map_path3_reflection()});
            GeomComplex S = inst_segment();
            endos.push_back({S, map_segment_swap()});
            int n = 0;
            for (auto& [K, img] : endos) {
              ChainComplex C = chain_complex_of(K, Q);
              ChainMorphism M = chain_map_of(Q, K, C, K, C, img);
              Rat chain_level = lefschetz_number(M);
              Rat hom_level = lefschetz_number(induced_on_homology(M));
              if (chain_level != hom_level) {
                why = "trace drops to homology wrongly on endomorphism " +
                      std::to_string(n);
                return false;
              }
              ++n;
            }
            why = std::to_string(n) + " endomorphisms";
            return true;
          });

  int bad = run.failures();
  std::printf("summary: %d/9 criteria hold\n", 9 - bad);
  return bad == 0 ? 0 : 1;
}
