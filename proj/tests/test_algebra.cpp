#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "chainfix/homology.hpp"

using namespace chainfix;

namespace {

// Independent reference constructor: abstract simplicial chain complex from
// sorted-vertex simplex lists, boundary with alternating signs.
ChainComplex simplicial_chain(const Ring& R,
                              std::vector<std::vector<std::vector<int>>> simps) {
  ChainComplex C;
  C.ring = R;
  int top = static_cast<int>(simps.size()) - 1;
  C.dims.resize(top + 1);
  C.names.resize(top + 1);
  C.boundary.resize(top + 1);
  std::vector<std::map<std::vector<int>, int>> index(top + 1);
  for (int q = 0; q <= top; ++q) {
    for (auto& s : simps[q]) {
      std::string nm = "[";
      for (size_t i = 0; i < s.size(); ++i)
        nm += (i ? "," : "") + std::to_string(s[i]);
      nm += "]";
      index[q][s] = C.dims[q]++;
      C.names[q].push_back(nm);
    }
  }
  for (int q = 1; q <= top; ++q) {
    C.boundary[q] = SparseMat(C.dims[q - 1], C.dims[q]);
    for (auto& s : simps[q]) {
      int j = index[q][s];
      for (size_t i = 0; i <= s.size() - 1; ++i) {
        std::vector<int> f = s;
        f.erase(f.begin() + i);
        C.boundary[q].add_to(R, index[q - 1][f], j, (i % 2 == 0) ? Rat(1) : Rat(-1));
      }
    }
  }
  C.augmentation.assign(C.dims[0], Rat(1));
  return C;
}

std::vector<std::vector<std::vector<int>>> octahedron_simps() {
  std::vector<std::vector<int>> v, e, f;
  for (int i = 0; i < 6; ++i) v.push_back({i});
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      bool antipodal = (a / 2 == b / 2);  // pairs (0,1),(2,3),(4,5)
      if (!antipodal) e.push_back({a, b});
    }
  for (int a : {0, 1})
    for (int b : {2, 3})
      for (int c : {4, 5}) f.push_back({a, b, c});
  return {v, e, f};
}

// Chain map of a vertex map on an abstract complex (sorted images, sign of
// the sorting permutation, degenerate images dropped).
ChainMorphism vertex_map_morphism(const ChainComplex& C,
                                  std::vector<std::vector<std::vector<int>>> simps,
                                  std::vector<int> img) {
  std::vector<std::map<std::vector<int>, int>> index(simps.size());
  for (size_t q = 0; q < simps.size(); ++q)
    for (size_t i = 0; i < simps[q].size(); ++i) index[q][simps[q][i]] = i;
  ChainMorphism m;
  m.src = m.dst = &C;
  m.deg.resize(simps.size());
  for (size_t q = 0; q < simps.size(); ++q) {
    m.deg[q] = SparseMat(C.dims[q], C.dims[q]);
    for (size_t j = 0; j < simps[q].size(); ++j) {
      std::vector<int> im;
      for (int v : simps[q][j]) im.push_back(img[v]);
      // sign of sorting permutation; zero on repeats
      int sign = 1;
      bool degenerate = false;
      for (size_t a = 0; a < im.size() && !degenerate; ++a)
        for (size_t b = a + 1; b < im.size(); ++b) {
          if (im[a] == im[b]) {
            degenerate = true;
            break;
          }
          if (im[a] > im[b]) sign = -sign;
        }
      if (degenerate) continue;
      std::vector<int> s = im;
      std::sort(s.begin(), s.end());
      m.deg[q].add_to(C.ring, index[q].at(s), j, Rat(sign));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("smith normal form: frozen small cases") {
  // 2x2 with nontrivial factors
  DenseInt A = {{Int(2), Int(4)}, {Int(6), Int(8)}};
  SmithResult s = smith_normal_form(A);
  REQUIRE(s.diag.size() == 2);
  CHECK(s.diag[0] == 2);
  CHECK(s.diag[1] == 4);
  // divisibility sweep: diag(2,3) has factors (1,6)
  DenseInt B = {{Int(2), Int(0)}, {Int(0), Int(3)}};
  SmithResult t = smith_normal_form(B);
  REQUIRE(t.diag.size() == 2);
  CHECK(t.diag[0] == 1);
  CHECK(t.diag[1] == 6);
  // transforms unimodular and U A V = D
  for (const auto& [M, S] : {std::pair{A, s}, std::pair{B, t}}) {
    Int du = dense_det(S.U), dv = dense_det(S.V);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    DenseInt D = dense_mul(dense_mul(S.U, M), S.V);
    for (size_t i = 0; i < D.size(); ++i)
      for (size_t j = 0; j < D[i].size(); ++j) {
        Int want = (i == j && i < S.diag.size()) ? S.diag[i] : Int(0);
        CHECK(D[i][j] == want);
      }
  }
}

TEST_CASE("smith normal form: deterministic under rerun") {
  DenseInt A = {{Int(6), Int(10), Int(15)}, {Int(10), Int(15), Int(6)}};
  SmithResult a = smith_normal_form(A), b = smith_normal_form(A);
  CHECK(a.diag == b.diag);
  CHECK(a.U == b.U);
  CHECK(a.V == b.V);
  CHECK(a.diag[0] == 1);  // gcd of entries
}

TEST_CASE("octahedron: complex verifies, Betti (1,0,1), no torsion") {
  ChainComplex C = simplicial_chain(Ring::Z(), octahedron_simps());
  REQUIRE(C.dims == std::vector<int>({6, 12, 8}));
  VerifyReport rep = verify_complex(C);
  CHECK(rep.ok);
  HomologyResult H = homology(C);
  CHECK(H.betti == std::vector<int>({1, 0, 1}));
  for (auto& t : H.torsion) CHECK(t.empty());
}

TEST_CASE("hollow triangle: Betti (1,1)") {
  ChainComplex C =
      simplicial_chain(Ring::Z(), {{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}});
  CHECK(verify_complex(C).ok);
  HomologyResult H = homology(C);
  CHECK(H.betti == std::vector<int>({1, 1}));
}

TEST_CASE("six-vertex projective plane: Z torsion Z/2, field Betti") {
  std::vector<std::vector<int>> v, e, f;
  for (int i = 0; i < 6; ++i) v.push_back({i});
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) e.push_back({a, b});
  for (auto t : std::vector<std::vector<int>>{{1, 2, 3},
                                              {1, 2, 4},
                                              {1, 3, 5},
                                              {1, 4, 6},
                                              {1, 5, 6},
                                              {2, 3, 6},
                                              {2, 4, 5},
                                              {2, 5, 6},
                                              {3, 4, 5},
                                              {3, 4, 6}}) {
    for (auto& x : t) --x;
    std::sort(t.begin(), t.end());
    f.push_back(t);
  }
  ChainComplex CZ = simplicial_chain(Ring::Z(), {v, e, f});
  REQUIRE(verify_complex(CZ).ok);
  HomologyResult HZ = homology(CZ);
  CHECK(HZ.betti == std::vector<int>({1, 0, 0}));
  REQUIRE(HZ.torsion[1].size() == 1);
  CHECK(HZ.torsion[1][0] == 2);

  ChainComplex C2 = simplicial_chain(Ring::Zp(2), {v, e, f});
  CHECK(homology(C2).betti == std::vector<int>({1, 1, 1}));
  ChainComplex C3 = simplicial_chain(Ring::Zp(3), {v, e, f});
  CHECK(homology(C3).betti == std::vector<int>({1, 0, 0}));
  ChainComplex CQ = simplicial_chain(Ring::Q(), {v, e, f});
  CHECK(homology(CQ).betti == std::vector<int>({1, 0, 0}));
}

TEST_CASE("rank over Q equals count of nonunit-free invariant factors") {
  // oracle equivalence: free rank from Z-side Smith form vs Q-side rank
  ChainComplex C = simplicial_chain(Ring::Z(), octahedron_simps());
  for (int q = 1; q <= C.top_degree(); ++q) {
    SmithResult s = smith_normal_form(dense_int_from_sparse(C.boundary[q]));
    CHECK(s.rank() == field_rank(Ring::Q(), C.boundary[q]));
  }
}

TEST_CASE("Lefschetz numbers on the octahedron: identity 2, antipode 0") {
  auto simps = octahedron_simps();
  ChainComplex C = simplicial_chain(Ring::Z(), simps);
  ChainMorphism id = ChainMorphism::identity(C);
  CHECK(lefschetz_number(id) == 2);  // Euler characteristic

  ChainMorphism anti = vertex_map_morphism(C, simps, {1, 0, 3, 2, 5, 4});
  CHECK(verify_morphism(anti).ok);
  CHECK(lefschetz_number(anti) == 0);

  // Hopf: homology-level values agree with chain level
  InducedHomologyMap Hid = induced_on_homology(id);
  InducedHomologyMap Ha = induced_on_homology(anti);
  CHECK(lefschetz_number(Hid) == 2);
  CHECK(lefschetz_number(Ha) == 0);
  // antipode acts by -1 on the top class
  REQUIRE(Ha.mat[2].size() == 1);
  CHECK(Ha.mat[2][0][0] == -1);
}

TEST_CASE("Hopf trace identity on the hollow triangle") {
  std::vector<std::vector<std::vector<int>>> simps = {{{0}, {1}, {2}},
                                                      {{0, 1}, {0, 2}, {1, 2}}};
  ChainComplex C = simplicial_chain(Ring::Z(), simps);
  ChainMorphism rot = vertex_map_morphism(C, simps, {1, 2, 0});
  ChainMorphism refl = vertex_map_morphism(C, simps, {1, 0, 2});
  CHECK(verify_morphism(rot).ok);
  CHECK(verify_morphism(refl).ok);
  CHECK(lefschetz_number(rot) == 0);
  CHECK(lefschetz_number(refl) == 2);
  CHECK(lefschetz_number(induced_on_homology(rot)) == 0);
  CHECK(lefschetz_number(induced_on_homology(refl)) == 2);
}

TEST_CASE("chain homotopy: identity to rotation on the circle") {
  std::vector<std::vector<std::vector<int>>> simps = {{{0}, {1}, {2}},
                                                      {{0, 1}, {0, 2}, {1, 2}}};
  ChainComplex C = simplicial_chain(Ring::Z(), simps);
  ChainMorphism id = ChainMorphism::identity(C);
  ChainMorphism rot = vertex_map_morphism(C, simps, {1, 2, 0});
  ChainHomotopy h;
  h.src = h.dst = &C;
  h.deg.resize(2);
  h.deg[0] = SparseMat(3, 3);
  // edge ids: [0,1]=0,[0,2]=1,[1,2]=2
  h.deg[0].set(C.ring, 0, 0, Rat(1));   // 0 -> [0,1]
  h.deg[0].set(C.ring, 2, 1, Rat(1));   // 1 -> [1,2]
  h.deg[0].set(C.ring, 1, 2, Rat(-1));  // 2 -> -[0,2]
  h.deg[1] = SparseMat(0, 3);
  CHECK(verify_homotopy(id, rot, h).ok);
  // and a wrong homotopy is rejected
  ChainHomotopy bad = h;
  bad.deg[0].set(C.ring, 0, 0, Rat(2));
  CHECK(!verify_homotopy(id, rot, bad).ok);
}

TEST_CASE("tensor square of the circle has torus homology") {
  std::vector<std::vector<std::vector<int>>> simps = {{{0}, {1}, {2}},
                                                      {{0, 1}, {0, 2}, {1, 2}}};
  ChainComplex C = simplicial_chain(Ring::Z(), simps);
  TensorComplex T = tensor_complex(C, C);
  CHECK(verify_complex(T.complex).ok);  // Koszul signs give d.d = 0
  HomologyResult H = homology(T.complex);
  CHECK(H.betti == std::vector<int>({1, 2, 1}));

  // functoriality spot check: (rot x id) is a chain map with Lefschetz 0
  ChainMorphism rot = vertex_map_morphism(C, simps, {1, 2, 0});
  ChainMorphism id = ChainMorphism::identity(C);
  ChainMorphism rxi = tensor_morphism(T, T, rot, id);
  CHECK(verify_morphism(rxi).ok);
  CHECK(lefschetz_number(rxi) == 0);
}

TEST_CASE("boundary solver over Z and fields") {
  ChainComplex C = simplicial_chain(Ring::Z(), octahedron_simps());
  BoundarySolver S(C);
  // boundary of a 2-cell is solvable in degree 2
  Chain f0;
  f0.degree = 2;
  f0.c[0] = 1;
  Chain z = C.boundary_of(f0);
  auto x = S.solve(z, 2);
  REQUIRE(x.has_value());
  CHECK(chain_eq(C.boundary_of(*x), z));
  // a single edge is not a boundary
  Chain e;
  e.degree = 1;
  e.c[0] = 1;
  CHECK(!S.solve(e, 2).has_value());
  // degree-0 solve against the augmentation
  Chain one;
  one.degree = -1;
  one.c[0] = 1;
  auto p = S.solve(one, 0);
  REQUIRE(p.has_value());
  CHECK(C.augment(*p) == 1);
}

TEST_CASE("acyclicity detector") {
  // solid triangle (cone) is acyclic, circle is not
  ChainComplex solid = simplicial_chain(
      Ring::Z(), {{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}}});
  CHECK(is_acyclic(solid));
  ChainComplex circle =
      simplicial_chain(Ring::Z(), {{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}});
  CHECK(!is_acyclic(circle));
}

TEST_CASE("ring element normalization") {
  Ring z5 = Ring::Zp(5);
  CHECK(z5.normalize(Rat(7)) == 2);
  CHECK(z5.normalize(Rat(-1)) == 4);
  CHECK(z5.normalize(Rat(1, 2)) == 3);  // 1/2 = 3 mod 5
  CHECK(z5.inv(Rat(3)) == 2);
  CHECK_THROWS_AS(Ring::Zp(4), InputError);
  CHECK_THROWS_AS((void)Ring::Z().normalize(Rat(1, 2)), CheckError);
  CHECK(parse_ring("Zp:7").p == 7);
  CHECK(parse_ring("Q").kind == RingKind::Rationals);
  CHECK_THROWS_AS(parse_ring("F4"), InputError);
}

TEST_CASE("random chains: boundary of boundary vanishes, morphism naturality") {
  auto simps = octahedron_simps();
  ChainComplex C = simplicial_chain(Ring::Z(), simps);
  ChainMorphism anti = vertex_map_morphism(C, simps, {1, 0, 3, 2, 5, 4});
  std::mt19937_64 rng(20260816);
  std::uniform_int_distribution<int> coeff(-4, 4);
  for (int trial = 0; trial < 50; ++trial) {
    int q = 1 + static_cast<int>(rng() % 2);
    Chain c;
    c.degree = q;
    for (int i = 0; i < C.dims[q]; ++i) {
      int v = coeff(rng);
      if (v != 0) c.c[i] = v;
    }
    Chain dd = C.boundary_of(C.boundary_of(c));
    CHECK(dd.zero());
    Chain lhs = C.boundary_of(anti.apply(c));
    Chain rhs = anti.apply(C.boundary_of(c));
    CHECK(chain_eq(lhs, rhs));
  }
}
