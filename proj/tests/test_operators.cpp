#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chainfix/affine.hpp"
#include "chainfix/cover.hpp"
#include "chainfix/simplicial.hpp"

using namespace chainfix;

namespace {

std::vector<Rat> pt(std::initializer_list<Rat> xs) { return std::vector<Rat>(xs); }

// coordinate intervals (0,2), (1,3), (2,4) on the line, as metric balls
BallCover three_intervals() {
  BallCover U;
  U.members = {{Ball{{Rat(1)}, Rat(1, 2)}},
               {Ball{{Rat(2)}, Rat(1, 2)}},
               {Ball{{Rat(3)}, Rat(1, 2)}}};
  return U;
}

AffChain single(const std::vector<int>& tup, Rat v = Rat(1)) {
  AffChain a;
  a.t[tup] = v;
  return a;
}

GeomComplex path_complex() {
  return make_complex(1, {{Rat(0)}, {Rat(1, 2)}, {Rat(1)}}, {{0, 1}, {1, 2}});
}

}  // namespace

TEST_CASE("open balls: membership and intersection are strict") {
  Ball b0{{Rat(0)}, Rat(1, 4)};
  CHECK(ball_contains(b0, pt({Rat(1, 4)})));
  CHECK(ball_contains(b0, pt({Rat(0)})));
  CHECK(!ball_contains(b0, pt({Rat(1, 2)})));  // distance exactly = radius

  Ball b1{{Rat(1)}, Rat(1, 4)};
  CHECK(!balls_meet(b0, b1));  // centers at metric distance 1/2 = r0+r1
  Ball b2{{Rat(1)}, Rat(1, 4) + Rat(1, 100)};
  CHECK(balls_meet(b0, b2));

  Ball c{{Rat(0), Rat(0)}, Rat(1, 2)};
  CHECK(ball_contains(c, pt({Rat(1, 2), Rat(1, 2)})));  // d = 3/8
}

TEST_CASE("star operations on a three interval cover") {
  BallCover U = three_intervals();
  CHECK(star_of_points(U, {pt({Rat(3, 2)})}) == std::vector<int>{0, 1});
  CHECK(star_of_points(U, {pt({Rat(10)})}).empty());
  CHECK(star_of_member(U, 0) == std::vector<int>{0, 1});
  CHECK(star_of_member(U, 1) == std::vector<int>{0, 1, 2});
  CHECK(star_of_member(U, 2) == std::vector<int>{1, 2});

  BallCover one;
  one.members = {{Ball{{Rat(0)}, Rat(1)}}};
  CHECK(star_of_points(one, {pt({Rat(1, 2)})}) == std::vector<int>{0});
}

TEST_CASE("members made of several balls") {
  BallCover U;
  U.members = {{Ball{{Rat(0)}, Rat(1, 4)}, Ball{{Rat(1)}, Rat(1, 4)}},
               {Ball{{Rat(1, 2)}, Rat(1, 20)}}};
  CHECK(U.members_meet(0, 1));
  CHECK(U.member_contains(0, pt({Rat(9, 10)})));
  CHECK(!U.member_contains(1, pt({Rat(9, 10)})));
  CHECK(U.member_diam_bound(0) == Rat(1));
  CHECK(U.member_diam_bound(1) == Rat(1, 10));

  auto hit = U.member_ball_containing_all(0, {pt({Rat(0)}), pt({Rat(1, 8)})});
  REQUIRE(hit.has_value());
  CHECK(*hit == 0);
  CHECK(!U.member_ball_containing_all(0, {pt({Rat(0)}), pt({Rat(1)})}));
}

TEST_CASE("pointwise covering check") {
  BallCover U = three_intervals();
  CHECK(U.covers({pt({Rat(1, 2)}), pt({Rat(7, 2)})}));
  CHECK(!U.covers({pt({Rat(0)})}));  // on the frontier of the first member
  CHECK(!U.covers({pt({Rat(9, 2)})}));
}

TEST_CASE("common points of ball families via exact LP") {
  Ball b1{{Rat(1)}, Rat(1, 2)}, b2{{Rat(2)}, Rat(1, 2)}, b3{{Rat(3)}, Rat(1, 2)};
  auto s12 = balls_slack({b1, b2});
  CHECK(s12.first == Rat(-1, 4));
  CHECK(balls_have_common_point({b1, b2}));
  auto s13 = balls_slack({b1, b3});
  CHECK(s13.first == Rat(0));  // closures touch, open balls do not meet
  CHECK(!balls_have_common_point({b1, b3}));
  CHECK(!balls_have_common_point({b1, b2, b3}));

  std::vector<Ball> g0 = {Ball{{Rat(0)}, Rat(1, 4)}, Ball{{Rat(1)}, Rat(1, 4)}};
  std::vector<Ball> h0 = {Ball{{Rat(1)}, Rat(1, 20)}};
  std::vector<Ball> far0 = {Ball{{Rat(0)}, Rat(1, 8)}};
  std::vector<Ball> far1 = {Ball{{Rat(1)}, Rat(1, 8)}};
  CHECK(unions_have_common_point({&g0, &h0}));
  CHECK(!unions_have_common_point({&far0, &far1}));
}

TEST_CASE("product covers meet componentwise") {
  BallCover U = three_intervals();
  ProductCover P{&U, &U};
  CHECK(P.members_meet({0, 0}, {1, 1}));
  CHECK(!P.members_meet({0, 0}, {2, 2}));
  CHECK(P.members_meet({0, 2}, {1, 1}));
  CHECK(P.member_contains({1, 2}, pt({Rat(3, 2)}), pt({Rat(5, 2)})));
}

TEST_CASE("point store interns exactly") {
  PointStore P(2);
  int a = P.intern({Rat(1, 2), Rat(1, 3)});
  int b = P.intern({Rat(0), Rat(0)});
  CHECK(P.intern({Rat(1, 2), Rat(1, 3)}) == a);
  CHECK(a != b);
  CHECK(P.size() == 2);
  CHECK(P.point(a) == pt({Rat(1, 2), Rat(1, 3)}));
  CHECK_THROWS_AS(P.intern({Rat(0)}), InputError);
}

TEST_CASE("affine boundary, augmentation, cone") {
  Ring R = Ring::Q();
  PointStore P(1);
  int a = P.intern({Rat(0)}), b = P.intern({Rat(1, 2)}), c = P.intern({Rat(1)});

  AffChain d = aff_boundary(R, single({a, b, c}));
  CHECK(d.t.size() == 3);
  CHECK(d.t.at({b, c}) == Rat(1));
  CHECK(d.t.at({a, c}) == Rat(-1));
  CHECK(d.t.at({a, b}) == Rat(1));
  CHECK(aff_boundary(R, d).t.empty());

  CHECK(aff_boundary(R, single({a, a})).t.empty());  // faces cancel

  AffChain z = aff_add(R, aff_scale(R, Rat(2), single({a})),
                       aff_scale(R, Rat(-5), single({b})));
  CHECK(aff_augment(R, z) == Rat(-3));

  AffChain x = single({a, b});
  AffChain coned = aff_cone(R, c, x);
  CHECK(coned.t.size() == 1);
  CHECK(coned.t.at({c, a, b}) == Rat(1));
  AffChain lhs = aff_boundary(R, coned);
  AffChain rhs = aff_sub(R, x, aff_cone(R, c, aff_boundary(R, x)));
  CHECK(aff_eq(lhs, rhs));
}

TEST_CASE("barycentric subdivision of a segment") {
  Ring R = Ring::Q();
  PointStore P(1);
  int a = P.intern({Rat(0)}), c = P.intern({Rat(1)});
  AffChain s = aff_sd(R, P, single({a, c}));
  int m = P.intern({Rat(1, 2)});
  CHECK(s.t.size() == 2);
  CHECK(s.t.at({m, c}) == Rat(1));
  CHECK(s.t.at({m, a}) == Rat(-1));
  CHECK(aff_eq(aff_boundary(R, s), aff_sd(R, P, aff_boundary(R, single({a, c})))));
}

TEST_CASE("barycentric subdivision of a triangle") {
  Ring R = Ring::Q();
  PointStore P(2);
  int u = P.intern({Rat(0), Rat(0)});
  int v = P.intern({Rat(1), Rat(0)});
  int w = P.intern({Rat(0), Rat(1)});
  AffChain sigma = single({u, v, w});
  AffChain s = aff_sd(R, P, sigma);
  CHECK(P.size() == 7);  // three edge midpoints and the center appear
  CHECK(s.t.size() == 6);
  for (auto& [tup, coef] : s.t) CHECK(rat_abs(coef) == Rat(1));
  int ctr = P.intern({Rat(1, 3), Rat(1, 3)});
  int mvw = P.intern({Rat(1, 2), Rat(1, 2)});
  int muw = P.intern({Rat(0), Rat(1, 2)});
  CHECK(s.t.at({ctr, mvw, w}) == Rat(1));
  CHECK(s.t.at({ctr, muw, w}) == Rat(-1));
  CHECK(aff_eq(aff_boundary(R, s), aff_sd(R, P, aff_boundary(R, sigma))));

  // dh + hd = Sd - id, and h vanishes in degree 0
  AffChain h = aff_sd_homotopy(R, P, sigma);
  AffChain got = aff_add(R, aff_boundary(R, h),
                         aff_sd_homotopy(R, P, aff_boundary(R, sigma)));
  CHECK(aff_eq(got, aff_sub(R, s, sigma)));
  CHECK(aff_sd_homotopy(R, P, single({u})).t.empty());
  CHECK(aff_eq(aff_sd(R, P, single({u})), single({u})));
}

TEST_CASE("cover relative subdivision stops as soon as chains are small") {
  Ring R = Ring::Q();
  PointStore P(1);
  int a = P.intern({Rat(0)}), c = P.intern({Rat(1)});
  BallCover U;
  U.members = {{Ball{{Rat(0)}, Rat(3, 10)}}, {Ball{{Rat(1)}, Rat(3, 10)}}};
  auto small = cover_small_pred(P, U);

  auto res = cover_subdivide(R, P, single({a, c}), small);
  int m = P.intern({Rat(1, 2)});
  CHECK(res.rounds == 1);
  CHECK(res.image.t.size() == 2);
  CHECK(res.image.t.at({m, c}) == Rat(1));
  CHECK(res.image.t.at({m, a}) == Rat(-1));

  int d = P.intern({Rat(1, 5)});
  auto fixed = cover_subdivide(R, P, single({a, d}), small);
  CHECK(fixed.rounds == 0);
  CHECK(aff_eq(fixed.image, single({a, d})));
  CHECK(fixed.homotopy.t.empty());
}

TEST_CASE("cover relative subdivision iterates and satisfies the homotopy") {
  Ring R = Ring::Q();
  PointStore P(1);
  int a = P.intern({Rat(0)}), c = P.intern({Rat(1)});
  BallCover U;
  U.members = {{Ball{{Rat(0)}, Rat(3, 20)}},
               {Ball{{Rat(1, 2)}, Rat(3, 20)}},
               {Ball{{Rat(1)}, Rat(3, 20)}}};
  auto small = cover_small_pred(P, U);

  AffChain in = single({a, c});
  auto res = cover_subdivide(R, P, in, small);
  int m = P.intern({Rat(1, 2)});
  int q1 = P.intern({Rat(1, 4)});
  int q3 = P.intern({Rat(3, 4)});
  CHECK(res.rounds == 2);
  CHECK(res.image.t.size() == 4);
  CHECK(res.image.t.at({q3, c}) == Rat(1));
  CHECK(res.image.t.at({q3, m}) == Rat(-1));
  CHECK(res.image.t.at({q1, a}) == Rat(-1));
  CHECK(res.image.t.at({q1, m}) == Rat(1));
  for (auto& [tup, coef] : res.image.t) CHECK(small(tup));

  AffChain got = aff_add(R, aff_boundary(R, res.homotopy),
                         cover_subdivide(R, P, aff_boundary(R, in), small).homotopy);
  CHECK(aff_eq(got, aff_sub(R, res.image, in)));

  // carriers only shrink: every vertex stays inside [0,1]
  for (auto& [tup, coef] : res.image.t)
    for (int id : tup) {
      CHECK(P.point(id)[0] >= Rat(0));
      CHECK(P.point(id)[0] <= Rat(1));
    }
}

TEST_CASE("cover relative subdivision rejects covers with gaps") {
  Ring R = Ring::Q();
  PointStore P(1);
  int a = P.intern({Rat(0)}), c = P.intern({Rat(1)});
  BallCover U;
  U.members = {{Ball{{Rat(0)}, Rat(1, 5)}}, {Ball{{Rat(1)}, Rat(1, 5)}}};
  auto small = cover_small_pred(P, U);
  CHECK_THROWS_AS(cover_subdivide(R, P, single({a, c}), small), InputError);
}

TEST_CASE("carrier membership against complex cells") {
  GeomComplex K = path_complex();
  PointStore P(1);
  int a = P.intern({Rat(0)}), q1 = P.intern({Rat(1, 4)}), m = P.intern({Rat(1, 2)});
  std::vector<std::pair<int, int>> A = {{0, 0}};  // the vertex at 0
  CHECK(conv_meets_cells(P, {a}, K, A));
  CHECK(conv_meets_cells(P, {a, m}, K, A));
  CHECK(!conv_meets_cells(P, {q1, m}, K, A));

  PointStore P2(2);
  GeomComplex T = make_complex(
      2, {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}}, {{0, 1, 2}});
  int d0 = P2.intern({Rat(0), Rat(0)});
  int d1 = P2.intern({Rat(1), Rat(1)});
  int e0 = P2.intern({Rat(3, 4), Rat(3, 4)});
  CHECK(conv_meets_cells(P2, {d0, d1}, T, {{2, 0}}));
  CHECK(!conv_meets_cells(P2, {e0, d1}, T, {{2, 0}}));
}

TEST_CASE("killing generators whose carrier meets a set is not a chain map") {
  Ring R = Ring::Q();
  GeomComplex K = path_complex();
  PointStore P(1);
  int a = P.intern({Rat(0)}), q1 = P.intern({Rat(1, 4)}), m = P.intern({Rat(1, 2)});
  std::vector<std::pair<int, int>> A = {{0, 0}};
  auto hits = [&](const std::vector<int>& tup) { return conv_meets_cells(P, tup, K, A); };

  AffChain x = aff_add(R, single({a, m}), single({q1, m}));
  AffChain tx = aff_kill(R, x, hits);
  CHECK(tx.t.size() == 1);
  CHECK(tx.t.at({q1, m}) == Rat(1));
  for (auto& [tup, coef] : tx.t) CHECK(!hits(tup));

  AffChain lhs = aff_boundary(R, tx);
  AffChain rhs = aff_kill(R, aff_boundary(R, x), hits);
  CHECK(!aff_eq(lhs, rhs));  // theta is only used pointwise, never as a chain map
}

TEST_CASE("piecewise affine evaluation of a vertex map") {
  GeomComplex K = path_complex();
  std::vector<std::vector<Rat>> refl = {{Rat(1)}, {Rat(1, 2)}, {Rat(0)}};
  CHECK(simplicial_eval(K, refl, pt({Rat(1, 4)})) == pt({Rat(3, 4)}));
  CHECK(simplicial_eval(K, refl, pt({Rat(1)})) == pt({Rat(0)}));
  CHECK_THROWS_AS(simplicial_eval(K, refl, pt({Rat(2)})), InputError);
}

TEST_CASE("smallest cell containing all points of a tuple") {
  GeomComplex K = path_complex();
  PointStore P(1);
  int a = P.intern({Rat(0)}), q1 = P.intern({Rat(1, 4)});
  int m = P.intern({Rat(1, 2)}), q3 = P.intern({Rat(3, 4)});
  auto cell = common_cell(K, P, {a, q1});
  REQUIRE(cell.has_value());
  CHECK(*cell == std::make_pair(1, 0));
  auto vcell = common_cell(K, P, {m});
  REQUIRE(vcell.has_value());
  CHECK(*vcell == std::make_pair(0, 1));
  CHECK(!common_cell(K, P, {q1, q3}).has_value());
}

TEST_CASE("pushforward along a map commutes with the boundary on small chains") {
  Ring R = Ring::Q();
  GeomComplex K = path_complex();
  std::vector<std::vector<Rat>> refl = {{Rat(1)}, {Rat(1, 2)}, {Rat(0)}};
  PointStore P(1);
  int a = P.intern({Rat(0)}), c = P.intern({Rat(1)});
  AffChain s = aff_sd(R, P, single({a, c}));
  int m = P.intern({Rat(1, 2)});
  auto f = [&](const std::vector<Rat>& x) { return simplicial_eval(K, refl, x); };
  AffChain img = aff_pushforward(R, P, P, s, f);
  CHECK(img.t.size() == 2);
  CHECK(img.t.at({m, a}) == Rat(1));
  CHECK(img.t.at({m, c}) == Rat(-1));
  CHECK(aff_eq(aff_boundary(R, img),
               aff_pushforward(R, P, P, aff_boundary(R, s), f)));

  // a constant map produces degenerate simplices, not zero
  auto g = [&](const std::vector<Rat>&) { return pt({Rat(1, 2)}); };
  AffChain gi = aff_pushforward(R, P, P, single({a, c}), g);
  CHECK(gi.t.size() == 1);
  CHECK(gi.t.at({m, m}) == Rat(1));
  CHECK(aff_boundary(R, gi).t.empty());
}

TEST_CASE("cells of a geometric complex embed as affine chains") {
  Rat h(1, 2);
  std::vector<std::vector<Rat>> v = {{Rat(1), h, h}, {Rat(0), h, h}, {h, Rat(1), h},
                                     {h, Rat(0), h}, {h, h, Rat(1)}, {h, h, Rat(0)}};
  std::vector<std::vector<int>> faces;
  for (int a : {0, 1})
    for (int b : {2, 3})
      for (int c : {4, 5}) faces.push_back({a, b, c});
  GeomComplex K = make_complex(3, v, faces);
  Ring R = Ring::Q();
  ChainComplex C = chain_complex_of(K, R);
  PointStore P(3);
  for (int q = 1; q <= K.top_degree(); ++q)
    for (int id = 0; id < K.cell_count(q); ++id) {
      Chain gen;
      gen.degree = q;
      gen.c[id] = 1;
      AffChain lhs = aff_boundary(R, affine_of_cells(R, P, K, gen, q));
      AffChain rhs = affine_of_cells(R, P, K, C.boundary_of(gen), q - 1);
      CHECK(aff_eq(lhs, rhs));
    }
  Chain z;
  z.degree = 0;
  z.c[0] = Rat(2);
  z.c[3] = Rat(-1);
  CHECK(aff_augment(R, affine_of_cells(R, P, K, z, 0)) == Rat(1));
}
