#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chainfix/homology.hpp"
#include "chainfix/instances.hpp"
#include "chainfix/multimap.hpp"
#include "doctest.h"

using namespace chainfix;

namespace {

CellSet closure_of(const GeomComplex& Y,
                   const std::vector<std::vector<int>>& tops) {
  CellSet out;
  for (const auto& t : tops) {
    int n = (int)t.size();
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> sub;
      for (int k = 0; k < n; ++k)
        if (mask & (1 << k)) sub.push_back(t[k]);
      std::sort(sub.begin(), sub.end());
      out.push_back({(int)sub.size() - 1, Y.find_cell(sub).value()});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<CellSet>> constant_values(const GeomComplex& X,
                                                  const CellSet& v) {
  std::vector<std::vector<CellSet>> vals(X.cells.size());
  for (int q = 0; q <= X.top_degree(); ++q) vals[q].assign(X.cell_count(q), v);
  return vals;
}

CellSet all_cells(const GeomComplex& Y) {
  CellSet out;
  for (int q = 0; q <= Y.top_degree(); ++q)
    for (int id = 0; id < Y.cell_count(q); ++id) out.push_back({q, id});
  return out;
}

int fine_vertex_at(const GeomComplex& fine, const std::vector<Rat>& p) {
  for (int w = 0; w < (int)fine.vertices.size(); ++w)
    if (fine.vertices[w] == p) return w;
  return -1;
}

// path with a jump at the middle vertex: everything maps to the left
// endpoint except the middle vertex, whose value is the whole left edge
MultiMap jump_map(const GeomComplex& P) {
  auto vals = constant_values(P, {{0, 0}});
  vals[0][1] = closure_of(P, {{0, 1}});
  return multimap_from_cells(P, P, vals);
}

}  // namespace

TEST_CASE("selection families are continuous multimaps") {
  GeomComplex P = inst_path3();
  MultiMap F = multimap_from_selections(P, P, {map_identity(P)});
  CHECK(is_usc(F).ok);
  CHECK(is_vietoris_continuous(F).ok);
  CHECK(F.values[0][0] == CellSet{{0, 0}});
  CHECK(F.values[1][0] == CellSet{{0, 0}, {0, 1}, {1, 0}});

  GeomComplex O = inst_octahedron();
  MultiMap A = multimap_from_selections(
      O, O, {map_identity(O), map_octahedron_antipode()});
  CHECK(is_usc(A).ok);
  CHECK(is_vietoris_continuous(A).ok);
  CHECK(A.values[0][0] == CellSet{{0, 0}, {0, 1}});

  // a non-simplicial selection is rejected
  CHECK_THROWS_AS(multimap_from_selections(P, P, {{0, 2, 1}}), InputError);
  CHECK_THROWS_AS(multimap_from_selections(P, P, {}), InputError);
}

TEST_CASE("cell values: semicontinuity and its failure") {
  GeomComplex P = inst_path3();

  MultiMap F = jump_map(P);
  CHECK(is_usc(F).ok);
  auto c = is_vietoris_continuous(F);
  CHECK(!c.ok);
  CHECK(!c.witness.empty());

  // value grows from the vertices to the edge around them: not usc
  auto vals = constant_values(P, {{0, 0}});
  vals[1][0] = closure_of(P, {{0, 1}});
  MultiMap G = multimap_from_cells(P, P, vals);
  auto u = is_usc(G);
  CHECK(!u.ok);
  CHECK(!u.witness.empty());

  // values must be closed and nonempty
  auto bad = constant_values(P, {{0, 0}});
  bad[0][2] = {{1, 0}};  // edge without its endpoints
  CHECK_THROWS_AS(multimap_from_cells(P, P, bad), InputError);
  auto bad2 = constant_values(P, {{0, 0}});
  bad2[0][2] = {};
  CHECK_THROWS_AS(multimap_from_cells(P, P, bad2), InputError);
}

TEST_CASE("value envelopes and exact fattenings") {
  GeomComplex P = inst_path3();
  MultiMap F = jump_map(P);

  // the envelope of the left edge picks up the jump at its right endpoint
  CHECK(value_envelope(F, 1, 0) == CellSet{{0, 0}, {0, 1}, {1, 0}});
  CHECK(value_envelope(F, 0, 0) == CellSet{{0, 0}});
  CHECK(value_envelope(F, 1, 1) == closure_of(P, {{0, 1}}));

  // exact weighted-l1 distances on the path
  CHECK(set_distance(P, 0, 2, P, {{0, 0}}) == Rat(1, 2));
  CHECK(set_distance(P, 0, 0, P, {{0, 2}}) == Rat(1, 2));
  CHECK(set_distance(P, 0, 2, P, closure_of(P, {{0, 1}})) == Rat(1, 4));
  CHECK(set_distance(P, 1, 1, P, {{0, 0}}) == Rat(1, 4));
  CHECK(set_distance(P, 1, 0, P, {{0, 0}}) == Rat(0));

  // vertex against the opposite face of the octahedron
  GeomComplex O = inst_octahedron();
  CHECK(set_distance(O, 0, 0, O, closure_of(O, {{1, 3, 5}})) == Rat(5, 16));
  CHECK(set_distance(O, 0, 0, O, {{0, 1}}) == Rat(1, 2));

  // fattenings close under faces
  CHECK(metric_fattening(P, {{0, 0}}, Rat(1, 16)) ==
        CellSet{{0, 0}, {0, 1}, {1, 0}});
  CHECK(metric_fattening(P, {{0, 0}}, Rat(1, 4)) == all_cells(P));
  CHECK(metric_fattening(P, {{0, 2}}, Rat(1, 8)) ==
        CellSet{{0, 1}, {0, 2}, {1, 1}});
}

TEST_CASE("acyclic values approximate over the disk") {
  GeomComplex D = inst_hexagonal_disk();
  CellSet T0 = closure_of(D, {{0, 1, 6}});
  MultiMap F = multimap_from_cells(D, D, constant_values(D, T0));
  CHECK(is_usc(F).ok);
  CHECK(is_vietoris_continuous(F).ok);

  auto cert = approximate(F, 0, 1, Rat(1, 4));
  CHECK(cert.level_U == 0);
  CHECK(cert.level_V == 1);
  auto audit = verify_approximation(cert);
  CHECK(audit.ok);
  CHECK(lefschetz_of_certificate(cert) == Rat(1));

  // the second deterministic construction lands on the same trace
  auto cert2 = approximate(F, 0, 1, Rat(1, 4), -1, true);
  CHECK(verify_approximation(cert2).ok);
  CHECK(lefschetz_of_certificate(cert2) == Rat(1));
}

TEST_CASE("spherical values are rejected with their homology") {
  GeomComplex P = inst_path3();
  GeomComplex T = inst_hollow_triangle();
  MultiMap F = multimap_from_cells(P, T, constant_values(P, all_cells(T)));
  CHECK(is_usc(F).ok);

  bool threw = false;
  try {
    approximate(F, 0, 1, Rat(1, 8));
  } catch (const InputError& e) {
    threw = true;
    CHECK(std::string(e.what()).find("acyclic") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("selection averages certify the antipodal pair") {
  GeomComplex O = inst_octahedron();
  MultiMap F = multimap_from_selections(
      O, O, {map_identity(O), map_octahedron_antipode()});

  auto avg = approximate(F, 0, 1, Rat(1, 4));
  CHECK(verify_approximation(avg).ok);

  // over a base vertex the average splits between the two poles
  int w = fine_vertex_at(avg.fineX, O.vertices[0]);
  REQUIRE(w >= 0);
  std::map<int, Rat> half = {{0, Rat(1, 2)}, {1, Rat(1, 2)}};
  CHECK(avg.phi.deg[0].col[w] == half);

  auto cid = approximate(F, 0, 1, Rat(1, 4), 0);
  auto ca = approximate(F, 0, 1, Rat(1, 4), 1);
  CHECK(verify_approximation(cid).ok);
  CHECK(verify_approximation(ca).ok);
  CHECK(lefschetz_of_certificate(cid) == Rat(2));
  CHECK(lefschetz_of_certificate(ca) == Rat(0));
  CHECK(lefschetz_of_certificate(avg) == Rat(1));

  // affine mixing moves the trace along the segment between the two
  for (const Rat& q : {Rat(0), Rat(1, 4), Rat(1, 2), Rat(1)}) {
    auto m = mix_certificates(cid, ca, q);
    CHECK(verify_approximation(m).ok);
    Rat expect = Rat(2) * q;
    CHECK(lefschetz_of_certificate(m) == expect);
  }

  // scales must match
  auto fine = approximate(F, 0, 2, Rat(1, 4), 0);
  CHECK_THROWS_AS(mix_certificates(cid, fine, Rat(1, 2)), InputError);
}

TEST_CASE("forged certificates fail the audit") {
  GeomComplex P = inst_path3();
  MultiMap F = multimap_from_cells(P, P, constant_values(P, {{0, 0}}));

  auto cert = approximate(F, 0, 1, Rat(1, 4));
  CHECK(verify_approximation(cert).ok);
  CHECK(lefschetz_of_certificate(cert) == Rat(1));

  // redirect every point to the far endpoint: still a chain map, and the
  // quarter radius just barely covers it through the right edge
  auto forged = cert;
  for (int w = 0; w < (int)forged.fineX.vertices.size(); ++w)
    forged.phi.deg[0].col[w] = {{2, Rat(1)}};
  CHECK(verify_approximation(forged).ok);
  forged.eps = Rat(1, 8);
  auto a = verify_approximation(forged);
  CHECK(!a.ok);
  CHECK(!a.notes.empty());

  // perturbing one boundary coefficient breaks commutation
  auto bent = cert;
  bent.phi.deg[1].col[0][0] += Rat(1);
  CHECK(!verify_approximation(bent).ok);

  // doubling a point image breaks augmentation
  auto heavy = cert;
  heavy.phi.deg[0].col[0][0] += Rat(1);
  CHECK(!verify_approximation(heavy).ok);
}

TEST_CASE("trace dichotomy across scales") {
  std::vector<DichotomyScale> sched = {{0, 1, Rat(1, 4)}, {0, 2, Rat(1, 8)}};

  GeomComplex O = inst_octahedron();
  MultiMap I = multimap_from_selections(O, O, {map_identity(O)});
  auto d1 = lefschetz_of_multimap(I, sched);
  CHECK(d1.determinate);
  CHECK(d1.value == Rat(2));
  CHECK(d1.samples.size() == 2);

  GeomComplex H = inst_hollow_hexagon();
  MultiMap R1 = multimap_from_selections(H, H, {map_hexagon_rotation(1)});
  auto dr = lefschetz_of_multimap(R1, sched);
  CHECK(dr.determinate);
  CHECK(dr.value == Rat(0));

  MultiMap A = multimap_from_selections(
      O, O, {map_identity(O), map_octahedron_antipode()});
  auto d2 = lefschetz_of_multimap(A, sched);
  CHECK(!d2.determinate);
  CHECK(d2.samples.size() == 6);
  CHECK(d2.witness_a != d2.witness_b);
  bool pair_20 = (d2.witness_a == Rat(2) && d2.witness_b == Rat(0)) ||
                 (d2.witness_a == Rat(0) && d2.witness_b == Rat(2));
  CHECK(pair_20);
  CHECK(std::count(d2.samples.begin(), d2.samples.end(), Rat(1)) == 2);
  CHECK(!d2.notes.empty());

  GeomComplex D = inst_hexagonal_disk();
  CellSet T0 = closure_of(D, {{0, 1, 6}});
  MultiMap C = multimap_from_cells(D, D, constant_values(D, T0));
  std::vector<DichotomyScale> sched2 = {{0, 1, Rat(1, 4)}, {0, 2, Rat(1, 4)}};
  auto d3 = lefschetz_of_multimap(C, sched2);
  CHECK(d3.determinate);
  CHECK(d3.value == Rat(1));
  CHECK(d3.samples.size() == 4);
}

TEST_CASE("a separated scale refutes fixed cells") {
  GeomComplex H = inst_hollow_hexagon();
  MultiMap R3 = multimap_from_selections(H, H, {map_hexagon_rotation(3)});

  auto res = fixed_point_certificate(R3, {0, 2, Rat(1, 32)});
  CHECK(res.kind == FixSearchResult::Kind::Refuted);
  CHECK(res.gap == Rat(1, 4));
  CHECK(res.gap > Rat(3, 32));
  CHECK(res.trace == Rat(0));
  CHECK(!res.notes.empty());

  // the same map at a radius too coarse for the gap stays open
  auto resI = fixed_point_certificate(R3, {0, 1, Rat(1, 4)});
  CHECK(resI.kind == FixSearchResult::Kind::Inconclusive);

  // the antipodal family meets its own value at every cell, so the search
  // locates a candidate even though its trace is ambiguous
  GeomComplex O = inst_octahedron();
  MultiMap A = multimap_from_selections(
      O, O, {map_identity(O), map_octahedron_antipode()});
  auto resA = fixed_point_certificate(A, {0, 1, Rat(1, 4)});
  CHECK(resA.kind == FixSearchResult::Kind::Located);
  CHECK(resA.cell == std::pair<int, int>{0, 0});
  CHECK(resA.value_cell == std::pair<int, int>{0, 0});
  CHECK(!resA.notes.empty());

  // a constant map with an acyclic value locates a cell inside the value
  GeomComplex D = inst_hexagonal_disk();
  CellSet T0 = closure_of(D, {{0, 1, 6}});
  MultiMap C = multimap_from_cells(D, D, constant_values(D, T0));
  auto resC = fixed_point_certificate(C, {0, 1, Rat(1, 4)});
  CHECK(resC.kind == FixSearchResult::Kind::Located);
  CHECK(resC.cell == std::pair<int, int>{0, 0});
}
