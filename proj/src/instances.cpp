#include "chainfix/instances.hpp"

#include <numeric>

#include "chainfix/rational.hpp"

namespace chainfix {

namespace {

std::vector<Rat> pt1(const Rat& x) { return {x}; }
std::vector<Rat> pt2(const Rat& x, const Rat& y) { return {x, y}; }
std::vector<Rat> pt3(const Rat& x, const Rat& y, const Rat& z) {
  return {x, y, z};
}

}  // namespace

GeomComplex inst_point() { return make_complex(1, {pt1(Rat(0))}, {{0}}); }

GeomComplex inst_segment() {
  return make_complex(1, {pt1(Rat(0)), pt1(Rat(1))}, {{0, 1}});
}

GeomComplex inst_path3() {
  return make_complex(1, {pt1(Rat(0)), pt1(Rat(1, 2)), pt1(Rat(1))},
                      {{0, 1}, {1, 2}});
}

GeomComplex inst_path5() {
  return make_complex(1,
                      {pt1(Rat(0)), pt1(Rat(1, 4)), pt1(Rat(1, 2)),
                       pt1(Rat(3, 4)), pt1(Rat(1))},
                      {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
}

namespace {
std::vector<std::vector<Rat>> triangle_coords() {
  return {pt2(Rat(0), Rat(0)), pt2(Rat(1), Rat(0)), pt2(Rat(1, 2), Rat(1))};
}
}  // namespace

GeomComplex inst_hollow_triangle() {
  return make_complex(2, triangle_coords(), {{0, 1}, {0, 2}, {1, 2}});
}

GeomComplex inst_solid_triangle() {
  return make_complex(2, triangle_coords(), {{0, 1, 2}});
}

namespace {
std::vector<std::vector<Rat>> hexagon_coords() {
  return {pt2(Rat(1), Rat(1, 2)),    pt2(Rat(3, 4), Rat(1)),
          pt2(Rat(1, 4), Rat(1)),    pt2(Rat(0), Rat(1, 2)),
          pt2(Rat(1, 4), Rat(0)),    pt2(Rat(3, 4), Rat(0))};
}
}  // namespace

GeomComplex inst_hollow_hexagon() {
  return make_complex(2, hexagon_coords(),
                      {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
}

GeomComplex inst_hexagonal_disk() {
  std::vector<std::vector<Rat>> v = hexagon_coords();
  v.push_back(pt2(Rat(1, 2), Rat(1, 2)));
  return make_complex(
      2, v, {{0, 1, 6}, {1, 2, 6}, {2, 3, 6}, {3, 4, 6}, {4, 5, 6}, {0, 5, 6}});
}

GeomComplex inst_octahedron() {
  const Rat h(1, 2);
  std::vector<std::vector<Rat>> v = {pt3(Rat(1), h, h), pt3(Rat(0), h, h),
                                     pt3(h, Rat(1), h), pt3(h, Rat(0), h),
                                     pt3(h, h, Rat(1)), pt3(h, h, Rat(0))};
  std::vector<std::vector<int>> tops;
  for (int a = 0; a <= 1; ++a)
    for (int b = 2; b <= 3; ++b)
      for (int c = 4; c <= 5; ++c) tops.push_back({a, b, c});
  return make_complex(3, v, tops);
}

GeomComplex inst_projective_plane() {
  std::vector<std::vector<Rat>> v(6, std::vector<Rat>(6, Rat(0)));
  for (int i = 0; i < 6; ++i) v[i][i] = Rat(1);
  return make_complex(6, v,
                      {{0, 1, 2},
                       {0, 1, 3},
                       {0, 2, 4},
                       {0, 3, 5},
                       {0, 4, 5},
                       {1, 2, 5},
                       {1, 3, 4},
                       {1, 4, 5},
                       {2, 3, 4},
                       {2, 3, 5}});
}

std::vector<int> map_identity(const GeomComplex& X) {
  std::vector<int> f(X.vertices.size());
  std::iota(f.begin(), f.end(), 0);
  return f;
}

std::vector<int> map_constant(const GeomComplex& X, int v) {
  CFX_INPUT(v >= 0 && v < (int)X.vertices.size(),
            "constant map target is not a vertex");
  return std::vector<int>(X.vertices.size(), v);
}

std::vector<int> map_path3_reflection() { return {2, 1, 0}; }

std::vector<int> map_segment_swap() { return {1, 0}; }

std::vector<int> map_hexagon_rotation(int steps) {
  std::vector<int> f(6);
  for (int i = 0; i < 6; ++i) f[i] = ((i + steps) % 6 + 6) % 6;
  return f;
}

std::vector<int> map_hexdisk_rotation(int steps) {
  std::vector<int> f = map_hexagon_rotation(steps);
  f.push_back(6);
  return f;
}

std::vector<int> map_hexagon_reflection() { return {0, 5, 4, 3, 2, 1}; }

std::vector<int> map_octahedron_antipode() { return {1, 0, 3, 2, 5, 4}; }

std::vector<int> map_octahedron_rotation() { return {0, 1, 4, 5, 3, 2}; }

std::vector<int> map_path5_interior() { return {0, 0, 2, 4, 4, 0, 1, 3, 4}; }

ConvexBody inst_triangle_body() {
  ConvexBody B;
  B.d = 3;
  const Rat q(1, 4), t(3, 4), h(1, 2);
  B.generators = {pt3(q, q, q), pt3(t, q, q), pt3(q, t, q)};
  B.sample = B.generators;
  B.sample.push_back(pt3(h, q, q));
  B.sample.push_back(pt3(q, h, q));
  B.sample.push_back(pt3(h, h, q));
  B.sample.push_back(pt3(Rat(5, 12), Rat(5, 12), q));
  return B;
}

}  // namespace chainfix
