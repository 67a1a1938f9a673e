#pragma once

#include "chainfix/realization.hpp"
#include "chainfix/simplicial.hpp"

namespace chainfix {

// Canonical desk-scale instances. All coordinates are exact dyadic rationals
// in the unit cube, so every metric certificate stays exact.

GeomComplex inst_point();
GeomComplex inst_segment();          // [0,1], one edge
GeomComplex inst_path3();            // 0, 1/2, 1
GeomComplex inst_path5();            // 0, 1/4, 1/2, 3/4, 1
GeomComplex inst_hollow_triangle();
GeomComplex inst_solid_triangle();
// center (1/2,1/2), rim (1,1/2),(3/4,1),(1/4,1),(0,1/2),(1/4,0),(3/4,0);
// rim vertices get ids 0..5, the center id 6
GeomComplex inst_hollow_hexagon();   // rim only
GeomComplex inst_hexagonal_disk();   // rim + center, 6 triangles
// boundary of the octahedron inscribed in the cube; antipodal pairs
// (0,1), (2,3), (4,5)
GeomComplex inst_octahedron();
GeomComplex inst_projective_plane(); // 6-vertex triangulation

// vertex self-maps (images per vertex, simplicial on the complex itself)
std::vector<int> map_identity(const GeomComplex& X);
std::vector<int> map_constant(const GeomComplex& X, int v);
std::vector<int> map_path3_reflection();    // swaps the endpoints, fixes 1/2
std::vector<int> map_segment_swap();
std::vector<int> map_hexagon_rotation(int steps);  // rim rotation, rim only
std::vector<int> map_hexdisk_rotation(int steps);  // rim rotation, center fixed
std::vector<int> map_hexagon_reflection();  // axis through vertices 0 and 3
std::vector<int> map_octahedron_antipode();
std::vector<int> map_octahedron_rotation(); // quarter turn about the 0-1 axis

// interior map of the five-vertex path: simplicial only after one
// subdivision; fixes 0, 1/2 and 1, with 1/2 repelling
std::vector<int> map_path5_interior();

// the convex body driven through the full realization pipeline
ConvexBody inst_triangle_body();

}  // namespace chainfix
