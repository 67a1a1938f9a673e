#pragma once

#include <map>
#include <string>
#include <vector>

#include "chainfix/chain.hpp"

namespace chainfix {

// Incremental builder for complexes with named cells and explicit boundaries.
struct CellSystem {
  Ring ring;
  std::vector<std::vector<std::string>> names;
  std::vector<std::vector<std::map<int, Rat>>> bnd;
  std::vector<Rat> aug;
  std::map<std::string, std::pair<int, int>> id_of;

  explicit CellSystem(const Ring& R) : ring(R) {}
  bool has(const std::string& name) const { return id_of.count(name) > 0; }
  std::pair<int, int> id(const std::string& name) const;
  int add(int dim, const std::string& name,
          const std::vector<std::pair<std::string, Rat>>& boundary,
          const Rat& augmentation = Rat(0));
  ChainComplex freeze() const;
};

// M x I with generator bookkeeping: per cell s of M the product holds s@0,
// s@1 and the prism s@I, with d(s@I) = s@1 - s@0 - (ds)@I.
struct ProductWithI {
  ChainComplex chain;
  std::vector<std::vector<int>> bot, top;  // base degree q -> product degree q
  std::vector<std::vector<int>> prism;     // base degree q -> product degree q+1
};
ProductWithI product_with_interval(const ChainComplex& M);
ChainMorphism include_bottom(const ChainComplex& M, const ProductWithI& P);
ChainMorphism include_top(const ChainComplex& M, const ProductWithI& P);
ChainMorphism project_product(const ProductWithI& P, const ChainComplex& M);
// h(s) = s@I is a chain homotopy from the bottom to the top inclusion
ChainHomotopy prism_homotopy(const ChainComplex& M, const ProductWithI& P);

// Cone with the augmented convention d(v.s) = s - v.ds, so the formula is
// degree-uniform; the apex is the cone of the empty chain.
struct ConeData {
  ChainComplex chain;
  int apex = 0;
  std::vector<std::vector<int>> base_id;  // base degree q -> cone degree q
  std::vector<std::vector<int>> cone_id;  // base degree q -> cone degree q+1
};
ConeData cone_complex(const ChainComplex& C, const std::string& apex_name);
// v.d for a chain d of the base; a degree -1 chain (augmentation value at
// slot 0) yields a multiple of the apex.
Chain cone_chain(const ConeData& K, const Chain& d);

// Join with an edge: cells s, v0.s, v1.s, v0v1.s and the edge itself, with
// d(v0v1.s) = v1.s - v0.s + v0v1.ds.
struct JoinData {
  ChainComplex chain;
  int v0 = 0, v1 = 0;  // degree-0 ids
  int edge = 0;        // degree-1 id
  std::vector<std::vector<int>> base_id, cone0_id, cone1_id, join_id;
};
JoinData join_with_edge(const ChainComplex& C, const std::string& v0_name,
                        const std::string& v1_name);
Chain join_chain(const JoinData& J, const Chain& d);   // v0v1.d
Chain cone_chain0(const JoinData& J, const Chain& d);  // v0.d
Chain cone_chain1(const JoinData& J, const Chain& d);  // v1.d

// Reindexes a chain through an id map (degree-preserving offset tables).
Chain map_chain(const std::vector<std::vector<int>>& idmap, const Chain& d,
                int degree_shift = 0);

}  // namespace chainfix
