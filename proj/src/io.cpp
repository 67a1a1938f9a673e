#include "chainfix/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace chainfix {

namespace {

Json rat_rows(const std::vector<std::vector<Rat>>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row = Json::array();
    for (const auto& x : r) row.push_back(rat_str(x));
    out.push_back(row);
  }
  return out;
}

std::vector<std::vector<Rat>> rows_of(const Json& j) {
  std::vector<std::vector<Rat>> out;
  CFX_INPUT(j.is_array(), "expected an array of coordinate rows");
  for (const auto& row : j) {
    CFX_INPUT(row.is_array(), "expected a coordinate row");
    std::vector<Rat> r;
    for (const auto& x : row) {
      CFX_INPUT(x.is_string(), "coordinates must be rational strings");
      r.push_back(parse_rat(x.get<std::string>()));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Json json_of_complex(const GeomComplex& K) {
  Json j;
  j["ambient"] = K.ambient;
  j["vertices"] = rat_rows(K.vertices);
  Json cs = Json::array();
  for (const auto& deg : K.cells) {
    Json d = Json::array();
    for (const auto& c : deg) d.push_back(c);
    cs.push_back(d);
  }
  j["cells"] = cs;
  return j;
}

GeomComplex complex_of_json(const Json& j) {
  CFX_INPUT(j.is_object() && j.contains("ambient") && j.contains("vertices") &&
                j.contains("cells"),
            "complex json needs ambient, vertices and cells");
  int ambient = j.at("ambient").get<int>();
  std::vector<std::vector<Rat>> verts = rows_of(j.at("vertices"));
  std::vector<std::vector<int>> tops;
  CFX_INPUT(j.at("cells").is_array(), "cells must be an array per degree");
  for (const auto& deg : j.at("cells")) {
    CFX_INPUT(deg.is_array(), "cells must be an array per degree");
    for (const auto& c : deg) tops.push_back(c.get<std::vector<int>>());
  }
  return make_complex(ambient, std::move(verts), tops);
}

Json json_of_body(const ConvexBody& X) {
  Json j;
  j["d"] = X.d;
  j["generators"] = rat_rows(X.generators);
  j["sample"] = rat_rows(X.sample);
  return j;
}

ConvexBody body_of_json(const Json& j) {
  CFX_INPUT(j.is_object() && j.contains("d") && j.contains("generators") &&
                j.contains("sample"),
            "body json needs d, generators and sample");
  ConvexBody X;
  X.d = j.at("d").get<int>();
  X.generators = rows_of(j.at("generators"));
  X.sample = rows_of(j.at("sample"));
  return X;
}

Json json_of_multimap(const MultiMap& F) {
  Json j;
  j["domain"] = json_of_complex(F.X);
  j["target"] = json_of_complex(F.Y);
  Json vals = Json::array();
  for (const auto& deg : F.values) {
    Json d = Json::array();
    for (const auto& v : deg) {
      Json cells = Json::array();
      for (auto c : v) cells.push_back(Json::array({c.first, c.second}));
      d.push_back(cells);
    }
    vals.push_back(d);
  }
  j["values"] = vals;
  if (!F.selections.empty()) {
    Json sel = Json::array();
    for (const auto& f : F.selections) sel.push_back(f);
    j["selections"] = sel;
  }
  return j;
}

MultiMap multimap_of_json(const Json& j) {
  CFX_INPUT(j.is_object() && j.contains("domain") && j.contains("target"),
            "multimap json needs domain and target");
  GeomComplex X = complex_of_json(j.at("domain"));
  GeomComplex Y = complex_of_json(j.at("target"));
  if (j.contains("selections") && !j.at("selections").empty()) {
    std::vector<std::vector<int>> sel;
    for (const auto& f : j.at("selections"))
      sel.push_back(f.get<std::vector<int>>());
    return multimap_from_selections(X, Y, std::move(sel));
  }
  CFX_INPUT(j.contains("values"), "multimap json needs values or selections");
  std::vector<std::vector<CellSet>> values;
  for (const auto& deg : j.at("values")) {
    std::vector<CellSet> d;
    for (const auto& v : deg) {
      CellSet cs;
      for (const auto& c : v) {
        CFX_INPUT(c.is_array() && c.size() == 2, "value cells are [q, id]");
        cs.push_back({c[0].get<int>(), c[1].get<int>()});
      }
      d.push_back(cs);
    }
    values.push_back(std::move(d));
  }
  return multimap_from_cells(X, Y, std::move(values));
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

Json load_json(const std::string& path) {
  std::ifstream in(path);
  CFX_INPUT(in.good(), "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  CFX_INPUT(out.good(), "cannot write " + path);
  out << json_text(j);
}

}  // namespace chainfix
