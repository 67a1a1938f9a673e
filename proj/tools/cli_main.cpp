#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "chainfix/fixindex.hpp"
#include "chainfix/homology.hpp"
#include "chainfix/instances.hpp"
#include "chainfix/io.hpp"
#include "chainfix/multimap.hpp"
#include "chainfix/realization.hpp"

using namespace chainfix;

namespace {

GeomComplex instance_complex(const std::string& name) {
  if (name == "point") return inst_point();
  if (name == "segment") return inst_segment();
  if (name == "path3") return inst_path3();
  if (name == "path5") return inst_path5();
  if (name == "hollow-triangle") return inst_hollow_triangle();
  if (name == "solid-triangle") return inst_solid_triangle();
  if (name == "hollow-hexagon") return inst_hollow_hexagon();
  if (name == "hexagonal-disk") return inst_hexagonal_disk();
  if (name == "octahedron") return inst_octahedron();
  if (name == "projective-plane") return inst_projective_plane();
  throw InputError("unknown instance: " + name);
}

GeomComplex complex_of(const Json& v) {
  if (v.is_string()) return instance_complex(v.get<std::string>());
  if (v.is_object() && v.contains("file"))
    return complex_of_json(load_json(v.at("file").get<std::string>()));
  return complex_of_json(v);
}

// the complex a named map lives on, so short configs stay short
std::optional<std::string> home_of_map(const std::string& s) {
  if (s.rfind("octahedron-", 0) == 0) return "octahedron";
  if (s.rfind("hexagon-", 0) == 0) return "hollow-hexagon";
  if (s.rfind("hexdisk-", 0) == 0) return "hexagonal-disk";
  if (s.rfind("path3-", 0) == 0) return "path3";
  if (s.rfind("path5-", 0) == 0) return "path5";
  if (s.rfind("segment-", 0) == 0) return "segment";
  return std::nullopt;
}

int suffix_int(const std::string& s, size_t at) {
  try {
    return std::stoi(s.substr(at));
  } catch (const std::exception&) {
    throw InputError("bad numeric suffix in: " + s);
  }
}

VertexSelfMap map_of(const GeomComplex& X, const Json& v) {
  if (v.is_array()) return {0, v.get<std::vector<int>>()};
  std::string s = v.get<std::string>();
  if (s == "identity") return {0, map_identity(X)};
  if (s.rfind("constant:", 0) == 0)
    return {0, map_constant(X, suffix_int(s, 9))};
  if (s == "path3-reflection") return {0, map_path3_reflection()};
  if (s == "segment-swap") return {0, map_segment_swap()};
  if (s.rfind("hexagon-rotation:", 0) == 0)
    return {0, map_hexagon_rotation(suffix_int(s, 17))};
  if (s == "hexagon-reflection") return {0, map_hexagon_reflection()};
  if (s.rfind("hexdisk-rotation:", 0) == 0)
    return {0, map_hexdisk_rotation(suffix_int(s, 17))};
  if (s == "octahedron-antipode") return {0, map_octahedron_antipode()};
  if (s == "octahedron-rotation") return {0, map_octahedron_rotation()};
  if (s == "path5-interior") return {1, map_path5_interior()};
  throw InputError("unknown map: " + s);
}

GeomComplex input_complex(const Json& cfg) {
  if (cfg.contains("input")) return complex_of(cfg.at("input"));
  if (cfg.contains("map") && cfg.at("map").is_string()) {
    auto home = home_of_map(cfg.at("map").get<std::string>());
    if (home) return instance_complex(*home);
  }
  throw InputError("config needs an input complex");
}

OpenRegion region_of(const GeomComplex& X, const Json& cfg) {
  if (!cfg.contains("region") || cfg.at("region") == "whole")
    return whole_region(X);
  const Json& r = cfg.at("region");
  CFX_INPUT(r.is_object() && r.contains("stars"),
            "region must be \"whole\" or {\"stars\": [[q, id], ...]}");
  std::vector<std::pair<int, int>> cells;
  for (const auto& c : r.at("stars")) {
    CFX_INPUT(c.is_array() && c.size() == 2, "star cells are [q, id]");
    cells.push_back({c[0].get<int>(), c[1].get<int>()});
  }
  return region_of_stars(X, cells);
}

IndexChoices choices_of(const Json& cfg) {
  IndexChoices ch;
  if (cfg.contains("depth")) ch.depth = cfg.at("depth").get<int>();
  if (cfg.contains("max-depth")) ch.max_depth = cfg.at("max-depth").get<int>();
  if (cfg.contains("fix-rounds"))
    ch.fix_rounds = cfg.at("fix-rounds").get<int>();
  if (cfg.contains("last-vertex"))
    ch.last_vertex = cfg.at("last-vertex").get<bool>();
  if (cfg.contains("big-B")) ch.big_B = cfg.at("big-B").get<bool>();
  return ch;
}

ConvexBody body_of(const Json& cfg) {
  CFX_INPUT(cfg.contains("body"), "config needs a body");
  const Json& v = cfg.at("body");
  if (v.is_string()) {
    if (v == "triangle") return inst_triangle_body();
    throw InputError("unknown body: " + v.get<std::string>());
  }
  if (v.is_object() && v.contains("file"))
    return body_of_json(load_json(v.at("file").get<std::string>()));
  return body_of_json(v);
}

MultiMap multimap_of(const Json& cfg) {
  CFX_INPUT(cfg.contains("multimap"), "config needs a multimap");
  const Json& v = cfg.at("multimap");
  if (v.is_string()) {
    if (v == "antipodal") {
      GeomComplex O = inst_octahedron();
      return multimap_from_selections(
          O, O, {map_identity(O), map_octahedron_antipode()});
    }
    throw InputError("unknown multimap: " + v.get<std::string>());
  }
  if (v.is_object() && v.contains("file"))
    return multimap_of_json(load_json(v.at("file").get<std::string>()));
  return multimap_of_json(v);
}

Ring ring_of(const Json& cfg, const std::string& flag,
             const std::string& fallback) {
  if (!flag.empty()) return parse_ring(flag);
  if (cfg.contains("ring")) return parse_ring(cfg.at("ring").get<std::string>());
  return parse_ring(fallback);
}

Rat rat_field(const Json& cfg, const std::string& key,
              const std::string& fallback) {
  if (!cfg.contains(key)) return parse_rat(fallback);
  const Json& v = cfg.at(key);
  CFX_INPUT(v.is_string(), key + " must be a rational string");
  return parse_rat(v.get<std::string>());
}

Json cells_json(const std::vector<std::pair<int, int>>& cells) {
  Json out = Json::array();
  for (auto c : cells) out.push_back(Json::array({c.first, c.second}));
  return out;
}

DichotomyScale scale_of(const Json& v) {
  CFX_INPUT(v.is_array() && v.size() == 3,
            "a scale is [level_U, level_V, \"eps\"]");
  DichotomyScale s;
  s.level_U = v[0].get<int>();
  s.level_V = v[1].get<int>();
  CFX_INPUT(v[2].is_string(), "scale radius must be a rational string");
  s.eps = parse_rat(v[2].get<std::string>());
  return s;
}

// --- command runners -------------------------------------------------------

bool run_verify_complex(const Json& cfg, Json& rep) {
  GeomComplex K = input_complex(cfg);
  VerifyReport vr = validate_complex(K, EmbeddingCheck::Full);
  Json counts = Json::array();
  for (int q = 0; q <= K.top_degree(); ++q) counts.push_back(K.cell_count(q));
  rep["cells"] = counts;
  rep["errors"] = vr.errors;
  return vr.ok;
}

bool run_homology(const Json& cfg, Json& rep, const std::string& ring_flag) {
  GeomComplex K = input_complex(cfg);
  Ring R = ring_of(cfg, ring_flag, "Z");
  rep["ring"] = R.name();
  HomologyResult H = homology(chain_complex_of(K, R), false);
  rep["betti"] = H.betti;
  Json tor = Json::array();
  for (const auto& deg : H.torsion) {
    Json d = Json::array();
    for (const auto& t : deg) d.push_back(t.get_str());
    tor.push_back(d);
  }
  rep["torsion"] = tor;
  return true;
}

bool run_lefschetz(const Json& cfg, Json& rep, const std::string& ring_flag) {
  GeomComplex K = input_complex(cfg);
  CFX_INPUT(cfg.contains("map"), "config needs a map");
  VertexSelfMap f = map_of(K, cfg.at("map"));
  CFX_INPUT(f.source_rounds == 0, "lefschetz needs a simplicial self map");
  Ring R = ring_of(cfg, ring_flag, "Q");
  rep["ring"] = R.name();
  ChainComplex C = chain_complex_of(K, R);
  ChainMorphism M = chain_map_of(R, K, C, K, C, f.image);
  Rat chain_level = lefschetz_number(M);
  Rat homology_level = lefschetz_number(induced_on_homology(M));
  rep["lambda"] = rat_str(chain_level);
  rep["lambda_homology"] = rat_str(homology_level);
  return chain_level == homology_level;
}

Json params_json(const RealizationParams& par) {
  Json p;
  p["eps"] = rat_str(par.eps);
  p["eps1"] = rat_str(par.eps1);
  p["delta"] = rat_str(par.delta);
  p["n"] = par.n;
  p["k"] = par.k;
  p["trunc"] = par.trunc;
  return p;
}

bool run_realize(const Json& cfg, Json& rep, const std::string& ring_flag) {
  ConvexBody X = body_of(cfg);
  Rat eps = rat_field(cfg, "epsilon", "1/2");
  Ring R = ring_of(cfg, ring_flag, "Z");
  rep["ring"] = R.name();
  Realization B = build_realization(X, eps, R);
  rep["parameters"] = params_json(B.par);
  rep["members"] = B.poset.size();
  Json counts = Json::array();
  for (int q = 0; q <= B.KD.K.top_degree(); ++q)
    counts.push_back(B.KD.K.cell_count(q));
  rep["k_cells"] = counts;
  VerifyReport ar = audit_realization(B);
  rep["errors"] = ar.errors;
  return ar.ok;
}

bool run_check_thm2(const Json& cfg, Json& rep, const std::string& ring_flag) {
  ConvexBody X = body_of(cfg);
  Rat eps = rat_field(cfg, "epsilon", "1/2");
  Ring R = ring_of(cfg, ring_flag, "Z");
  rep["ring"] = R.name();
  Realization B = build_realization(X, eps, R);
  rep["parameters"] = params_json(B.par);
  Thm2Report t = verify_theorem2(B);
  rep["carriers"] = t.carriers;
  rep["cells"] = t.cells;
  rep["composite"] = t.composite;
  rep["finite_piece"] = t.finite_piece;
  rep["notes"] = t.notes;
  return t.all();
}

bool run_index(const Json& cfg, Json& rep, const std::string& ring_flag) {
  GeomComplex K = input_complex(cfg);
  CFX_INPUT(cfg.contains("map"), "config needs a map");
  VertexSelfMap f = map_of(K, cfg.at("map"));
  if (cfg.contains("source-rounds"))
    f.source_rounds = cfg.at("source-rounds").get<int>();
  OpenRegion U = region_of(K, cfg);
  Ring R = ring_of(cfg, ring_flag, "Q");
  rep["ring"] = R.name();
  IndexResult r = index_of_map(K, R, f, U, choices_of(cfg));
  rep["index"] = rat_str(r.value);
  rep["fix_cells"] = cells_json(r.fix_cells);
  rep["fix_level"] = r.fix_level;
  rep["depth"] = r.depth;
  Json sep;
  sep["alpha"] = r.sep.alpha;
  sep["beta"] = r.sep.beta;
  sep["gamma"] = r.sep.gamma;
  sep["widen"] = r.sep.widen;
  sep["notes"] = r.sep.notes;
  rep["separation"] = sep;
  return true;
}

bool run_axioms(const Json& cfg, Json& rep, const std::string& ring_flag) {
  Ring R = ring_of(cfg, ring_flag, "Q");
  rep["ring"] = R.name();
  auto suite = index_property_suite(R);
  bool all = true;
  Json checks = Json::array();
  for (const auto& [name, ok] : suite) {
    Json c;
    c["name"] = name;
    c["pass"] = ok;
    checks.push_back(c);
    all = all && ok;
  }
  rep["checks"] = checks;
  return all;
}

bool run_multi(const Json& cfg, Json& rep) {
  MultiMap F = multimap_of(cfg);
  ContinuityReport u = is_usc(F);
  ContinuityReport c = is_vietoris_continuous(F);
  rep["usc"] = u.ok;
  if (!u.ok) rep["usc_witness"] = u.witness;
  rep["continuous"] = c.ok;
  if (!c.ok) rep["continuity_witness"] = c.witness;

  std::vector<DichotomyScale> sched;
  if (cfg.contains("schedule"))
    for (const auto& s : cfg.at("schedule")) sched.push_back(scale_of(s));
  else
    sched = {{0, 1, Rat(1, 4)}, {0, 2, Rat(1, 8)}};
  LefschetzDichotomy d = lefschetz_of_multimap(F, sched);
  rep["determinate"] = d.determinate;
  if (d.determinate) rep["lambda"] = rat_str(d.value);
  Json samples = Json::array();
  for (const Rat& t : d.samples) samples.push_back(rat_str(t));
  rep["samples"] = samples;
  if (!d.determinate) {
    rep["witness_a"] = rat_str(d.witness_a);
    rep["witness_b"] = rat_str(d.witness_b);
  }
  rep["notes"] = d.notes;

  if (cfg.contains("search")) {
    FixSearchResult r = fixed_point_certificate(F, scale_of(cfg.at("search")));
    Json s;
    s["kind"] = r.kind == FixSearchResult::Kind::Located     ? "located"
                : r.kind == FixSearchResult::Kind::Refuted   ? "refuted"
                                                             : "inconclusive";
    if (r.kind == FixSearchResult::Kind::Located) {
      s["cell"] = Json::array({r.cell.first, r.cell.second});
      s["value_cell"] = Json::array({r.value_cell.first, r.value_cell.second});
    }
    if (r.kind == FixSearchResult::Kind::Refuted) {
      s["gap"] = rat_str(r.gap);
      s["trace"] = rat_str(r.trace);
    }
    s["notes"] = r.notes;
    rep["search"] = s;
  }
  return u.ok;
}

bool run_modp(const Json& cfg, Json& rep) {
  GeomComplex K = input_complex(cfg);
  CFX_INPUT(cfg.contains("map"), "config needs a map");
  VertexSelfMap f = map_of(K, cfg.at("map"));
  CFX_INPUT(cfg.contains("p"), "config needs a prime p");
  int p = cfg.at("p").get<int>();
  int k = cfg.contains("k") ? cfg.at("k").get<int>() : 1;
  OpenRegion U = region_of(K, cfg);
  ModPReport m = mod_p_check(K, f, U, p, k, choices_of(cfg));
  rep["p"] = m.p;
  rep["k"] = m.k;
  rep["index_f"] = rat_str(m.ind_f);
  rep["index_fm"] = rat_str(m.ind_fm);
  rep["hypothesis_ok"] = m.hypothesis_ok;
  rep["congruent"] = m.congruent;
  return m.ok();
}

bool run_emit_battery(const Json& cfg, Json& rep, const std::string& out_dir) {
  std::string dir =
      cfg.contains("dir") ? cfg.at("dir").get<std::string>() : out_dir;
  CFX_INPUT(!dir.empty(), "emit-battery needs a directory (--out or dir)");
  if (dir.back() == '/') dir.pop_back();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  CFX_INPUT(!ec, "cannot create " + dir + ": " + ec.message());

  GeomComplex O = inst_octahedron();
  MultiMap anti = multimap_from_selections(
      O, O, {map_identity(O), map_octahedron_antipode()});

  std::vector<std::pair<std::string, Json>> files = {
      {"point.json", json_of_complex(inst_point())},
      {"segment.json", json_of_complex(inst_segment())},
      {"hollow-triangle.json", json_of_complex(inst_hollow_triangle())},
      {"hexagonal-disk.json", json_of_complex(inst_hexagonal_disk())},
      {"octahedron.json", json_of_complex(O)},
      {"triangle-body.json", json_of_body(inst_triangle_body())},
      {"antipodal-multimap.json", json_of_multimap(anti)},
  };
  Json names = Json::array();
  for (const auto& [name, j] : files) {
    save_json(dir + "/" + name, j);
    names.push_back(name);
  }
  rep["dir"] = dir;
  rep["files"] = names;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chain-level fixed point toolkit"};
  std::string config_path, out_path, ring_flag;
  unsigned long long seed = 0;
  bool text = false, timing = false;
  app.add_option("--config", config_path, "job file (json)")->required();
  app.add_option("--out", out_path, "report path (default stdout)");
  app.add_option("--seed", seed, "seed echoed into the report");
  app.add_option("--ring", ring_flag, "Z, Q or Zp:<p>, overriding the config");
  app.add_flag("--text", text, "print a one-line summary to stderr");
  app.add_flag("--timing", timing,
               "append wall-clock timing (not byte-deterministic)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  Json rep;
  std::string command;
  int code = 0;
  bool out_is_dir = false;
  try {
    Json cfg = load_json(config_path);
    CFX_INPUT(cfg.is_object() && cfg.contains("command"),
              "config needs a command");
    command = cfg.at("command").get<std::string>();
    if (cfg.contains("seed")) seed = cfg.at("seed").get<unsigned long long>();
    rep["command"] = command;
    rep["seed"] = seed;

    bool pass;
    if (command == "verify-complex")
      pass = run_verify_complex(cfg, rep);
    else if (command == "homology")
      pass = run_homology(cfg, rep, ring_flag);
    else if (command == "lefschetz")
      pass = run_lefschetz(cfg, rep, ring_flag);
    else if (command == "realize")
      pass = run_realize(cfg, rep, ring_flag);
    else if (command == "check-thm2")
      pass = run_check_thm2(cfg, rep, ring_flag);
    else if (command == "index")
      pass = run_index(cfg, rep, ring_flag);
    else if (command == "axioms")
      pass = run_axioms(cfg, rep, ring_flag);
    else if (command == "multi")
      pass = run_multi(cfg, rep);
    else if (command == "modp")
      pass = run_modp(cfg, rep);
    else if (command == "emit-battery") {
      out_is_dir = !cfg.contains("dir");
      pass = run_emit_battery(cfg, rep, out_path);
    } else
      throw InputError("unknown command: " + command);

    rep["pass"] = pass;
    code = pass ? 0 : 1;
  } catch (const InputError& e) {
    rep["error"] = e.what();
    rep["pass"] = false;
    code = 2;
  } catch (const CheckError& e) {
    rep["error"] = e.what();
    rep["pass"] = false;
    code = 1;
  } catch (const std::exception& e) {
    rep["error"] = e.what();
    rep["pass"] = false;
    code = 2;
  }

  if (timing) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    rep["timing_ms"] = static_cast<long long>(ms);
  }

  std::string body = json_text(rep);
  bool to_file = !out_path.empty() && !out_is_dir;
  if (to_file) {
    std::ofstream out(out_path);
    if (!out.good()) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << body;
  } else {
    std::cout << body;
  }
  if (text)
    std::cerr << (command.empty() ? std::string("job") : command) << ": "
              << (code == 0 ? "pass" : "fail") << "\n";
  return code;
}
