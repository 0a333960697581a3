#include "tsv/json_io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace tsv::json_io {

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "." + key; }

std::string item(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + ": missing field '" + std::string(key) + "'");
  return *it;
}

void expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path + ": expected an array");
}

long long ll_at(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) {
    std::uint64_t u = j.get<std::uint64_t>();
    if (u > std::uint64_t(std::numeric_limits<long long>::max()))
      throw SchemaError(path + ": integer out of range");
    return static_cast<long long>(u);
  }
  if (j.is_number_integer()) return j.get<long long>();
  throw SchemaError(path + ": expected an integer");
}

std::size_t size_at(const Json& j, const std::string& path) {
  long long v = ll_at(j, path);
  if (v < 0) throw SchemaError(path + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::size_t index_at(const Json& j, std::size_t limit, const std::string& path) {
  std::size_t v = size_at(j, path);
  if (v >= limit)
    throw SchemaError(path + ": index " + std::to_string(v) + " out of range (limit " +
                      std::to_string(limit) + ")");
  return v;
}

// Lattice entries are numbers when they fit a 64-bit integer and decimal
// strings beyond that, accepted interchangeably on input.
Json int_out(const Int& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return Json(v.convert_to<long long>());
  return Json(v.str());
}

Int int_at(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      return Int(s);
    } catch (const std::runtime_error&) {
      throw SchemaError(path + ": cannot parse integer '" + s + "'");
    }
  }
  return Int(ll_at(j, path));
}

Rat rat_at(const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const TsvError& e) {
      throw SchemaError(path + ": " + e.what());
    }
  }
  if (j.is_number_integer() || j.is_number_unsigned()) return Rat(ll_at(j, path));
  throw SchemaError(path + ": expected a rational string \"a/b\"");
}

Json intvec_out(const lattice::IntVec& v) {
  Json a = Json::array();
  for (const Int& x : v) a.push_back(int_out(x));
  return a;
}

lattice::IntVec intvec_at(const Json& j, const std::string& path) {
  expect_array(j, path);
  lattice::IntVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(int_at(j[i], item(path, i)));
  return v;
}

lattice::IntMat intmat_at(const Json& j, const std::string& path) {
  expect_array(j, path);
  lattice::IntMat m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    lattice::IntVec row = intvec_at(j[i], item(path, i));
    if (!m.empty() && row.size() != m.front().size())
      throw SchemaError(item(path, i) + ": rows must have equal length");
    m.push_back(std::move(row));
  }
  return m;
}

Json intmat_out(const lattice::IntMat& m) {
  Json a = Json::array();
  for (const lattice::IntVec& row : m) a.push_back(intvec_out(row));
  return a;
}

std::size_t ray_key(const std::string& key, std::size_t limit) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
  if (ec != std::errc() || ptr != key.data() + key.size())
    throw SchemaError("decorations: key '" + key + "' is not a ray index");
  if (v >= limit)
    throw SchemaError("decorations: key '" + key + "' exceeds the ray count " +
                      std::to_string(limit));
  return v;
}

decofan::RayDecoration decoration_at(std::size_t q, const Json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.empty()) throw SchemaError(path + ": chain must list at least one matrix");
    superlie::DecorationChain chain;
    for (std::size_t i = 0; i < j.size(); ++i)
      chain.spaces.push_back(subspace_from_json(q, j[i], item(path, i)));
    return decofan::RayDecoration::of_chain(std::move(chain));
  }
  if (j.is_object() && j.contains("signs")) {
    const Json& s = *j.find("signs");
    expect_array(s, child(path, "signs"));
    if (s.size() != q)
      throw SchemaError(child(path, "signs") + ": expected one entry per odd coordinate");
    decofan::SignDecoration sd;
    for (std::size_t k = 0; k < s.size(); ++k) {
      long long v = ll_at(s[k], item(child(path, "signs"), k));
      if (v < -1 || v > 1)
        throw SchemaError(item(child(path, "signs"), k) + ": entries must be -1, 0 or +1");
      sd.signs.push_back(static_cast<int>(v));
    }
    return decofan::RayDecoration::of_signs(std::move(sd));
  }
  throw SchemaError(path + ": expected a chain of matrices or a {\"signs\": ...} object");
}

Json smooth_cone_to_json(const decofan::SmoothConeEntry& e) {
  Json o;
  o["ray_ids"] = e.ray_ids;
  o["status"] = e.status;
  Json w = Json::array();
  for (const superlie::Subspace& s : e.witness) w.push_back(subspace_to_json(s));
  o["witness"] = w;
  o["detail"] = e.detail;
  return o;
}

}  // namespace

Json matrix_to_json(const linalg::RatMat& m) {
  Json rows = Json::array();
  for (const linalg::RatVec& r : m) {
    Json row = Json::array();
    for (const Rat& x : r) row.push_back(rat_str(x));
    rows.push_back(std::move(row));
  }
  return rows;
}

linalg::RatMat matrix_from_json(const Json& j, const std::string& path) {
  expect_array(j, path);
  linalg::RatMat m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    expect_array(j[i], item(path, i));
    linalg::RatVec row;
    for (std::size_t k = 0; k < j[i].size(); ++k)
      row.push_back(rat_at(j[i][k], item(item(path, i), k)));
    if (!m.empty() && row.size() != m.front().size())
      throw SchemaError(item(path, i) + ": rows must have equal length");
    m.push_back(std::move(row));
  }
  return m;
}

Json subspace_to_json(const superlie::Subspace& s) { return matrix_to_json(s.basis()); }

superlie::Subspace subspace_from_json(std::size_t ambient, const Json& j,
                                      const std::string& path) {
  linalg::RatMat rows = matrix_from_json(j, path);
  if (!rows.empty() && rows.front().size() != ambient)
    throw SchemaError(path + ": expected rows of length " + std::to_string(ambient));
  return superlie::Subspace(ambient, std::move(rows));
}

Json fan_to_json(const lattice::Fan& fan) {
  Json j;
  j["rank"] = fan.rank;
  j["rays"] = intmat_out(fan.rays);
  Json cones = Json::array();
  for (const std::vector<std::size_t>& c : fan.cones) cones.push_back(c);
  j["cones"] = cones;
  return j;
}

lattice::Fan fan_from_json(const Json& j) {
  lattice::Fan f;
  f.rank = size_at(field(j, "rank", "fan"), "rank");
  const Json& rays = field(j, "rays", "fan");
  expect_array(rays, "rays");
  for (std::size_t i = 0; i < rays.size(); ++i) {
    lattice::IntVec v = intvec_at(rays[i], item("rays", i));
    if (v.size() != f.rank)
      throw SchemaError(item("rays", i) + ": expected " + std::to_string(f.rank) +
                        " coordinates");
    f.rays.push_back(std::move(v));
  }
  const Json& cones = field(j, "cones", "fan");
  expect_array(cones, "cones");
  for (std::size_t i = 0; i < cones.size(); ++i) {
    expect_array(cones[i], item("cones", i));
    std::vector<std::size_t> c;
    for (std::size_t k = 0; k < cones[i].size(); ++k)
      c.push_back(index_at(cones[i][k], f.rays.size(), item(item("cones", i), k)));
    f.cones.push_back(std::move(c));
  }
  return f;
}

Json torus_to_json(const superlie::SupertorusData& t) {
  Json j;
  j["p"] = t.p;
  j["q"] = t.q;
  Json x = Json::array();
  for (std::size_t i = 0; i < t.q; ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < t.q; ++k) {
      Json entry = Json::array();
      for (const Rat& c : t.x[i][k]) entry.push_back(rat_str(c));
      row.push_back(std::move(entry));
    }
    x.push_back(std::move(row));
  }
  j["x"] = x;
  return j;
}

superlie::SupertorusData torus_from_json(const Json& j) {
  superlie::SupertorusData t;
  t.p = size_at(field(j, "p", "torus"), "p");
  t.q = size_at(field(j, "q", "torus"), "q");
  const Json& x = field(j, "x", "torus");
  expect_array(x, "x");
  if (x.size() != t.q) throw SchemaError("x: expected " + std::to_string(t.q) + " rows");
  for (std::size_t i = 0; i < t.q; ++i) {
    expect_array(x[i], item("x", i));
    if (x[i].size() != t.q)
      throw SchemaError(item("x", i) + ": expected " + std::to_string(t.q) + " entries");
    std::vector<linalg::RatVec> row;
    for (std::size_t k = 0; k < t.q; ++k) {
      const std::string path = item(item("x", i), k);
      expect_array(x[i][k], path);
      if (x[i][k].size() != t.p)
        throw SchemaError(path + ": expected " + std::to_string(t.p) + " coordinates");
      linalg::RatVec entry;
      for (std::size_t c = 0; c < t.p; ++c) entry.push_back(rat_at(x[i][k][c], item(path, c)));
      row.push_back(std::move(entry));
    }
    t.x.push_back(std::move(row));
  }
  return t;
}

Json decorated_fan_to_json(const decofan::DecoratedFan& df) {
  Json j = torus_to_json(df.torus);
  Json f = fan_to_json(df.fan);
  j["rank"] = f["rank"];
  j["rays"] = f["rays"];
  j["cones"] = f["cones"];
  j["h"] = subspace_to_json(df.h);
  Json d = Json::object();
  for (std::size_t i = 0; i < df.decorations.size(); ++i) {
    const decofan::RayDecoration& dec = df.decorations[i];
    if (dec.sign_mode) {
      Json o;
      o["signs"] = dec.signs.signs;
      d[std::to_string(i)] = std::move(o);
    } else {
      Json chain = Json::array();
      for (const superlie::Subspace& s : dec.chain.spaces) chain.push_back(subspace_to_json(s));
      d[std::to_string(i)] = std::move(chain);
    }
  }
  j["decorations"] = d;
  return j;
}

decofan::DecoratedFan decorated_fan_from_json(const Json& j) {
  decofan::DecoratedFan df;
  df.torus = torus_from_json(j);
  df.fan = fan_from_json(j);
  df.h = subspace_from_json(df.torus.q, field(j, "h", "decorated fan"), "h");
  const Json& d = field(j, "decorations", "decorated fan");
  if (!d.is_object()) throw SchemaError("decorations: expected an object keyed by ray index");
  df.decorations.assign(df.fan.rays.size(), decofan::RayDecoration{});
  std::vector<bool> seen(df.fan.rays.size(), false);
  for (auto it = d.begin(); it != d.end(); ++it) {
    std::size_t idx = ray_key(it.key(), df.fan.rays.size());
    if (seen[idx]) throw SchemaError("decorations: duplicate entry for ray " + it.key());
    seen[idx] = true;
    df.decorations[idx] = decoration_at(df.torus.q, it.value(), child("decorations", it.key()));
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw SchemaError("decorations: missing entry for ray " + std::to_string(i));
  return df;
}

Json polytope_to_json(const qgr::DecoratedPolytope& dp) {
  Json j;
  j["vertices"] = matrix_to_json(dp.vertices);
  Json faces = Json::array();
  for (const qgr::PolytopeFace& f : dp.faces) {
    Json o;
    o["vertex_ids"] = f.vertex_ids;
    o["W"] = subspace_to_json(f.w);
    faces.push_back(std::move(o));
  }
  j["faces"] = faces;
  return j;
}

qgr::DecoratedPolytope polytope_from_json(const Json& j) {
  qgr::DecoratedPolytope dp;
  dp.vertices = matrix_from_json(field(j, "vertices", "polytope"), "vertices");
  if (dp.vertices.empty())
    throw SchemaError("vertices: at least one vertex is required to fix the ambient space");
  dp.ambient = dp.vertices.front().size();
  const Json& faces = field(j, "faces", "polytope");
  expect_array(faces, "faces");
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::string fp = item("faces", i);
    qgr::PolytopeFace f;
    const Json& ids = field(faces[i], "vertex_ids", fp);
    expect_array(ids, child(fp, "vertex_ids"));
    for (std::size_t k = 0; k < ids.size(); ++k) {
      std::size_t id = index_at(ids[k], dp.vertices.size(), item(child(fp, "vertex_ids"), k));
      if (!f.vertex_ids.empty() && id <= f.vertex_ids.back())
        throw SchemaError(child(fp, "vertex_ids") + ": ids must be strictly ascending");
      f.vertex_ids.push_back(id);
    }
    f.w = subspace_from_json(dp.ambient, field(faces[i], "W", fp), child(fp, "W"));
    dp.faces.push_back(std::move(f));
  }
  return dp;
}

Json pattern_to_json(const qgr::SupportPattern& sp) {
  Json j;
  j["r"] = sp.r;
  j["n"] = sp.n;
  j["rows"] = sp.rows;
  return j;
}

qgr::SupportPattern pattern_from_json(const Json& j) {
  qgr::SupportPattern sp;
  sp.r = size_at(field(j, "r", "pattern"), "r");
  sp.n = size_at(field(j, "n", "pattern"), "n");
  const Json& rows = field(j, "rows", "pattern");
  expect_array(rows, "rows");
  if (rows.size() != sp.n)
    throw SchemaError("rows: expected " + std::to_string(sp.n) + " rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    expect_array(rows[i], item("rows", i));
    if (rows[i].size() != sp.r)
      throw SchemaError(item("rows", i) + ": expected " + std::to_string(sp.r) + " entries");
    std::vector<int> row;
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      long long v = ll_at(rows[i][k], item(item("rows", i), k));
      if (v != 0 && v != 1)
        throw SchemaError(item(item("rows", i), k) + ": entries must be 0 or 1");
      row.push_back(static_cast<int>(v));
    }
    sp.rows.push_back(std::move(row));
  }
  return sp;
}

Json element_to_json(const exterior::ExteriorElement& e) {
  Json a = Json::array();
  for (const auto& [mask, coeff] : e.terms) {
    Json t;
    t["mask"] = mask;
    t["coeff"] = rat_str(coeff);
    a.push_back(std::move(t));
  }
  return a;
}

exterior::ExteriorElement element_from_json(const Json& j, const std::string& path) {
  expect_array(j, path);
  exterior::ExteriorElement e;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string tp = item(path, i);
    long long mask = ll_at(field(j[i], "mask", tp), child(tp, "mask"));
    if (mask < 0) throw SchemaError(child(tp, "mask") + ": expected a nonnegative integer");
    e.add_term(static_cast<exterior::Mask>(mask),
               rat_at(field(j[i], "coeff", tp), child(tp, "coeff")));
  }
  return e;
}

Json weight_space_to_json(const exterior::WeightSpace& ws) {
  Json j;
  j["weight"] = intvec_out(ws.weight);
  j["q"] = ws.q;
  j["dim"] = ws.dim();
  Json basis = Json::array();
  for (const exterior::ExteriorElement& e : ws.basis) basis.push_back(element_to_json(e));
  j["basis"] = basis;
  return j;
}

Json presentation_to_json(const decofan::SuperPresentation& chart) {
  Json j;
  j["p"] = chart.p;
  j["q"] = chart.q;
  Json eg = Json::array();
  for (const auto& [character, invertible] : chart.even_gens) {
    Json o;
    o["char"] = intvec_out(character);
    o["invertible"] = invertible;
    eg.push_back(std::move(o));
  }
  j["even_gens"] = eg;
  Json og = Json::array();
  for (const auto& [character, element] : chart.odd_gens) {
    Json o;
    o["char"] = intvec_out(character);
    o["element"] = element_to_json(element);
    og.push_back(std::move(o));
  }
  j["odd_gens"] = og;
  j["flag_basis"] = matrix_to_json(chart.flag_basis);
  j["ell"] = chart.ell;
  return j;
}

decofan::SuperPresentation presentation_from_json(const Json& j) {
  decofan::SuperPresentation chart;
  chart.p = size_at(field(j, "p", "chart"), "p");
  chart.q = size_at(field(j, "q", "chart"), "q");
  const Json& eg = field(j, "even_gens", "chart");
  expect_array(eg, "even_gens");
  for (std::size_t i = 0; i < eg.size(); ++i) {
    const std::string gp = item("even_gens", i);
    lattice::IntVec character = intvec_at(field(eg[i], "char", gp), child(gp, "char"));
    if (character.size() != chart.p)
      throw SchemaError(child(gp, "char") + ": expected " + std::to_string(chart.p) +
                        " coordinates");
    const Json& inv = field(eg[i], "invertible", gp);
    if (!inv.is_boolean()) throw SchemaError(child(gp, "invertible") + ": expected a boolean");
    chart.even_gens.emplace_back(std::move(character), inv.get<bool>());
  }
  const Json& og = field(j, "odd_gens", "chart");
  expect_array(og, "odd_gens");
  for (std::size_t i = 0; i < og.size(); ++i) {
    const std::string gp = item("odd_gens", i);
    lattice::IntVec character = intvec_at(field(og[i], "char", gp), child(gp, "char"));
    if (character.size() != chart.p)
      throw SchemaError(child(gp, "char") + ": expected " + std::to_string(chart.p) +
                        " coordinates");
    exterior::ExteriorElement element =
        element_from_json(field(og[i], "element", gp), child(gp, "element"));
    for (const auto& [mask, coeff] : element.terms) {
      (void)coeff;
      if (chart.q < 64 && (mask >> chart.q) != 0)
        throw SchemaError(child(gp, "element") + ": mask touches coordinates beyond q");
    }
    chart.odd_gens.emplace_back(std::move(character), std::move(element));
  }
  chart.flag_basis = matrix_from_json(field(j, "flag_basis", "chart"), "flag_basis");
  if (chart.flag_basis.size() != chart.q ||
      (chart.q > 0 && chart.flag_basis.front().size() != chart.q))
    throw SchemaError("flag_basis: expected a " + std::to_string(chart.q) + " x " +
                      std::to_string(chart.q) + " matrix");
  const Json& ell = field(j, "ell", "chart");
  expect_array(ell, "ell");
  for (std::size_t i = 0; i < ell.size(); ++i)
    chart.ell.push_back(ll_at(ell[i], item("ell", i)));
  return chart;
}

Json morphism_to_json(const decofan::MorphismData& m) {
  Json j;
  j["lattice_map"] = intmat_out(m.lattice_map);
  j["odd_map"] = matrix_to_json(m.odd_map);
  return j;
}

decofan::MorphismData morphism_from_json(const Json& j) {
  decofan::MorphismData m;
  m.lattice_map = intmat_at(field(j, "lattice_map", "morphism"), "lattice_map");
  m.odd_map = matrix_from_json(field(j, "odd_map", "morphism"), "odd_map");
  return m;
}

Json validity_to_json(const decofan::ValidityReport& r) {
  Json j;
  j["valid"] = r.valid;
  j["mode"] = r.mode;
  j["degree_bound"] = r.degree_bound;
  j["structural_errors"] = r.structural_errors;
  Json failures = Json::array();
  for (const decofan::ValidityFailure& f : r.failures) {
    Json o;
    o["condition"] = f.condition;
    o["ray_ids"] = f.ray_ids;
    o["m"] = intvec_out(f.m);
    o["detail"] = f.detail;
    failures.push_back(std::move(o));
  }
  j["failures"] = failures;
  return j;
}

Json smooth_to_json(const decofan::SmoothReport& r) {
  Json j;
  if (r.overall == "smooth")
    j["smooth"] = true;
  else if (r.overall == "not_smooth")
    j["smooth"] = false;
  else
    j["smooth"] = nullptr;
  j["overall"] = r.overall;
  j["witness"] = nullptr;
  for (const decofan::SmoothConeEntry& e : r.cones)
    if (e.status != "smooth") {
      j["witness"] = smooth_cone_to_json(e);
      break;
    }
  Json cones = Json::array();
  for (const decofan::SmoothConeEntry& e : r.cones) cones.push_back(smooth_cone_to_json(e));
  j["cones"] = cones;
  return j;
}

Json stabilizer_to_json(const decofan::StabilizerResult& r) {
  Json j;
  j["even"] = subspace_to_json(r.even);
  j["odd"] = subspace_to_json(r.odd);
  return j;
}

Json verdict_to_json(const ds::ThetaVerdict& v) {
  Json j;
  Json theta = Json::array();
  for (const Rat& c : v.theta) theta.push_back(rat_str(c));
  j["theta"] = theta;
  j["verdict"] = v.fr ? "FR" : "notFR";
  j["bound"] = v.bound;
  j["witness"] = v.witness;
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read file: " + path);
  return Json::parse(in);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tsv::json_io
