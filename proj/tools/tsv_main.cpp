// Command-line surface: reads decorated fans, polytopes and charts from JSON
// files, runs the library verdicts and prints structured results. Exit codes
// separate computed verdicts from operational failures: 0 means a verdict was
// reached (even a negative one), 2 means malformed input JSON, 3 means the
// input uses an unsupported feature, and 1 covers everything else.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsv/catalog.hpp"
#include "tsv/json_io.hpp"

namespace {

using tsv::Int;
using tsv::Rat;
using Json = tsv::json_io::Json;

tsv::lattice::IntVec to_intvec(const std::vector<long long>& v) {
  tsv::lattice::IntVec out;
  for (long long e : v) out.emplace_back(e);
  return out;
}

void check_cone_ids(const std::vector<std::size_t>& cone, std::size_t ray_count) {
  for (std::size_t id : cone)
    if (id >= ray_count)
      throw tsv::PreconditionError("cone ray index " + std::to_string(id) +
                                   " out of range (the fan has " + std::to_string(ray_count) +
                                   " rays)");
}

// Plain-text rendering of a coefficient vector like "2*theta1 - theta3".
std::string combination_label(const tsv::linalg::RatVec& row, const std::string& name) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] == 0) continue;
    Rat c = row[i];
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (c < 0) c = -c;
    if (c != 1) out += tsv::rat_str(c) + "*";
    out += name + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

std::string subspace_label(const tsv::superlie::Subspace& s) {
  if (s.dim() == 0) return "0";
  if (s.dim() == s.ambient()) return "full";
  std::string out = "span{";
  for (std::size_t i = 0; i < s.basis().size(); ++i) {
    if (i > 0) out += ", ";
    out += combination_label(s.basis()[i], "theta");
  }
  return out + "}";
}

std::string decoration_label(const tsv::decofan::RayDecoration& dec,
                             const tsv::lattice::IntVec& ray) {
  if (dec.sign_mode) {
    if (dec.signs.is_zero()) return "0";
    std::string out = "C(";
    bool first = true;
    for (std::size_t i = 0; i < dec.signs.signs.size(); ++i) {
      if (dec.signs.signs[i] == 0) continue;
      if (!first) out += dec.signs.signs[i] > 0 ? " + " : " - ";
      else if (dec.signs.signs[i] < 0)
        out += "-";
      first = false;
      if (ray[i] != 1) out += "sqrt(" + ray[i].str() + ")*";
      out += "theta" + std::to_string(i + 1);
    }
    return out + ")";
  }
  std::string out;
  for (std::size_t i = 0; i < dec.chain.spaces.size(); ++i) {
    if (i > 0) out += " > ";
    out += subspace_label(dec.chain.spaces[i]);
  }
  return out;
}

// Text mode flattens the JSON verdict into "path: value" lines; arrays of
// scalars stay inline so ray vectors read naturally.
bool scalar_array(const Json& j) {
  for (const Json& e : j)
    if (!e.is_primitive()) return false;
  return true;
}

void render_text(std::ostream& os, const Json& j, const std::string& key) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) render_text(os, v, key.empty() ? k : key + "." + k);
    return;
  }
  if (j.is_array() && !j.empty() && !scalar_array(j)) {
    for (std::size_t i = 0; i < j.size(); ++i)
      render_text(os, j[i], key + "[" + std::to_string(i) + "]");
    return;
  }
  os << key << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

void emit(const Json& j, const std::string& format) {
  if (format == "text") {
    std::ostringstream os;
    render_text(os, j, "");
    std::cout << os.str();
  } else {
    std::cout << tsv::json_io::dump(j);
  }
}

tsv::decofan::DecoratedFan load_fan(const std::string& path) {
  return tsv::json_io::decorated_fan_from_json(tsv::json_io::load_json_file(path));
}

Json fan_pair_equal(const tsv::decofan::DecoratedFan& a, const tsv::decofan::DecoratedFan& b) {
  return tsv::json_io::dump(tsv::json_io::decorated_fan_to_json(a)) ==
         tsv::json_io::dump(tsv::json_io::decorated_fan_to_json(b));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decorated-fan calculator for toric supervarieties"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  app.add_option("--output", format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  long long seed = 0;
  app.add_option("--seed", seed, "Accepted for interface compatibility; core paths are exact");
  int jobs = 1;
  app.add_option("--jobs", jobs, "Accepted for interface compatibility; the driver is serial")
      ->check(CLI::PositiveNumber);

  std::string input;
  std::string mode = "general";
  long long validate_bound = 2;
  CLI::App* validate = app.add_subcommand("validate", "Check the decorated-fan conditions");
  validate->add_option("input", input, "Decorated fan JSON file")->required();
  validate->add_option("--mode", mode, "Condition set to check")
      ->check(CLI::IsMember({"general", "large_orbit"}))
      ->capture_default_str();
  validate->add_option("--degree-bound", validate_bound, "Character search bound")
      ->check(CLI::PositiveNumber)
      ->envname("TSV_DEGREE_BOUND");

  std::size_t ray_index = 0;
  CLI::App* chart = app.add_subcommand("chart", "Print the normal-form presentation of a ray chart");
  chart->add_option("input", input, "Decorated fan JSON file")->required();
  chart->add_option("--ray", ray_index, "Ray index")->required();

  std::vector<std::size_t> cone_ids;
  std::vector<long long> m_coords;
  CLI::App* weight_space =
      app.add_subcommand("weight-space", "Weight component of a cone's chart algebra");
  weight_space->add_option("input", input, "Decorated fan JSON file")->required();
  weight_space->add_option("--cone", cone_ids, "Ray indices of the cone; omit for the zero cone")
      ->delimiter(',');
  weight_space->add_option("--m", m_coords, "Even character, one entry per torus dimension")
      ->delimiter(',')
      ->required();

  CLI::App* stabilizer = app.add_subcommand("stabilizer", "Orbit stabilizer of a cone");
  stabilizer->add_option("input", input, "Decorated fan JSON file")->required();
  stabilizer->add_option("--cone", cone_ids, "Ray indices of the cone; omit for the zero cone")
      ->delimiter(',');

  CLI::App* smooth = app.add_subcommand("smooth", "Smoothness verdict with per-cone witnesses");
  smooth->add_option("input", input, "Decorated fan JSON file")->required();

  CLI::App* resolve = app.add_subcommand("resolve", "Smooth resolution by fan refinement");
  resolve->add_option("input", input, "Decorated fan JSON file")->required();

  std::string dst_path;
  std::string map_path;
  long long morphism_bound = 2;
  CLI::App* morphism = app.add_subcommand("morphism", "Check a map between large-orbit fans");
  morphism->add_option("input", input, "Source decorated fan JSON file")->required();
  morphism->add_option("target", dst_path, "Target decorated fan JSON file")->required();
  morphism->add_option("--map", map_path, "Lattice and odd map JSON file")->required();
  morphism->add_option("--degree-bound", morphism_bound, "Character search bound")
      ->check(CLI::PositiveNumber)
      ->envname("TSV_DEGREE_BOUND");

  std::string override_path;
  long long ds_bound = 6;
  CLI::App* ds_check =
      app.add_subcommand("ds-check", "Cohomological regularity of a ray chart");
  ds_check->add_option("input", input, "Decorated fan JSON file")->required();
  ds_check->add_option("--ray", ray_index, "Ray index")->required();
  ds_check->add_option("--override", override_path, "Chart presentation JSON replacing the ray's");
  ds_check->add_option("--degree-bound", ds_bound, "Weight bound for the verdict")
      ->check(CLI::PositiveNumber)
      ->envname("TSV_DEGREE_BOUND");

  std::string fan_path;
  CLI::App* enumerate =
      app.add_subcommand("enumerate", "Count valid square-root decorations of a fan");
  enumerate->add_option("--fan", fan_path, "Fan plus torus JSON file")->required();

  std::size_t qgr_r = 0;
  std::size_t qgr_n = 0;
  std::string pattern_path;
  CLI::App* qgr = app.add_subcommand(
      "qgr", "Orbit-closure data in the isomeric supergrassmannian QGr(r, n)");
  CLI::Option* opt_r = qgr->add_option("--r", qgr_r, "Subspace dimension of the generic pattern");
  CLI::Option* opt_n = qgr->add_option("--n", qgr_n, "Ambient dimension of the generic pattern");
  CLI::Option* opt_pattern =
      qgr->add_option("--pattern", pattern_path, "Support pattern JSON file");
  opt_r->needs(opt_n);
  opt_n->needs(opt_r);
  opt_pattern->excludes(opt_r);
  opt_pattern->excludes(opt_n);

  CLI::App* polytope_to_fan =
      app.add_subcommand("polytope-to-fan", "Normal fan of a decorated polytope");
  polytope_to_fan->add_option("input", input, "Decorated polytope JSON file")->required();

  CLI::App* plot_data =
      app.add_subcommand("plot-data", "Ray coordinates and decoration labels for plotting");
  plot_data->add_option("input", input, "Decorated fan JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    Json out;

    if (app.got_subcommand(validate)) {
      out = tsv::json_io::validity_to_json(
          tsv::decofan::validate(load_fan(input), mode, validate_bound));
    } else if (app.got_subcommand(chart)) {
      out = tsv::json_io::presentation_to_json(tsv::decofan::ray_chart(load_fan(input), ray_index));
    } else if (app.got_subcommand(weight_space)) {
      const tsv::decofan::DecoratedFan df = load_fan(input);
      check_cone_ids(cone_ids, df.fan.rays.size());
      if (m_coords.size() != df.torus.p)
        throw tsv::PreconditionError("--m needs " + std::to_string(df.torus.p) + " entries");
      out = tsv::json_io::weight_space_to_json(
          tsv::decofan::sigma_weight_space(df, cone_ids, to_intvec(m_coords)));
    } else if (app.got_subcommand(stabilizer)) {
      const tsv::decofan::DecoratedFan df = load_fan(input);
      check_cone_ids(cone_ids, df.fan.rays.size());
      out = tsv::json_io::stabilizer_to_json(tsv::decofan::orbit_stabilizer(df, cone_ids));
    } else if (app.got_subcommand(smooth)) {
      const tsv::decofan::SmoothReport report = tsv::decofan::smooth_check(load_fan(input));
      out = tsv::json_io::smooth_to_json(report);
    } else if (app.got_subcommand(resolve)) {
      const tsv::decofan::Resolution res = tsv::decofan::resolve(load_fan(input));
      out["refined"] = tsv::json_io::decorated_fan_to_json(res.refined);
      out["morphism"] = tsv::json_io::morphism_to_json(res.morphism);
    } else if (app.got_subcommand(morphism)) {
      const bool ok =
          tsv::decofan::morphism_check(load_fan(input), load_fan(dst_path),
                                       tsv::json_io::morphism_from_json(
                                           tsv::json_io::load_json_file(map_path)),
                                       morphism_bound);
      out["morphism"] = ok;
    } else if (app.got_subcommand(ds_check)) {
      std::optional<tsv::decofan::SuperPresentation> override_chart;
      if (!override_path.empty())
        override_chart = tsv::json_io::presentation_from_json(
            tsv::json_io::load_json_file(override_path));
      const std::vector<tsv::ds::ThetaVerdict> verdicts =
          tsv::ds::hr1_condition_e(load_fan(input), ray_index, override_chart, ds_bound);
      bool all_fr = true;
      Json list = Json::array();
      for (const tsv::ds::ThetaVerdict& v : verdicts) {
        all_fr = all_fr && v.fr;
        list.push_back(tsv::json_io::verdict_to_json(v));
      }
      out["ray"] = ray_index;
      out["bound"] = ds_bound;
      out["all_fr"] = all_fr;
      out["verdicts"] = list;
    } else if (app.got_subcommand(enumerate)) {
      const Json j = tsv::json_io::load_json_file(fan_path);
      const std::size_t count = tsv::decofan::enumerate_decorations(
                                    tsv::json_io::torus_from_json(j),
                                    tsv::json_io::fan_from_json(j))
                                    .size();
      out["count"] = count;
    } else if (app.got_subcommand(qgr)) {
      tsv::qgr::SupportPattern sp;
      if (!pattern_path.empty()) {
        sp = tsv::json_io::pattern_from_json(tsv::json_io::load_json_file(pattern_path));
      } else if (opt_r->count() > 0) {
        sp = tsv::qgr::SupportPattern::generic(qgr_r, qgr_n);
      } else {
        throw tsv::PreconditionError("qgr needs either --r/--n or --pattern");
      }
      sp.validate();
      const tsv::qgr::PatternStabilizer st = tsv::qgr::stabilizer_from_pattern(sp);
      const tsv::decofan::DecoratedFan fan = tsv::qgr::orbit_closure_fan(sp);
      out["pattern"] = tsv::json_io::pattern_to_json(sp);
      out["blocks"] = st.blocks;
      Json stab;
      stab["even"] = tsv::json_io::subspace_to_json(st.even);
      stab["odd"] = tsv::json_io::subspace_to_json(st.odd);
      out["stabilizer"] = stab;
      out["fan"] = tsv::json_io::decorated_fan_to_json(fan);
      if (sp.rows == tsv::qgr::SupportPattern::generic(sp.r, sp.n).rows) {
        const tsv::qgr::DecoratedPolytope dp = tsv::qgr::hypersimplex_polytope(sp.r, sp.n);
        out["polytope"] = tsv::json_io::polytope_to_json(dp);
        out["roundtrip_matches"] = fan_pair_equal(tsv::qgr::polytope_fan_roundtrip(dp), fan);
      }
    } else if (app.got_subcommand(polytope_to_fan)) {
      out = tsv::json_io::decorated_fan_to_json(tsv::qgr::polytope_fan_roundtrip(
          tsv::json_io::polytope_from_json(tsv::json_io::load_json_file(input))));
    } else if (app.got_subcommand(plot_data)) {
      const tsv::decofan::DecoratedFan df = load_fan(input);
      if (df.fan.rank > 3)
        throw tsv::UnsupportedError("plot data is limited to fans of rank at most 3");
      out["rank"] = df.fan.rank;
      Json rays = Json::array();
      for (std::size_t i = 0; i < df.fan.rays.size(); ++i) {
        Json r;
        r["id"] = i;
        Json coords = Json::array();
        for (const Int& c : df.fan.rays[i]) coords.push_back(c.convert_to<long long>());
        r["coordinates"] = coords;
        r["label"] = decoration_label(df.decorations[i], df.fan.rays[i]);
        rays.push_back(r);
      }
      out["rays"] = rays;
      Json cones = Json::array();
      for (const std::vector<std::size_t>& c : df.fan.cones) cones.push_back(c);
      out["cones"] = cones;
    }

    emit(out, format);
    return 0;
  } catch (const Json::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tsv::json_io::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tsv::UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tsv::TsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
