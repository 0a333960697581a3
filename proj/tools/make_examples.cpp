// Regenerates the JSON example files under data/ from the catalog fixtures.
// Usage: make_examples [output directory]
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "tsv/catalog.hpp"
#include "tsv/json_io.hpp"

namespace {

using Json = tsv::json_io::Json;

void write(const std::filesystem::path& dir, const std::string& name, const Json& j) {
  const std::filesystem::path path = dir / name;
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(1);
  }
  out << tsv::json_io::dump(j);
  std::cout << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  namespace cat = tsv::catalog;
  namespace jio = tsv::json_io;
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);

  write(dir, "interleaved_chains.json", jio::decorated_fan_to_json(cat::interleaved_chains()));
  write(dir, "quartet_ray.json", jio::decorated_fan_to_json(cat::quartet_ray_fan()));
  write(dir, "quartet_twisted_chart.json",
        jio::presentation_to_json(cat::quartet_twisted_chart()));
  write(dir, "entangled_lines.json", jio::decorated_fan_to_json(cat::entangled_lines()));
  write(dir, "entangled_lines_subdivided.json",
        jio::decorated_fan_to_json(cat::entangled_lines_subdivided()));

  tsv::decofan::MorphismData identity;
  for (std::size_t i = 0; i < 3; ++i) {
    tsv::lattice::IntVec row(3, tsv::Int(0));
    row[i] = 1;
    identity.lattice_map.push_back(row);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    tsv::linalg::RatVec row(2, tsv::Rat(0));
    row[i] = 1;
    identity.odd_map.push_back(row);
  }
  write(dir, "entangled_identity_map.json", jio::morphism_to_json(identity));

  write(dir, "projective_superspace_2.json",
        jio::decorated_fan_to_json(cat::projective_superspace(2)));
  write(dir, "projective_superspace_2_abelian.json",
        jio::decorated_fan_to_json(cat::projective_superspace_abelian(2)));
  for (std::size_t n = 1; n <= 3; ++n)
    write(dir, "projective_blank_" + std::to_string(n) + ".json",
          jio::decorated_fan_to_json(cat::projective_blank(n)));
  write(dir, "obstructed_pair.json", jio::decorated_fan_to_json(cat::obstructed_pair()));

  tsv::decofan::DecoratedFan empty;
  empty.torus = tsv::superlie::SupertorusData::abelian(2, 1);
  empty.h = tsv::superlie::Subspace::zero(1);
  empty.fan = tsv::lattice::Fan{2, {}, {{}}};
  write(dir, "empty_fan.json", jio::decorated_fan_to_json(empty));

  write(dir, "segment_polytope.json", jio::polytope_to_json(tsv::qgr::hypersimplex_polytope(1, 2)));
  return 0;
}
