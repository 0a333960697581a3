// JSON serialization of the core objects and verdict reports. Rationals are
// strings "a/b", matrices are row lists of such strings, lattice vectors are
// plain integer arrays. All emitters use insertion-ordered objects so output
// bytes are stable across runs.
#pragma once

#include <string>

#include "json.hpp"
#include "tsv/decofan.hpp"
#include "tsv/ds.hpp"
#include "tsv/qgr.hpp"

namespace tsv::json_io {

using Json = nlohmann::ordered_json;

// Well-formed JSON that does not match the expected schema; the message names
// the offending path.
struct SchemaError : TsvError {
  using TsvError::TsvError;
};

// Rational matrices (subspace bases, odd maps, polytope vertices).
Json matrix_to_json(const linalg::RatMat& m);
linalg::RatMat matrix_from_json(const Json& j, const std::string& path);

Json subspace_to_json(const superlie::Subspace& s);
superlie::Subspace subspace_from_json(std::size_t ambient, const Json& j,
                                      const std::string& path);

// {"rank": p, "rays": [[ints]], "cones": [[ray indices]]}
Json fan_to_json(const lattice::Fan& fan);
lattice::Fan fan_from_json(const Json& j);

// {"p": p, "q": q, "x": q x q x p rational strings}
Json torus_to_json(const superlie::SupertorusData& t);
superlie::SupertorusData torus_from_json(const Json& j);

// Torus and fan fields side by side plus "h" (matrix) and "decorations", an
// object keyed by ray index whose values are either a chain [matrix, ...]
// (the last matrix repeats implicitly) or {"signs": [-1|0|+1 per odd
// coordinate]}.
Json decorated_fan_to_json(const decofan::DecoratedFan& df);
decofan::DecoratedFan decorated_fan_from_json(const Json& j);

// {"vertices": [[rationals]], "faces": [{"vertex_ids": [...], "W": matrix}]}
Json polytope_to_json(const qgr::DecoratedPolytope& dp);
qgr::DecoratedPolytope polytope_from_json(const Json& j);

// {"r": r, "n": n, "rows": [[0|1 per column]]}
Json pattern_to_json(const qgr::SupportPattern& sp);
qgr::SupportPattern pattern_from_json(const Json& j);

// Exterior elements as [{"mask": bitmask, "coeff": "a/b"}, ...] term lists.
Json element_to_json(const exterior::ExteriorElement& e);
exterior::ExteriorElement element_from_json(const Json& j, const std::string& path);

// Debug dump: weight, generator count and the echelon basis as term lists.
Json weight_space_to_json(const exterior::WeightSpace& ws);

// Chart presentations, usable both as `chart` output and as the override
// input of `ds-check`.
Json presentation_to_json(const decofan::SuperPresentation& chart);
decofan::SuperPresentation presentation_from_json(const Json& j);

// {"lattice_map": [[ints]], "odd_map": [[rationals]]}
Json morphism_to_json(const decofan::MorphismData& m);
decofan::MorphismData morphism_from_json(const Json& j);

// Verdict reports (output only).
Json validity_to_json(const decofan::ValidityReport& r);
Json smooth_to_json(const decofan::SmoothReport& r);
Json stabilizer_to_json(const decofan::StabilizerResult& r);
Json verdict_to_json(const ds::ThetaVerdict& v);

// Reads and parses a file; io failures and parse errors (with line/column)
// surface as PreconditionError and nlohmann parse_error respectively.
Json load_json_file(const std::string& path);

// Canonical dump: two-space indent plus trailing newline.
std::string dump(const Json& j);

}  // namespace tsv::json_io
