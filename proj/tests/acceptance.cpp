// Acceptance gate for the decorated-fan calculator: nine criteria, one
// pass/fail line each. Time limits are part of the criteria and enforced;
// all numeric expectations are exact (arbitrary-precision arithmetic).
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "testgen.hpp"
#include "tsv/catalog.hpp"
#include "tsv/decofan.hpp"
#include "tsv/ds.hpp"
#include "tsv/exterior.hpp"
#include "tsv/json_io.hpp"
#include "tsv/lattice.hpp"
#include "tsv/qgr.hpp"

using namespace tsv;
using namespace tsv::decofan;
using namespace tsv::lattice;
using namespace tsv::testgen;
using exterior::ExteriorElement;
using exterior::WeightSpace;
using json_io::Json;

namespace {

int failures = 0;

struct Gate {
  bool ok = true;
  std::string why;

  void expect(bool cond, const std::string& label) {
    if (!cond && ok) why = label;
    ok = ok && cond;
  }
};

void run(int id, const std::string& name, double limit_s,
         const std::function<void(Gate&)>& body) {
  Gate g;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(g);
  } catch (const std::exception& e) {
    g.expect(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit_s) g.expect(false, "time limit exceeded");
  if (!g.ok) ++failures;
  std::string line = (g.ok ? "PASS" : "FAIL");
  char timing[64];
  std::snprintf(timing, sizeof timing, "  %6.2fs (limit %gs)", secs, limit_s);
  line += timing;
  if (!g.ok) line += "  [" + g.why + "]";
  std::printf("criterion %d  %-54s %s\n", id, name.c_str(), line.c_str());
  std::fflush(stdout);
}

struct RunResult {
  int code = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(TSV_CLI_PATH) + " " + args + " > acc_stdout.txt 2> acc_stderr.txt";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp("acc_stdout.txt");
  return r;
}

std::string write_fan(const std::string& name, const DecoratedFan& df) {
  std::ofstream(name) << json_io::dump(json_io::decorated_fan_to_json(df));
  return name;
}

ExteriorElement xi(std::initializer_list<std::size_t> bits) {
  exterior::Mask m = 0;
  for (std::size_t b : bits) m |= exterior::Mask(1) << b;
  return ExteriorElement::monomial(m);
}

// The bounded DJ witness family: V_{sigma,m} enlarged by subset sums of the
// chain spaces and h.
std::vector<Subspace> dj_witnesses(const DecoratedFan& df, const std::vector<std::size_t>& ids,
                                   const IntVec& m) {
  std::set<Subspace> atoms;
  atoms.insert(df.h);
  for (std::size_t r : ids)
    for (const Subspace& s : df.decorations[r].chain.spaces) atoms.insert(s);
  const std::vector<Subspace> atom_list(atoms.begin(), atoms.end());
  const Subspace base = cone_decoration(df, ids, m);
  std::set<Subspace> sums;
  for (std::size_t mask = 0; mask < (std::size_t{1} << atom_list.size()); ++mask) {
    Subspace cand = base;
    for (std::size_t b = 0; b < atom_list.size(); ++b)
      if ((mask >> b) & 1) cand = sum(cand, atom_list[b]);
    sums.insert(std::move(cand));
  }
  std::vector<Subspace> passing;
  for (const Subspace& w : sums)
    if (dj_check(df, ids, m, w)) passing.push_back(w);
  return passing;
}

std::vector<IntVec> character_set(const Fan& fan, const std::vector<std::size_t>& ids) {
  IntMat gens;
  for (std::size_t id : ids) gens.push_back(fan.rays[id]);
  const Cone dual = dual_cone(Cone::from_rays(fan.rank, gens));
  const IntMat set = degree_test_set(semigroup_generators(dual), 2);
  return {set.begin(), set.end()};
}

std::vector<std::size_t> graded_dims(const ds::GradedAlgebraModel& alg) {
  std::vector<std::size_t> out;
  for (long long n = 0; n <= alg.bound; ++n) out.push_back(alg.at(n).dim());
  return out;
}

}  // namespace

int main() {
  // 1. The three printed ray charts intersect at m = (5,5,5) in a
  //    6-dimensional space containing xi_1 xi_2 + xi_3 xi_4 that no family of
  //    dimension-jumping-induced subspaces generates decomposably.
  run(1, "weight-space intersection is indecomposable", 1.0, [](Gate& g) {
    const DecoratedFan df = catalog::interleaved_chains();
    const IntVec m(3, Int(5));
    const WeightSpace ws = sigma_weight_space(df, {0, 1, 2}, m);
    g.expect(ws.dim() == 6, "dim L(5,5,5) != 6");
    const ExteriorElement pair = exterior::add(xi({0, 1}), xi({2, 3}));
    bool found = false;
    for (const ExteriorElement& e : ws.basis) found = found || e == pair;
    g.expect(found, "xi_1 xi_2 + xi_3 xi_4 missing from the canonical basis");

    std::vector<WeightSpace> induced;
    for (const Subspace& w : dj_witnesses(df, {0, 1, 2}, m))
      induced.push_back(exterior::induced_weight_space(df.torus, w, m));
    g.expect(!induced.empty(), "no DJ witnesses found");
    g.expect(!exterior::is_decomposably_generated(ws, induced),
             "L(5,5,5) decomposes over the DJ-induced subspaces");
  });

  // 2. ds-check separates the straight chart (free cohomology
  //    C[t xi_2, t xi_3, t^2 xi_4]) from its twisted sibling, whose theta_1
  //    cohomology C[t xi_2, t xi_3]/(t^2 xi_2 xi_3) fails freeness at the
  //    relation t^2 xi_2 xi_3 under the degree bound 6.
  run(2, "cohomological regularity discrimination", 1.0, [](Gate& g) {
    const DecoratedFan df = catalog::quartet_ray_fan();
    const ds::GradedAlgebraModel straight =
        ds::chart_quotient_model(decofan::ray_chart(df, 0), 6);
    const ds::GradedAlgebraModel twisted =
        ds::chart_quotient_model(catalog::quartet_twisted_chart(), 6);
    const linalg::RatVec theta1 = {Rat(1), Rat(0), Rat(0), Rat(0)};
    g.expect(graded_dims(ds::ds_compute(straight, theta1, 6)) ==
                 std::vector<std::size_t>{1, 2, 2, 2, 1, 0, 0},
             "straight chart cohomology dims");
    g.expect(graded_dims(ds::ds_compute(twisted, theta1, 6)) ==
                 std::vector<std::size_t>{1, 2, 0, 2, 1, 0, 0},
             "twisted chart cohomology dims");

    const std::string fan_file = write_fan("acc_quartet.json", df);
    std::ofstream("acc_twisted.json")
        << json_io::dump(json_io::presentation_to_json(catalog::quartet_twisted_chart()));
    RunResult r = run_cli("ds-check acc_quartet.json --ray 0");
    g.expect(r.code == 0, "ds-check exit code");
    Json j = Json::parse(r.out);
    g.expect(j["all_fr"] == true, "straight chart should pass every theta");
    g.expect(j["bound"] == 6, "default bound");

    r = run_cli("ds-check acc_quartet.json --ray 0 --override acc_twisted.json");
    g.expect(r.code == 0, "override exit code");
    j = Json::parse(r.out);
    g.expect(j["all_fr"] == false, "twisted chart should fail");
    g.expect(j["verdicts"][0]["theta"] == Json::parse(R"(["1","0","0","0"])"),
             "failing theta is theta_1");
    g.expect(j["verdicts"][0]["verdict"] == "notFR", "theta_1 verdict");
    g.expect(j["verdicts"][0]["witness"] == "t1^2 * (1*xi{2,3})",
             "witness relation t^2 xi_2 xi_3");
  });

  // 3. The entangled-lines orthant is singular with the adapted-basis
  //    witness {C theta_2, C theta_1, C(theta_1 - theta_2)}; inserting the
  //    ray (1,1,1) with blank decoration makes it smooth.
  run(3, "smoothness verdicts for the twisted orthant pair", 1.0, [](Gate& g) {
    const SmoothReport bad = smooth_check(catalog::entangled_lines());
    g.expect(bad.overall == "not_smooth", "orthant should be singular");
    bool witnessed = false;
    const std::set<Subspace> expected = {
        Subspace::span_of(2, {Rat(0), Rat(1)}), Subspace::span_of(2, {Rat(1), Rat(0)}),
        Subspace::span_of(2, {Rat(1), Rat(-1)})};
    for (const SmoothConeEntry& entry : bad.cones)
      if (entry.status == "no_adapted_basis")
        witnessed = witnessed ||
                    std::set<Subspace>(entry.witness.begin(), entry.witness.end()) == expected;
    g.expect(witnessed, "witness family {C th2, C th1, C(th1-th2)}");

    g.expect(smooth_check(catalog::entangled_lines_subdivided()).smooth(),
             "subdivided fan should be smooth");

    const std::string f = write_fan("acc_entangled.json", catalog::entangled_lines());
    const RunResult r = run_cli("smooth acc_entangled.json");
    g.expect(r.code == 0 && Json::parse(r.out)["smooth"] == false, "CLI smooth verdict");
  });

  // 4. resolve produces a smooth decorated fan with the same support, an
  //    identity morphism back to the input, and constant-h chains on every
  //    new ray.
  run(4, "resolution is smooth, support-preserving, decorated", 5.0, [](Gate& g) {
    const DecoratedFan df = catalog::entangled_lines();
    const Resolution res = resolve(df);
    g.expect(smooth_check(res.refined).smooth(), "refined fan should be smooth");
    g.expect(morphism_check(res.refined, df, res.morphism), "refinement morphism");

    for (std::size_t i = 0; i < df.fan.rays.size(); ++i)
      g.expect(res.refined.fan.rays[i] == df.fan.rays[i], "original rays kept as prefix");
    for (std::size_t i = df.fan.rays.size(); i < res.refined.fan.rays.size(); ++i)
      for (const Subspace& s : res.refined.decorations[i].chain.spaces)
        g.expect(s == df.h, "new rays must carry the constant-h chain");

    auto samples = [](const Fan& fan) {
      std::vector<IntVec> pts;
      for (const std::vector<std::size_t>& cone : fan.cones) {
        IntVec total(fan.rank, Int(0));
        for (std::size_t id : cone) {
          pts.push_back(fan.rays[id]);
          for (std::size_t i = 0; i < fan.rank; ++i) total[i] += fan.rays[id][i];
        }
        pts.push_back(total);
      }
      return pts;
    };
    for (const IntVec& v : samples(df.fan))
      g.expect(support_contains(res.refined.fan, v), "support lost by refinement");
    for (const IntVec& v : samples(res.refined.fan))
      g.expect(support_contains(df.fan, v), "support gained by refinement");

    IntMat id_even(df.torus.p, IntVec(df.torus.p, Int(0)));
    linalg::RatMat id_odd(df.torus.q, linalg::RatVec(df.torus.q, Rat(0)));
    for (std::size_t i = 0; i < df.torus.p; ++i) id_even[i][i] = 1;
    for (std::size_t i = 0; i < df.torus.q; ++i) id_odd[i][i] = 1;
    g.expect(res.morphism.lattice_map == id_even && res.morphism.odd_map == id_odd,
             "resolution morphism should be the identity pair");
  });

  // 5. Square-root decoration counts over projective space match
  //    2^n (1 + 2^(n-1)), and the matroid-obstructed cone admits no doubly
  //    decorated output.
  run(5, "decoration enumeration counts", 5.0, [](Gate& g) {
    const std::size_t expected[] = {4, 12, 40};
    for (std::size_t n = 1; n <= 3; ++n) {
      const DecoratedFan blank = catalog::projective_blank(n);
      const std::size_t count = enumerate_decorations(blank.torus, blank.fan).size();
      g.expect(count == expected[n - 1], "projective count at n = " + std::to_string(n));
      g.expect(count == (std::size_t{1} << n) * (1 + (std::size_t{1} << (n - 1))),
               "closed formula at n = " + std::to_string(n));
    }
    const DecoratedFan pair = catalog::obstructed_pair();
    for (const DecoratedFan& df : enumerate_decorations(pair.torus, pair.fan)) {
      std::size_t decorated = 0;
      for (const RayDecoration& d : df.decorations)
        if (!d.signs.is_zero()) ++decorated;
      g.expect(decorated <= 1, "obstructed cone admitted a double decoration");
    }
  });

  // 6. On randomized large-orbit fans the two computations of L_{A_sigma}(m)
  //    agree for every cone and every dual-semigroup generator sum of degree
  //    at most two.
  run(6, "large-orbit weight-space equivalence, 100 fans", 60.0, [](Gate& g) {
    std::mt19937 rng(77001);
    for (int trial = 0; trial < 100; ++trial) {
      const DecoratedFan df = rand_large_orbit_fan(rng);
      std::vector<std::vector<std::size_t>> probes = df.fan.cones;
      for (std::size_t i = 0; i < df.fan.rays.size(); ++i) probes.push_back({i});
      probes.push_back({});
      for (const std::vector<std::size_t>& sigma : probes)
        for (const IntVec& m : character_set(df.fan, sigma)) {
          const WeightSpace charts = sigma_weight_space(df, sigma, m);
          const WeightSpace invariants =
              exterior::induced_weight_space(df.torus, cone_decoration(df, sigma, m), m);
          g.expect(charts == invariants, "chart/invariant weight spaces differ");
        }
    }
  });

  // 7. qgr reproduces the decorated segment with its fan roundtrip, and the
  //    generic orbit closures match the decorated hypersimplex normal fans.
  run(7, "isomeric Grassmannian combinatorics", 5.0, [](Gate& g) {
    const RunResult r = run_cli("qgr --r 1 --n 2");
    g.expect(r.code == 0, "qgr exit code");
    const Json j = Json::parse(r.out);
    g.expect(j["roundtrip_matches"] == true, "segment fan roundtrip");
    g.expect(j["fan"]["rays"] == Json::parse("[[-1], [1]]"), "segment normal fan rays");
    g.expect(j["polytope"]["vertices"].size() == 2 && j["polytope"]["faces"].size() == 3,
             "decorated segment shape");
    g.expect(j["blocks"] == Json::parse("[[0, 1]]"), "segment stabilizer block");

    const std::pair<std::size_t, std::size_t> cases[] = {{1, 2}, {1, 3}, {2, 4}};
    for (const auto& [rr, nn] : cases) {
      const DecoratedFan via_pattern = qgr::orbit_closure_fan(qgr::SupportPattern::generic(rr, nn));
      const DecoratedFan via_polytope =
          qgr::polytope_fan_roundtrip(qgr::hypersimplex_polytope(rr, nn));
      g.expect(json_io::dump(json_io::decorated_fan_to_json(via_pattern)) ==
                   json_io::dump(json_io::decorated_fan_to_json(via_polytope)),
               "orbit fan != hypersimplex normal fan at (" + std::to_string(rr) + "," +
                   std::to_string(nn) + ")");
    }
  });

  // 8. Orbit stabilizers decompose structurally: even part the span of the
  //    cone's rays, odd part the sum of the level-0 decorations.
  run(8, "orbit stabilizer structure, 50 fans", 10.0, [](Gate& g) {
    std::mt19937 rng(77002);
    for (int trial = 0; trial < 50; ++trial) {
      const DecoratedFan df = rand_large_orbit_fan(rng);
      g.expect(validate(df, "large_orbit").valid, "generated fan should validate");
      for (const FanCone& fc : all_cones(df.fan)) {
        const StabilizerResult st = orbit_stabilizer(df, fc.ray_ids);
        IntMat rays;
        for (std::size_t id : fc.ray_ids) rays.push_back(df.fan.rays[id]);
        g.expect(st.even == Subspace(df.torus.p, to_rat(rays)), "even part");
        Subspace odd = df.h;
        for (std::size_t id : fc.ray_ids) odd = sum(odd, df.decorations[id].chain.at(0));
        g.expect(st.odd == odd, "odd part");
      }
    }
  });

  // 9. The compact invariant sweep: dual-cone involution, Hilbert-basis box
  //    completeness, DJ two-route equivalence, ray-chart dimension law,
  //    square-zero derivations, Klyachko roundtrip.
  run(9, "invariant suites", 120.0, [](Gate& g) {
    std::mt19937 rng(77003);
    for (int trial = 0; trial < 30; ++trial) {
      const Cone c = rand_pointed_cone(rng, std::size_t(rand_int(rng, 1, 4)), 5);
      g.expect(dual_cone(dual_cone(c)) == c, "dual-cone involution");
    }

    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t rank = std::size_t(rand_int(rng, 2, 3));
      const Cone c = rand_pointed_cone(rng, rank, rank + 1);
      const IntMat hb = hilbert_basis(c);
      std::function<bool(const IntVec&)> reachable = [&](const IntVec& v) -> bool {
        if (v == IntVec(rank, Int(0))) return true;
        for (const IntVec& h : hb) {
          IntVec rest(rank);
          for (std::size_t i = 0; i < rank; ++i) rest[i] = v[i] - h[i];
          if (c.contains(rest) && reachable(rest)) return true;
        }
        return false;
      };
      IntVec v(rank, Int(0));
      std::function<void(std::size_t)> sweep = [&](std::size_t pos) {
        if (pos == rank) {
          if (c.contains(v)) g.expect(reachable(v), "hilbert basis misses a box point");
          return;
        }
        for (int x = -3; x <= 3; ++x) {
          v[pos] = x;
          sweep(pos + 1);
        }
      };
      sweep(0);
    }

    for (int trial = 0; trial < 6; ++trial) {
      const DecoratedFan df = rand_large_orbit_fan(rng);
      std::vector<std::vector<std::size_t>> cones = df.fan.cones;
      for (std::size_t i = 0; i < df.fan.rays.size(); ++i) cones.push_back({i});
      for (const std::vector<std::size_t>& cone : cones) {
        std::vector<IntVec> ms = character_set(df.fan, cone);
        if (ms.size() > 8) ms.resize(8);
        const Subspace v0 = cone_decoration(df, cone, IntVec(df.fan.rank, Int(0)));
        for (const IntVec& m : ms) {
          const WeightSpace chart = sigma_weight_space(df, cone, m);
          for (const Subspace& w : {df.h, v0, cone_decoration(df, cone, m)}) {
            const WeightSpace inv = exterior::induced_weight_space(df.torus, w, m);
            const bool lemma =
                inv.dim() > 0 &&
                exterior::intersect_weight_spaces({chart, inv}).dim() == inv.dim();
            g.expect(dj_check(df, cone, m, w) == lemma, "DJ two-route equivalence");
          }
        }
      }
    }

    for (int trial = 0; trial < 10; ++trial) {
      const DecoratedFan df = rand_large_orbit_fan(rng);
      for (std::size_t ray = 0; ray < df.fan.rays.size(); ++ray) {
        const SuperPresentation chart = ray_chart(df, ray);
        for (int draw = 0; draw < 4; ++draw) {
          const IntVec m = rand_vec(rng, df.fan.rank, -3, 3);
          const Int n = dot(m, df.fan.rays[ray]);
          if (n < 0) continue;
          std::size_t open = 0;
          for (long long ell : chart.ell)
            if (Int(ell) <= n) ++open;
          g.expect(ray_weight_space(df, ray, m).dim() == (std::size_t{1} << open),
                   "ray-chart dimension law");
        }
      }
    }

    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t q = std::size_t(rand_int(rng, 2, 5));
      const superlie::SupertorusData ab =
          superlie::SupertorusData::abelian(std::size_t(rand_int(rng, 1, 3)), q);
      const linalg::RatVec theta = rand_rat_vec(rng, q, -2, 2);
      const IntVec m = rand_vec(rng, ab.p, -4, 4);
      const ExteriorElement e =
          ExteriorElement::monomial(exterior::Mask(rand_int(rng, 0, (1 << int(q)) - 1)));
      g.expect(exterior::right_derivation(ab, theta, m,
                                          exterior::right_derivation(ab, theta, m, e))
                   .is_zero(),
               "abelian derivation square");
    }

    for (const DecoratedFan& df :
         {catalog::interleaved_chains(), catalog::quartet_ray_fan(),
          catalog::entangled_lines()}) {
      for (std::size_t ray = 0; ray < df.fan.rays.size(); ++ray)
        g.expect(klyachko_import(klyachko_export(df, ray)) == df.decorations[ray].chain,
                 "klyachko roundtrip (catalog)");
    }
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t q = std::size_t(rand_int(rng, 1, 4));
      const Subspace h = rand_subspace(rng, q, std::size_t(rand_int(rng, 0, int(q) - 1)));
      DecoratedFan df;
      df.torus = superlie::SupertorusData::abelian(1, q);
      df.h = h;
      df.fan = Fan{1, {{Int(1)}}, {{0}}};
      superlie::DecorationChain chain;
      Subspace v = sum(h, rand_subspace(rng, q, 2));
      chain.spaces.push_back(v);
      while (v != h) {
        v = sum(h, intersection(v, rand_subspace(rng, q, std::size_t(rand_int(rng, 0, int(q))))));
        chain.spaces.push_back(v);
      }
      df.decorations = {RayDecoration::of_chain(chain)};
      g.expect(klyachko_import(klyachko_export(df, 0)) == chain, "klyachko roundtrip (random)");
    }
  });

  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
