#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsv/decofan.hpp"
#include "tsv/exterior.hpp"

namespace tsv::ds {

using exterior::ExteriorElement;
using lattice::IntVec;
using linalg::RatVec;

// One weight component of a graded superalgebra realized inside the exterior
// algebra on the chart's odd coordinates: `basis` is a complement basis and
// `modded` the rows factored out (empty for honest subalgebras, the image of
// the derivation after taking cohomology).
struct WeightComponent {
  std::vector<ExteriorElement> basis;
  std::vector<ExteriorElement> modded;

  std::size_t dim() const { return basis.size(); }
};

// Graded generator t1^weight * element; invertible even coordinates are
// dropped, so the grading is the single t1-exponent.
struct GradedGenerator {
  long long weight = 0;
  ExteriorElement element;
};

// Weight-graded model of a monomial-exterior presented superalgebra. The
// attached gauge acts on the weight-n component through the character
// n * m1, which is what survives of the torus action after the invertible
// coordinates t_2..t_p are formally inverted.
struct GradedAlgebraModel {
  superlie::SupertorusData torus;  // gauge in the model's own odd coordinates
  IntVec m1;
  std::size_t q = 0;
  long long bound = 0;
  long long max_generator_weight = 0;
  std::vector<GradedGenerator> generators;
  std::vector<WeightComponent> components;  // index = t1-weight, 0..bound

  const WeightComponent& at(long long n) const;
  // Dimension of the component split by exterior parity (0 even, 1 odd).
  std::size_t parity_dim(long long n, int parity) const;
};

// Spans of all generator products, weight by weight up to the bound. Elements
// of mixed exterior parity are rejected.
GradedAlgebraModel make_graded_model(const superlie::SupertorusData& torus, const IntVec& m1,
                                     const std::vector<GradedGenerator>& generators,
                                     long long bound);

// Model of a ray chart with the free coordinates killed: generators t1 and
// t1^{ell_j} xi_j in flag coordinates, equipped with the abelian action the
// quotient inherits. Terms of a generator element that touch a free
// coordinate are in the quotient ideal and are dropped.
GradedAlgebraModel chart_quotient_model(const decofan::SuperPresentation& chart, long long bound);

// Cohomology of the right derivation of theta on the theta^2-invariants,
// weight by weight: ker/im inside each component whose theta^2-scalar
// vanishes (the others have no invariants). theta = 0 returns the input.
GradedAlgebraModel ds_compute(const GradedAlgebraModel& alg, const RatVec& theta,
                              long long bound);

struct FrResult {
  bool fr = true;
  long long bound = 0;
  long long witness_weight = -1;
  std::string witness;  // first missing generator product, if any
};

// Compares the model against the free prediction of an exterior algebra on
// minimal odd generators over the even-generated subring: generators are
// selected degree by degree, the subring dimensions are taken as computed,
// and the first weight whose generated span falls short of the free count is
// returned as a counterexample.
FrResult fr_check(const GradedAlgebraModel& alg, long long bound);

struct ThetaVerdict {
  RatVec theta;  // in the ambient odd coordinates
  bool fr = true;
  long long bound = 0;
  std::string witness;
};

// The cohomological regularity check at a ray: for each basis vector theta of
// V_{rho,0} modulo the stable tail, the cohomology of theta on the chart with
// the free odd coordinates killed must look free up to the bound. A supplied
// chart overrides the one constructed from the decorations (it must share
// their shape; only the generator elements may carry nilpotent tails).
std::vector<ThetaVerdict> hr1_condition_e(
    const decofan::DecoratedFan& df, std::size_t ray_index,
    const std::optional<decofan::SuperPresentation>& chart_override = std::nullopt,
    long long bound = 6);

}  // namespace tsv::ds
