#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "mixhypo/random.hpp"
#include "mixhypo/signed_mixture.hpp"

namespace mixhypo {

// The six Mixed Hypoexponential-G families. Each is the law of g(S) where
// S is hypoexponential (a sum of independent exponentials with distinct
// rates) and g a fixed monotone transform; equivalently a signed mixture
// of the transformed base law.
enum class Family { MHW, MHF, MHT, MHP, MHG, MHE };

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);  // ConstructionError if unknown

// Family parameterization. `shared` is the scalar parameter (shape k for
// MHW/MHF, scale k for MHT, domain bound k for MHP, scale lambda for
// MHG/MHE); `vector` holds the per-component parameters (scales lambda_i
// for MHW/MHF, shapes lambda_i for MHT/MHP, locations k_i for MHG/MHE).
//
// Invariants: shared > 0; vector entries > 0 except for MHG/MHE (any
// real); entries pairwise distinct with relative separation >= sep_min,
// |v_i - v_j| / max(|v_i|, |v_j|, 1) >= sep_min.
struct FamilySpec {
    Family family = Family::MHW;
    double shared = 1.0;
    std::vector<double> vector;
    double sep_min = 1e-6;
};

// Rates of the underlying hypoexponential, pairwise distinct per the same
// separation rule.
struct HypoexpSpec {
    std::vector<double> rates;
    double sep_min = 1e-6;
};

// Copy of spec with the vector sorted ascending (canonical form; the
// family is symmetric under permutation of the vector).
FamilySpec canonical(FamilySpec spec);

// Throw (PositivityError / SeparationError / ConstructionError) unless the
// spec invariants hold. All operations below validate their inputs.
void validate_family_spec(const FamilySpec& spec);
void validate_hypoexp_spec(const HypoexpSpec& h);

// Weights (1/P_1, ..., 1/P_n) with P_i = prod_{j != i} (1 - a_i/a_j),
// in the order the rates are given. Sum is 1 (algebraic identity);
// SeparationError when the products are too close to zero for the weights
// to carry usable precision.
std::vector<double> hypoexp_weights(const HypoexpSpec& h);

// The family as an explicit signed mixture (components sorted by the
// canonical vector order, weights 1/PW_i etc. computed in extended
// precision).
SignedMixture make_family(const FamilySpec& spec);

// Rates of the hypoexponential underlying the family:
// MHW a_i = lambda_i^{-k}; MHF a_i = lambda_i^k; MHT/MHP a_i = lambda_i;
// MHG a_i = e^{-k_i/lambda}; MHE a_i = e^{k_i/lambda}.
HypoexpSpec to_base_rates(const FamilySpec& spec);

// Inverse of to_base_rates: family parameters whose underlying rates are
// `h` under the given shared parameter.
FamilySpec family_from_rates(Family family, double shared, const HypoexpSpec& h);

// The monotone map g applied to a hypoexponential variate s > 0:
// MHW s^{1/k}; MHF s^{-1/k}; MHT k e^s; MHP e^{-s}/k; MHG lambda ln s;
// MHE -lambda ln s. DomainError for s <= 0.
double transform_forward(const FamilySpec& spec, double s);

// count iid family variates: sum of exponential draws (one per rate)
// pushed through transform_forward. Never samples by component selection
// (impossible with signed weights).
std::vector<double> sample_family(const FamilySpec& spec, std::int64_t count,
                                  RandomStream& rng);

}  // namespace mixhypo
