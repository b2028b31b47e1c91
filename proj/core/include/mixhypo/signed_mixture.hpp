#pragma once

#include <cstddef>
#include <vector>

#include "mixhypo/base_distribution.hpp"
#include "mixhypo/errors.hpp"
#include "mixhypo/interval.hpp"

namespace mixhypo {

// Signed linear combination of base densities: f(t) = sum A_i f_i(t) with
// real weights A_i summing to 1 (weights may be negative — this is not a
// classical mixture and admits no component-selection sampling).
//
// The constructor enforces the structural requirements (matching lengths,
// finite weights, a common support). The numerical validity conditions —
// weight closure and density nonnegativity — are checked by
// validate_mixture, so that diagnosing an invalid weight vector is
// possible; evaluation guards (the CDF clamp) catch gross violations.
class SignedMixture {
public:
    SignedMixture(std::vector<BaseDistribution> components, std::vector<double> weights);

    std::size_t size() const noexcept { return components_.size(); }
    const std::vector<BaseDistribution>& components() const noexcept { return components_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    SupportInterval support() const noexcept { return support_; }

private:
    std::vector<BaseDistribution> components_;
    std::vector<double> weights_;
    SupportInterval support_;
};

// sum A_i f_i(t); 0 outside the support. Terms are accumulated largest
// magnitude first with compensated summation (weights alternate in sign).
double mix_pdf(const SignedMixture& m, double t);

// sum A_i F_i(t), clamped to [0,1]. ConstructionError if the unclamped
// value leaves [-1e-9, 1+1e-9] (cancellation noise is clamped; anything
// larger means the mixture is not a distribution).
double mix_cdf(const SignedMixture& m, double t);

// sum A_i R_i(t), clamped like mix_cdf.
double mix_reliability(const SignedMixture& m, double t);

// mix_pdf / mix_reliability. DomainError when the reliability has decayed
// below 1e-300 (hazard undefined or overflowing).
double mix_hazard(const SignedMixture& m, double t);

// sum A_i E[e^{t X_i}], each term by adaptive quadrature. DomainError if t
// lies outside any component's MGF domain (t = 0 is always valid).
double mix_mgf(const SignedMixture& m, double t);

// sum A_i E[X_i^k]. MomentDoesNotExist (naming the offending component and
// the largest existing order) when some component lacks the k-th moment.
double mix_moment(const SignedMixture& m, int k);

// Inverse of mix_cdf by bracketing bisection; valid mixtures only (the CDF
// must be monotone). DomainError for u outside (0,1).
double mix_quantile(const SignedMixture& m, double u);

// Outcome of the numerical validity checks, one pass/fail per check with
// the worst offender observed.
struct ValidationReport {
    double weight_sum = 0.0;
    bool weight_sum_ok = false;

    double min_pdf = 0.0;     // most negative density seen on the grid
    double min_pdf_at = 0.0;  // where
    bool nonnegativity_ok = false;

    double pdf_integral = 0.0;
    bool integral_ok = false;

    bool ok() const { return weight_sum_ok && nonnegativity_ok && integral_ok; }
};

// Checks sum A_i = 1 (1e-12, relative to the weight magnitudes), density
// nonnegativity on a quantile-spaced grid of grid_size points refined near
// component crossovers (tolerance -1e-9 of the local term scale), and
// integral of the pdf = 1 within 1e-8 by quadrature. grid_size >= 16.
ValidationReport validate_mixture(const SignedMixture& m, int grid_size = 512);

}  // namespace mixhypo
