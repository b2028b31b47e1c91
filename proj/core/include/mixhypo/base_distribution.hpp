#pragma once

#include <string_view>

#include "mixhypo/errors.hpp"
#include "mixhypo/interval.hpp"
#include "mixhypo/random.hpp"

namespace mixhypo {

enum class Kind {
    Exponential,  // rate alpha
    Weibull,      // shape k, scale lambda
    Frechet,      // shape k, scale lambda
    Pareto,       // scale k, shape lambda
    Power,        // domain k, shape lambda
    GumbelMin,    // location k, scale lambda
    ExtremeValue  // location k, scale lambda (max-Gumbel)
};

std::string_view kind_name(Kind kind);

// One of the seven elementary laws, immutable after construction.
//
// Parameter conventions (p1, p2):
//   Exponential(rate)            p1 = rate,     p2 unused (0)
//   Weibull(shape, scale)        cdf 1 - e^{-(t/scale)^shape},      support (0, inf)
//   Frechet(shape, scale)        cdf e^{-(t/scale)^{-shape}},       support (0, inf)
//   Pareto(scale, shape)         cdf 1 - (scale/t)^shape,           support [scale, inf)
//   Power(domain, shape)         cdf (domain*t)^shape,              support (0, 1/domain]
//   GumbelMin(location, scale)   cdf 1 - e^{-e^{(t-location)/scale}}, support R
//   ExtremeValue(location, scale) cdf e^{-e^{-(t-location)/scale}},   support R
class BaseDistribution {
public:
    BaseDistribution(Kind kind, double p1, double p2 = 0.0);

    static BaseDistribution exponential(double rate);
    static BaseDistribution weibull(double shape, double scale);
    static BaseDistribution frechet(double shape, double scale);
    static BaseDistribution pareto(double scale, double shape);
    static BaseDistribution power(double domain, double shape);
    static BaseDistribution gumbel_min(double location, double scale);
    static BaseDistribution extreme_value(double location, double scale);

    Kind kind() const noexcept { return kind_; }
    double p1() const noexcept { return p1_; }
    double p2() const noexcept { return p2_; }
    SupportInterval support() const;

    bool operator==(const BaseDistribution&) const = default;

private:
    Kind kind_;
    double p1_;
    double p2_;
};

// Density at t; 0 outside the support. At a closed support endpoint the
// formula value is returned; at an open endpoint where the density
// diverges, 0.
double base_pdf(const BaseDistribution& d, double t);

double base_cdf(const BaseDistribution& d, double t);

// R(t) = 1 - F(t), computed from its own closed form (not as 1 - cdf).
double base_reliability(const BaseDistribution& d, double t);

// Closed-form inverse cdf. DomainError unless 0 < u < 1.
double base_quantile(const BaseDistribution& d, double u);

// One variate by inverse transform; advances the stream by one draw.
double base_sample(const BaseDistribution& d, RandomStream& rng);

// Raw n-th moment. Closed forms except the Gumbel kinds, which integrate
// t^n*pdf numerically (1e-9 relative target). MomentDoesNotExist (carrying
// the largest finite order) when E[X^n] does not exist.
double base_moment(const BaseDistribution& d, int n);

// Largest n with E[X^n] finite; INT_MAX when all moments exist.
int base_max_moment_order(const BaseDistribution& d);

// Open interval on which E[e^{tX}] is finite (t = 0 is always valid and
// is accepted by base_mgf regardless of the interval).
SupportInterval base_mgf_domain(const BaseDistribution& d);

// E[e^{tX}] by adaptive quadrature of e^{tx}f(x); exact 1 at t = 0.
// DomainError outside base_mgf_domain.
double base_mgf(const BaseDistribution& d, double t);

}  // namespace mixhypo
