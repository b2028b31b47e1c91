#include "mixhypo/base_distribution.hpp"

#include <climits>
#include <cmath>
#include <limits>
#include <string>

#include "mixhypo/quadrature.hpp"

namespace mixhypo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw PositivityError(std::string(name) + " must be strictly positive, got " +
                              std::to_string(value));
    }
}

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw ConstructionError(std::string(name) + " must be finite");
    }
}

// Largest integer strictly below x (x > 0): the top finite moment order for
// the heavy-tailed kinds.
int largest_order_below(double x) {
    double f = std::floor(x);
    int n = (f == x) ? static_cast<int>(f) - 1 : static_cast<int>(f);
    return n < 0 ? 0 : n;
}

}  // namespace

std::string_view kind_name(Kind kind) {
    switch (kind) {
        case Kind::Exponential: return "exponential";
        case Kind::Weibull: return "weibull";
        case Kind::Frechet: return "frechet";
        case Kind::Pareto: return "pareto";
        case Kind::Power: return "power";
        case Kind::GumbelMin: return "gumbel_min";
        case Kind::ExtremeValue: return "extreme_value";
    }
    return "unknown";
}

BaseDistribution::BaseDistribution(Kind kind, double p1, double p2)
    : kind_(kind), p1_(p1), p2_(p2) {
    switch (kind_) {
        case Kind::Exponential:
            require_positive(p1_, "rate");
            if (p2_ != 0.0) throw ConstructionError("exponential takes a single parameter");
            break;
        case Kind::Weibull:
        case Kind::Frechet:
            require_positive(p1_, "shape");
            require_positive(p2_, "scale");
            break;
        case Kind::Pareto:
            require_positive(p1_, "scale");
            require_positive(p2_, "shape");
            break;
        case Kind::Power:
            require_positive(p1_, "domain bound");
            require_positive(p2_, "shape");
            break;
        case Kind::GumbelMin:
        case Kind::ExtremeValue:
            require_finite(p1_, "location");
            require_positive(p2_, "scale");
            break;
    }
}

BaseDistribution BaseDistribution::exponential(double rate) {
    return {Kind::Exponential, rate};
}
BaseDistribution BaseDistribution::weibull(double shape, double scale) {
    return {Kind::Weibull, shape, scale};
}
BaseDistribution BaseDistribution::frechet(double shape, double scale) {
    return {Kind::Frechet, shape, scale};
}
BaseDistribution BaseDistribution::pareto(double scale, double shape) {
    return {Kind::Pareto, scale, shape};
}
BaseDistribution BaseDistribution::power(double domain, double shape) {
    return {Kind::Power, domain, shape};
}
BaseDistribution BaseDistribution::gumbel_min(double location, double scale) {
    return {Kind::GumbelMin, location, scale};
}
BaseDistribution BaseDistribution::extreme_value(double location, double scale) {
    return {Kind::ExtremeValue, location, scale};
}

SupportInterval BaseDistribution::support() const {
    switch (kind_) {
        case Kind::Exponential:
        case Kind::Weibull:
        case Kind::Frechet:
            return {0.0, kInf};
        case Kind::Pareto:
            return {p1_, kInf};  // closed at p1
        case Kind::Power:
            return {0.0, 1.0 / p1_};  // closed at 1/p1
        case Kind::GumbelMin:
        case Kind::ExtremeValue:
            return SupportInterval::all();
    }
    return SupportInterval::all();
}

double base_pdf(const BaseDistribution& d, double t) {
    const double k = d.p1();
    const double lam = d.p2();
    switch (d.kind()) {
        case Kind::Exponential:
            return t < 0.0 ? 0.0 : k * std::exp(-k * t);
        case Kind::Weibull: {
            if (t < 0.0 || (t == 0.0 && k < 1.0)) return 0.0;
            if (t == 0.0) return k == 1.0 ? 1.0 / lam : 0.0;
            const double z = std::pow(t / lam, k);
            return (k / lam) * std::pow(t / lam, k - 1.0) * std::exp(-z);
        }
        case Kind::Frechet: {
            if (t <= 0.0) return 0.0;
            const double w = std::pow(t / lam, -k);
            return (k / lam) * std::pow(t / lam, -1.0 - k) * std::exp(-w);
        }
        case Kind::Pareto:
            // lambda * k^lambda / t^{lambda+1}, written to avoid overflow of k^lambda
            return t < k ? 0.0 : lam * std::pow(k / t, lam) / t;
        case Kind::Power:
            // lambda * k^lambda * t^{lambda-1}
            if (t <= 0.0 || t > 1.0 / k) return 0.0;
            return lam * std::pow(k * t, lam) / t;
        case Kind::GumbelMin: {
            const double z = (t - k) / lam;
            return std::exp(z - std::exp(z)) / lam;
        }
        case Kind::ExtremeValue: {
            const double z = (t - k) / lam;
            return std::exp(-z - std::exp(-z)) / lam;
        }
    }
    return 0.0;
}

double base_cdf(const BaseDistribution& d, double t) {
    const double k = d.p1();
    const double lam = d.p2();
    switch (d.kind()) {
        case Kind::Exponential:
            return t <= 0.0 ? 0.0 : -std::expm1(-k * t);
        case Kind::Weibull:
            return t <= 0.0 ? 0.0 : -std::expm1(-std::pow(t / lam, k));
        case Kind::Frechet:
            return t <= 0.0 ? 0.0 : std::exp(-std::pow(t / lam, -k));
        case Kind::Pareto:
            // 1 - (k/t)^lambda
            return t <= k ? 0.0 : -std::expm1(lam * std::log(k / t));
        case Kind::Power:
            // (k t)^lambda on (0, 1/k]
            if (t <= 0.0) return 0.0;
            if (t >= 1.0 / k) return 1.0;
            return std::exp(lam * std::log(k * t));
        case Kind::GumbelMin:
            return -std::expm1(-std::exp((t - k) / lam));
        case Kind::ExtremeValue:
            return std::exp(-std::exp(-(t - k) / lam));
    }
    return 0.0;
}

double base_reliability(const BaseDistribution& d, double t) {
    const double k = d.p1();
    const double lam = d.p2();
    switch (d.kind()) {
        case Kind::Exponential:
            return t <= 0.0 ? 1.0 : std::exp(-k * t);
        case Kind::Weibull:
            return t <= 0.0 ? 1.0 : std::exp(-std::pow(t / lam, k));
        case Kind::Frechet:
            return t <= 0.0 ? 1.0 : -std::expm1(-std::pow(t / lam, -k));
        case Kind::Pareto:
            // (k/t)^lambda
            return t <= k ? 1.0 : std::exp(lam * std::log(k / t));
        case Kind::Power:
            if (t <= 0.0) return 1.0;
            if (t >= 1.0 / k) return 0.0;
            return -std::expm1(lam * std::log(k * t));
        case Kind::GumbelMin:
            return std::exp(-std::exp((t - k) / lam));
        case Kind::ExtremeValue:
            return -std::expm1(-std::exp(-(t - k) / lam));
    }
    return 0.0;
}

double base_quantile(const BaseDistribution& d, double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError("quantile level must lie in (0, 1), got " + std::to_string(u));
    }
    const double k = d.p1();
    const double lam = d.p2();
    switch (d.kind()) {
        case Kind::Exponential:
            return -std::log1p(-u) / k;
        case Kind::Weibull:
            return lam * std::pow(-std::log1p(-u), 1.0 / k);
        case Kind::Frechet:
            return lam * std::pow(-std::log(u), -1.0 / k);
        case Kind::Pareto:
            return k * std::exp(-std::log1p(-u) / lam);
        case Kind::Power:
            return std::exp(std::log(u) / lam) / k;
        case Kind::GumbelMin:
            return k + lam * std::log(-std::log1p(-u));
        case Kind::ExtremeValue:
            return k - lam * std::log(-std::log(u));
    }
    return 0.0;
}

double base_sample(const BaseDistribution& d, RandomStream& rng) {
    return base_quantile(d, rng.uniform01());
}

int base_max_moment_order(const BaseDistribution& d) {
    switch (d.kind()) {
        case Kind::Frechet:
            return largest_order_below(d.p1());  // needs n < shape
        case Kind::Pareto:
            return largest_order_below(d.p2());  // needs n < shape
        default:
            return INT_MAX;
    }
}

double base_moment(const BaseDistribution& d, int n) {
    if (n < 0) throw DomainError("moment order must be nonnegative");
    if (n == 0) return 1.0;
    const double k = d.p1();
    const double lam = d.p2();
    switch (d.kind()) {
        case Kind::Exponential:
            return std::tgamma(n + 1.0) / std::pow(k, n);
        case Kind::Weibull:
            return std::pow(lam, n) * std::tgamma(1.0 + n / k);
        case Kind::Frechet:
            if (!(n < k)) {
                throw MomentDoesNotExist("frechet moment of order " + std::to_string(n) +
                                             " diverges (needs order < shape)",
                                         -1, base_max_moment_order(d));
            }
            return std::pow(lam, n) * std::tgamma(1.0 - n / k);
        case Kind::Pareto:
            if (!(n < lam)) {
                throw MomentDoesNotExist("pareto moment of order " + std::to_string(n) +
                                             " diverges (needs order < shape)",
                                         -1, base_max_moment_order(d));
            }
            return std::pow(k, n) * lam / (lam - n);
        case Kind::Power:
            return std::pow(k, -n) * lam / (lam + n);
        case Kind::GumbelMin:
        case Kind::ExtremeValue: {
            // No elementary closed form for raw moments; integrate directly.
            const double scale = std::pow(std::abs(k) + 2.0 * lam, n);
            return quad_integral([&](double x) { return std::pow(x, n) * base_pdf(d, x); },
                                 -kInf, kInf, 1e-9, 1e-10 * scale);
        }
    }
    return 0.0;
}

SupportInterval base_mgf_domain(const BaseDistribution& d) {
    const double k = d.p1();
    const double lam = d.p2();
    switch (d.kind()) {
        case Kind::Exponential:
            return {-kInf, k};
        case Kind::Weibull:
            if (k > 1.0) return SupportInterval::all();
            if (k == 1.0) return {-kInf, 1.0 / lam};
            return {-kInf, 0.0};
        case Kind::Frechet:
        case Kind::Pareto:
            return {-kInf, 0.0};
        case Kind::Power:
            return SupportInterval::all();
        case Kind::GumbelMin:
            return {-1.0 / lam, kInf};
        case Kind::ExtremeValue:
            return {-kInf, 1.0 / lam};
    }
    return SupportInterval::all();
}

double base_mgf(const BaseDistribution& d, double t) {
    if (t == 0.0) return 1.0;
    if (!base_mgf_domain(d).contains_interior(t)) {
        throw DomainError("mgf argument " + std::to_string(t) + " outside the domain of " +
                          std::string(kind_name(d.kind())));
    }
    const SupportInterval s = d.support();
    // Form exp(t*x) * pdf(x) in log space: deep in the tail the naive product
    // is inf * 0 = NaN, which poisons the quadrature error estimate.
    auto integrand = [&](double x) {
        const double p = base_pdf(d, x);
        if (!(p > 0.0)) return 0.0;
        return std::exp(t * x + std::log(p));
    };
    return quad_integral(integrand, s.lo, s.hi, 1e-10);
}

}  // namespace mixhypo
