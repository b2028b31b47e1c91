#include "mixhypo/signed_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "mixhypo/numerics.hpp"
#include "mixhypo/quadrature.hpp"

namespace mixhypo {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Clamp shared by mix_cdf / mix_reliability: round-off past [0,1] is
// absorbed up to width 1e-9, anything beyond is a broken construction.
double clamp_unit(double value, const char* what) {
    if (value < -1e-9 || value > 1.0 + 1e-9) {
        throw ConstructionError(std::string(what) + " left [0,1] by more than 1e-9: " +
                                fmt(value) + " (mixture is not a valid distribution)");
    }
    return std::min(1.0, std::max(0.0, value));
}

}  // namespace

SignedMixture::SignedMixture(std::vector<BaseDistribution> components,
                             std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)), support_{0, 0} {
    if (components_.empty()) throw ConstructionError("mixture needs at least one component");
    if (components_.size() != weights_.size()) {
        throw ConstructionError("component/weight count mismatch: " +
                                std::to_string(components_.size()) + " vs " +
                                std::to_string(weights_.size()));
    }
    for (double w : weights_) {
        if (!std::isfinite(w)) throw ConstructionError("weights must be finite");
    }
    support_ = components_.front().support();
    for (const auto& c : components_) {
        SupportInterval s = c.support();
        if (s.lo != support_.lo || s.hi != support_.hi) {
            throw ConstructionError("components must share one support interval");
        }
    }
}

double mix_pdf(const SignedMixture& m, double t) {
    std::vector<double> terms(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        terms[i] = m.weights()[i] * base_pdf(m.components()[i], t);
    }
    return signed_sum(terms);
}

double mix_cdf(const SignedMixture& m, double t) {
    std::vector<double> terms(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        terms[i] = m.weights()[i] * base_cdf(m.components()[i], t);
    }
    return clamp_unit(signed_sum(terms), "cdf");
}

double mix_reliability(const SignedMixture& m, double t) {
    std::vector<double> terms(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        terms[i] = m.weights()[i] * base_reliability(m.components()[i], t);
    }
    return clamp_unit(signed_sum(terms), "reliability");
}

double mix_hazard(const SignedMixture& m, double t) {
    double r = mix_reliability(m, t);
    if (r <= 1e-300) {
        throw DomainError("hazard undefined: reliability " + fmt(r) + " at t = " + fmt(t));
    }
    return mix_pdf(m, t) / r;
}

double mix_mgf(const SignedMixture& m, double t) {
    if (t != 0.0) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!base_mgf_domain(m.components()[i]).contains_interior(t)) {
                throw DomainError("mgf argument " + fmt(t) + " outside the domain of component " +
                                  std::to_string(i) + " (" +
                                  std::string(kind_name(m.components()[i].kind())) + ")");
            }
        }
    }
    std::vector<double> terms(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        terms[i] = m.weights()[i] * base_mgf(m.components()[i], t);
    }
    return signed_sum(terms);
}

double mix_moment(const SignedMixture& m, int k) {
    if (k < 1) throw DomainError("moment order must be >= 1");
    for (std::size_t i = 0; i < m.size(); ++i) {
        int max_order = base_max_moment_order(m.components()[i]);
        if (k > max_order) {
            throw MomentDoesNotExist(
                "moment of order " + std::to_string(k) + " does not exist: component " +
                    std::to_string(i) + " (" + std::string(kind_name(m.components()[i].kind())) +
                    ") has finite moments only up to order " + std::to_string(max_order),
                static_cast<int>(i), max_order);
        }
    }
    std::vector<double> terms(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        terms[i] = m.weights()[i] * base_moment(m.components()[i], k);
    }
    return signed_sum(terms);
}

double mix_quantile(const SignedMixture& m, double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError("quantile level must lie in (0, 1), got " + fmt(u));
    }
    const SupportInterval s = m.support();

    // Start from the envelope of component quantiles, then widen until the
    // target level is bracketed (the mixture CDF need not lie between the
    // component CDFs when weights are signed).
    double a = base_quantile(m.components()[0], u);
    double b = a;
    for (const auto& c : m.components()) {
        a = std::min(a, base_quantile(c, u));
        b = std::max(b, base_quantile(c, u));
    }
    for (int i = 0; i < 200 && mix_cdf(m, a) > u && a > s.lo; ++i) {
        a = std::isinf(s.lo) ? a - std::max(1.0, std::abs(a)) * (1 << std::min(i, 20))
                             : s.lo + (a - s.lo) / 2;
    }
    for (int i = 0; i < 200 && mix_cdf(m, b) < u && b < s.hi; ++i) {
        b = std::isinf(s.hi) ? b + std::max(1.0, std::abs(b)) * (1 << std::min(i, 20))
                             : s.hi - (s.hi - b) / 2;
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;  // interval down to adjacent doubles
        (mix_cdf(m, mid) < u ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

ValidationReport validate_mixture(const SignedMixture& m, int grid_size) {
    if (grid_size < 16) throw DomainError("validation grid needs at least 16 points");

    ValidationReport rep;

    CompensatedSum<double> ws;
    double wabs = 0.0;
    for (double w : m.weights()) {
        ws.add(w);
        wabs += std::abs(w);
    }
    rep.weight_sum = ws.value();
    rep.weight_sum_ok = std::abs(rep.weight_sum - 1.0) <= 1e-12 * std::max(1.0, wabs);

    // Quantile-spaced grid pooled over components (robust even when the
    // mixture CDF is broken, which is exactly what we may be diagnosing).
    const int levels = static_cast<int>((grid_size + m.size() - 1) / m.size());
    std::set<double> grid;
    for (const auto& c : m.components()) {
        for (int j = 0; j < levels; ++j) {
            grid.insert(base_quantile(c, (j + 0.5) / levels));
        }
    }
    std::vector<double> pts(grid.begin(), grid.end());

    // Refine where the dominant weighted term changes identity: negative
    // dips of a signed density live near such crossovers.
    auto dominant = [&](double t) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            double v = std::abs(m.weights()[i] * base_pdf(m.components()[i], t));
            if (v > best) best = v, arg = i;
        }
        return arg;
    };
    std::vector<double> extra;
    for (std::size_t j = 0; j + 1 < pts.size() && extra.size() < 64; ++j) {
        if (dominant(pts[j]) != dominant(pts[j + 1])) {
            for (int r = 1; r <= 8 && extra.size() < 64; ++r) {
                extra.push_back(pts[j] + (pts[j + 1] - pts[j]) * r / 9.0);
            }
        }
    }
    pts.insert(pts.end(), extra.begin(), extra.end());

    rep.min_pdf = 0.0;
    rep.min_pdf_at = pts.empty() ? 0.0 : pts.front();
    rep.nonnegativity_ok = true;
    for (double t : pts) {
        double p = mix_pdf(m, t);
        if (p < rep.min_pdf) {
            rep.min_pdf = p;
            rep.min_pdf_at = t;
        }
        double scale = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            scale += std::abs(m.weights()[i]) * base_pdf(m.components()[i], t);
        }
        if (p < -1e-9 * scale) rep.nonnegativity_ok = false;
    }

    const SupportInterval s = m.support();
    try {
        rep.pdf_integral = quad_integral([&](double t) { return mix_pdf(m, t); }, s.lo, s.hi, 1e-9);
    } catch (const AccuracyError& e) {
        rep.pdf_integral = e.best_estimate();
    }
    rep.integral_ok = std::abs(rep.pdf_integral - 1.0) <= 1e-8;

    return rep;
}

}  // namespace mixhypo
