#include "mixhypo/family.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace mixhypo {

namespace {

// Relative separation of a value pair; the metric behind every sep_min check.
double separation(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

void check_separation(const std::vector<double>& values, double sep_min, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            if (separation(values[i], values[j]) < sep_min) {
                throw SeparationError(std::string(what) + " " + std::to_string(values[i]) +
                                      " and " + std::to_string(values[j]) +
                                      " violate the relative separation minimum " +
                                      std::to_string(sep_min));
            }
        }
    }
}

// weights 1/P_i from the pairwise ratios a_i/a_j, P_i = prod(1 - ratio).
// Extended precision: the products cancel towards 0 as parameters
// approach, and 1/P_i must stay accurate enough for the weight sum to
// close to 1e-10.
std::vector<double> weights_from_ratios(std::size_t n,
                                        const std::function<long double(std::size_t, std::size_t)>& ratio) {
    std::vector<double> w(n);
    long double abs_sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        long double p = 1.0L;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) p *= 1.0L - ratio(i, j);
        }
        if (p == 0.0L || !std::isfinite(static_cast<double>(p))) {
            throw SeparationError("weight denominator degenerate for component " +
                                  std::to_string(i));
        }
        w[i] = static_cast<double>(1.0L / p);
        abs_sum += std::abs(1.0L / p);
    }
    if (!(abs_sum <= 1e12)) {
        throw SeparationError("weight magnitudes exceed 1e12: parameters too close for a "
                              "representable signed mixture");
    }
    // The weights close to 1 algebraically, but rounding each 1/P_i to double
    // leaves a defect of order eps * sum|w|. Absorb it into the smallest
    // weight, where the correction rounds away the least; the shift is below
    // the mixture's own evaluation noise floor.
    long double defect = -1.0L;
    std::size_t small = 0;
    for (std::size_t i = 0; i < n; ++i) {
        defect += static_cast<long double>(w[i]);
        if (std::abs(w[i]) < std::abs(w[small])) small = i;
    }
    w[small] = static_cast<double>(static_cast<long double>(w[small]) - defect);
    return w;
}

long double powl_ratio(double num, double den, double exponent) {
    return std::pow(static_cast<long double>(num) / static_cast<long double>(den),
                    static_cast<long double>(exponent));
}

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::MHW: return "MHW";
        case Family::MHF: return "MHF";
        case Family::MHT: return "MHT";
        case Family::MHP: return "MHP";
        case Family::MHG: return "MHG";
        case Family::MHE: return "MHE";
    }
    return "?";
}

Family family_from_name(std::string_view name) {
    for (Family f : {Family::MHW, Family::MHF, Family::MHT, Family::MHP, Family::MHG,
                     Family::MHE}) {
        if (name == family_name(f)) return f;
    }
    throw ConstructionError("unknown family name: " + std::string(name));
}

FamilySpec canonical(FamilySpec spec) {
    std::sort(spec.vector.begin(), spec.vector.end());
    return spec;
}

void validate_family_spec(const FamilySpec& spec) {
    if (spec.vector.empty()) throw ConstructionError("family needs at least one vector entry");
    if (!(spec.sep_min > 0.0) || spec.sep_min >= 1.0) {
        throw ConstructionError("sep_min must lie in (0, 1)");
    }
    if (!(spec.shared > 0.0) || !std::isfinite(spec.shared)) {
        throw PositivityError("shared parameter must be strictly positive");
    }
    const bool positive_vector =
        spec.family != Family::MHG && spec.family != Family::MHE;
    for (double v : spec.vector) {
        if (!std::isfinite(v)) throw ConstructionError("vector entries must be finite");
        if (positive_vector && !(v > 0.0)) {
            throw PositivityError("vector entries must be strictly positive for " +
                                  std::string(family_name(spec.family)));
        }
    }
    check_separation(spec.vector, spec.sep_min, "vector entries");
}

void validate_hypoexp_spec(const HypoexpSpec& h) {
    if (h.rates.empty()) throw ConstructionError("hypoexponential needs at least one rate");
    if (!(h.sep_min > 0.0) || h.sep_min >= 1.0) {
        throw ConstructionError("sep_min must lie in (0, 1)");
    }
    for (double a : h.rates) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw PositivityError("rates must be strictly positive");
        }
    }
    check_separation(h.rates, h.sep_min, "rates");
}

std::vector<double> hypoexp_weights(const HypoexpSpec& h) {
    validate_hypoexp_spec(h);
    const auto& a = h.rates;
    return weights_from_ratios(a.size(), [&](std::size_t i, std::size_t j) {
        return static_cast<long double>(a[i]) / static_cast<long double>(a[j]);
    });
}

SignedMixture make_family(const FamilySpec& raw) {
    FamilySpec spec = canonical(raw);
    validate_family_spec(spec);
    const auto& v = spec.vector;
    const double c = spec.shared;
    const std::size_t n = v.size();

    std::function<long double(std::size_t, std::size_t)> ratio;  // a_i/a_j, family form
    std::vector<BaseDistribution> comp;
    comp.reserve(n);
    switch (spec.family) {
        case Family::MHW:
            ratio = [&](std::size_t i, std::size_t j) { return powl_ratio(v[j], v[i], c); };
            for (double lam : v) comp.push_back(BaseDistribution::weibull(c, lam));
            break;
        case Family::MHF:
            ratio = [&](std::size_t i, std::size_t j) { return powl_ratio(v[i], v[j], c); };
            for (double lam : v) comp.push_back(BaseDistribution::frechet(c, lam));
            break;
        case Family::MHT:
            ratio = [&](std::size_t i, std::size_t j) {
                return static_cast<long double>(v[i]) / v[j];
            };
            for (double lam : v) comp.push_back(BaseDistribution::pareto(c, lam));
            break;
        case Family::MHP:
            ratio = [&](std::size_t i, std::size_t j) {
                return static_cast<long double>(v[i]) / v[j];
            };
            for (double lam : v) comp.push_back(BaseDistribution::power(c, lam));
            break;
        case Family::MHG:
            ratio = [&](std::size_t i, std::size_t j) {
                return std::exp((static_cast<long double>(v[j]) - v[i]) / c);
            };
            for (double k : v) comp.push_back(BaseDistribution::gumbel_min(k, c));
            break;
        case Family::MHE:
            ratio = [&](std::size_t i, std::size_t j) {
                return std::exp((static_cast<long double>(v[i]) - v[j]) / c);
            };
            for (double k : v) comp.push_back(BaseDistribution::extreme_value(k, c));
            break;
    }
    return SignedMixture(std::move(comp), weights_from_ratios(n, ratio));
}

HypoexpSpec to_base_rates(const FamilySpec& raw) {
    FamilySpec spec = canonical(raw);
    validate_family_spec(spec);
    HypoexpSpec h;
    h.sep_min = spec.sep_min;
    h.rates.reserve(spec.vector.size());
    for (double v : spec.vector) {
        double a = 0.0;
        switch (spec.family) {
            case Family::MHW: a = std::pow(v, -spec.shared); break;
            case Family::MHF: a = std::pow(v, spec.shared); break;
            case Family::MHT:
            case Family::MHP: a = v; break;
            case Family::MHG: a = std::exp(-v / spec.shared); break;
            case Family::MHE: a = std::exp(v / spec.shared); break;
        }
        h.rates.push_back(a);
    }
    validate_hypoexp_spec(h);
    return h;
}

FamilySpec family_from_rates(Family family, double shared, const HypoexpSpec& h) {
    validate_hypoexp_spec(h);
    FamilySpec spec;
    spec.family = family;
    spec.shared = shared;
    spec.sep_min = h.sep_min;
    spec.vector.reserve(h.rates.size());
    for (double a : h.rates) {
        double v = 0.0;
        switch (family) {
            case Family::MHW: v = std::pow(a, -1.0 / shared); break;
            case Family::MHF: v = std::pow(a, 1.0 / shared); break;
            case Family::MHT:
            case Family::MHP: v = a; break;
            case Family::MHG: v = -shared * std::log(a); break;
            case Family::MHE: v = shared * std::log(a); break;
        }
        spec.vector.push_back(v);
    }
    spec = canonical(std::move(spec));
    validate_family_spec(spec);
    return spec;
}

double transform_forward(const FamilySpec& spec, double s) {
    validate_family_spec(spec);
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("transform argument must be a positive real, got " + std::to_string(s));
    }
    switch (spec.family) {
        case Family::MHW: return std::pow(s, 1.0 / spec.shared);
        case Family::MHF: return std::pow(s, -1.0 / spec.shared);
        case Family::MHT: return spec.shared * std::exp(s);
        case Family::MHP: return std::exp(-s) / spec.shared;
        case Family::MHG: return spec.shared * std::log(s);
        case Family::MHE: return -spec.shared * std::log(s);
    }
    return 0.0;
}

std::vector<double> sample_family(const FamilySpec& raw, std::int64_t count, RandomStream& rng) {
    FamilySpec spec = canonical(raw);
    validate_family_spec(spec);
    if (count < 1) throw DomainError("sample count must be >= 1");
    const HypoexpSpec h = to_base_rates(spec);

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        double s = 0.0;
        for (double a : h.rates) s += -std::log1p(-rng.uniform01()) / a;
        out.push_back(transform_forward(spec, s));
    }
    return out;
}

}  // namespace mixhypo
