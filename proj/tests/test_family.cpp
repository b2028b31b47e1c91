#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mixhypo/audit.hpp"
#include "mixhypo/family.hpp"
#include "mixhypo/numerics.hpp"
#include "mixhypo/quadrature.hpp"
#include "test_util.hpp"

using namespace mixhypo;

namespace {

const double kLn2 = 0.69314718055994531;
const Family kAll[] = {Family::MHW, Family::MHF, Family::MHT,
                       Family::MHP, Family::MHG, Family::MHE};

// Random valid spec with relative separation comfortably above 0.05.
FamilySpec random_spec(Family f, int n, RandomStream& rng) {
    FamilySpec s;
    s.family = f;
    s.shared = 0.5 + 2.0 * rng.uniform01();
    s.vector.resize(n);
    // Gap of at least 0.06 * max(|v|, 1) keeps every pair at relative
    // separation >= 0.06 / 1.06 under the max(|v_i|, |v_j|, 1) metric.
    double v = (f == Family::MHG || f == Family::MHE) ? -2.0 + 3.0 * rng.uniform01()
                                                      : 0.3 + 2.0 * rng.uniform01();
    for (int i = 0; i < n; ++i) {
        s.vector[i] = v;
        v += (0.06 + 0.4 * rng.uniform01()) * std::max(std::abs(v), 1.0);
    }
    return s;
}

// Corrected closed-form family CDF (transform-consistent symbol roles).
double closed_cdf(const FamilySpec& spec, const std::vector<double>& w, double t) {
    const double k = spec.shared;
    std::vector<double> terms(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double v = spec.vector[i];
        double F = 0.0;
        switch (spec.family) {
            case Family::MHW: F = 1.0 - std::exp(-std::pow(t / v, k)); break;
            case Family::MHF: F = std::exp(-std::pow(t / v, -k)); break;
            case Family::MHT: F = 1.0 - std::pow(k / t, v); break;
            case Family::MHP: F = std::pow(k * t, v); break;
            case Family::MHG: F = 1.0 - std::exp(-std::exp((t - v) / k)); break;
            case Family::MHE: F = std::exp(-std::exp(-(t - v) / k)); break;
        }
        terms[i] = w[i] * F;
    }
    return signed_sum(terms);
}

}  // namespace

TEST_SUITE("family") {

TEST_CASE("names round-trip") {
    for (Family f : kAll) CHECK(family_from_name(family_name(f)) == f);
    CHECK_THROWS_AS(family_from_name("MHX"), ConstructionError);
}

TEST_CASE("hypoexponential weights: worked examples") {
    std::vector<double> w = hypoexp_weights({{1.0, 2.0}, 1e-6});
    REQUIRE(w.size() == 2);
    CHECK(abs_close(w[0], 2.0, 1e-14));
    CHECK(abs_close(w[1], -1.0, 1e-14));

    w = hypoexp_weights({{1.0, 2.0, 3.0}, 1e-6});
    REQUIRE(w.size() == 3);
    CHECK(abs_close(w[0], 3.0, 1e-13));
    CHECK(abs_close(w[1], -3.0, 1e-13));
    CHECK(abs_close(w[2], 1.0, 1e-13));

    // order follows the rates as given
    w = hypoexp_weights({{2.0, 1.0}, 1e-6});
    CHECK(abs_close(w[0], -1.0, 1e-14));
    CHECK(abs_close(w[1], 2.0, 1e-14));
}

TEST_CASE("near-coincident rates are rejected") {
    CHECK_THROWS_AS(hypoexp_weights({{1.0, 1.0 + 1e-8}, 1e-6}), SeparationError);
    FamilySpec s{Family::MHW, 1.0, {1.0, 1.0}, 1e-6};
    CHECK_THROWS_AS(validate_family_spec(s), SeparationError);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(validate_family_spec({Family::MHW, -1.0, {1.0, 2.0}, 1e-6}),
                    PositivityError);
    CHECK_THROWS_AS(validate_family_spec({Family::MHT, 1.0, {1.0, -2.0}, 1e-6}),
                    PositivityError);
    CHECK_THROWS_AS(validate_family_spec({Family::MHW, 1.0, {}, 1e-6}), ConstructionError);
    // Gumbel-type locations may be zero or negative
    CHECK_NOTHROW(validate_family_spec({Family::MHG, 1.0, {-1.0, 0.0, 1.0}, 1e-6}));
    CHECK_NOTHROW(validate_family_spec({Family::MHE, 1.0, {-3.5, 2.0}, 1e-6}));
}

TEST_CASE("canonical sorts the vector and is idempotent") {
    FamilySpec s{Family::MHW, 1.0, {2.0, 0.5, 1.0}, 1e-6};
    FamilySpec c = canonical(s);
    CHECK(std::is_sorted(c.vector.begin(), c.vector.end()));
    CHECK(canonical(c).vector == c.vector);
}

TEST_CASE("MHW(k=1, lambda=(1,0.5)) is hypoexp(1,2)") {
    SignedMixture m = make_family({Family::MHW, 1.0, {1.0, 0.5}, 1e-6});
    REQUIRE(m.size() == 2);
    // canonical order (0.5, 1): shape-1 Weibulls are Exp(2), Exp(1)
    CHECK(abs_close(m.weights()[0], -1.0, 1e-12));
    CHECK(abs_close(m.weights()[1], 2.0, 1e-12));
    CHECK(abs_close(mix_pdf(m, kLn2), 0.5, 1e-14));
    CHECK(abs_close(mix_cdf(m, kLn2), 0.25, 1e-14));
    CHECK(abs_close(mix_moment(m, 1), 1.5, 1e-12));
}

TEST_CASE("MHT(k=1, lambda=(1,2)) cdf at 2 is 1/4") {
    SignedMixture m = make_family({Family::MHT, 1.0, {1.0, 2.0}, 1e-6});
    CHECK(abs_close(mix_cdf(m, 2.0), 0.25, 1e-12));
}

TEST_CASE("MHG(lambda=1, k=(0,-ln 2)) has rates (2,1) and weights (-1,2)") {
    FamilySpec s{Family::MHG, 1.0, {0.0, -kLn2}, 1e-6};
    HypoexpSpec h = to_base_rates(canonical(s));
    REQUIRE(h.rates.size() == 2);
    CHECK(abs_close(h.rates[0], 2.0, 1e-14));  // canonical order (-ln 2, 0)
    CHECK(abs_close(h.rates[1], 1.0, 1e-14));
    SignedMixture m = make_family(s);
    CHECK(abs_close(m.weights()[0], -1.0, 1e-12));
    CHECK(abs_close(m.weights()[1], 2.0, 1e-12));
}

TEST_CASE("rate maps: worked examples and round-trips") {
    HypoexpSpec h = to_base_rates({Family::MHE, 2.0, {0.0, 2.0 * std::log(3.0)}, 1e-6});
    CHECK(abs_close(h.rates[0], 1.0, 1e-14));
    CHECK(abs_close(h.rates[1], 3.0, 1e-14));

    h = to_base_rates({Family::MHW, 1.0, {1.0, 0.5}, 1e-6});
    CHECK(abs_close(h.rates[0], 2.0, 1e-14));
    CHECK(abs_close(h.rates[1], 1.0, 1e-14));

    RandomStream rng(11);
    for (Family f : kAll) {
        FamilySpec s = canonical(random_spec(f, 3, rng));
        FamilySpec back = family_from_rates(f, s.shared, to_base_rates(s));
        REQUIRE(back.vector.size() == s.vector.size());
        for (std::size_t i = 0; i < s.vector.size(); ++i) {
            CHECK(rel_close(back.vector[i], s.vector[i], 1e-12));
        }
    }
}

TEST_CASE("transform_forward") {
    CHECK(transform_forward({Family::MHW, 2.0, {1.0, 2.0}, 1e-6}, 4.0) == 2.0);
    CHECK(abs_close(transform_forward({Family::MHT, 1.0, {1.0, 2.0}, 1e-6}, kLn2), 2.0, 1e-15));
    CHECK(abs_close(transform_forward({Family::MHP, 0.8, {1.5, 3.0}, 1e-6}, 1.0),
                    std::exp(-1.0) / 0.8, 1e-15));
    CHECK(abs_close(transform_forward({Family::MHG, 1.1, {0.0, 1.0}, 1e-6}, 2.0),
                    1.1 * std::log(2.0), 1e-15));
    CHECK(abs_close(transform_forward({Family::MHE, 0.9, {0.0, 1.0}, 1e-6}, 2.0),
                    -0.9 * std::log(2.0), 1e-15));
    FamilySpec s{Family::MHT, 1.0, {1.0, 2.0}, 1e-6};
    CHECK_THROWS_AS(transform_forward(s, 0.0), DomainError);
    CHECK_THROWS_AS(transform_forward(s, -1.0), DomainError);
}

TEST_CASE("weight closure across families and sizes") {
    RandomStream rng(5150);
    for (Family f : kAll) {
        for (int n = 2; n <= 8; ++n) {
            for (int rep = 0; rep < 10; ++rep) {
                FamilySpec s = random_spec(f, n, rng);
                std::vector<double> w = make_family(s).weights();
                CompensatedSum<double> acc;
                for (double x : w) acc.add(x);
                CHECK(abs_close(acc.value(), 1.0, 1e-10));
            }
        }
    }
}

TEST_CASE("sampling matches the mixture law") {
    FamilySpec s{Family::MHW, 1.0, {1.0, 0.5}, 1e-6};
    SignedMixture m = make_family(s);
    RandomStream rng(424242);
    std::vector<double> xs = sample_family(s, 100000, rng);
    double dist = ks_distance(xs, [&](double t) { return mix_cdf(m, t); });
    CHECK(dist < 0.0065);

    // determinism: same seed, same draws
    RandomStream r1(9), r2(9);
    CHECK(sample_family(s, 50, r1) == sample_family(s, 50, r2));

    // MHT variates cannot fall below the scale parameter
    FamilySpec t{Family::MHT, 1.0, {1.0, 2.0}, 1e-6};
    RandomStream r3(10);
    for (double x : sample_family(t, 1000, r3)) REQUIRE(x >= 1.0);

    RandomStream r4(1);
    CHECK_THROWS_AS(sample_family(s, 0, r4), DomainError);
}

TEST_CASE("single-component family degenerates to its base law") {
    SignedMixture m = make_family({Family::MHF, 4.5, {1.3}, 1e-6});
    REQUIRE(m.size() == 1);
    CHECK(m.weights()[0] == 1.0);
    auto d = BaseDistribution::frechet(4.5, 1.3);
    for (double t : {0.5, 1.0, 2.0}) CHECK(within_one_ulp(mix_pdf(m, t), base_pdf(d, t)));
}

TEST_CASE("corrected corollary cdf forms agree with the mixture") {
    RandomStream rng(31337);
    for (Family f : kAll) {
        FamilySpec s = canonical(random_spec(f, 3, rng));
        SignedMixture m = make_family(s);
        const std::vector<double>& w = m.weights();
        for (double u : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            double t = mix_quantile(m, u);
            CHECK(abs_close(closed_cdf(s, w, t), mix_cdf(m, t), 1e-9));
        }
    }
}

TEST_CASE("corollary cdf forms agree with pdf quadrature") {
    // Shapes >= 1 throughout: a shape below 1 puts an integrable pdf pole at
    // the support edge, which the certified quadrature cannot resolve to 1e-9.
    for (Family f : kAll) {
        FamilySpec s = default_audit_spec(f, 3);
        SignedMixture m = make_family(s);
        const std::vector<double>& w = m.weights();
        double lo = m.support().lo;
        for (double u : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            double t = mix_quantile(m, u);
            double q = quad_integral([&](double x) { return mix_pdf(m, x); }, lo, t,
                                     1e-9, 1e-12);
            CHECK(abs_close(closed_cdf(s, w, t), q, 1e-8));
        }
    }
}

TEST_CASE("MHW moment closed form") {
    FamilySpec s{Family::MHW, 1.7, {0.8, 1.6}, 1e-6};
    SignedMixture m = make_family(s);
    const std::vector<double>& w = m.weights();
    for (int h = 1; h <= 3; ++h) {
        std::vector<double> terms(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            terms[i] = w[i] * std::pow(s.vector[i], h) * std::tgamma(1.0 + h / s.shared);
        }
        double closed = signed_sum(terms);
        CHECK(rel_close(closed, mix_moment(m, h), 1e-12));
        double q = quad_integral([&](double x) { return std::pow(x, h) * mix_pdf(m, x); },
                                 0.0, SupportInterval::inf(), 1e-9, 1e-12);
        CHECK(rel_close(closed, q, 1e-6));
    }
}

TEST_CASE("MHT moments exist exactly below the smallest shape") {
    SignedMixture m = make_family({Family::MHT, 1.2, {4.0, 6.5}, 1e-6});
    CHECK_NOTHROW(mix_moment(m, 3));
    CHECK_THROWS_AS(mix_moment(m, 4), MomentDoesNotExist);
    CHECK_THROWS_AS(mix_moment(m, 5), MomentDoesNotExist);
}

}  // TEST_SUITE
