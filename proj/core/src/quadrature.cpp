#include "mixhypo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mixhypo/numerics.hpp"

namespace mixhypo {
namespace {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    double value;
    double error;
};

// One K15 application on [a,b] with the QUADPACK error estimate.
Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double center = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    auto eval = [&](double x) {
        double y = f(x);
        return std::isfinite(y) ? y : std::numeric_limits<double>::quiet_NaN();
    };

    const double fc = eval(center);
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    double fv1[8], fv2[8];
    fv1[7] = fv2[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double absc = hlgth * kXgk[j];
        fv1[j] = eval(center - absc);
        fv2[j] = eval(center + absc);
        const double fsum = fv1[j] + fv2[j];
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double value = resk * hlgth;
    resabs *= std::abs(hlgth);
    resasc *= std::abs(hlgth);
    double abserr = std::abs((resk - resg) * hlgth);
    if (!std::isfinite(value)) {
        return {a, b, 0.0, std::numeric_limits<double>::infinity()};
    }
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        abserr = std::max(eps * 50.0 * resabs, abserr);
    return {a, b, value, abserr};
}

double adaptive(const std::function<double(double)>& g, double a, double b,
                double rel_tol, double abs_tol, int max_segments) {
    std::vector<Segment> segs;
    segs.reserve(64);
    segs.push_back(gk15(g, a, b));

    const double min_width = 16.0 * std::numeric_limits<double>::epsilon() *
                             std::max({std::abs(a), std::abs(b), 1.0});

    auto totals = [&segs] {
        CompensatedSum<double> v;
        double e = 0.0;
        for (const Segment& s : segs) {
            v.add(s.value);
            e += s.error;
        }
        return std::pair<double, double>(v.value(), e);
    };

    while (true) {
        auto [total, toterr] = totals();
        if (toterr <= rel_tol * std::abs(total) + abs_tol) return total;

        // Split the segment with the largest error estimate.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;

        const Segment s = segs[worst];
        if (static_cast<int>(segs.size()) >= max_segments || (s.b - s.a) <= min_width)
            throw AccuracyError("quad_integral: tolerance not reached", total, toterr);

        const double mid = 0.5 * (s.a + s.b);
        segs[worst] = gk15(g, s.a, mid);
        segs.push_back(gk15(g, mid, s.b));
    }
}

}  // namespace

double quad_integral(const std::function<double(double)>& f,
                     double lo, double hi, double rel_tol,
                     double abs_tol, int max_segments) {
    const double inf = std::numeric_limits<double>::infinity();
    if (!(lo < hi)) throw DomainError("quad_integral: lo must be < hi");

    if (lo > -inf && hi < inf)
        return adaptive(f, lo, hi, rel_tol, abs_tol, max_segments);

    // In the maps below a node's u can round to the endpoint itself, where the
    // image is x = +-inf; a convergent integrand carries no mass there, so the
    // transformed value is taken as 0 rather than 0/0.
    if (lo > -inf) {
        // x = lo + u/(1-u), dx = du/(1-u)^2, u in (0,1)
        auto g = [&f, lo](double u) {
            const double d = 1.0 - u;
            if (d <= 0.0) return 0.0;
            return f(lo + u / d) / (d * d);
        };
        return adaptive(g, 0.0, 1.0, rel_tol, abs_tol, max_segments);
    }
    if (hi < inf) {
        // x = hi - u/(1-u)
        auto g = [&f, hi](double u) {
            const double d = 1.0 - u;
            if (d <= 0.0) return 0.0;
            return f(hi - u / d) / (d * d);
        };
        return adaptive(g, 0.0, 1.0, rel_tol, abs_tol, max_segments);
    }
    // x = u/(1-u^2), dx = (1+u^2)/(1-u^2)^2 du, u in (-1,1)
    auto g = [&f](double u) {
        const double d = 1.0 - u * u;
        if (d <= 0.0) return 0.0;
        return f(u / d) * (1.0 + u * u) / (d * d);
    };
    return adaptive(g, -1.0, 1.0, rel_tol, abs_tol, max_segments);
}

}  // namespace mixhypo
