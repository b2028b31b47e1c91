#include "mixhypo/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "mixhypo/numerics.hpp"

namespace mixhypo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGamma = 0.57721566490153286;  // Euler-Mascheroni
// ln q75 - ln q25 of the unit Weibull/Frechet/Gumbel kernels (see the
// quantile-matching seeds below).
constexpr double kIqrLog = 1.5725972938246815;  // ln(ln4) - ln(ln(4/3))
constexpr double kIqrPareto = 1.0986122886681098;  // ln 3

struct DataStats {
    std::size_t m = 0;
    double min = 0, max = 0, mean = 0, sd = 0, q25 = 0, q75 = 0;
};

DataStats compute_stats(const std::vector<double>& data) {
    DataStats st;
    st.m = data.size();
    std::vector<double> s(data);
    std::sort(s.begin(), s.end());
    st.min = s.front();
    st.max = s.back();
    long double sum = 0.0L;
    for (double x : s) sum += x;
    st.mean = static_cast<double>(sum / s.size());
    long double sq = 0.0L;
    for (double x : s) sq += (static_cast<long double>(x) - st.mean) * (x - st.mean);
    st.sd = std::sqrt(static_cast<double>(sq / s.size()));
    auto quant = [&](double u) {
        double pos = u * (s.size() - 1);
        std::size_t i = static_cast<std::size_t>(pos);
        double frac = pos - i;
        return i + 1 < s.size() ? s[i] + frac * (s[i + 1] - s[i]) : s[i];
    };
    st.q25 = quant(0.25);
    st.q75 = quant(0.75);
    return st;
}

bool location_vector(Family f) { return f == Family::MHG || f == Family::MHE; }

FamilySpec spec_from_theta(Family f, const std::vector<double>& theta) {
    FamilySpec spec;
    spec.family = f;
    spec.shared = theta[0];
    spec.vector.assign(theta.begin() + 1, theta.end());
    return spec;
}

// Everything the two fitters share: the effective box, pin flags, data
// statistics, and the free-coordinate embedding.
struct FitProblem {
    Family family;
    int n;                          // components
    int p_total;                    // n + 1
    std::vector<ParamBounds> box;   // size p_total
    std::vector<bool> pinned;
    std::vector<int> free_idx;      // theta indices of free coordinates
    DataStats stats;

    int p_free() const { return static_cast<int>(free_idx.size()); }

    void clamp(std::vector<double>& theta) const {
        for (int i = 0; i < p_total; ++i) {
            theta[i] = std::min(box[i].hi, std::max(box[i].lo, theta[i]));
        }
    }

    // Spread coincident vector entries apart so a seed point is feasible.
    void separate_vector(std::vector<double>& theta) const {
        std::sort(theta.begin() + 1, theta.end());
        for (int i = 2; i < p_total; ++i) {
            double gap = 4e-6 * std::max({std::abs(theta[i - 1]), std::abs(theta[i]), 1.0});
            if (theta[i] - theta[i - 1] < gap) theta[i] = theta[i - 1] + gap;
        }
        clamp(theta);
    }

    double coord_scale(int i, const std::vector<double>& theta) const {
        return std::max(std::abs(theta[i]), 1e-3);
    }
};

FitProblem make_problem(const std::vector<double>& data, const FitConfig& cfg, bool mom) {
    if (cfg.n_components < 1) throw ConstructionError("n_components must be >= 1");
    if (cfg.max_iter < 1) throw ConstructionError("max_iter must be >= 1");
    if (!(cfg.tol > 0.0)) throw ConstructionError("tol must be positive");
    if (cfg.restarts < 0) throw ConstructionError("restarts must be >= 0");
    if (data.empty()) throw InsufficientData("no data points");
    for (double x : data) {
        if (!std::isfinite(x)) throw ConstructionError("data must consist of finite reals");
    }

    FitProblem pr;
    pr.family = cfg.family;
    pr.n = cfg.n_components;
    pr.p_total = pr.n + 1;
    pr.stats = compute_stats(data);

    if (!cfg.bounds.empty()) {
        if (static_cast<int>(cfg.bounds.size()) != pr.p_total) {
            throw ConstructionError("bounds must cover all " + std::to_string(pr.p_total) +
                                    " parameters (shared followed by vector entries)");
        }
        for (const auto& b : cfg.bounds) {
            if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) {
                throw ConstructionError("each bound needs finite lo <= hi");
            }
        }
        pr.box = cfg.bounds;
    } else {
        const DataStats& st = pr.stats;
        // p moments are matched under MoM; heavy-tailed shape boxes must
        // keep that many moments finite.
        const double shape_lo = mom ? pr.p_total + 0.25 : 0.02;
        ParamBounds shared{0, 0}, vec{0, 0};
        switch (cfg.family) {
            case Family::MHW:
                shared = {0.05, 100.0};
                vec = {std::max(1e-12, st.mean * 1e-3), std::max(st.mean * 1e3, 1e-6)};
                break;
            case Family::MHF:
                shared = {mom ? pr.p_total + 0.25 : 0.05, 100.0};
                vec = {std::max(1e-12, st.mean * 1e-3), std::max(st.mean * 1e3, 1e-6)};
                break;
            case Family::MHT:
                // the scale is the support's lower endpoint: k <= min(x)
                shared = {std::max(1e-12, st.min * 1e-3), st.min};
                vec = {shape_lo, 200.0};
                break;
            case Family::MHP:
                // support (0, 1/k] needs k <= 1/max(x)
                shared = {1e-3 / st.max, 1.0 / st.max};
                vec = {0.02, 200.0};
                break;
            case Family::MHG:
            case Family::MHE: {
                double sd = std::max(st.sd, 1e-9);
                shared = {sd * 1e-2, sd * 1e2};
                vec = {st.min - 10.0 * sd - 1.0, st.max + 10.0 * sd + 1.0};
                break;
            }
        }
        pr.box.assign(pr.p_total, vec);
        pr.box[0] = shared;
    }

    pr.pinned.resize(pr.p_total);
    for (int i = 0; i < pr.p_total; ++i) {
        pr.pinned[i] = pr.box[i].lo == pr.box[i].hi;
        if (!pr.pinned[i]) pr.free_idx.push_back(i);
    }

    if (data.size() < 5 * static_cast<std::size_t>(pr.p_free())) {
        throw InsufficientData(std::to_string(data.size()) + " points cannot support " +
                               std::to_string(pr.p_free()) + " free parameters (need 5 per)");
    }
    return pr;
}

// Quantile-matching seed: fit a single component to mean + interquartile
// range, then fan the vector entries out around it.
std::vector<double> heuristic_theta(const FitProblem& pr) {
    const DataStats& st = pr.stats;
    const double lq = std::log(std::max(st.q75, 1e-300)) - std::log(std::max(st.q25, 1e-300));
    double shared = 1.0, center = 1.0, spread = 1.0;
    switch (pr.family) {
        case Family::MHW: {
            shared = kIqrLog / std::max(lq, 1e-6);
            center = st.mean / std::tgamma(1.0 + 1.0 / shared);
            break;
        }
        case Family::MHF: {
            shared = kIqrLog / std::max(lq, 1e-6);
            center = shared > 1.0 ? st.mean / std::tgamma(1.0 - 1.0 / shared)
                                  : 0.5 * (st.q25 + st.q75);
            break;
        }
        case Family::MHT:
            shared = st.min * 0.995;
            center = std::max(kIqrPareto / std::max(lq, 1e-6), 1.05);
            break;
        case Family::MHP:
            shared = 0.995 / st.max;
            center = kIqrPareto / std::max(lq, 1e-6);
            break;
        case Family::MHG:
            shared = std::max((st.q75 - st.q25) / kIqrLog, 1e-9);
            center = st.mean + kGamma * shared;  // E[X] = k - gamma*lambda
            spread = shared;
            break;
        case Family::MHE:
            shared = std::max((st.q75 - st.q25) / kIqrLog, 1e-9);
            center = st.mean - kGamma * shared;  // E[X] = k + gamma*lambda
            spread = shared;
            break;
    }

    std::vector<double> theta(pr.p_total);
    theta[0] = shared;
    for (int i = 0; i < pr.n; ++i) {
        double frac = pr.n == 1 ? 0.0 : -0.5 + static_cast<double>(i) / (pr.n - 1);
        theta[1 + i] = location_vector(pr.family) ? center + spread * frac
                                                  : center * (1.0 + 0.5 * frac);
    }
    for (int i = 0; i < pr.p_total; ++i) {
        if (pr.pinned[i]) theta[i] = pr.box[i].lo;
    }
    pr.separate_vector(theta);
    return theta;
}

std::vector<double> initial_theta(const FitProblem& pr, const FitConfig& cfg) {
    if (cfg.init) {
        if (static_cast<int>(cfg.init->size()) != pr.p_total) {
            throw ConstructionError("init must have " + std::to_string(pr.p_total) +
                                    " entries (shared followed by vector)");
        }
        std::vector<double> theta = *cfg.init;
        for (double v : theta) {
            if (!std::isfinite(v)) throw ConstructionError("init entries must be finite");
        }
        for (int i = 0; i < pr.p_total; ++i) {
            if (pr.pinned[i]) theta[i] = pr.box[i].lo;
        }
        pr.separate_vector(theta);
        return theta;
    }
    return heuristic_theta(pr);
}

// ---- generic minimization machinery -----------------------------------

using Objective = std::function<double(const std::vector<double>&)>;  // full theta

// Bounded Nelder-Mead (minimization); proposals are clamped into the box.
// Returns the best point found through `theta`; counts function
// evaluations into `evals`.
double nelder_mead(const Objective& fn, const FitProblem& pr, std::vector<double>& theta,
                   int max_iter, double tol, long& evals) {
    const int p = pr.p_free();
    if (p == 0) {
        ++evals;
        return fn(theta);
    }
    auto embed = [&](const std::vector<double>& xf) {
        std::vector<double> full = theta;
        for (int i = 0; i < p; ++i) full[pr.free_idx[i]] = xf[i];
        pr.clamp(full);
        return full;
    };
    auto eval = [&](const std::vector<double>& xf) {
        ++evals;
        return fn(embed(xf));
    };

    std::vector<std::vector<double>> pts(p + 1, std::vector<double>(p));
    std::vector<double> fv(p + 1);
    for (int i = 0; i < p; ++i) pts[0][i] = theta[pr.free_idx[i]];
    for (int v = 1; v <= p; ++v) {
        pts[v] = pts[0];
        int ti = pr.free_idx[v - 1];
        double step = 0.1 * std::max(std::abs(pts[0][v - 1]), 1e-3);
        step = std::min(step, 0.25 * (pr.box[ti].hi - pr.box[ti].lo));
        if (pts[0][v - 1] + step > pr.box[ti].hi) step = -step;
        pts[v][v - 1] += step;
    }
    for (int v = 0; v <= p; ++v) fv[v] = eval(pts[v]);

    std::vector<int> order(p + 1);
    for (int it = 0; it < max_iter; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const int best = order[0], worst = order[p], second = order[p - 1];

        if (std::isfinite(fv[best]) &&
            fv[worst] - fv[best] <= tol * std::max(1.0, std::abs(fv[best]))) {
            break;
        }

        std::vector<double> centroid(p, 0.0);
        for (int v = 0; v <= p; ++v) {
            if (v == worst) continue;
            for (int i = 0; i < p; ++i) centroid[i] += pts[v][i] / p;
        }
        auto blend = [&](double coef) {
            std::vector<double> x(p);
            for (int i = 0; i < p; ++i) x[i] = centroid[i] + coef * (pts[worst][i] - centroid[i]);
            return x;
        };

        std::vector<double> xr = blend(-1.0);
        double fr = eval(xr);
        if (fr < fv[best]) {
            std::vector<double> xe = blend(-2.0);
            double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe, fv[worst] = fe;
            } else {
                pts[worst] = xr, fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = xr, fv[worst] = fr;
        } else {
            std::vector<double> xc = blend(fr < fv[worst] ? -0.5 : 0.5);
            double fc = eval(xc);
            if (fc < std::min(fr, fv[worst])) {
                pts[worst] = xc, fv[worst] = fc;
            } else {  // shrink toward best
                for (int v = 0; v <= p; ++v) {
                    if (v == best) continue;
                    for (int i = 0; i < p; ++i) pts[v][i] = 0.5 * (pts[v][i] + pts[best][i]);
                    fv[v] = eval(pts[v]);
                }
            }
        }
    }

    int best = 0;
    for (int v = 1; v <= p; ++v) {
        if (fv[v] < fv[best]) best = v;
    }
    theta = embed(pts[best]);
    return fv[best];
}

// Coordinate Newton refinement of a maximum of `fn` (note: maximization).
// Near the optimum the objective differences fall below double resolution,
// so steps are accepted with a round-off slack; the Newton contraction
// keeps that safe.
double polish_max(const Objective& fn, const FitProblem& pr, std::vector<double>& theta,
                  long& evals) {
    double f0 = fn(theta);
    ++evals;
    for (int sweep = 0; sweep < 20; ++sweep) {
        bool moved = false;
        for (int idx : pr.free_idx) {
            double lo = pr.box[idx].lo, hi = pr.box[idx].hi;
            double h = 1e-5 * pr.coord_scale(idx, theta);
            h = std::min({h, 0.49 * (hi - theta[idx]), 0.49 * (theta[idx] - lo)});
            if (!(h > 0.0)) continue;  // at a bound; leave to the active-set report

            std::vector<double> t = theta;
            t[idx] = theta[idx] + h;
            double fp = fn(t);
            t[idx] = theta[idx] - h;
            double fm = fn(t);
            evals += 2;
            if (!std::isfinite(fp) || !std::isfinite(fm) || !std::isfinite(f0)) continue;

            double g = (fp - fm) / (2.0 * h);
            double curv = (fp - 2.0 * f0 + fm) / (h * h);
            double step = curv < -1e-300 ? -g / curv : (g > 0 ? h : -h);
            double trust = std::max(64.0 * h, 0.1 * std::abs(theta[idx]));
            step = std::max(-trust, std::min(trust, step));

            // Near the optimum, objective differences sink below double
            // resolution; accept Newton-sized moves within round-off slack
            // so the polish can keep crawling through the plateau.
            const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                                 (std::abs(f0) + 1.0);
            for (int halve = 0; halve < 4 && step != 0.0; ++halve, step *= 0.5) {
                t = theta;
                t[idx] = std::min(hi, std::max(lo, theta[idx] + step));
                double ft = fn(t);
                ++evals;
                if (t[idx] != theta[idx] &&
                    (ft >= f0 || (ft >= f0 - slack && std::abs(step) <= 2.0 * h))) {
                    theta = t;
                    f0 = ft;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) break;
    }
    return f0;
}

// Central-difference gradient (step 1e-5 * coordinate scale) over the free
// coordinates, excluding those resting on a box face (KKT-active); its
// norm is the stationarity diagnostic of the fit.
double projected_grad_norm(const Objective& fn, const FitProblem& pr,
                           const std::vector<double>& theta, long& evals) {
    double sq = 0.0;
    for (int idx : pr.free_idx) {
        double lo = pr.box[idx].lo, hi = pr.box[idx].hi;
        double scale = pr.coord_scale(idx, theta);
        if (theta[idx] - lo <= 1e-8 * scale || hi - theta[idx] <= 1e-8 * scale) continue;
        double h = 1e-5 * scale;
        h = std::min({h, 0.5 * (hi - theta[idx]), 0.5 * (theta[idx] - lo)});
        std::vector<double> t = theta;
        t[idx] = theta[idx] + h;
        double fp = fn(t);
        t[idx] = theta[idx] - h;
        double fm = fn(t);
        evals += 2;
        double g = (fp - fm) / (2.0 * h);
        if (!std::isfinite(g)) return kInf;
        sq += g * g;
    }
    return std::sqrt(sq);
}

// Multiplicative (scale-like coords) / additive (location coords) jitter
// for the restart seeds.
std::vector<double> perturb_theta(const FitProblem& pr, const std::vector<double>& base,
                                  RandomStream& rng) {
    std::vector<double> theta = base;
    for (int idx : pr.free_idx) {
        double u = 2.0 * rng.uniform01() - 1.0;
        if (idx >= 1 && location_vector(pr.family)) {
            theta[idx] += 0.75 * std::max(pr.stats.sd, 1e-9) * u;
        } else {
            theta[idx] *= std::exp(0.5 * u);
        }
    }
    pr.separate_vector(theta);
    return theta;
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Dense (J^T J + mu D) dx = -J^T r solve; p is tiny, plain Gaussian
// elimination with partial pivoting.
bool solve_normal_equations(std::vector<std::vector<double>> a, std::vector<double> rhs,
                            std::vector<double>& dx) {
    const int p = static_cast<int>(rhs.size());
    for (int col = 0; col < p; ++col) {
        int piv = col;
        for (int r = col + 1; r < p; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) < 1e-300) return false;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int r = col + 1; r < p; ++r) {
            double f = a[r][col] / a[col][col];
            for (int c = col; c < p; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    dx.assign(p, 0.0);
    for (int r = p - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < p; ++c) s -= a[r][c] * dx[c];
        dx[r] = s / a[r][r];
    }
    return true;
}

// ---- MLE ----------------------------------------------------------------

double loglik_fast(const SignedMixture& m, const std::vector<double>& data) {
    constexpr std::size_t kStack = 64;
    const std::size_t n = m.size();
    CompensatedSum<long double> acc;
    double terms[kStack];
    for (double x : data) {
        double p;
        if (n <= kStack) {
            for (std::size_t i = 0; i < n; ++i) {
                terms[i] = m.weights()[i] * base_pdf(m.components()[i], x);
            }
            p = signed_sum(std::span<double>(terms, n));
        } else {
            p = mix_pdf(m, x);
        }
        if (!(p > 0.0) || !std::isfinite(p)) return -kInf;
        acc.add(std::log(p));
    }
    return static_cast<double>(acc.value());
}

Objective mle_objective(Family family, const std::vector<double>& data) {
    return [family, &data](const std::vector<double>& theta) {
        try {
            return loglik_fast(make_family(spec_from_theta(family, theta)), data);
        } catch (const Error&) {
            return -kInf;
        }
    };
}

// Closed-form single-component MLE with the shared parameter pinned; every
// family reduces to a textbook estimator of its vector parameter. This is
// what makes "exponential rate = 1/mean" hold to full precision rather
// than to optimizer tolerance.
bool closed_form_single_mle(const FitProblem& pr, const std::vector<double>& data,
                            double shared, double& vhat) {
    const std::size_t m = data.size();
    long double acc = 0.0L;
    switch (pr.family) {
        case Family::MHW:
            for (double x : data) {
                if (!(x > 0.0)) return false;
                acc += std::pow(static_cast<long double>(x), static_cast<long double>(shared));
            }
            vhat = static_cast<double>(std::pow(acc / m, 1.0L / shared));
            return true;
        case Family::MHF:
            for (double x : data) {
                if (!(x > 0.0)) return false;
                acc += std::pow(static_cast<long double>(x), static_cast<long double>(-shared));
            }
            vhat = static_cast<double>(std::pow(acc / m, -1.0L / shared));
            return true;
        case Family::MHT:
            for (double x : data) {
                if (!(x >= shared)) return false;
                acc += std::log(static_cast<long double>(x) / shared);
            }
            if (!(acc > 0.0L)) return false;
            vhat = static_cast<double>(m / acc);
            return true;
        case Family::MHP:
            for (double x : data) {
                if (!(x > 0.0) || x > 1.0 / shared) return false;
                acc += std::log(static_cast<long double>(x) * shared);
            }
            if (!(acc < 0.0L)) return false;
            vhat = static_cast<double>(-static_cast<long double>(m) / acc);
            return true;
        case Family::MHG: {
            const double c = *std::max_element(data.begin(), data.end());
            for (double x : data) acc += std::exp((static_cast<long double>(x) - c) / shared);
            vhat = static_cast<double>(shared * std::log(acc / m) + c);
            return true;
        }
        case Family::MHE: {
            const double c = *std::min_element(data.begin(), data.end());
            for (double x : data) acc += std::exp(-(static_cast<long double>(x) - c) / shared);
            vhat = static_cast<double>(c - shared * std::log(acc / m));
            return true;
        }
    }
    return false;
}

// ---- MOM ----------------------------------------------------------------

// Relative residuals of the first p moment equations; +inf when the
// moments do not exist or the spec is infeasible at theta.
struct MomResiduals {
    Family family;
    const std::vector<double>* mu;

    bool eval(const std::vector<double>& theta, std::vector<double>& r) const {
        try {
            SignedMixture m = make_family(spec_from_theta(family, theta));
            r.resize(mu->size());
            for (std::size_t k = 0; k < mu->size(); ++k) {
                r[k] = (mix_moment(m, static_cast<int>(k) + 1) - (*mu)[k]) / (*mu)[k];
            }
            return true;
        } catch (const Error&) {
            return false;
        }
    }

    double sum_sq(const std::vector<double>& theta) const {
        std::vector<double> r;
        if (!eval(theta, r)) return kInf;
        double s = 0.0;
        for (double v : r) s += v * v;
        return std::isfinite(s) ? s : kInf;
    }
};

// Brent root bracketing on one free coordinate (the p = 1 case: a single
// monotone moment equation, solvable to machine precision).
bool brent_root(const std::function<double(double)>& phi, double a, double b, double& root) {
    double fa = phi(a), fb = phi(b);
    if (!std::isfinite(fa) || !std::isfinite(fb) || fa * fb > 0.0) return false;
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b, b = c, c = a;
            fa = fb, fb = fc, fc = fa;
        }
        double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 1e-300;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) {
            root = b;
            return true;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, rr = fb / fc;
                p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = phi(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a, fc = fa;
            d = b - a, e = d;
        }
    }
    root = b;
    return true;
}

// Levenberg-Marquardt on the relative moment residuals with a central-FD
// Jacobian over the free coordinates.
double levenberg_polish(const MomResiduals& res, const FitProblem& pr,
                        std::vector<double>& theta, long& evals) {
    const int p = pr.p_free();
    std::vector<double> r;
    if (!res.eval(theta, r)) return kInf;
    ++evals;
    double s = 0.0;
    for (double v : r) s += v * v;
    double mu = 1e-3;

    for (int it = 0; it < 100 && s > 1e-24; ++it) {
        const int q = static_cast<int>(r.size());
        std::vector<std::vector<double>> jac(q, std::vector<double>(p));
        for (int j = 0; j < p; ++j) {
            int idx = pr.free_idx[j];
            double h = 1e-6 * pr.coord_scale(idx, theta);
            h = std::min({h, 0.49 * (pr.box[idx].hi - theta[idx]),
                          0.49 * (theta[idx] - pr.box[idx].lo)});
            if (!(h > 0.0)) {
                for (int k = 0; k < q; ++k) jac[k][j] = 0.0;
                continue;
            }
            std::vector<double> tp = theta, tm = theta, rp, rm;
            tp[idx] += h;
            tm[idx] -= h;
            if (!res.eval(tp, rp) || !res.eval(tm, rm)) return s;
            evals += 2;
            for (int k = 0; k < q; ++k) jac[k][j] = (rp[k] - rm[k]) / (2.0 * h);
        }
        std::vector<std::vector<double>> ata(p, std::vector<double>(p, 0.0));
        std::vector<double> atr(p, 0.0);
        for (int a = 0; a < p; ++a) {
            for (int b = 0; b < p; ++b) {
                for (int k = 0; k < q; ++k) ata[a][b] += jac[k][a] * jac[k][b];
            }
            for (int k = 0; k < q; ++k) atr[a] += jac[k][a] * r[k];
        }

        bool improved = false;
        for (int damp = 0; damp < 8; ++damp) {
            auto lhs = ata;
            for (int a = 0; a < p; ++a) lhs[a][a] += mu * std::max(ata[a][a], 1e-12);
            std::vector<double> dx, rhs(p);
            for (int a = 0; a < p; ++a) rhs[a] = -atr[a];
            if (!solve_normal_equations(lhs, rhs, dx)) break;
            std::vector<double> t = theta;
            for (int j = 0; j < p; ++j) t[pr.free_idx[j]] += dx[j];
            pr.clamp(t);
            std::vector<double> rt;
            if (res.eval(t, rt)) {
                ++evals;
                double st = 0.0;
                for (double v : rt) st += v * v;
                if (st < s) {
                    theta = t;
                    r = rt;
                    s = st;
                    mu = std::max(mu / 3.0, 1e-12);
                    improved = true;
                    break;
                }
            }
            mu *= 4.0;
        }
        if (!improved) break;
    }
    return s;
}

FitResult assemble_result(const FitProblem& pr, std::vector<double> theta, double objective,
                          double grad_norm, bool converged, long iterations,
                          std::size_t sample_size) {
    FitResult out;
    out.params = canonical(spec_from_theta(pr.family, theta));
    out.objective = objective;
    out.grad_norm = grad_norm;
    out.converged = converged;
    out.iterations = static_cast<int>(std::min<long>(iterations, INT32_MAX));
    out.sample_size = sample_size;
    return out;
}

}  // namespace

double log_likelihood(const FamilySpec& spec, const std::vector<double>& data) {
    if (data.empty()) throw InsufficientData("no data points");
    return loglik_fast(make_family(spec), data);
}

std::vector<double> sample_moments(const std::vector<double>& data, int k_max) {
    if (data.empty()) throw InsufficientData("no data points");
    if (k_max < 1) throw DomainError("k_max must be >= 1");
    std::vector<double> mu(k_max);
    for (int k = 1; k <= k_max; ++k) {
        long double acc = 0.0L;
        for (double x : data) {
            acc += std::pow(static_cast<long double>(x), static_cast<long double>(k));
        }
        mu[k - 1] = static_cast<double>(acc / data.size());
    }
    return mu;
}

FitResult fit_mle(const std::vector<double>& data, const FitConfig& cfg, RandomStream& rng) {
    const FitProblem pr = make_problem(data, cfg, /*mom=*/false);
    const Objective obj = mle_objective(cfg.family, data);
    long evals = 0;

    // Single component with the shared parameter pinned: use the exact
    // estimator instead of search noise.
    if (pr.n == 1 && pr.pinned[0] && !pr.pinned[1]) {
        double vhat = 0.0;
        if (closed_form_single_mle(pr, data, pr.box[0].lo, vhat) && std::isfinite(vhat)) {
            std::vector<double> theta{pr.box[0].lo, vhat};
            pr.clamp(theta);
            double ll = obj(theta);
            double gn = projected_grad_norm(obj, pr, theta, evals);
            return assemble_result(pr, theta, ll, gn, std::isfinite(ll) && gn <= 1e-4, 1,
                                   data.size());
        }
    }

    std::vector<double> init;
    if (!cfg.init && pr.p_free() > 0) {
        // Seed from method of moments when it is available for this box.
        try {
            FitConfig mom_cfg = cfg;
            mom_cfg.method = FitMethod::MOM;
            mom_cfg.init.reset();
            mom_cfg.restarts = std::min(cfg.restarts, 2);
            if (cfg.bounds.empty()) mom_cfg.bounds.clear();
            RandomStream sub = rng.split();
            FitResult seed = fit_mom(data, mom_cfg, sub);
            init.push_back(seed.params.shared);
            init.insert(init.end(), seed.params.vector.begin(), seed.params.vector.end());
            for (int i = 0; i < pr.p_total; ++i) {
                if (pr.pinned[i]) init[i] = pr.box[i].lo;
            }
            pr.separate_vector(init);
        } catch (const Error&) {
            init.clear();
        }
    }
    if (init.empty()) init = initial_theta(pr, cfg);

    std::vector<double> best_theta;
    double best_f = -kInf;
    for (int r = 0; r <= cfg.restarts; ++r) {
        RandomStream sub = rng.split();
        std::vector<double> theta = r == 0 ? init : perturb_theta(pr, init, sub);
        auto neg = [&](const std::vector<double>& t) { return -obj(t); };
        nelder_mead(neg, pr, theta, cfg.max_iter, cfg.tol, evals);
        double f = polish_max(obj, pr, theta, evals);
        if (f > best_f || best_theta.empty() ||
            (f == best_f && lex_less(theta, best_theta))) {
            best_f = f;
            best_theta = theta;
        }
    }

    double gn = projected_grad_norm(obj, pr, best_theta, evals);
    bool conv = std::isfinite(best_f) && gn <= 1e-4;
    return assemble_result(pr, best_theta, best_f, gn, conv, evals, data.size());
}

FitResult fit_mom(const std::vector<double>& data, const FitConfig& cfg, RandomStream& rng) {
    const FitProblem pr = make_problem(data, cfg, /*mom=*/true);
    const int p = pr.p_free();

    // The box must admit p finite moments somewhere: heavy-tailed shapes
    // whose whole range is <= p cannot match p moments.
    if (cfg.family == Family::MHF && pr.box[0].hi <= p) {
        throw MomentDoesNotExist("MHF shape bound " + std::to_string(pr.box[0].hi) +
                                     " cannot supply " + std::to_string(p) + " finite moments",
                                 -1, static_cast<int>(std::floor(pr.box[0].hi)));
    }
    if (cfg.family == Family::MHT) {
        for (int i = 1; i < pr.p_total; ++i) {
            if (pr.box[i].hi <= p) {
                throw MomentDoesNotExist(
                    "MHT shape bound " + std::to_string(pr.box[i].hi) + " cannot supply " +
                        std::to_string(p) + " finite moments",
                    i - 1, static_cast<int>(std::floor(pr.box[i].hi)));
            }
        }
    }

    const std::vector<double> mu = sample_moments(data, std::max(p, 1));
    MomResiduals res{cfg.family, &mu};
    long evals = 0;

    std::vector<double> theta = initial_theta(pr, cfg);
    if (p == 0) {
        double s = res.sum_sq(theta);
        return assemble_result(pr, theta, s, 0.0, s <= 1e-10, 0, data.size());
    }

    if (p == 1) {
        const int idx = pr.free_idx[0];
        auto phi = [&](double x) {
            std::vector<double> t = theta;
            t[idx] = x;
            std::vector<double> r;
            ++evals;
            return res.eval(t, r) ? r[0] : std::numeric_limits<double>::quiet_NaN();
        };
        double root = 0.0;
        if (brent_root(phi, pr.box[idx].lo, pr.box[idx].hi, root)) {
            theta[idx] = root;
            double s = res.sum_sq(theta);
            return assemble_result(pr, theta, s, 0.0, s <= 1e-10, evals, data.size());
        }
        // fall through to the search when the box does not bracket a root
    }

    std::vector<double> best_theta;
    double best_s = kInf;
    auto obj = [&](const std::vector<double>& t) { return res.sum_sq(t); };
    for (int r = 0; r <= cfg.restarts; ++r) {
        RandomStream sub = rng.split();
        std::vector<double> t = r == 0 ? theta : perturb_theta(pr, theta, sub);
        nelder_mead(obj, pr, t, cfg.max_iter, cfg.tol, evals);
        double s = levenberg_polish(res, pr, t, evals);
        if (s < best_s || best_theta.empty() || (s == best_s && lex_less(t, best_theta))) {
            best_s = s;
            best_theta = t;
        }
        if (best_s <= 1e-14) break;
    }
    return assemble_result(pr, best_theta, best_s, 0.0, best_s <= 1e-10, evals, data.size());
}

}  // namespace mixhypo
