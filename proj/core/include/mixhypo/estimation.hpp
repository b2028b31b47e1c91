#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mixhypo/family.hpp"
#include "mixhypo/random.hpp"

namespace mixhypo {

enum class FitMethod { MLE, MOM };

// Per-parameter box bound; lo == hi pins the parameter at that value
// (how a shared shape is fixed, e.g. MHW with k = 1 for the exponential
// case). The theta layout is (shared, vector_1, ..., vector_n).
struct ParamBounds {
    double lo;
    double hi;
};

struct FitConfig {
    FitMethod method = FitMethod::MLE;
    Family family = Family::MHW;
    int n_components = 1;
    std::optional<std::vector<double>> init;  // theta layout; else MoM/quantile seeding
    std::vector<ParamBounds> bounds;          // empty -> family- and data-driven defaults
    int max_iter = 2000;
    double tol = 1e-8;  // relative change of objective
    int restarts = 5;
};

struct FitResult {
    FamilySpec params;         // canonical (vector sorted ascending)
    double objective = 0.0;    // log-likelihood (MLE) / sum of squared relative
                               // moment residuals (MOM)
    double grad_norm = 0.0;    // norm of the finite-difference score projected onto
                               // the free, non-active coordinates (MLE; 0 for MOM)
    bool converged = false;    // MLE: grad_norm <= 1e-4; MOM: objective <= 1e-10
    int iterations = 0;
    std::size_t sample_size = 0;
};

// ln L(theta) = sum_i ln( sum_j A_j f_j(x_i) ), accumulated in extended
// precision. Returns -inf when any point falls outside the support or the
// signed density is <= 0 there (infeasible, not an error).
double log_likelihood(const FamilySpec& spec, const std::vector<double>& data);

// (mu_1, ..., mu_kmax), mu_k = (1/m) sum x^k.
std::vector<double> sample_moments(const std::vector<double>& data, int k_max);

// Maximum likelihood over the bounded box: derivative-free simplex search
// with multi-start (restarts perturb the initial point; the stream drives
// only those perturbations), then a coordinate Newton polish. A closed-form
// path handles n_components = 1 with the shared parameter pinned (all six
// families reduce to textbook estimators there). Non-convergence is
// reported via the flag, never thrown. InsufficientData when
// data size < 5 * (free parameter count).
FitResult fit_mle(const std::vector<double>& data, const FitConfig& cfg, RandomStream& rng);

// Method of moments: matches the first p sample moments (p = free
// parameter count) by minimizing sum_k ((g_k(theta) - mu_k)/mu_k)^2; root
// bracketing for p = 1, simplex plus Levenberg-Marquardt polish otherwise.
// MomentDoesNotExist when no point of the box has p finite moments.
FitResult fit_mom(const std::vector<double>& data, const FitConfig& cfg, RandomStream& rng);

}  // namespace mixhypo
