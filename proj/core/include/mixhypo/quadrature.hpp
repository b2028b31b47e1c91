#pragma once

#include <functional>

#include "mixhypo/errors.hpp"

namespace mixhypo {

// Adaptive Gauss-Kronrod (G7/K15) integration of f over (lo, hi).
// Either endpoint may be +-infinity; infinite ranges are mapped onto a
// finite interval with the substitution x = lo + u/(1-u) (two-sided
// analogue for the whole real line). Endpoints are never evaluated.
//
// Returns a value whose estimated error is <= rel_tol*|result| + abs_tol;
// throws AccuracyError (carrying the best estimate) when the subdivision
// budget is exhausted first.
double quad_integral(const std::function<double(double)>& f,
                     double lo, double hi, double rel_tol,
                     double abs_tol = 0.0, int max_segments = 4096);

}  // namespace mixhypo
