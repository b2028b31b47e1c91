#pragma once

#include <limits>

namespace mixhypo {

// Extended-real interval. Used for distribution supports and MGF domains.
// Endpoints may be +-infinity; whether an endpoint belongs to the set is
// decided by the owning operation (e.g. Pareto support includes its lower
// endpoint, an MGF domain is handled as open plus the always-valid t=0).
struct SupportInterval {
    double lo;
    double hi;

    static constexpr double inf() { return std::numeric_limits<double>::infinity(); }

    static SupportInterval all() { return {-inf(), inf()}; }

    bool contains_interior(double t) const { return lo < t && t < hi; }
};

}  // namespace mixhypo
