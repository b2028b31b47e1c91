#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace mixhypo {

// Neumaier-compensated accumulator. Signed-mixture sums cancel heavily;
// plain summation loses one digit per decade of weight magnitude.
template <class Real = double>
class CompensatedSum {
public:
    void add(Real x) {
        Real t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    Real value() const { return sum_ + comp_; }

private:
    Real sum_ = 0;
    Real comp_ = 0;
};

// Compensated sum of terms[0..n), largest magnitude first. The ordering
// keeps the running sum as large as possible before the cancelling tail
// arrives, which bounds the compensation error.
inline double signed_sum(std::span<double> terms) {
    std::sort(terms.begin(), terms.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    CompensatedSum<double> acc;
    for (double v : terms) acc.add(v);
    return acc.value();
}

}  // namespace mixhypo
