// kahan.hpp — compensated summation.
//
// Pooled sums run over up to hundreds of millions of points; Neumaier's
// variant of Kahan summation keeps them accurate enough for the harness's
// 1e-10 oracle tolerances.
#pragma once

#include <cmath>

namespace aerobench {

class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    // Merging two compensated sums keeps both compensation terms so chained
    // per-design reductions stay as accurate as a single pass.
    void merge(const KahanSum& other) {
        add(other.sum_);
        comp_ += other.comp_;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace aerobench
