#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace spt {

// Neumaier compensated sum.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            c_ += (sum_ - t) + x;
        else
            c_ += (x - t) + sum_;
        sum_ = t;
        ++n_;
    }
    double value() const { return sum_ + c_; }
    std::size_t count() const { return n_; }
    double mean() const { return n_ ? value() / double(n_) : 0.0; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
    std::size_t n_ = 0;
};

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// Mean and standard error of independent replicate values.
inline Estimate mean_stderr(std::span<const double> xs) {
    Estimate e;
    if (xs.empty()) return e;
    KahanSum s;
    for (double x : xs) s.add(x);
    e.mean = s.mean();
    if (xs.size() < 2) return e;
    KahanSum q;
    for (double x : xs) q.add((x - e.mean) * (x - e.mean));
    e.stderr_ = std::sqrt(q.value() / double(xs.size() - 1) / double(xs.size()));
    return e;
}

}  // namespace spt
