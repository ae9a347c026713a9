#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qbm {

// Monte Carlo estimate with its standard error (sample sd / sqrt(n)).
struct EnsembleStats {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
};

// Running mean/variance accumulator (Welford). Merging two accumulators is
// exact, so partial sums from worker chunks can be combined in a fixed order.
class Accumulator {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    void merge(const Accumulator& other) {
        if (other.n_ == 0) return;
        if (n_ == 0) { *this = other; return; }
        const double na = static_cast<double>(n_);
        const double nb = static_cast<double>(other.n_);
        const double d = other.mean_ - mean_;
        mean_ += d * nb / (na + nb);
        m2_ += other.m2_ + d * d * na * nb / (na + nb);
        n_ += other.n_;
    }

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }

    double variance() const {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }

    EnsembleStats stats() const {
        EnsembleStats s;
        s.mean = mean_;
        s.n_samples = n_;
        s.std_error = n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
        return s;
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct QuadraticFit {
    double linear = 0.0;       // coefficient of tau
    double linear_err = 0.0;
    double quadratic = 0.0;    // coefficient of tau^2
    double quadratic_err = 0.0;
};

// Weighted least squares of y ~ b1*t + b2*t^2 (no intercept). Weights are
// 1/sigma^2 when sigmas are supplied and positive, otherwise uniform.
inline QuadraticFit fit_linear_quadratic(std::span<const double> t,
                                         std::span<const double> y,
                                         std::span<const double> sigma = {}) {
    if (t.size() != y.size() || t.size() < 2)
        throw std::invalid_argument("fit_linear_quadratic: need >= 2 points");
    bool use_w = sigma.size() == t.size();
    for (std::size_t i = 0; use_w && i < sigma.size(); ++i)
        if (!(sigma[i] > 0.0)) use_w = false;

    double s22 = 0, s23 = 0, s33 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double w = use_w ? 1.0 / (sigma[i] * sigma[i]) : 1.0;
        const double t1 = t[i], t2 = t1 * t1;
        s22 += w * t1 * t1;
        s23 += w * t1 * t2;
        s33 += w * t2 * t2;
        b1 += w * t1 * y[i];
        b2 += w * t2 * y[i];
    }
    const double det = s22 * s33 - s23 * s23;
    if (!(std::abs(det) > 1e-300 * (s22 * s33 + 1.0)))
        throw std::runtime_error("fit_linear_quadratic: singular normal equations");
    QuadraticFit f;
    f.linear = (s33 * b1 - s23 * b2) / det;
    f.quadratic = (s22 * b2 - s23 * b1) / det;
    // parameter covariance (X^T W X)^-1; exact when weights are 1/sigma^2
    f.linear_err = std::sqrt(s33 / det);
    f.quadratic_err = std::sqrt(s22 / det);
    return f;
}

} // namespace qbm
