// stats.hpp
// Pearson correlation with a two-sided significance test against the
// Student-t distribution (t = r * sqrt((n-2)/(1-r^2)) with n-2 dof).
// The t CDF is evaluated through the regularized incomplete beta function.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace laneboost {

namespace detail {

// Continued-fraction expansion of the incomplete beta (Lentz's method).
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("betacf: no convergence");
}

inline double incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

} // namespace detail

// Two-sided p-value of |t| under Student-t with dof degrees of freedom:
// p = I_{dof/(dof+t^2)}(dof/2, 1/2).
inline double student_t_two_sided_p(double t, double dof) {
    if (dof <= 0.0) throw std::invalid_argument("student_t_two_sided_p: dof must be positive");
    if (!std::isfinite(t)) return 0.0;
    return detail::incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

struct Correlation {
    double r{0.0};
    double p{1.0};
    std::size_t n{0};
};

// Standard Pearson r over aligned samples plus its two-sided significance.
// Requires n >= 3 and non-degenerate variance in both series.
inline Correlation pearson_with_p(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("pearson_with_p: series lengths differ");
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("pearson_with_p: need at least 3 points");

    long double mx = 0.0L, my = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<long double>(n);
    my /= static_cast<long double>(n);

    long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double dx = x[i] - mx;
        const long double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0L || syy == 0.0L)
        throw std::invalid_argument("pearson_with_p: zero variance, r undefined");

    Correlation out;
    out.n = n;
    long double r = sxy / std::sqrt(sxx * syy);
    if (r > 1.0L) r = 1.0L;
    if (r < -1.0L) r = -1.0L;
    out.r = static_cast<double>(r);

    const double dof = static_cast<double>(n - 2);
    if (std::fabs(out.r) >= 1.0) {
        out.p = 0.0;
    } else {
        const double t = out.r * std::sqrt(dof / (1.0 - out.r * out.r));
        out.p = student_t_two_sided_p(t, dof);
    }
    return out;
}

// Percentile with linear interpolation between closest ranks (the common
// "type 7" rule): index (n-1)*q over sorted data. q in [0,1].
inline double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("percentile_sorted: empty data");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("percentile_sorted: q outside [0,1]");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace laneboost
