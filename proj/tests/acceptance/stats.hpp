#pragma once

// Small statistics helpers for the acceptance suite: Student-t tail
// probabilities via the regularized incomplete beta function (continued
// fraction form), plus paired-test summaries.

#include <cmath>
#include <vector>

namespace accept_stats {

inline double betacf(double a, double b, double x) {
    const int max_iter = 300;
    const double eps = 3e-14, fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

inline double betai(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

// One-sided tail P(T_df > t).
inline double student_t_sf(double t, double df) {
    double p = 0.5 * betai(df / 2.0, 0.5, df / (df + t * t));
    return t >= 0.0 ? p : 1.0 - p;
}

struct PairedTest {
    double mean_diff = 0.0;
    double t_stat = 0.0;
    double p_greater = 1.0;  // P(observing this or larger | mean diff == 0)
};

// Paired one-sided test of H1: mean(a - b) > 0.
inline PairedTest paired_one_sided(const std::vector<double>& a, const std::vector<double>& b) {
    PairedTest out;
    size_t n = a.size();
    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(n - 1);
    out.mean_diff = mean;
    if (var == 0.0) {
        out.t_stat = 0.0;
        out.p_greater = mean > 0.0 ? 0.0 : 1.0;
        return out;
    }
    out.t_stat = mean / std::sqrt(var / static_cast<double>(n));
    out.p_greater = student_t_sf(out.t_stat, static_cast<double>(n - 1));
    return out;
}

inline double mean_of(const std::vector<double>& v) {
    double total = 0.0;
    for (double x : v) total += x;
    return total / static_cast<double>(v.size());
}

inline double standard_error(const std::vector<double>& v) {
    double m = mean_of(v);
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    var /= static_cast<double>(v.size() - 1);
    return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace accept_stats
