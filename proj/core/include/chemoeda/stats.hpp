#pragma once

#include <span>

namespace chemo {

struct SummaryStats {
    int n = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, divisor n-1
};

// Requires n >= 2; throws ConfigError otherwise.
SummaryStats summarize(std::span<const double> values);

struct TTestResult {
    double diff = 0.0;  // mean_a - mean_b
    double se = 0.0;    // sqrt(sa^2/na + sb^2/nb)
    double t = 0.0;
    double df = 0.0;    // Welch-Satterthwaite
    double p = 1.0;     // two-sided
    bool degenerate = false;  // both variances zero
};

// Welch's unequal-variance t-test from summary statistics. Zero standard
// error degenerates to p = 0 (nonzero difference) or t = 0, p = 1.
TTestResult welch_t_test(const SummaryStats& a, const SummaryStats& b);

// Two-sided tail probability of Student's t distribution.
double student_t_two_sided_p(double t, double df);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

}  // namespace chemo
