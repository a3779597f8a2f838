#include "chemoeda/stats.hpp"

#include <cmath>
#include <limits>

#include "chemoeda/errors.hpp"

namespace chemo {

SummaryStats summarize(std::span<const double> values) {
    if (values.size() < 2) throw ConfigError("summary statistics need at least two values");
    SummaryStats s;
    s.n = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (s.n - 1));
    return s;
}

namespace {

// continued fraction for the regularized incomplete beta (Lentz)
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (df <= 0.0) throw ConfigError("degrees of freedom must be positive");
    if (!std::isfinite(t)) return 0.0;
    // P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2)
    double x = df / (df + t * t);
    return incomplete_beta(0.5 * df, 0.5, x);
}

TTestResult welch_t_test(const SummaryStats& a, const SummaryStats& b) {
    if (a.n < 2 || b.n < 2) throw ConfigError("t-test needs n >= 2 in both samples");
    TTestResult r;
    r.diff = a.mean - b.mean;
    double ga = a.stddev * a.stddev / a.n;
    double gb = b.stddev * b.stddev / b.n;
    r.se = std::sqrt(ga + gb);
    if (r.se == 0.0) {
        r.degenerate = true;
        r.df = 0.0;
        if (r.diff == 0.0) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = r.diff > 0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
        return r;
    }
    r.t = r.diff / r.se;
    r.df = (ga + gb) * (ga + gb) / (ga * ga / (a.n - 1) + gb * gb / (b.n - 1));
    r.p = student_t_two_sided_p(std::abs(r.t), r.df);
    return r;
}

}  // namespace chemo
