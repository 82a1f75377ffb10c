#include "oneshot/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oneshot {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation, then one Halley refinement against erfc.
double normal_quantile_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile requires p in (0,1)");
    double z = normal_quantile_approx(p);
    // Halley refinement
    const double e = 0.5 * std::erfc(-z / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(z * z / 2.0);
    z -= u / (1.0 + z * u / 2.0);
    return z;
}

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_p requires x >= 0, a > 0");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double chi2_cdf(double x, int df) {
    if (df < 1) throw std::domain_error("chi2_cdf requires df >= 1");
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double x, int df) {
    if (df < 1) throw std::domain_error("chi2_sf requires df >= 1");
    if (x <= 0.0) return 1.0;
    const double half_df = 0.5 * df;
    const double half_x = 0.5 * x;
    return half_x < half_df + 1.0 ? 1.0 - gamma_p_series(half_df, half_x)
                                  : gamma_q_cf(half_df, half_x);
}

double chi2_quantile_upper(double alpha, int df) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("chi2_quantile_upper requires alpha in (0,1)");
    // Wilson-Hilferty start, then Newton on the survival function.
    const double z = normal_quantile(1.0 - alpha);
    const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
    double x = df * t * t * t;
    if (!(x > 0.0)) x = 0.5;
    for (int i = 0; i < 100; ++i) {
        const double fx = chi2_sf(x, df) - alpha;
        const double pdf = std::exp((0.5 * df - 1.0) * std::log(x) - 0.5 * x -
                                    std::lgamma(0.5 * df) - 0.5 * df * std::log(2.0));
        if (pdf <= 0.0) break;
        const double step = fx / pdf;
        x += step;
        if (x <= 0.0) x = 1e-12;
        if (std::abs(step) < 1e-12 * (1.0 + x)) break;
    }
    return x;
}

}  // namespace oneshot
