#include "specfun.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <stdexcept>

namespace risbc::specfun {

namespace {

constexpr int kMaxIter = 400;
constexpr double kEps = 1e-16;

// P(a, x) by power series, valid for x < a + 1.
double gamma_p_series(double a, double x)
{
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps)
            break;
    }
    return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
}

// Q(a, x) = 1 - P(a, x) by modified Lentz continued fraction, x >= a + 1.
double gamma_q_contfrac(double a, double x)
{
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            break;
    }
    return std::exp(-x + a * std::log(x) - ln_gamma(a)) * h;
}

// log integrand of the cylinder integral: (k-1) log t - t^2/2 - x t.
inline double cyl_log_f(double k, double x, double t)
{
    return (k - 1.0) * std::log(t) - 0.5 * t * t - x * t;
}

// Adaptive Simpson on [lo, hi] for a smooth positive integrand given in
// log form relative to a reference level. Returns the integral of
// exp(logf(t) - ref).
template <typename F>
double adaptive_simpson(F logf, double ref, double lo, double hi, double tol, int depth,
                        double flo, double fmid, double fhi)
{
    double mid = 0.5 * (lo + hi);
    double lmid = 0.5 * (lo + mid);
    double rmid = 0.5 * (mid + hi);
    double fl = std::exp(logf(lmid) - ref);
    double fr = std::exp(logf(rmid) - ref);
    double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
    double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
    double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return adaptive_simpson(logf, ref, lo, mid, 0.5 * tol, depth - 1, flo, fl, fmid) +
           adaptive_simpson(logf, ref, mid, hi, 0.5 * tol, depth - 1, fmid, fr, fhi);
}

template <typename F>
double integrate_scaled(F logf, double ref, double lo, double hi, double tol)
{
    double flo = std::exp(logf(lo) - ref);
    double fhi = std::exp(logf(hi) - ref);
    double fmid = std::exp(logf(0.5 * (lo + hi)) - ref);
    return adaptive_simpson(logf, ref, lo, hi, tol, 48, flo, fmid, fhi);
}

} // namespace

double ln_gamma(double x)
{
    if (!(x > 0.0))
        throw std::domain_error("ln_gamma: argument must be positive");
    return std::lgamma(x);
}

double gamma_lower_reg(double a, double x)
{
    if (!(a > 0.0))
        throw std::domain_error("gamma_lower_reg: shape must be positive");
    if (std::isnan(x) || x < 0.0)
        throw std::domain_error("gamma_lower_reg: argument must be nonnegative");
    if (x == 0.0)
        return 0.0;
    if (x < a + 1.0)
        return gamma_p_series(a, x);
    double q = gamma_q_contfrac(a, x);
    return 1.0 - q;
}

double q_function(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_approx_exp(double x)
{
    return std::exp(-(kQApprox.a * x + kQApprox.b) * x - kQApprox.c);
}

double q_approx_two_term(double x)
{
    double x2 = x * x;
    return std::exp(-0.5 * x2) / 12.0 + std::exp(-2.0 * x2 / 3.0) / 4.0;
}

double ln_cylinder_integral(double k, double x)
{
    if (!(k > 0.0) || x < 0.0)
        throw std::domain_error("ln_cylinder_integral: need k > 0, x >= 0");

    auto logf = [k, x](double t) { return cyl_log_f(k, x, t); };

    // Peak of the log integrand; for k <= 1 the integrand is monotone
    // decreasing and the t^{k-1} endpoint singularity is integrable.
    if (k > 1.0) {
        double disc = std::sqrt(x * x + 4.0 * (k - 1.0));
        double tpeak = 0.5 * (disc - x);
        double ref = logf(tpeak);
        // Expand outward until the integrand is negligible.
        double sigma = 1.0 / std::sqrt((k - 1.0) / (tpeak * tpeak) + 1.0);
        double lo = tpeak, hi = tpeak;
        while (lo > 0.0 && logf(lo) - ref > -60.0)
            lo = std::max(0.0, lo - sigma);
        while (logf(hi) - ref > -60.0)
            hi += sigma;
        double val = integrate_scaled(logf, ref, lo, hi, 1e-13);
        return ref + std::log(val);
    }

    // k <= 1: substitute t = u^{1/k} on [0, 1] to remove the singularity,
    // then integrate the smooth remainder on [1, inf).
    double ref = -0.0;
    auto logg = [k, x](double u) {
        double t = std::pow(u, 1.0 / k);
        return -0.5 * t * t - x * t - std::log(k);
    };
    double head = integrate_scaled(logg, ref, 1e-300, 1.0, 1e-13);
    double hi = 1.0, sigma = 1.0 / (1.0 + x);
    while (logf(hi) - ref > -60.0)
        hi += sigma;
    double tail = (hi > 1.0) ? integrate_scaled(logf, ref, 1.0, hi, 1e-13) : 0.0;
    return ref + std::log(head + tail);
}

double ln_parabolic_cylinder_D_neg(double k, double x)
{
    if (!(k > 0.0) || x < 0.0)
        throw std::domain_error("ln_parabolic_cylinder_D_neg: need k > 0, x >= 0");
    return -0.25 * x * x - ln_gamma(k) + ln_cylinder_integral(k, x);
}

double parabolic_cylinder_D(double v, double x)
{
    if (v > 0.0 || v < -60.0 || x < 0.0 || x > 50.0)
        throw std::domain_error("parabolic_cylinder_D: (v, x) outside supported box");
    if (v == 0.0)
        return std::exp(-0.25 * x * x);
    if (v == -1.0)
        return std::exp(0.25 * x * x) * std::sqrt(std::acos(-1.0) / 2.0) *
               std::erfc(x / std::numbers::sqrt2);
    double ln = ln_parabolic_cylinder_D_neg(-v, x);
    if (ln < std::log(std::numeric_limits<double>::min()))
        return 0.0;
    return std::exp(ln);
}

} // namespace risbc::specfun
